// Copyright 2026 The Cobalt Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cobalt/heap.hpp"

#include <cctype>

namespace cobalt {

HeapState HeapState::fresh(std::shared_ptr<GhostGen> g) {
  HeapState hs;
  hs.gen = std::move(g);
  hs.heaps.push_back("h!0");
  return hs;
}

void HeapState::track(const std::string& loc, const Sort& value_sort, const std::string& initial_ghost) {
  if (known(loc)) return;
  LocState st;
  st.value_sort = value_sort;
  std::string base = loc;
  if (!base.empty() && std::islower((unsigned char)base[0])) base[0] = (char)std::toupper((unsigned char)base[0]);
  st.ghost_base = base;
  st.ghosts.push_back(initial_ghost.empty() ? gen->fresh(base) : initial_ghost);
  locs[loc] = std::move(st);
}

std::string HeapState::advance(const std::string& loc) {
  auto& st = locs.at(loc);
  st.ghosts.push_back(gen->fresh(st.ghost_base));
  return st.ghosts.back();
}

std::string HeapState::advance_heap() {
  heaps.push_back(gen->fresh("h"));
  return heaps.back();
}

std::set<std::string> HeapState::evars() const {
  std::set<std::string> out;
  for (auto& [loc, st] : locs)
    for (size_t i = 1; i < st.ghosts.size(); i++) out.insert(st.ghosts[i]);
  for (size_t i = 1; i < heaps.size(); i++) out.insert(heaps[i]);
  return out;
}

}  // namespace cobalt
