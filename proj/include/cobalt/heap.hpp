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

#ifndef COBALT_HEAP_HPP
#define COBALT_HEAP_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cobalt/logic.hpp"

namespace cobalt {

// Fresh-name source shared by one engine instance.
struct GhostGen {
  std::map<std::string, int> counters;

  std::string fresh(const std::string& base) { return base + "!" + std::to_string(++counters[base]); }
};

// The no-aliasing heap model: each reference has an independent timeline of
// ghost symbols naming its value at successive program points; select
// applications are resolved to the location's ghost at encoding time.
// A parallel timeline of heap snapshot symbols serves heap-level qualifiers
// (dom-style predicates) that take the heap itself as an argument.
struct HeapState {
  struct LocState {
    Sort value_sort;
    std::string ghost_base;
    std::vector<std::string> ghosts;  // front = initial, back = current
  };

  std::map<std::string, LocState> locs;
  std::vector<std::string> heaps;  // front = initial, back = current
  std::shared_ptr<GhostGen> gen;

  static HeapState fresh(std::shared_ptr<GhostGen> g);

  bool known(const std::string& loc) const { return locs.count(loc) > 0; }
  // Registers a location on first contact; initial_ghost may name the ghost
  // bound by the query's own prefix (paper style: Tbl, D, Q).
  void track(const std::string& loc, const Sort& value_sort, const std::string& initial_ghost = "");

  const std::string& current(const std::string& loc) const { return locs.at(loc).ghosts.back(); }
  const std::string& initial(const std::string& loc) const { return locs.at(loc).ghosts.front(); }
  std::string advance(const std::string& loc);

  const std::string& cur_heap() const { return heaps.back(); }
  const std::string& init_heap() const { return heaps.front(); }
  std::string advance_heap();

  // Ghosts (and heap snapshots) allocated after the initial state.
  std::set<std::string> evars() const;
};

}  // namespace cobalt

#endif  // COBALT_HEAP_HPP
