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

#ifndef COBALT_TRANSFORMERS_HPP
#define COBALT_TRANSFORMERS_HPP

#include <optional>

#include "cobalt/heap.hpp"
#include "cobalt/speclang.hpp"

namespace cobalt {

// Free constants known to the prover, with their sorts.
struct SymTab {
  std::map<std::string, Sort> syms;

  void add(const std::string& n, const Sort& s) { syms.emplace(n, s); }
  bool has(const std::string& n) const { return syms.count(n) > 0; }
};

// Query entry state: binds the query's prefix ghosts as initial location
// ghosts, resolves select applications, and returns the pre facts (including
// parameter refinements).
Prop initial_facts(const SpecFile& file, const QuerySpec& q, HeapState& hs, SymTab& st);

// Instantiates a component precondition at the current heap state (the
// FW_CALL / CDCL applicability goal). Unbound prefix ghosts are Skolemized
// fresh (sound on the goal side of a validity check).
Prop instantiate_pre(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, HeapState& hs, SymTab& st);

// SP of one call: advances the heap snapshot, allocates a fresh ghost for
// every location the post mentions through the post-heap, and returns the
// instantiated post facts (the `P /\ Q1` increment of FW_CALL).
Prop sp_post(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, const std::string& result_binder, HeapState& hs, SymTab& st);

// Resolves a query postcondition against the final heap state: pre-heap
// ghosts map to initial ghosts, post-heap ghosts to current ones, the bound
// result variable to `result`; extra hole bindings substitute hypothesis
// variables. Unbound ghosts become fresh constants.
Prop final_goal(const SpecFile& file, const SpecProp& post, const Term& result, const Subst& extra, HeapState& hs, SymTab& st);

// The BW_CALL premise P1 => (Q1 => Q) with the junction state Skolemized.
Prop bw_call_check(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, const SpecProp& goal, HeapState& hs, SymTab& st);

// WP of a call against a goal postcondition; returns the residual goal whose
// post-heap is the junction state before the call.
SpecProp wp_call(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, const std::string& result_binder, const SpecProp& goal, GhostGen& gen, SymTab& st);

// WP of `return r`: substitutes the result term for the bound variable.
SpecProp wp_return(const SpecProp& goal, const Term& r);

struct FrameSplit {
  Prop frame;
  Prop residual_pre;
  Prop residual_post;
};

// Syntactic conjunct partitioning per the frame side conditions; greedy
// maximal, deterministic. `evars` are the existential symbols the frame must
// avoid (heap-ghost evars plus any post-bound ghost names).
std::optional<FrameSplit> frame_split(const Prop& pre, const Prop& post, const std::set<std::string>& evars);

// Projection of a fact set onto the stable state vocabulary used by the
// discriminating-proposition store: query parameters, locations, initial
// ghosts, and per-location canonical current-state symbols (cur!loc,
// cur!heap). Conjuncts mentioning anything else (intermediate ghosts, step
// binders) are dropped.
Prop canonicalize_state(const std::vector<Prop>& facts, const HeapState& hs, const std::set<std::string>& stable, SymTab& st);

// Sorts for the canonical symbols introduced by canonicalize_state.
void declare_canonical_symbols(const HeapState& hs, SymTab& st);

}  // namespace cobalt

#endif  // COBALT_TRANSFORMERS_HPP
