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

#ifndef COBALT_ENGINE_HPP
#define COBALT_ENGINE_HPP

#include <functional>
#include <optional>

#include "cobalt/corelang.hpp"
#include "cobalt/smt.hpp"
#include "cobalt/verify.hpp"

namespace cobalt {

enum class Mode { Cobalt, FwAlone, BwAlone, FwNoCdcl };

struct EngineConfig {
  Mode mode = Mode::Cobalt;
  int depth_k = 5;
  int guard_budget = 2;
  long long global_budget_ms = 600000;
};

// One discriminating-check replay record: both disjuncts of the CDCL_CHOICE
// side condition were false, so the candidate was pruned.
struct PruneLog {
  std::string component;
  int bound = 0;
  Prop stuck_prop;      // S_p at prune time
  Prop sp_new;          // SP of the rejected extension (canonical)
  Prop sp_prefix;       // SP of the prefix path (canonical)
  Prop truncated_prop;  // T_p at prune time
  // underlying validity verdicts: (S_p => SPnew), (SPnew => T_p), (SPpi => T_p)
  std::string v1, v2, v3;
};

struct RunStats {
  std::string outcome = "failed";  // solved | failed | timeout
  std::string program;
  int program_size = 0;
  long long nodes_expanded = 0;
  long long nodes_pruned = 0;
  long long smt_queries = 0;
  long long smt_cache_hits = 0;
  long long stuck_nodes = 0;
  long long wall_ms = 0;
  std::vector<PruneLog> prunes;
};

struct Timeout {};

struct BackwardOutcome {
  enum class K { Complete, Partial, Failed } k = K::Failed;
  Expr term;           // Complete: program body; Partial: e_b
  Hypothesis hyp;      // Partial: holed prefix shape (chain ending in e_b)
  SpecProp residual;   // Partial: the residual goal post (WP(e_b, post))
  Prop suffix_facts = Prop::mk_true();  // constructor refinement facts of e_b's return value
};

// Deterministic enumeration of the backward rules: a single Complete result
// short-circuits; otherwise all Partial candidates in choice order.
std::vector<BackwardOutcome> bw_synthesize(const SpecFile& file, SolverContext& solver, const QuerySpec& query, const std::set<std::string>& blocked, const EngineConfig& cfg);

// Forward/CDCL subproblem: find a body for goal_post under the hypothesis.
struct ForwardProblem {
  SpecProp goal_post;
  Expr suffix = Expr::skip();                    // e_b, appended at branch leaves
  std::vector<std::pair<std::string, Sort>> holes;  // hypothesis hole binders
  Prop suffix_facts = Prop::mk_true();            // over the hole binders
  bool return_synthesis = false;                  // fw-alone: synthesize the result term
  Sort result_base;                               // return_synthesis target sort
  Prop result_phi = Prop::mk_true();              // query result refinement
};

struct ForwardShared {
  const SpecFile* file = nullptr;
  SolverContext* solver = nullptr;
  EngineConfig cfg;
  RunStats* stats = nullptr;
  std::set<std::string> learned_paths;  // F' accumulated across the search
  std::function<bool()> out_of_time;
};

std::optional<Expr> cdcl_search(ForwardShared& sh, const ForwardProblem& prob, const QuerySpec& query);

struct SynthesisResult {
  std::optional<Expr> program;  // lambda-wrapped
  RunStats stats;
};

// Algorithm 1 plus the ablation modes.
SynthesisResult synthesize_query(const SpecFile& file, SolverContext& solver, const EngineConfig& cfg);

}  // namespace cobalt

#endif  // COBALT_ENGINE_HPP
