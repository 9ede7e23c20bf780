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

#include <chrono>

#include "cobalt/engine.hpp"

namespace cobalt {

namespace {

// hole binders of a hypothesis chain: x1 <- (?? : t); ...
std::vector<std::pair<std::string, Sort>> hole_binders(const Expr& shape) {
  std::vector<std::pair<std::string, Sort>> out;
  const Expr* e = &shape;
  while (e->k == Expr::K::Seq) {
    if (e->kids[0].k == Expr::K::Hole) out.push_back({e->name, e->kids[0].hole_sort});
    e = &e->kids[1];
  }
  return out;
}

Expr wrap_lambda(const QuerySpec& q, Expr body) {
  std::vector<Param> ps = q.params;
  return Expr::lambda(std::move(ps), std::move(body));
}

}  // namespace

SynthesisResult synthesize_query(const SpecFile& file, SolverContext& solver, const EngineConfig& cfg) {
  SynthesisResult res;
  auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] { return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count(); };
  long long q0 = solver.queries_issued(), h0 = solver.cache_hits();

  ForwardShared sh;
  sh.file = &file;
  sh.solver = &solver;
  sh.cfg = cfg;
  sh.stats = &res.stats;
  sh.out_of_time = [&] { return elapsed_ms() > cfg.global_budget_ms; };

  const QuerySpec& query = file.query;
  std::optional<Expr> body;

  try {
    switch (cfg.mode) {
      case Mode::BwAlone: {
        auto outcomes = bw_synthesize(file, solver, query, {}, cfg);
        if (!outcomes.empty() && outcomes[0].k == BackwardOutcome::K::Complete) body = outcomes[0].term;
        break;
      }
      case Mode::FwAlone:
      case Mode::FwNoCdcl: {
        ForwardProblem prob;
        prob.goal_post = query.post;
        prob.return_synthesis = true;
        prob.result_base = query.result.base;
        prob.result_phi = query.result.phi;
        body = cdcl_search(sh, prob, query);
        break;
      }
      case Mode::Cobalt: {
        std::set<std::string> F;
        while (true) {
          if (sh.out_of_time()) throw Timeout{};
          auto outcomes = bw_synthesize(file, solver, query, F, cfg);
          if (!outcomes.empty() && outcomes[0].k == BackwardOutcome::K::Complete) {
            body = outcomes[0].term;
            break;
          }
          size_t f_before = F.size();
          bool solved = false;
          for (auto& oc : outcomes) {
            if (oc.k != BackwardOutcome::K::Partial) continue;
            ForwardProblem prob;
            prob.goal_post = oc.residual;
            prob.suffix = oc.term;
            prob.holes = hole_binders(oc.hyp.shape);
            prob.suffix_facts = oc.suffix_facts;
            sh.learned_paths.clear();
            if (auto e = cdcl_search(sh, prob, query)) {
              body = e;
              solved = true;
              break;
            }
            F.insert(sh.learned_paths.begin(), sh.learned_paths.end());
          }
          if (solved) break;
          if (F.size() == f_before) break;  // no new stuck paths: exhausted
        }
        break;
      }
    }
  } catch (Timeout&) {
    res.stats.outcome = "timeout";
    res.stats.wall_ms = elapsed_ms();
    res.stats.smt_queries = solver.queries_issued() - q0;
    res.stats.smt_cache_hits = solver.cache_hits() - h0;
    return res;
  }

  res.stats.wall_ms = elapsed_ms();
  res.stats.smt_queries = solver.queries_issued() - q0;
  res.stats.smt_cache_hits = solver.cache_hits() - h0;
  if (body) {
    Expr program = wrap_lambda(query, std::move(*body));
    // solved rows always carry a verifier-confirmed program
    VerifyResult vr = typecheck(file, program, query, solver);
    if (vr.ok) {
      res.stats.outcome = "solved";
      res.program = program;
      res.stats.program = pretty_print(program);
      res.stats.program_size = expr_size(program);
    } else {
      res.stats.outcome = "failed";
      res.stats.program = "(engine output failed verification: " + vr.reason + ")";
    }
  } else {
    res.stats.outcome = "failed";
  }
  return res;
}

}  // namespace cobalt
