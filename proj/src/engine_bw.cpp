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

#include <algorithm>

#include "cobalt/engine.hpp"

namespace cobalt {

namespace {

constexpr int kBackwardDepth = 3;  // WP steps before declaring Partial

std::string binder_prefix(const Sort& s) {
  if (s.is_bool()) return "b";
  if (s.text == "string") return "s";
  if (s.text == "float") return "x";
  if (s.text == "int") return "y";
  if (s.is_unit()) return "u";
  if (s.is_ref()) return "r";
  return "t";
}

struct BwEngine {
  const SpecFile& file;
  SolverContext& solver;
  const QuerySpec& query;
  const std::set<std::string>& blocked;

  HeapState hs0;
  SymTab st0;
  std::vector<Prop> facts;
  std::map<std::string, int> name_ctr;

  std::vector<BackwardOutcome> out;
  bool complete_found = false;

  std::string fresh_binder(const Sort& s) {
    std::string p = binder_prefix(s);
    std::string n;
    do {
      n = p + std::to_string(++name_ctr[p]);
    } while (st0.has(n));
    return n;
  }

  // pure return candidates for the query's result sort, in choice order
  struct RetCand {
    Expr expr;           // may contain holes
    Term term;           // holes as hole-binder variables
    std::vector<std::pair<std::string, Sort>> holes;
    const CtorDecl* ctor = nullptr;
  };

  std::vector<RetCand> return_candidates() {
    std::vector<RetCand> cands;
    const Sort& t = query.result.base;
    (void)0;
    // context variables first, most recently bound first (parameters in
    // reverse declaration order at the start of a query)
    for (auto it = query.params.rbegin(); it != query.params.rend(); ++it)
      if (it->type.base == t) cands.push_back(RetCand{Expr::var(it->name), Term::var(it->name), {}});
    if (t.is_unit()) cands.push_back(RetCand{Expr::cst(Term::unit()), Term::unit(), {}});
    // constructor applications; missing arguments become typed holes
    for (auto& d : file.datatypes) {
      if (d.type_name != t.text) continue;
      for (auto& c : d.ctors) {
        RetCand rc;
        rc.ctor = &c;
        std::vector<Expr> arg_exprs;
        std::vector<Term> arg_terms;
        int hole_id = 0;
        for (auto& p : c.params) {
          const Param* found = nullptr;
          for (auto it = query.params.rbegin(); it != query.params.rend(); ++it)
            if (it->type.base == p.type.base) {
              found = &*it;
              break;
            }
          if (found) {
            arg_exprs.push_back(Expr::var(found->name));
            arg_terms.push_back(Term::var(found->name));
          } else {
            std::string hv = fresh_binder(p.type.base);
            arg_exprs.push_back(Expr::var(hv));
            arg_terms.push_back(Term::var(hv));
            rc.holes.push_back({hv, p.type.base});
            hole_id++;
          }
        }
        rc.expr = Expr::cons_app(c.name, std::move(arg_exprs));
        rc.term = Term::app(c.name, std::move(arg_terms));
        cands.push_back(std::move(rc));
      }
    }
    return cands;
  }

  bool entailed(const SpecProp& goal, SymTab& st) {
    HeapState probe = hs0;  // initial state: current == initial
    Prop g = final_goal(file, goal, Term::unit(), {}, probe, st);
    return solver.check_valid(st, facts, g).valid();
  }

  std::string normalized_call(const ComponentSpec& c, const std::vector<Term>& args) {
    Path p;
    p.steps.push_back(PathStep{c.name, args});
    return pretty_print(alpha_normalize(path_to_expr(p)));
  }

  // goal-directed call chaining (BW_CALL); returns true when a Complete
  // outcome was produced
  bool chain(const SpecProp& goal, const Expr& e_b, int depth, bool frame_tried) {
    SymTab st = st0;
    // BW_SUB
    if (entailed(goal, st)) {
      BackwardOutcome oc;
      oc.k = BackwardOutcome::K::Complete;
      oc.term = e_b;
      out.clear();
      out.push_back(std::move(oc));
      complete_found = true;
      return true;
    }
    // BW_CALL
    if (depth < kBackwardDepth) {
      for (auto& c : file.library) {
        std::vector<std::vector<Term>> tuples = arg_tuples(c);
        for (auto& args : tuples) {
          if (blocked.count(normalized_call(c, args))) continue;
          SymTab st2 = st0;
          HeapState probe = hs0;
          Prop check = bw_call_check(file, c, args, goal, probe, st2);
          if (!solver.check_valid(st2, facts, check).valid()) continue;
          std::string binder = c.result.base.is_unit() ? "_" : fresh_binder(c.result.base);
          GhostGen gen_copy = *hs0.gen;
          SpecProp residual = wp_call(file, c, args, binder == "_" ? "u!bw" : binder, goal, *hs0.gen, st0);
          (void)gen_copy;
          std::vector<Expr> arg_exprs;
          for (auto& a : args) arg_exprs.push_back(a.k == Term::K::Var ? (file.find_location(a.name) ? Expr::loc(a.name) : Expr::var(a.name)) : Expr::cst(a));
          Expr e2 = Expr::seq(binder, Expr::call(c.name, arg_exprs), e_b);
          if (chain(residual, e2, depth + 1, false)) return true;
        }
      }
    }
    // BW_FRAME: discard goal conjuncts that already hold in the pre and do
    // not interact with the rest
    if (!frame_tried) {
      std::set<std::string> ev;
      for (auto& g : goal.ghosts) ev.insert(g.name);
      Prop pre_all = Prop::conj(facts);
      auto split = frame_split(pre_all, goal.body, ev);
      if (split && !split->frame.is_true()) {
        SpecProp framed = goal;
        framed.body = split->residual_post;
        if (chain(framed, e_b, depth, true)) return true;
      }
    }
    // BW_HOLE / stall: hand the residual to the forward phase
    BackwardOutcome oc;
    oc.k = BackwardOutcome::K::Partial;
    oc.term = e_b;
    oc.hyp.shape = e_b;
    oc.residual = goal;
    out.push_back(std::move(oc));
    return false;
  }

  std::vector<std::vector<Term>> arg_tuples(const ComponentSpec& c) {
    std::vector<std::vector<Term>> tuples;
    tuples.emplace_back();
    for (auto& p : c.params) {
      std::vector<Term> pool;
      for (auto it = query.params.rbegin(); it != query.params.rend(); ++it)
        if (it->type.base == p.type.base) pool.push_back(Term::var(it->name));
      for (auto& l : file.locations)
        if (l.sort == p.type.base) pool.push_back(Term::var(l.name));
      if (pool.empty()) return {};
      std::vector<std::vector<Term>> next;
      for (auto& t : tuples)
        for (auto& cand : pool) {
          auto t2 = t;
          t2.push_back(cand);
          next.push_back(std::move(t2));
        }
      tuples = std::move(next);
    }
    return tuples;
  }

  std::vector<BackwardOutcome> run() {
    hs0 = HeapState::fresh(std::make_shared<GhostGen>());
    facts.push_back(initial_facts(file, query, hs0, st0));

    for (auto& rc : return_candidates()) {
      if (complete_found) break;
      SpecProp q0 = wp_return(query.post, rc.term);
      if (!query.result.trivial()) {
        Subst s;
        s["v"] = rc.term;
        q0.body = simplify(Prop::conj({substitute(query.result.phi, s), q0.body}));
      }
      Expr e_b = Expr::ret(rc.expr);
      if (!rc.holes.empty()) {
        // the hypothesis: x1 <- (?? : t1); ...; return C(x1, ...)
        BackwardOutcome oc;
        oc.k = BackwardOutcome::K::Partial;
        oc.term = e_b;
        Expr shape = e_b;
        int id = (int)rc.holes.size();
        for (auto it = rc.holes.rbegin(); it != rc.holes.rend(); ++it) shape = Expr::seq(it->first, Expr::hole(id--, it->second), std::move(shape));
        oc.hyp.shape = std::move(shape);
        oc.residual = q0;
        if (rc.ctor && !rc.ctor->result.trivial()) {
          Subst cs;
          cs["v"] = rc.term;
          for (size_t i = 0; i < rc.ctor->params.size(); i++) cs[rc.ctor->params[i].name] = rc.term.args[i];
          oc.suffix_facts = simplify(substitute(rc.ctor->result.phi, cs));
        }
        for (auto& h : rc.holes) st0.add(h.first, h.second);
        out.push_back(std::move(oc));
        continue;
      }
      chain(q0, e_b, 0, false);
    }
    if (out.empty()) {
      BackwardOutcome oc;
      oc.k = BackwardOutcome::K::Failed;
      out.push_back(std::move(oc));
    }
    return out;
  }
};

}  // namespace

std::vector<BackwardOutcome> bw_synthesize(const SpecFile& file, SolverContext& solver, const QuerySpec& query, const std::set<std::string>& blocked, const EngineConfig& cfg) {
  (void)cfg;
  BwEngine eng{file, solver, query, blocked};
  return eng.run();
}

}  // namespace cobalt
