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

std::string binder_prefix(const Sort& s) {
  if (s.is_bool()) return "b";
  if (s.text == "string") return "s";
  if (s.text == "float") return "x";
  if (s.text == "int") return "y";
  if (s.is_unit()) return "u";
  if (s.is_ref()) return "r";
  return "t";
}

struct Binding {
  std::string name;
  Sort sort;
};

struct SearchCtx {
  std::vector<Prop> facts;
  HeapState hs;
  SymTab st;
  std::vector<Binding> binders;  // parameters first, then step binders
  std::map<std::string, int> name_ctr;
  std::set<std::string> reserved;  // names the binder namer must avoid

  std::string fresh_binder(const Sort& s) {
    std::string p = binder_prefix(s);
    std::string n;
    do {
      n = p + std::to_string(++name_ctr[p]);
    } while (st.has(n) || reserved.count(n));
    return n;
  }
};

struct StepInst {
  const ComponentSpec* comp = nullptr;
  std::vector<Term> args;
  std::string binder;
};

// Per-component discriminating proposition (S_p, T_p), initially (true, false).
struct DiscProp {
  Prop sp = Prop::mk_true();
  Prop tp = Prop::mk_false();
  bool touched = false;
};

std::string normalize_path(const std::vector<StepInst>& steps) {
  Path p;
  for (auto& s : steps) p.steps.push_back(PathStep{s.comp->name, s.args});
  return pretty_print(alpha_normalize(path_to_expr(p)));
}

struct Searcher {
  ForwardShared& sh;
  const ForwardProblem& prob;
  const QuerySpec& query;
  std::set<std::string> stable;  // canonicalization vocabulary

  std::map<std::string, DiscProp> D;
  int kb = 0;
  SymTab canon_syms;  // canonical cur!loc symbols across all paths

  const SpecFile& file() { return *sh.file; }
  SolverContext& solver() { return *sh.solver; }

  void tick() {
    if (sh.out_of_time && sh.out_of_time()) throw Timeout{};
  }

  // ---- candidate enumeration (FW_VAR argument pools + FW_CALL filter) ----

  std::vector<std::vector<Term>> arg_tuples(const SearchCtx& cx, const std::vector<Param>& params) {
    std::vector<std::vector<Term>> tuples;
    tuples.emplace_back();
    for (auto& p : params) {
      std::vector<Term> pool;
      for (auto it = cx.binders.rbegin(); it != cx.binders.rend(); ++it)
        if (it->sort == p.type.base) pool.push_back(Term::var(it->name));
      for (auto& l : file().locations)
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

  bool applicable(SearchCtx& cx, const ComponentSpec& c, const std::vector<Term>& args) {
    Prop pre = instantiate_pre(file(), c, args, cx.hs, cx.st);
    return solver().check_valid(cx.st, cx.facts, pre).valid();
  }

  // ---- hypothesis compatibility ----

  // Greedy order-preserving matching of hole sorts onto path result sorts.
  std::vector<int> hole_assignment(const std::vector<StepInst>& steps) {
    std::vector<int> assign(prob.holes.size(), -1);
    size_t j = 0;
    for (size_t i = 0; i < steps.size() && j < prob.holes.size(); i++) {
      if (steps[i].comp->result.base == prob.holes[j].second) {
        assign[j] = (int)i;
        j++;
      }
    }
    return assign;
  }

  bool compatible(const std::vector<StepInst>& steps) {
    auto assign = hole_assignment(steps);
    size_t unfilled = 0;
    for (int a : assign)
      if (a < 0) unfilled++;
    return steps.size() + unfilled <= (size_t)kb;
  }

  // ---- FW_SUB: does this path complete the goal? ----

  std::optional<Expr> fw_sub(SearchCtx cx, const std::vector<StepInst>& steps) {
    tick();
    if (prob.return_synthesis) return fw_sub_return(std::move(cx), steps);
    auto assign = hole_assignment(steps);
    for (int a : assign)
      if (a < 0) return std::nullopt;
    Subst holes;
    for (size_t j = 0; j < assign.size(); j++) holes[prob.holes[j].first] = Term::var(steps[assign[j]].binder);
    std::vector<Prop> facts = cx.facts;
    if (!prob.suffix_facts.is_true()) facts.push_back(simplify(substitute(prob.suffix_facts, holes)));
    Prop goal = final_goal(file(), prob.goal_post, Term::unit(), holes, cx.hs, cx.st);
    if (!solver().check_valid(cx.st, facts, goal).valid()) return std::nullopt;
    return assemble(steps, assign);
  }

  std::optional<Expr> fw_sub_return(SearchCtx cx, const std::vector<StepInst>& steps) {
    struct Cand {
      Expr expr;
      Term term;
      const CtorDecl* ctor = nullptr;
    };
    std::vector<Cand> cands;
    const Sort& t = prob.result_base;
    for (auto it = cx.binders.rbegin(); it != cx.binders.rend(); ++it)
      if (it->sort == t) cands.push_back(Cand{Expr::var(it->name), Term::var(it->name), nullptr});
    if (t.is_unit()) cands.push_back(Cand{Expr::cst(Term::unit()), Term::unit(), nullptr});
    for (auto& d : file().datatypes) {
      if (d.type_name != t.text) continue;
      for (auto& c : d.ctors) {
        std::vector<std::vector<Term>> tuples = arg_tuples(cx, c.params);
        for (auto& args : tuples) {
          std::vector<Expr> arg_exprs;
          for (auto& a : args) arg_exprs.push_back(Expr::var(a.name));
          cands.push_back(Cand{Expr::cons_app(c.name, arg_exprs), Term::app(c.name, args), &c});
        }
      }
    }
    for (auto& cand : cands) {
      std::vector<Prop> facts = cx.facts;
      if (cand.ctor && !cand.ctor->result.trivial()) {
        Subst cs;
        cs["v"] = cand.term;
        for (size_t i = 0; i < cand.ctor->params.size(); i++) cs[cand.ctor->params[i].name] = cand.term.args[i];
        facts.push_back(simplify(substitute(cand.ctor->result.phi, cs)));
      }
      SearchCtx probe = cx;
      Prop goal = final_goal(file(), prob.goal_post, cand.term, {}, probe.hs, probe.st);
      if (!prob.result_phi.is_true()) {
        Subst rs;
        rs["v"] = cand.term;
        goal = simplify(Prop::conj({substitute(prob.result_phi, rs), goal}));
      }
      if (solver().check_valid(probe.st, facts, goal).valid()) {
        std::vector<int> assign;
        Expr chain = Expr::ret(cand.expr);
        return assemble_with_tail(steps, assign, std::move(chain));
      }
    }
    return std::nullopt;
  }

  // ---- assembly ----

  Expr assemble(const std::vector<StepInst>& steps, const std::vector<int>& assign) {
    // rename hole-filling binders to the hypothesis's names
    Expr tail = prob.suffix;
    return assemble_with_tail(steps, assign, std::move(tail));
  }

  Expr assemble_with_tail(const std::vector<StepInst>& steps, const std::vector<int>& assign, Expr tail) {
    std::map<std::string, std::string> ren;
    for (size_t j = 0; j < assign.size(); j++)
      if (assign[j] >= 0) ren[steps[assign[j]].binder] = prob.holes[j].first;
    Expr out = std::move(tail);
    for (size_t i = steps.size(); i-- > 0;) {
      std::vector<Expr> args;
      for (auto& a : steps[i].args) {
        if (a.k == Term::K::Var) {
          auto it = ren.find(a.name);
          std::string n = it != ren.end() ? it->second : a.name;
          args.push_back(file().find_location(n) ? Expr::loc(n) : Expr::var(n));
        } else {
          args.push_back(Expr::cst(a));
        }
      }
      std::string b = steps[i].binder;
      auto it = ren.find(b);
      if (it != ren.end())
        b = it->second;
      else if (steps[i].comp->result.base.is_unit())
        b = "_";
      out = Expr::seq(b, Expr::call(steps[i].comp->name, std::move(args)), std::move(out));
    }
    return out;
  }

  // ---- CDCL pruning (CDCL_CHOICE side condition X) ----

  Prop canon(const SearchCtx& cx) { return canonicalize_state(cx.facts, cx.hs, stable, canon_syms); }

  // Returns true when the candidate must be pruned; logs the verdicts.
  bool prune_check(const SearchCtx& cx, const SearchCtx& cx2, const std::string& comp) {
    if (sh.cfg.mode == Mode::FwNoCdcl) return false;
    auto it = D.find(comp);
    if (it == D.end() || !it->second.touched) return false;  // (true, false): never prunes
    SymTab st = cx2.st;
    for (auto& [n, s] : canon_syms.syms) st.add(n, s);
    Prop sp_new = canon(cx2);
    Prop sp_pi = canon(cx);
    for (auto& [n, s] : canon_syms.syms) st.add(n, s);
    ValidityResult v1 = solver().check_valid(st, {}, Prop::implies(it->second.sp, sp_new));
    if (!v1.valid()) return false;  // first disjunct of X holds
    ValidityResult v2 = solver().check_valid(st, {}, Prop::implies(sp_new, it->second.tp));
    ValidityResult v3 = ValidityResult::unknown("");
    bool prune;
    if (!v2.valid()) {
      prune = true;  // second disjunct's first conjunct fails
    } else {
      v3 = solver().check_valid(st, {}, Prop::implies(sp_pi, it->second.tp));
      prune = v3.valid();  // negated conjunct fails
    }
    if (prune && sh.stats) {
      PruneLog log;
      log.component = comp;
      log.bound = kb;
      log.stuck_prop = it->second.sp;
      log.sp_new = sp_new;
      log.sp_prefix = sp_pi;
      log.truncated_prop = it->second.tp;
      auto name = [](const ValidityResult& r) { return r.k == ValidityResult::K::Valid ? "Valid" : r.k == ValidityResult::K::Invalid ? "Invalid" : "Unknown"; };
      log.v1 = name(v1);
      log.v2 = name(v2);
      log.v3 = v3.reason.empty() || v3.k != ValidityResult::K::Unknown ? name(v3) : "NotAsked";
      sh.stats->prunes.push_back(std::move(log));
    }
    return prune;
  }

  // ---- CDCL_LEARN ----

  void learn(const SearchCtx& cx, const std::vector<StepInst>& steps, bool bound_stuck, const std::vector<std::pair<const ComponentSpec*, std::vector<Term>>>& truncated) {
    if (steps.empty()) return;
    if (sh.stats) sh.stats->stuck_nodes++;
    sh.learned_paths.insert(normalize_path(steps));
    DiscProp& d = D[steps.back().comp->name];
    Prop sp = canon(cx);
    d.sp = d.touched && !d.sp.is_true() ? simplify(Prop::conj({d.sp, sp})) : sp;
    if (bound_stuck) {
      std::vector<Prop> disj;
      if (!d.tp.is_false()) disj.push_back(d.tp);
      for (auto& [c, args] : truncated) {
        SearchCtx probe = cx;
        Prop pre = instantiate_pre(file(), *c, args, probe.hs, probe.st);
        // project onto the stable vocabulary
        Prop proj = canonicalize_state({pre}, probe.hs, stable, canon_syms);
        disj.push_back(proj);
      }
      if (!disj.empty()) d.tp = simplify(Prop::disj(std::move(disj)));
    }
    d.touched = true;
  }

  // ---- the depth-first loop (Algorithm 1 lines 12-21 at one bound) ----

  std::optional<Expr> dfs(SearchCtx& cx, std::vector<StepInst>& steps) {
    tick();
    bool had_applicable = false;
    std::vector<std::pair<const ComponentSpec*, std::vector<Term>>> applicable_here;
    for (auto& c : file().library) {
      for (auto& args : arg_tuples(cx, c.params)) {
        tick();
        if (!applicable(cx, c, args)) continue;
        had_applicable = true;
        applicable_here.push_back({&c, args});
        if (steps.size() + 1 > (size_t)kb) continue;  // bound truncation
        // extension
        SearchCtx cx2 = cx;
        StepInst inst;
        inst.comp = &c;
        inst.args = args;
        inst.binder = cx2.fresh_binder(c.result.base);
        Prop post = sp_post(file(), c, args, inst.binder, cx2.hs, cx2.st);
        cx2.facts.push_back(post);
        cx2.binders.push_back({inst.binder, c.result.base});
        steps.push_back(inst);
        bool rejected = false;
        if (!compatible(steps)) rejected = true;
        if (!rejected && prune_check(cx, cx2, c.name)) {
          if (sh.stats) sh.stats->nodes_pruned++;
          rejected = true;
        }
        if (rejected) {
          steps.pop_back();
          continue;
        }
        if (sh.stats) sh.stats->nodes_expanded++;
        if (auto r = fw_sub(cx2, steps)) return r;
        if (steps.size() < (size_t)kb) {
          if (auto r = dfs(cx2, steps)) return r;
        }
        steps.pop_back();
      }
    }
    // stuckness classification (Def 9.6)
    if (!steps.empty()) {
      if (!had_applicable) {
        learn(cx, steps, /*bound_stuck=*/false, {});
      } else if (steps.size() + 1 == (size_t)kb) {
        // all one-step completions exist but fail the post: bound-stuck
        learn(cx, steps, /*bound_stuck=*/true, applicable_here);
      }
      // fully explored interior nodes do not learn
    }
    return std::nullopt;
  }

  // ---- guard detection (FW_IF) ----

  struct GuardShape {
    Prop phi_true, phi_false;
  };

  std::optional<GuardShape> guard_shape(const Prop& post, const Term& binder_var) {
    GuardShape g;
    bool have_t = false, have_f = false;
    std::function<void(const Prop&)> scan = [&](const Prop& p) {
      if (p.k == Prop::K::Iff && p.kids[0].k == Prop::K::Eq) {
        const Prop& l = p.kids[0];
        if (l.args[0] == binder_var && l.args[1].k == Term::K::BoolLit) {
          if (l.args[1].b) {
            g.phi_true = p.kids[1];
            have_t = true;
          } else {
            g.phi_false = p.kids[1];
            have_f = true;
          }
        }
      }
      for (auto& kch : p.kids)
        if (p.k != Prop::K::Forall && p.k != Prop::K::Exists) scan(kch);
    };
    scan(post);
    if (have_t && have_f) return g;
    return std::nullopt;
  }

  // ---- the subproblem solver: straight-line IDDFS, then guards, then match ----

  std::optional<Expr> solve(SearchCtx cx, int depth_budget, int guard_budget) {
    tick();
    // empty-path completion (goal may already be entailed)
    {
      std::vector<StepInst> none;
      kb = 0;
      if (auto r = fw_sub(cx, none)) return r;
    }
    for (kb = 1; kb <= depth_budget; kb++) {
      D.clear();
      std::vector<StepInst> steps;
      SearchCtx cxi = cx;
      if (auto r = dfs(cxi, steps)) return r;
    }
    if (guard_budget > 0) {
      // FW_IF: boolean components whose post has the [v=true]/[v=false] shape
      for (auto& c : file().library) {
        if (!c.result.base.is_bool()) continue;
        for (auto& args : arg_tuples(cx, c.params)) {
          tick();
          if (!applicable(cx, c, args)) continue;
          SearchCtx cg = cx;
          StepInst inst;
          inst.comp = &c;
          inst.args = args;
          inst.binder = cg.fresh_binder(Sort::Bool());
          Prop post = sp_post(file(), c, args, inst.binder, cg.hs, cg.st);
          auto shape = guard_shape(post, Term::var(inst.binder));
          if (!shape) continue;
          cg.facts.push_back(post);
          cg.binders.push_back({inst.binder, Sort::Bool()});
          if (sh.stats) sh.stats->nodes_expanded++;
          SearchCtx ct = cg;
          ct.facts.push_back(Prop::eq(Term::var(inst.binder), Term::boollit(true)));
          ct.facts.push_back(shape->phi_true);
          auto rt = solve(std::move(ct), depth_budget - 1, guard_budget - 1);
          if (!rt) continue;
          SearchCtx cf = cg;
          cf.facts.push_back(Prop::eq(Term::var(inst.binder), Term::boollit(false)));
          cf.facts.push_back(shape->phi_false);
          auto rf = solve(std::move(cf), depth_budget - 1, guard_budget - 1);
          if (!rf) continue;
          std::vector<Expr> arg_exprs;
          for (auto& a : args) arg_exprs.push_back(a.k == Term::K::Var ? (file().find_location(a.name) ? Expr::loc(a.name) : Expr::var(a.name)) : Expr::cst(a));
          return Expr::seq(inst.binder, Expr::call(c.name, std::move(arg_exprs)), Expr::if_(Expr::var(inst.binder), std::move(*rt), std::move(*rf)));
        }
      }
      // FW_MATCH: datatype-sorted context variables, small constructor sets
      for (auto& b : cx.binders) {
        const DatatypeDecl* dt = nullptr;
        for (auto& d : file().datatypes)
          if (d.type_name == b.sort.text) dt = &d;
        if (!dt || dt->ctors.size() > 4) continue;
        std::vector<MatchBranch> brs;
        std::vector<Expr> bodies;
        bool all_ok = true;
        for (auto& c : dt->ctors) {
          SearchCtx cb = cx;
          MatchBranch br;
          br.ctor = c.name;
          Subst cs;
          cs["v"] = Term::var(b.name);
          std::vector<Term> ctor_args;
          for (auto& p : c.params) {
            std::string bn = cb.fresh_binder(p.type.base);
            br.binders.push_back(bn);
            cb.binders.push_back({bn, p.type.base});
            cb.st.add(bn, p.type.base);
            cs[p.name] = Term::var(bn);
            ctor_args.push_back(Term::var(bn));
          }
          cb.facts.push_back(Prop::eq(Term::var(b.name), Term::app(c.name, ctor_args)));
          Prop phi = simplify(substitute(c.result.phi, cs));
          if (!phi.is_true()) cb.facts.push_back(phi);
          auto rb = solve(std::move(cb), depth_budget - 1, guard_budget - 1);
          if (!rb) {
            all_ok = false;
            break;
          }
          brs.push_back(std::move(br));
          bodies.push_back(std::move(*rb));
        }
        if (all_ok && !brs.empty()) {
          if (sh.stats) sh.stats->nodes_expanded++;
          return Expr::match_(Expr::var(b.name), std::move(brs), std::move(bodies));
        }
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<Expr> cdcl_search(ForwardShared& sh, const ForwardProblem& prob, const QuerySpec& query) {
  SearchCtx cx;
  cx.hs = HeapState::fresh(std::make_shared<GhostGen>());
  for (auto& p : query.params) cx.binders.push_back({p.name, p.type.base});
  cx.facts.push_back(initial_facts(*sh.file, query, cx.hs, cx.st));
  for (auto& h : prob.holes) {
    cx.reserved.insert(h.first);
    cx.st.add(h.first, h.second);
  }

  Searcher s{sh, prob, query, {}};
  for (auto& p : query.params) s.stable.insert(p.name);
  for (auto& l : sh.file->locations) s.stable.insert(l.name);
  return s.solve(std::move(cx), sh.cfg.depth_k, sh.cfg.guard_budget);
}

}  // namespace cobalt
