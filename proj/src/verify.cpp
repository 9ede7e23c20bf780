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

#include "cobalt/verify.hpp"

namespace cobalt {

namespace {

struct CheckFail {
  std::string reason;
};

struct Checker {
  const SpecFile& file;
  const QuerySpec& query;
  SolverContext& solver;
  std::vector<TraceEntry>* trace;

  struct State {
    std::vector<Prop> facts;
    HeapState hs;
    SymTab st;
    SortEnv env;
  };

  void entail(State& s, const std::string& what, const Prop& goal) {
    ValidityResult r = solver.check_valid(s.st, s.facts, goal);
    trace->push_back(TraceEntry{what, goal, r});
    if (!r.valid()) {
      std::string why = r.k == ValidityResult::K::Unknown ? " (solver: " + r.reason + ")" : "";
      throw CheckFail{what + " does not hold" + why};
    }
  }

  Term pure_term(State& s, const Expr& e) {
    switch (e.k) {
      case Expr::K::Var:
      case Expr::K::Loc:
        return Term::var(e.name);
      case Expr::K::Const:
        return e.lit;
      case Expr::K::ConsApp: {
        std::vector<Term> args;
        for (auto& a : e.kids) args.push_back(pure_term(s, a));
        return Term::app(e.name, std::move(args));
      }
      default:
        throw CheckFail{"impure expression in pure position"};
    }
  }

  // T-consapp: the constructor's result refinement becomes a fact about the
  // constructed value.
  void add_ctor_facts(State& s, const Expr& e, const Term& value) {
    if (e.k != Expr::K::ConsApp) return;
    std::string tn;
    const CtorDecl* c = file.find_ctor(e.name, &tn);
    if (!c) throw CheckFail{"unknown constructor " + e.name};
    if (c->params.size() != e.kids.size()) throw CheckFail{"constructor arity mismatch for " + e.name};
    Subst sub;
    sub["v"] = value;
    for (size_t i = 0; i < c->params.size(); i++) sub[c->params[i].name] = pure_term(s, e.kids[i]);
    Prop phi = simplify(substitute(c->result.phi, sub));
    if (!phi.is_true()) s.facts.push_back(phi);
  }

  Sort sort_of(State& s, const Expr& e) {
    auto srt = expr_sort(e, s.env);
    if (!srt) throw CheckFail{"cannot infer sort of subterm"};
    return *srt;
  }

  // One effectful step bound by a Seq; returns the binder's sort.
  void step(State& s, const std::string& binder, const Expr& e) {
    switch (e.k) {
      case Expr::K::Call: {
        const ComponentSpec* c = file.find_component(e.name);
        if (!c) throw CheckFail{"unknown component " + e.name};
        if (c->params.size() != e.kids.size()) throw CheckFail{"call arity mismatch for " + e.name};
        std::vector<Term> args;
        for (size_t i = 0; i < e.kids.size(); i++) {
          args.push_back(pure_term(s, e.kids[i]));
          auto as = sort_of(s, e.kids[i]);
          if (as != c->params[i].type.base) throw CheckFail{"argument " + std::to_string(i + 1) + " of " + e.name + " has sort " + as.text + ", expected " + c->params[i].type.base.text};
        }
        Prop pre = instantiate_pre(file, *c, args, s.hs, s.st);
        entail(s, "precondition of " + e.name, pre);
        std::string b = binder == "_" ? s.hs.gen->fresh("u") : binder;
        Prop post = sp_post(file, *c, args, b, s.hs, s.st);
        s.facts.push_back(post);
        if (binder != "_") s.env.vars[binder] = c->result.base;
        return;
      }
      case Expr::K::Ref: {
        Term init = pure_term(s, e.kids[0]);
        Sort vs = sort_of(s, e.kids[0]);
        s.hs.track(binder, vs);
        s.st.add(binder, Sort::Ref(vs));
        s.st.add(s.hs.current(binder), vs);
        s.facts.push_back(Prop::eq(Term::var(s.hs.current(binder)), init));
        s.env.vars[binder] = Sort::Ref(vs);
        return;
      }
      case Expr::K::Return: {
        // x <- return ep: binds the pure value
        Term v = pure_term(s, e.kids[0]);
        if (binder != "_") {
          s.env.vars[binder] = sort_of(s, e.kids[0]);
          s.st.add(binder, s.env.vars[binder]);
          s.facts.push_back(Prop::eq(Term::var(binder), v));
          add_ctor_facts(s, e.kids[0], Term::var(binder));
        }
        return;
      }
      case Expr::K::Seq:
      case Expr::K::If:
      case Expr::K::Match: {
        // nested computation: check it inline against no particular goal by
        // flattening is not supported; engines emit flat programs
        throw CheckFail{"nested computation on the right of a bind is not supported"};
      }
      case Expr::K::Hole:
        throw CheckFail{"program contains a hole"};
      default:
        throw CheckFail{"unexpected expression as a bound step"};
    }
  }

  // Branch facts per T-if: the guard post's [v=true]/[v=false] conjuncts.
  void add_branch_facts(State& s, const Expr& cond, bool which) {
    Term cv = pure_term(s, cond);
    s.facts.push_back(Prop::eq(cv, Term::boollit(which)));
    // syntactic extraction from facts of shape ([b = true] <=> phi)
    std::vector<Prop> found;
    for (auto& f : s.facts) {
      for (auto& c : conjuncts(f)) {
        if (c.k != Prop::K::Iff || c.kids[0].k != Prop::K::Eq) continue;
        const Prop& lhs = c.kids[0];
        if (!(lhs.args[0] == cv)) continue;
        if (lhs.args[1].k != Term::K::BoolLit || lhs.args[1].b != which) continue;
        found.push_back(c.kids[1]);
      }
    }
    for (auto& f : found) s.facts.push_back(f);
  }

  // Tail position: every leaf must entail the query post.
  void tail(State s, const Expr& e) {
    switch (e.k) {
      case Expr::K::Seq: {
        step(s, e.name, e.kids[0]);
        tail(std::move(s), e.kids[1]);
        return;
      }
      case Expr::K::Skip: {
        if (query.result.base != Sort::Unit()) throw CheckFail{"skip returns unit but the query expects " + query.result.base.text};
        Prop goal = final_goal(file, query.post, Term::unit(), {}, s.hs, s.st);
        entail(s, "postcondition at skip", goal);
        return;
      }
      case Expr::K::Return: {
        Term v = pure_term(s, e.kids[0]);
        Sort vs = sort_of(s, e.kids[0]);
        if (vs != query.result.base) throw CheckFail{"returned sort " + vs.text + " differs from query result sort " + query.result.base.text};
        add_ctor_facts(s, e.kids[0], v);
        if (!query.result.trivial()) {
          Subst sub;
          sub["v"] = v;
          entail(s, "result refinement", simplify(substitute(query.result.phi, sub)));
        }
        Prop goal = final_goal(file, query.post, v, {}, s.hs, s.st);
        entail(s, "postcondition at return", goal);
        return;
      }
      case Expr::K::If: {
        if (sort_of(s, e.kids[0]) != Sort::Bool()) throw CheckFail{"if condition is not boolean"};
        State st_then = s;
        add_branch_facts(st_then, e.kids[0], true);
        tail(std::move(st_then), e.kids[1]);
        State st_else = std::move(s);
        add_branch_facts(st_else, e.kids[0], false);
        tail(std::move(st_else), e.kids[2]);
        return;
      }
      case Expr::K::Match: {
        Term scrut = pure_term(s, e.kids[0]);
        Sort ss = sort_of(s, e.kids[0]);
        const DatatypeDecl* dt = nullptr;
        for (auto& d : file.datatypes)
          if (d.type_name == ss.text) dt = &d;
        if (!dt) throw CheckFail{"match scrutinee is not a datatype"};
        std::set<std::string> covered;
        for (size_t i = 0; i < e.branches.size(); i++) {
          const CtorDecl* c = file.find_ctor(e.branches[i].ctor);
          if (!c) throw CheckFail{"unknown constructor " + e.branches[i].ctor};
          covered.insert(c->name);
          if (c->params.size() != e.branches[i].binders.size()) throw CheckFail{"match binder arity mismatch for " + c->name};
          State bs = s;
          Subst sub;
          sub["v"] = scrut;
          std::vector<Term> ctor_args;
          for (size_t j = 0; j < c->params.size(); j++) {
            const std::string& b = e.branches[i].binders[j];
            bs.env.vars[b] = c->params[j].type.base;
            bs.st.add(b, c->params[j].type.base);
            sub[c->params[j].name] = Term::var(b);
            ctor_args.push_back(Term::var(b));
          }
          bs.facts.push_back(Prop::eq(scrut, Term::app(c->name, ctor_args)));
          Prop phi = simplify(substitute(c->result.phi, sub));
          if (!phi.is_true()) bs.facts.push_back(phi);
          tail(std::move(bs), e.kids[i + 1]);
        }
        for (auto& c : dt->ctors)
          if (!covered.count(c.name)) throw CheckFail{"non-exhaustive match: missing " + c.name};
        return;
      }
      case Expr::K::Hole:
        throw CheckFail{"program contains a hole"};
      default:
        throw CheckFail{"program must end in return, skip, if or match"};
    }
  }

  VerifyResult run(const Expr& program) {
    VerifyResult out;
    trace = &out.trace;
    State s;
    s.hs = HeapState::fresh(std::make_shared<GhostGen>());
    s.env.file = &file;

    const Expr* body = &program;
    if (program.k == Expr::K::Lambda) {
      if (program.params.size() != query.params.size()) {
        out.reason = "lambda parameter count differs from the query";
        return out;
      }
      body = &program.kids[0];
    }
    // parameters enter scope under the query's names
    for (auto& p : query.params) s.env.vars[p.name] = p.type.base;
    if (program.k == Expr::K::Lambda) {
      for (size_t i = 0; i < program.params.size(); i++) {
        if (program.params[i].type.base != query.params[i].type.base) {
          out.reason = "lambda parameter sorts differ from the query";
          return out;
        }
      }
    }
    for (auto& l : file.locations) s.env.vars[l.name] = l.sort;

    if (has_holes(program)) {
      out.reason = "program contains holes";
      return out;
    }

    s.facts.push_back(initial_facts(file, query, s.hs, s.st));
    try {
      Expr normalized = *body;
      if (program.k == Expr::K::Lambda) {
        // rename lambda binders to the query's parameter names
        Subst unused;
        std::map<std::string, std::string> ren;
        for (size_t i = 0; i < program.params.size(); i++) ren[program.params[i].name] = query.params[i].name;
        struct R {
          static void run(Expr& e, const std::map<std::string, std::string>& ren) {
            if ((e.k == Expr::K::Var || e.k == Expr::K::Loc)) {
              auto it = ren.find(e.name);
              if (it != ren.end()) e.name = it->second;
            }
            for (auto& kch : e.kids) run(kch, ren);
          }
        };
        R::run(normalized, ren);
        (void)unused;
      }
      tail(s, normalized);
      out.ok = true;
    } catch (CheckFail& f) {
      out.ok = false;
      out.reason = f.reason;
    }
    return out;
  }
};

}  // namespace

VerifyResult typecheck(const SpecFile& file, const Expr& program, const QuerySpec& query, SolverContext& solver) {
  Checker c{file, query, solver, nullptr};
  return c.run(program);
}

std::vector<TraceEntry> vc_trace(const SpecFile& file, const Expr& program, const QuerySpec& query, SolverContext& solver) { return typecheck(file, program, query, solver).trace; }

}  // namespace cobalt
