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

#include "cobalt/transformers.hpp"

#include <cctype>
#include <functional>

namespace cobalt {

namespace {

bool is_select(const SpecFile& f, const std::string& name) {
  const QualifierDecl* q = f.find_qualifier(name);
  return q && q->interpreted && !q->is_update;
}

std::string cap(const std::string& loc) {
  std::string b = loc;
  if (!b.empty() && std::islower((unsigned char)b[0])) b[0] = (char)std::toupper((unsigned char)b[0]);
  return b;
}

// A select application sel(h, l) with a variable heap and location.
struct SelUse {
  std::string heap_var;
  std::string loc;
};

void collect_sel_term(const SpecFile& f, const Term& t, std::vector<SelUse>& out) {
  if (t.k == Term::K::App) {
    if (is_select(f, t.name) && t.args.size() == 2 && t.args[0].k == Term::K::Var && t.args[1].k == Term::K::Var) out.push_back({t.args[0].name, t.args[1].name});
    for (auto& a : t.args) collect_sel_term(f, a, out);
  } else {
    for (auto& a : t.args) collect_sel_term(f, a, out);
  }
}

void collect_sel(const SpecFile& f, const Prop& p, std::vector<SelUse>& out) {
  for (auto& a : p.args) collect_sel_term(f, a, out);
  for (auto& k : p.kids) collect_sel(f, k, out);
}

// heap variable/symbol -> location -> ghost symbol
using SelMap = std::map<std::string, std::map<std::string, std::string>>;

Term rewrite_sel_term(const SpecFile& f, const Term& t, const SelMap& m) {
  if (t.k == Term::K::App && is_select(f, t.name) && t.args.size() == 2 && t.args[0].k == Term::K::Var && t.args[1].k == Term::K::Var) {
    auto hit = m.find(t.args[0].name);
    if (hit != m.end()) {
      auto lit = hit->second.find(t.args[1].name);
      if (lit != hit->second.end()) return Term::var(lit->second);
    }
  }
  Term r = t;
  for (auto& a : r.args) a = rewrite_sel_term(f, a, m);
  return r;
}

Prop rewrite_sel(const SpecFile& f, const Prop& p, const SelMap& m) {
  Prop r = p;
  for (auto& a : r.args) a = rewrite_sel_term(f, a, m);
  for (auto& k : r.kids) k = rewrite_sel(f, k, m);
  return r;
}

// Value sort of a location variable: from a global declaration, from the
// symbol table (ref-sorted binders), or from a parameter already registered.
std::optional<Sort> loc_value_sort(const SpecFile& f, const SymTab& st, const HeapState& hs, const std::string& loc) {
  if (auto* l = f.find_location(loc)) return l->sort.pointee();
  auto it = st.syms.find(loc);
  if (it != st.syms.end() && it->second.is_ref()) return it->second.pointee();
  if (hs.known(loc)) return hs.locs.at(loc).value_sort;
  return std::nullopt;
}

// Ghost binders of `sp` whose value is pinned by a select equation over the
// given heap variable: G -> location.
std::map<std::string, std::string> bound_ghosts(const SpecFile& f, const SpecProp& sp, const Prop& body, const std::string& heap_var) {
  std::map<std::string, std::string> out;
  std::set<std::string> prefix;
  for (auto& g : sp.ghosts) prefix.insert(g.name);
  std::function<void(const Prop&)> walk = [&](const Prop& p) {
    if (p.k == Prop::K::Eq) {
      const Term *sel = nullptr, *ghost = nullptr;
      if (p.args[0].k == Term::K::App && is_select(f, p.args[0].name) && p.args[1].k == Term::K::Var) {
        sel = &p.args[0];
        ghost = &p.args[1];
      } else if (p.args[1].k == Term::K::App && is_select(f, p.args[1].name) && p.args[0].k == Term::K::Var) {
        sel = &p.args[1];
        ghost = &p.args[0];
      }
      if (sel && ghost && sel->args.size() == 2 && sel->args[0].k == Term::K::Var && sel->args[1].k == Term::K::Var && sel->args[0].name == heap_var && prefix.count(ghost->name)) out.emplace(ghost->name, sel->args[1].name);
    }
    for (auto& k : p.kids) walk(k);
  };
  walk(body);
  return out;
}

Sort ghost_sort(const SpecProp& sp, const std::string& name) {
  for (auto& g : sp.ghosts)
    if (g.name == name) return g.sort;
  return Sort::Unit();
}

// Wraps remaining free prefix ghosts as universals (fact side) or Skolemizes
// them as fresh constants (goal side).
Prop close_unbound(const SpecProp& sp, Prop body, const Subst& already, bool forall_wrap, GhostGen& gen, SymTab& st) {
  std::set<std::string> fv = free_vars(body);
  Subst sk;
  std::vector<std::pair<std::string, Sort>> wrap;
  for (auto& g : sp.ghosts) {
    if (already.count(g.name) || !fv.count(g.name)) continue;
    if (forall_wrap) {
      wrap.push_back({g.name, g.sort});
    } else {
      std::string c = gen.fresh(g.name);
      st.add(c, g.sort);
      sk[g.name] = Term::var(c);
    }
  }
  if (!sk.empty()) body = substitute(body, sk);
  for (auto it = wrap.rbegin(); it != wrap.rend(); ++it) body = Prop::forall(it->first, it->second, std::move(body));
  return body;
}

}  // namespace

Prop initial_facts(const SpecFile& file, const QuerySpec& q, HeapState& hs, SymTab& st) {
  for (auto& p : q.params) {
    st.add(p.name, p.type.base);
    if (p.type.base.is_ref()) hs.track(p.name, p.type.base.pointee());
  }
  st.add(hs.init_heap(), Sort::Heap());

  Prop body = q.pre.body;
  auto bound = bound_ghosts(file, q.pre, body, q.pre.heap_in);
  // initial ghosts take the names the query's own prefix gives them
  for (auto& [g, loc] : bound) {
    auto vs = loc_value_sort(file, st, hs, loc);
    if (!vs) continue;
    hs.track(loc, *vs, g);
    st.add(hs.initial(loc), *vs);
  }
  // every select use pins down its location's timeline
  std::vector<SelUse> uses;
  collect_sel(file, body, uses);
  SelMap m;
  for (auto& u : uses) {
    if (u.heap_var != q.pre.heap_in) continue;
    auto vs = loc_value_sort(file, st, hs, u.loc);
    if (!vs) continue;
    hs.track(u.loc, *vs);
    st.add(hs.initial(u.loc), *vs);
    m[q.pre.heap_in][u.loc] = hs.initial(u.loc);
  }
  Subst heap_sub;
  heap_sub[q.pre.heap_in] = Term::var(hs.init_heap());
  body = rewrite_sel(file, body, m);
  body = substitute(body, heap_sub);
  body = close_unbound(q.pre, std::move(body), {}, /*forall_wrap=*/false, *hs.gen, st);

  std::vector<Prop> facts;
  for (auto& p : q.params) {
    if (!p.type.trivial()) {
      Subst s;
      s["v"] = Term::var(p.name);
      facts.push_back(substitute(p.type.phi, s));
    }
  }
  facts.push_back(body);
  return simplify(Prop::conj(std::move(facts)));
}

namespace {

// Shared resolution for component pre/post instantiation.
Prop resolve_component_prop(const SpecFile& file, const ComponentSpec& c, const SpecProp& sp, const Subst& arg_sub, const std::string& in_heap, const std::string& out_heap,
                            const std::function<std::string(const std::string&, const Sort&)>& in_ghost, const std::function<std::string(const std::string&, const Sort&)>& out_ghost, bool forall_unbound, GhostGen& gen, SymTab& st,
                            const SpecFile* loc_lookup, HeapState* hs) {
  Prop body = substitute(sp.body, arg_sub);

  auto value_sort = [&](const std::string& loc) -> std::optional<Sort> {
    if (auto* l = file.find_location(loc)) return l->sort.pointee();
    auto it = st.syms.find(loc);
    if (it != st.syms.end() && it->second.is_ref()) return it->second.pointee();
    if (hs && hs->known(loc)) return hs->locs.at(loc).value_sort;
    return std::nullopt;
  };
  (void)loc_lookup;

  std::vector<SelUse> uses;
  collect_sel(file, body, uses);
  SelMap m;
  Subst ghost_sub;
  for (auto& u : uses) {
    auto vs = value_sort(u.loc);
    if (!vs) continue;
    if (u.heap_var == sp.heap_in && !m[sp.heap_in].count(u.loc)) m[sp.heap_in][u.loc] = in_ghost(u.loc, *vs);
    if (!sp.heap_out.empty() && u.heap_var == sp.heap_out && !m[sp.heap_out].count(u.loc)) m[sp.heap_out][u.loc] = out_ghost(u.loc, *vs);
  }
  body = rewrite_sel(file, body, m);
  Subst heap_sub;
  if (!in_heap.empty()) heap_sub[sp.heap_in] = Term::var(in_heap);
  if (!sp.heap_out.empty() && !out_heap.empty()) heap_sub[sp.heap_out] = Term::var(out_heap);
  body = substitute(body, heap_sub);
  body = close_unbound(sp, std::move(body), arg_sub, forall_unbound, gen, st);
  (void)c;
  return simplify(body);
}

Subst make_arg_sub(const ComponentSpec& c, const std::vector<Term>& args) {
  Subst s;
  for (size_t i = 0; i < c.params.size() && i < args.size(); i++) s[c.params[i].name] = args[i];
  return s;
}

}  // namespace

Prop instantiate_pre(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, HeapState& hs, SymTab& st) {
  st.add(hs.cur_heap(), Sort::Heap());
  auto in_ghost = [&](const std::string& loc, const Sort& vs) {
    hs.track(loc, vs);
    st.add(hs.current(loc), vs);
    return hs.current(loc);
  };
  return resolve_component_prop(file, c, c.pre, make_arg_sub(c, args), hs.cur_heap(), "", in_ghost, in_ghost, /*forall_unbound=*/false, *hs.gen, st, &file, &hs);
}

Prop sp_post(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, const std::string& result_binder, HeapState& hs, SymTab& st) {
  Subst sub = make_arg_sub(c, args);
  if (!c.post.result_var.empty()) sub[c.post.result_var] = Term::var(result_binder);
  st.add(result_binder, c.result.base);
  if (c.result.base.is_ref()) hs.track(result_binder, c.result.base.pointee());

  std::string old_heap = hs.cur_heap();
  st.add(old_heap, Sort::Heap());

  // pass 1: find locations written through the post-heap (after substitution)
  Prop substituted = substitute(c.post.body, sub);
  std::vector<SelUse> uses;
  collect_sel(file, substituted, uses);
  std::set<std::string> written;
  for (auto& u : uses)
    if (u.heap_var == c.post.heap_out) written.insert(u.loc);

  std::map<std::string, std::string> old_ghost;
  for (auto& u : uses) {
    if (u.heap_var != c.post.heap_in) continue;
    auto vs = loc_value_sort(file, st, hs, u.loc);
    if (!vs) continue;
    hs.track(u.loc, *vs);
    if (!old_ghost.count(u.loc)) {
      old_ghost[u.loc] = hs.current(u.loc);
      st.add(hs.current(u.loc), *vs);
    }
  }
  std::map<std::string, std::string> new_ghost;
  for (auto& loc : written) {
    auto vs = loc_value_sort(file, st, hs, loc);
    if (!vs) continue;
    hs.track(loc, *vs);
    if (!old_ghost.count(loc)) {
      old_ghost[loc] = hs.current(loc);
      st.add(hs.current(loc), *vs);
    }
    new_ghost[loc] = hs.advance(loc);
    st.add(new_ghost[loc], *vs);
  }
  std::string new_heap = hs.advance_heap();
  st.add(new_heap, Sort::Heap());

  auto in_ghost = [&](const std::string& loc, const Sort&) { return old_ghost.count(loc) ? old_ghost[loc] : hs.current(loc); };
  auto out_ghost = [&](const std::string& loc, const Sort&) { return new_ghost.count(loc) ? new_ghost[loc] : hs.current(loc); };
  return resolve_component_prop(file, c, c.post, sub, old_heap, new_heap, in_ghost, out_ghost, /*forall_unbound=*/true, *hs.gen, st, &file, &hs);
}

Prop final_goal(const SpecFile& file, const SpecProp& post, const Term& result, const Subst& extra, HeapState& hs, SymTab& st) {
  Subst sub = extra;
  if (!post.result_var.empty()) sub[post.result_var] = result;
  st.add(hs.init_heap(), Sort::Heap());
  st.add(hs.cur_heap(), Sort::Heap());

  ComponentSpec dummy;  // resolve_component_prop only reads the SpecProp
  auto in_ghost = [&](const std::string& loc, const Sort& vs) {
    hs.track(loc, vs);
    st.add(hs.initial(loc), vs);
    return hs.initial(loc);
  };
  auto out_ghost = [&](const std::string& loc, const Sort& vs) {
    hs.track(loc, vs);
    st.add(hs.current(loc), vs);
    return hs.current(loc);
  };
  return resolve_component_prop(file, dummy, post, sub, hs.init_heap(), hs.cur_heap(), in_ghost, out_ghost, /*forall_unbound=*/false, *hs.gen, st, &file, &hs);
}

Prop bw_call_check(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, const SpecProp& goal, HeapState& hs, SymTab& st) {
  GhostGen& gen = *hs.gen;
  Subst sub = make_arg_sub(c, args);
  std::string ret = gen.fresh("v");
  if (!c.post.result_var.empty()) sub[c.post.result_var] = Term::var(ret);
  st.add(ret, c.result.base);

  std::string hj = gen.fresh("h");
  std::string hf = gen.fresh("h");
  st.add(hj, Sort::Heap());
  st.add(hf, Sort::Heap());

  // locations the component writes
  Prop csub = substitute(c.post.body, sub);
  std::vector<SelUse> uses;
  collect_sel(file, csub, uses);
  std::set<std::string> written;
  for (auto& u : uses)
    if (u.heap_var == c.post.heap_out) written.insert(u.loc);

  std::map<std::string, std::string> junction, final_;
  auto junction_of = [&](const std::string& loc, const Sort& vs) {
    auto it = junction.find(loc);
    if (it != junction.end()) return it->second;
    std::string j = gen.fresh(cap(loc));
    st.add(j, vs);
    junction[loc] = j;
    return j;
  };
  auto final_of = [&](const std::string& loc, const Sort& vs) {
    if (!written.count(loc)) return junction_of(loc, vs);
    auto it = final_.find(loc);
    if (it != final_.end()) return it->second;
    std::string fsym = gen.fresh(cap(loc));
    st.add(fsym, vs);
    final_[loc] = fsym;
    return fsym;
  };

  Prop pre_inst = resolve_component_prop(file, c, c.pre, make_arg_sub(c, args), hj, "", junction_of, junction_of, false, gen, st, &file, &hs);
  Prop post_inst = resolve_component_prop(file, c, c.post, sub, hj, hf, junction_of, final_of, false, gen, st, &file, &hs);

  auto goal_in = [&](const std::string& loc, const Sort& vs) {
    if (hs.known(loc)) {
      st.add(hs.initial(loc), vs);
      return hs.initial(loc);
    }
    hs.track(loc, vs);
    st.add(hs.initial(loc), vs);
    return hs.initial(loc);
  };
  ComponentSpec dummy;
  Subst gsub;
  if (!goal.result_var.empty() && !c.result.base.is_unit()) gsub[goal.result_var] = Term::var(ret);
  Prop goal_inst = resolve_component_prop(file, dummy, goal, gsub, hs.init_heap(), hf, goal_in, final_of, false, gen, st, &file, &hs);

  return simplify(Prop::implies(pre_inst, Prop::implies(post_inst, goal_inst)));
}

SpecProp wp_call(const SpecFile& file, const ComponentSpec& c, const std::vector<Term>& args, const std::string& result_binder, const SpecProp& goal, GhostGen& gen, SymTab& st) {
  Subst sub = make_arg_sub(c, args);
  if (!c.post.result_var.empty()) sub[c.post.result_var] = Term::var(result_binder);
  st.add(result_binder, c.result.base);

  SpecProp res;
  res.heap_in = goal.heap_in;
  res.result_var = gen.fresh("v");
  res.heap_out = gen.fresh("hj");

  std::string hf = gen.fresh("h");
  st.add(hf, Sort::Heap());

  Prop csub = substitute(c.post.body, sub);
  std::vector<SelUse> uses;
  collect_sel(file, csub, uses);
  std::set<std::string> written;
  for (auto& u : uses)
    if (u.heap_var == c.post.heap_out) written.insert(u.loc);

  // junction ghosts become the residual's prefix, re-bound at its post-heap
  std::map<std::string, std::string> junction, final_;
  std::vector<Prop> bindings;
  const QualifierDecl* sel_decl = nullptr;
  for (auto& q : file.qualifiers)
    if (q.interpreted && !q.is_update) {
      sel_decl = &q;
      break;
    }
  auto junction_of = [&](const std::string& loc, const Sort& vs) {
    auto it = junction.find(loc);
    if (it != junction.end()) return it->second;
    std::string j = gen.fresh(cap(loc));
    junction[loc] = j;
    res.ghosts.push_back(GhostBinder{j, vs, {}});
    if (sel_decl) bindings.push_back(Prop::eq(Term::app(sel_decl->name, {Term::var(res.heap_out), Term::var(loc)}), Term::var(j)));
    return j;
  };
  auto final_of = [&](const std::string& loc, const Sort& vs) {
    if (!written.count(loc)) return junction_of(loc, vs);
    auto it = final_.find(loc);
    if (it != final_.end()) return it->second;
    std::string fsym = gen.fresh(cap(loc));
    st.add(fsym, vs);
    final_[loc] = fsym;
    return fsym;
  };

  Prop pre_inst = resolve_component_prop(file, c, c.pre, make_arg_sub(c, args), res.heap_out, "", junction_of, junction_of, false, gen, st, &file, nullptr);
  Prop post_inst = resolve_component_prop(file, c, c.post, sub, res.heap_out, hf, junction_of, final_of, false, gen, st, &file, nullptr);

  // the goal keeps its pre-heap bindings; its post-heap ghosts unify with the
  // component's final state (touched) or the junction (untouched)
  Prop gbody = goal.body;
  auto out_bound = bound_ghosts(file, goal, gbody, goal.heap_out);
  Subst gsub;
  std::set<std::string> mapped;
  for (auto& [g, loc] : out_bound) {
    Sort vs = ghost_sort(goal, g);
    gsub[g] = Term::var(final_of(loc, vs));
    mapped.insert(g);
  }
  // rewrite the goal's post-heap select uses and drop its binding atoms
  std::vector<SelUse> guses;
  collect_sel(file, gbody, guses);
  SelMap gm;
  for (auto& u : guses) {
    if (u.heap_var != goal.heap_out) continue;
    auto vs = loc_value_sort(file, st, HeapState{}, u.loc);
    if (!vs) continue;
    gm[goal.heap_out][u.loc] = final_of(u.loc, *vs);
  }
  gbody = rewrite_sel(file, gbody, gm);
  gbody = substitute(gbody, gsub);
  Subst hsub;
  hsub[goal.heap_out] = Term::var(hf);
  gbody = substitute(gbody, hsub);

  for (auto& g : goal.ghosts)
    if (!mapped.count(g.name)) res.ghosts.push_back(g);

  Prop wp = simplify(Prop::conj({pre_inst, Prop::implies(post_inst, gbody)}));
  if (!bindings.empty()) wp = Prop::implies(Prop::conj(std::move(bindings)), std::move(wp));
  res.body = simplify(wp);
  return res;
}

SpecProp wp_return(const SpecProp& goal, const Term& r) {
  SpecProp res = goal;
  if (!goal.result_var.empty()) {
    Subst s;
    s[goal.result_var] = r;
    res.body = simplify(substitute(goal.body, s));
  }
  return res;
}

std::optional<FrameSplit> frame_split(const Prop& pre, const Prop& post, const std::set<std::string>& evars) {
  std::vector<Prop> ps = conjuncts(simplify(pre));
  std::vector<Prop> qs = conjuncts(simplify(post));
  std::vector<bool> in_frame(qs.size(), false);
  for (size_t i = 0; i < qs.size(); i++) {
    for (auto& p : ps)
      if (p == qs[i]) {
        in_frame[i] = true;
        break;
      }
    if (in_frame[i]) {
      auto fv = free_vars(qs[i]);
      for (auto& v : fv)
        if (evars.count(v)) in_frame[i] = false;
    }
  }
  // greedy: shrink the frame until its qualifier set is disjoint from both
  // residuals
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::string> residual_quals;
    for (auto& p : ps) {
      bool framed = false;
      for (size_t i = 0; i < qs.size(); i++)
        if (in_frame[i] && qs[i] == p) framed = true;
      if (!framed) {
        auto qn = qual_set(p);
        residual_quals.insert(qn.begin(), qn.end());
      }
    }
    for (size_t i = 0; i < qs.size(); i++)
      if (!in_frame[i]) {
        auto qn = qual_set(qs[i]);
        residual_quals.insert(qn.begin(), qn.end());
      }
    for (size_t i = 0; i < qs.size(); i++) {
      if (!in_frame[i]) continue;
      auto qn = qual_set(qs[i]);
      for (auto& q : qn)
        if (residual_quals.count(q)) {
          in_frame[i] = false;
          changed = true;
          break;
        }
    }
  }
  std::vector<Prop> frame, res_post;
  for (size_t i = 0; i < qs.size(); i++) (in_frame[i] ? frame : res_post).push_back(qs[i]);
  if (frame.empty()) return std::nullopt;
  std::vector<Prop> res_pre;
  for (auto& p : ps) {
    bool framed = false;
    for (auto& fr : frame)
      if (fr == p) framed = true;
    if (!framed) res_pre.push_back(p);
  }
  return FrameSplit{simplify(Prop::conj(frame)), simplify(Prop::conj(res_pre)), simplify(Prop::conj(res_post))};
}

void declare_canonical_symbols(const HeapState& hs, SymTab& st) {
  for (auto& [loc, ls] : hs.locs) st.add("cur!" + loc, ls.value_sort);
  st.add("cur!heap", Sort::Heap());
}

Prop canonicalize_state(const std::vector<Prop>& facts, const HeapState& hs, const std::set<std::string>& stable, SymTab& st) {
  declare_canonical_symbols(hs, st);
  Subst ren;
  std::set<std::string> ok = stable;
  for (auto& [loc, ls] : hs.locs) {
    ren[ls.ghosts.back()] = Term::var("cur!" + loc);
    ok.insert("cur!" + loc);
    ok.insert(ls.ghosts.front());
    ok.insert(loc);
  }
  ren[hs.heaps.back()] = Term::var("cur!heap");
  ok.insert("cur!heap");
  ok.insert(hs.heaps.front());

  std::vector<Prop> kept;
  for (auto& f : facts) {
    for (auto& c : conjuncts(f)) {
      Prop r = substitute(c, ren);
      bool good = true;
      for (auto& v : free_vars(r))
        if (!ok.count(v)) {
          good = false;
          break;
        }
      if (good) kept.push_back(r);
    }
  }
  return simplify(Prop::conj(std::move(kept)));
}

}  // namespace cobalt
