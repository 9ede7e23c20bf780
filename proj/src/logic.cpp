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

#include "cobalt/logic.hpp"

#include <sstream>

namespace cobalt {

bool Term::operator==(const Term& o) const {
  if (k != o.k || name != o.name) return false;
  switch (k) {
    case K::IntLit:
      return i == o.i;
    case K::FloatLit:
    case K::StrLit:
      return s == o.s;
    case K::BoolLit:
      return b == o.b;
    default:
      break;
  }
  if (args.size() != o.args.size()) return false;
  for (size_t j = 0; j < args.size(); j++)
    if (!(args[j] == o.args[j])) return false;
  return true;
}

bool Prop::operator==(const Prop& o) const {
  if (k != o.k || name != o.name || sort != o.sort) return false;
  if (args.size() != o.args.size() || kids.size() != o.kids.size()) return false;
  for (size_t j = 0; j < args.size(); j++)
    if (!(args[j] == o.args[j])) return false;
  for (size_t j = 0; j < kids.size(); j++)
    if (!(kids[j] == o.kids[j])) return false;
  return true;
}

Prop Prop::neg(Prop a) {
  Prop p;
  p.k = K::Not;
  p.kids.push_back(std::move(a));
  return p;
}

Prop Prop::conj(std::vector<Prop> ps) {
  Prop p;
  p.k = K::And;
  p.kids = std::move(ps);
  return p;
}

Prop Prop::disj(std::vector<Prop> ps) {
  Prop p;
  p.k = K::Or;
  p.kids = std::move(ps);
  return p;
}

Prop Prop::implies(Prop a, Prop b) {
  Prop p;
  p.k = K::Implies;
  p.kids = {std::move(a), std::move(b)};
  return p;
}

Prop Prop::iff(Prop a, Prop b) {
  Prop p;
  p.k = K::Iff;
  p.kids = {std::move(a), std::move(b)};
  return p;
}

Prop Prop::forall(std::string v, Sort s, Prop body) {
  Prop p;
  p.k = K::Forall;
  p.name = std::move(v);
  p.sort = std::move(s);
  p.kids.push_back(std::move(body));
  return p;
}

Prop Prop::exists(std::string v, Sort s, Prop body) {
  Prop p = forall(std::move(v), std::move(s), std::move(body));
  p.k = K::Exists;
  return p;
}

Term substitute(const Term& t, const Subst& sigma) {
  switch (t.k) {
    case Term::K::Var: {
      auto it = sigma.find(t.name);
      return it != sigma.end() ? it->second : t;
    }
    case Term::K::App:
    case Term::K::Add:
    case Term::K::Sub: {
      Term r = t;
      for (auto& a : r.args) a = substitute(a, sigma);
      return r;
    }
    default:
      return t;
  }
}

static std::string rename_away(const std::string& base, const std::set<std::string>& avoid) {
  std::string cand = base + "'";
  while (avoid.count(cand)) cand += "'";
  return cand;
}

Prop substitute(const Prop& p, const Subst& sigma) {
  switch (p.k) {
    case Prop::K::True:
    case Prop::K::False:
      return p;
    case Prop::K::App:
    case Prop::K::Eq:
    case Prop::K::Cmp: {
      Prop r = p;
      for (auto& a : r.args) a = substitute(a, sigma);
      return r;
    }
    case Prop::K::Forall:
    case Prop::K::Exists: {
      Prop r = p;
      Subst inner = sigma;
      inner.erase(p.name);
      // capture check: if any substituted term mentions the binder, rename it
      std::set<std::string> range_vars;
      for (auto& [from, to] : inner) {
        (void)from;
        free_vars(to, range_vars);
      }
      if (range_vars.count(p.name)) {
        std::set<std::string> avoid = range_vars;
        free_vars(p.kids[0], avoid);
        std::string fresh = rename_away(p.name, avoid);
        Subst ren;
        ren[p.name] = Term::var(fresh);
        r.name = fresh;
        r.kids[0] = substitute(p.kids[0], ren);
      }
      if (!inner.empty()) r.kids[0] = substitute(r.kids[0], inner);
      return r;
    }
    default: {
      Prop r = p;
      for (auto& kch : r.kids) kch = substitute(kch, sigma);
      return r;
    }
  }
}

void free_vars(const Term& t, std::set<std::string>& out) {
  if (t.k == Term::K::Var) {
    out.insert(t.name);
    return;
  }
  for (auto& a : t.args) free_vars(a, out);
}

void free_vars(const Prop& p, std::set<std::string>& out) {
  for (auto& a : p.args) free_vars(a, out);
  if (p.k == Prop::K::Forall || p.k == Prop::K::Exists) {
    std::set<std::string> inner;
    free_vars(p.kids[0], inner);
    inner.erase(p.name);
    out.insert(inner.begin(), inner.end());
    return;
  }
  for (auto& kch : p.kids) free_vars(kch, out);
}

std::set<std::string> free_vars(const Prop& p) {
  std::set<std::string> out;
  free_vars(p, out);
  return out;
}

static void quals_term(const Term& t, std::set<std::string>& out) {
  if (t.k == Term::K::App) out.insert(t.name);
  for (auto& a : t.args) quals_term(a, out);
}

std::set<std::string> qual_set(const Prop& p) {
  std::set<std::string> out;
  if (p.k == Prop::K::App) out.insert(p.name);
  for (auto& a : p.args) quals_term(a, out);
  for (auto& kch : p.kids) {
    auto s = qual_set(kch);
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::vector<Prop> conjuncts(const Prop& p) {
  std::vector<Prop> out;
  if (p.k == Prop::K::And) {
    for (auto& kch : p.kids) {
      auto sub = conjuncts(kch);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (p.k == Prop::K::True) return out;
  out.push_back(p);
  return out;
}

Prop simplify(const Prop& p) {
  switch (p.k) {
    case Prop::K::And: {
      std::vector<Prop> ks;
      for (auto& kch : p.kids) {
        Prop s = simplify(kch);
        if (s.is_true()) continue;
        if (s.is_false()) return Prop::mk_false();
        if (s.k == Prop::K::And) {
          for (auto& g : s.kids) ks.push_back(g);
        } else {
          ks.push_back(s);
        }
      }
      if (ks.empty()) return Prop::mk_true();
      if (ks.size() == 1) return ks[0];
      return Prop::conj(std::move(ks));
    }
    case Prop::K::Or: {
      std::vector<Prop> ks;
      for (auto& kch : p.kids) {
        Prop s = simplify(kch);
        if (s.is_false()) continue;
        if (s.is_true()) return Prop::mk_true();
        ks.push_back(s);
      }
      if (ks.empty()) return Prop::mk_false();
      if (ks.size() == 1) return ks[0];
      return Prop::disj(std::move(ks));
    }
    case Prop::K::Implies: {
      Prop a = simplify(p.kids[0]), b = simplify(p.kids[1]);
      if (a.is_true()) return b;
      if (a.is_false() || b.is_true()) return Prop::mk_true();
      return Prop::implies(std::move(a), std::move(b));
    }
    case Prop::K::Not: {
      Prop a = simplify(p.kids[0]);
      if (a.is_true()) return Prop::mk_false();
      if (a.is_false()) return Prop::mk_true();
      return Prop::neg(std::move(a));
    }
    case Prop::K::Iff: {
      Prop a = simplify(p.kids[0]), b = simplify(p.kids[1]);
      if (a == b) return Prop::mk_true();
      return Prop::iff(std::move(a), std::move(b));
    }
    case Prop::K::Eq:
      if (p.args[0] == p.args[1]) return Prop::mk_true();
      return p;
    case Prop::K::Forall:
    case Prop::K::Exists: {
      Prop r = p;
      r.kids[0] = simplify(p.kids[0]);
      if (r.kids[0].is_true()) return Prop::mk_true();
      return r;
    }
    default:
      return p;
  }
}

// ---------------------------------------------------------------------------
// printing (the concrete syntax of spec files)
// ---------------------------------------------------------------------------

static void print_term(const Term& t, std::ostream& o, bool atom_pos) {
  switch (t.k) {
    case Term::K::Var:
      o << t.name;
      return;
    case Term::K::IntLit:
      o << t.i;
      return;
    case Term::K::FloatLit:
      o << t.s;
      return;
    case Term::K::BoolLit:
      o << (t.b ? "true" : "false");
      return;
    case Term::K::StrLit:
      o << '"' << t.s << '"';
      return;
    case Term::K::UnitLit:
      o << "()";
      return;
    case Term::K::App: {
      o << t.name << " (";
      for (size_t i = 0; i < t.args.size(); i++) {
        if (i) o << ", ";
        print_term(t.args[i], o, false);
      }
      o << ")";
      return;
    }
    case Term::K::Add:
    case Term::K::Sub: {
      if (atom_pos) o << "(";
      print_term(t.args[0], o, false);
      o << (t.k == Term::K::Add ? " + " : " - ");
      print_term(t.args[1], o, true);
      if (atom_pos) o << ")";
      return;
    }
  }
}

std::string to_string(const Term& t) {
  std::ostringstream o;
  print_term(t, o, false);
  return o.str();
}

// precedence: implies/iff (0) < or (1) < and (2) < unary (3)
static void print_prop(const Prop& p, std::ostream& o, int prec) {
  switch (p.k) {
    case Prop::K::True:
      o << "true";
      return;
    case Prop::K::False:
      o << "false";
      return;
    case Prop::K::App: {
      o << p.name << " (";
      for (size_t i = 0; i < p.args.size(); i++) {
        if (i) o << ", ";
        print_term(p.args[i], o, false);
      }
      o << ")";
      return;
    }
    case Prop::K::Eq:
    case Prop::K::Cmp: {
      print_term(p.args[0], o, false);
      o << " " << (p.k == Prop::K::Eq ? "=" : p.name) << " ";
      print_term(p.args[1], o, false);
      return;
    }
    case Prop::K::Not:
      o << "not (";
      print_prop(p.kids[0], o, 0);
      o << ")";
      return;
    case Prop::K::And:
    case Prop::K::Or: {
      int mine = p.k == Prop::K::And ? 2 : 1;
      bool paren = prec > mine || p.kids.size() <= 1;
      if (paren) o << "(";
      for (size_t i = 0; i < p.kids.size(); i++) {
        if (i) o << (p.k == Prop::K::And ? " /\\ " : " \\/ ");
        print_prop(p.kids[i], o, mine + 1);
      }
      if (paren) o << ")";
      return;
    }
    case Prop::K::Implies:
    case Prop::K::Iff: {
      bool paren = prec > 0;
      if (paren) o << "(";
      print_prop(p.kids[0], o, 1);
      o << (p.k == Prop::K::Implies ? " => " : " <=> ");
      print_prop(p.kids[1], o, 1);
      if (paren) o << ")";
      return;
    }
    case Prop::K::Forall:
    case Prop::K::Exists: {
      bool paren = prec > 3;
      if (paren) o << "(";
      o << (p.k == Prop::K::Forall ? "forall" : "exists") << " (" << p.name << " : " << p.sort.text << "). ";
      print_prop(p.kids[0], o, 4);
      if (paren) o << ")";
      return;
    }
  }
}

std::string to_string(const Prop& p) {
  std::ostringstream o;
  print_prop(p, o, 0);
  return o.str();
}

std::string to_string_prec(const Prop& p, int prec) {
  std::ostringstream o;
  print_prop(p, o, prec);
  return o.str();
}

}  // namespace cobalt
