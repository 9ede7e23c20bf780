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

#ifndef COBALT_LOGIC_HPP
#define COBALT_LOGIC_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cobalt {

// Sorts are interned as canonical text: "int", "bool", "unit", "float",
// "string", "heap", "a", user names, "[elem]" for list sorts, "ref <sort>"
// for reference sorts. "location"/"value" are placeholders that only appear
// in interpreted qualifier signatures.
struct Sort {
  std::string text;

  Sort() = default;
  explicit Sort(std::string t) : text(std::move(t)) {}

  static Sort Int() { return Sort("int"); }
  static Sort Bool() { return Sort("bool"); }
  static Sort Unit() { return Sort("unit"); }
  static Sort Float() { return Sort("float"); }
  static Sort String() { return Sort("string"); }
  static Sort Heap() { return Sort("heap"); }
  static Sort Opaque() { return Sort("a"); }
  static Sort Named(const std::string& n) { return Sort(n); }
  static Sort List(const Sort& elem) { return Sort("[" + elem.text + "]"); }
  static Sort Ref(const Sort& pointee) { return Sort("ref " + pointee.text); }

  bool is_ref() const { return text.rfind("ref ", 0) == 0; }
  Sort pointee() const { return Sort(text.substr(4)); }
  bool is_heap() const { return text == "heap"; }
  bool is_bool() const { return text == "bool"; }
  bool is_unit() const { return text == "unit"; }
  bool is_numeric() const { return text == "int" || text == "float"; }
  bool is_placeholder() const { return text == "location" || text == "value"; }

  bool operator==(const Sort& o) const { return text == o.text; }
  bool operator!=(const Sort& o) const { return text != o.text; }
  bool operator<(const Sort& o) const { return text < o.text; }
};

struct Term {
  enum class K { Var, IntLit, FloatLit, BoolLit, StrLit, UnitLit, App, Add, Sub };

  K k = K::UnitLit;
  std::string name;  // Var name / App head
  long long i = 0;
  bool b = false;
  std::string s;  // StrLit text / FloatLit spelling
  std::vector<Term> args;

  static Term var(std::string n) {
    Term t;
    t.k = K::Var;
    t.name = std::move(n);
    return t;
  }
  static Term intlit(long long v) {
    Term t;
    t.k = K::IntLit;
    t.i = v;
    return t;
  }
  static Term floatlit(std::string spelling) {
    Term t;
    t.k = K::FloatLit;
    t.s = std::move(spelling);
    return t;
  }
  static Term boollit(bool v) {
    Term t;
    t.k = K::BoolLit;
    t.b = v;
    return t;
  }
  static Term strlit(std::string v) {
    Term t;
    t.k = K::StrLit;
    t.s = std::move(v);
    return t;
  }
  static Term unit() { return Term{}; }
  static Term app(std::string f, std::vector<Term> as) {
    Term t;
    t.k = K::App;
    t.name = std::move(f);
    t.args = std::move(as);
    return t;
  }
  static Term add(Term a, Term b) {
    Term t;
    t.k = K::Add;
    t.args = {std::move(a), std::move(b)};
    return t;
  }
  static Term sub(Term a, Term b) {
    Term t;
    t.k = K::Sub;
    t.args = {std::move(a), std::move(b)};
    return t;
  }

  bool operator==(const Term& o) const;
};

struct Prop {
  enum class K { True, False, App, Not, And, Or, Implies, Iff, Eq, Cmp, Forall, Exists };

  K k = K::True;
  std::string name;  // App qualifier / Cmp op ("<","<=",">",">=") / binder var
  Sort sort;         // binder sort
  std::vector<Term> args;  // App arguments; Eq/Cmp: lhs = args[0], rhs = args[1]
  std::vector<Prop> kids;

  static Prop mk_true() { return Prop{}; }
  static Prop mk_false() {
    Prop p;
    p.k = K::False;
    return p;
  }
  static Prop app(std::string q, std::vector<Term> as) {
    Prop p;
    p.k = K::App;
    p.name = std::move(q);
    p.args = std::move(as);
    return p;
  }
  static Prop neg(Prop a);
  static Prop conj(std::vector<Prop> ps);
  static Prop disj(std::vector<Prop> ps);
  static Prop implies(Prop a, Prop b);
  static Prop iff(Prop a, Prop b);
  static Prop eq(Term a, Term b) {
    Prop p;
    p.k = K::Eq;
    p.args = {std::move(a), std::move(b)};
    return p;
  }
  static Prop cmp(std::string op, Term a, Term b) {
    Prop p;
    p.k = K::Cmp;
    p.name = std::move(op);
    p.args = {std::move(a), std::move(b)};
    return p;
  }
  static Prop forall(std::string v, Sort s, Prop body);
  static Prop exists(std::string v, Sort s, Prop body);

  bool is_true() const { return k == K::True; }
  bool is_false() const { return k == K::False; }

  bool operator==(const Prop& o) const;
};

using Subst = std::map<std::string, Term>;

// Simultaneous capture-avoiding substitution.
Term substitute(const Term& t, const Subst& sigma);
Prop substitute(const Prop& p, const Subst& sigma);

void free_vars(const Term& t, std::set<std::string>& out);
void free_vars(const Prop& p, std::set<std::string>& out);
std::set<std::string> free_vars(const Prop& p);

// Names of qualifiers applied anywhere in the proposition.
std::set<std::string> qual_set(const Prop& p);

// Flattens nested conjunctions into a conjunct list (True vanishes).
std::vector<Prop> conjuncts(const Prop& p);

// Light structural simplification: unit laws for and/or/implies, t = t.
Prop simplify(const Prop& p);

std::string to_string(const Term& t);
std::string to_string(const Prop& p);
// prec: 0 implies/iff, 1 or, 2 and, 3 unary operand
std::string to_string_prec(const Prop& p, int prec);

}  // namespace cobalt

#endif  // COBALT_LOGIC_HPP
