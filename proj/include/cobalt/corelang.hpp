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

#ifndef COBALT_CORELANG_HPP
#define COBALT_CORELANG_HPP

#include <optional>
#include <string>
#include <vector>

#include "cobalt/speclang.hpp"

namespace cobalt {

struct MatchBranch {
  std::string ctor;
  std::vector<std::string> binders;
};

// Monadic core term. Call arguments are pure (Var/Const/Loc).
struct Expr {
  enum class K { Var, Const, Loc, Lambda, ConsApp, Call, Ref, Match, If, Return, Seq, Hole, Skip };

  K k = K::Skip;
  std::string name;        // Var/Loc name; Call component; ConsApp ctor; Seq binder
  Term lit;                // Const payload
  std::vector<Expr> kids;  // see factory functions
  std::vector<Param> params;  // Lambda parameters
  std::vector<MatchBranch> branches;  // Match: parallel to kids[1..]
  int hole_id = 0;
  Sort hole_sort;

  static Expr var(std::string n);
  static Expr cst(Term lit);
  static Expr loc(std::string n);
  static Expr lambda(std::vector<Param> ps, Expr body);
  static Expr cons_app(std::string ctor, std::vector<Expr> args);
  static Expr call(std::string comp, std::vector<Expr> args);
  static Expr ref(Expr init);
  static Expr match_(Expr scrut, std::vector<MatchBranch> brs, std::vector<Expr> bodies);
  static Expr if_(Expr cond, Expr then_e, Expr else_e);
  static Expr ret(Expr pure);
  static Expr seq(std::string binder, Expr first, Expr rest);
  static Expr hole(int id, Sort s);
  static Expr skip();

  bool operator==(const Expr& o) const;
};

// A possibly holed term produced by backward search.
struct Hypothesis {
  Expr shape;

  // hole sorts in left-to-right order
  std::vector<std::pair<int, Sort>> holes() const;
  bool trivial() const { return holes().empty() && shape.k == Expr::K::Skip; }
};

// Straight-line abstraction of a term: c1; c2; ...; cn.
struct PathStep {
  std::string component;
  std::vector<Term> args;
};

struct Path {
  std::vector<PathStep> steps;
};

int expr_size(const Expr& e);
bool has_holes(const Expr& e);

// Right-nested Seq of Calls ending in Skip.
Expr path_to_expr(const Path& p);

std::string pretty_print(const Expr& e);

// Canonical binder renaming (v1, v2, ...) for structural comparison; holes
// renumbered in traversal order.
Expr alpha_normalize(const Expr& e);
bool alpha_equal(const Expr& a, const Expr& b);

// Sort inference for pure and monadic terms against a spec file and a
// variable environment. Returns nullopt for ill-formed terms.
struct SortEnv {
  const SpecFile* file = nullptr;
  std::map<std::string, Sort> vars;
};
std::optional<Sort> expr_sort(const Expr& e, const SortEnv& env);

// t < H: t has the shape of H with every hole replaced by a type-consistent
// concrete subterm (base sorts compared; refinements are the verifier's job).
bool matches_hypothesis(const Expr& t, const Hypothesis& h, const SortEnv& env);

// Parses the concrete program syntax emitted by pretty_print. Component,
// constructor and location names are resolved against the spec file.
Expr parse_program(const std::string& text, const SpecFile& file, const std::string& filename = "<program>");

}  // namespace cobalt

#endif  // COBALT_CORELANG_HPP
