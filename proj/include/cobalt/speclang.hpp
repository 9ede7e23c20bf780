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

#ifndef COBALT_SPECLANG_HPP
#define COBALT_SPECLANG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobalt/logic.hpp"

namespace cobalt {

struct Pos {
  int line = 0, col = 0;
};

struct ParseError : std::runtime_error {
  Pos pos;
  std::string kind;  // SyntaxError, UndeclaredSymbol, ArityMismatch, MissingQuery
  ParseError(std::string k, Pos p, const std::string& msg) : std::runtime_error(msg), pos(p), kind(std::move(k)) {}
};

struct RefinementType {
  Sort base;
  Prop phi;  // over the bound result variable "v"

  bool trivial() const { return phi.is_true(); }
};

struct Param {
  std::string name;
  RefinementType type;
  Pos pos;
};

struct GhostBinder {
  std::string name;
  Sort sort;
  Pos pos;
};

struct QualifierDecl {
  std::string name;
  std::vector<Sort> arg_sorts;
  Sort result_sort;
  bool interpreted = false;  // select/update family
  bool is_update = false;
  Pos pos;
};

struct CtorDecl {
  std::string name;
  std::vector<Param> params;
  RefinementType result;  // { v : TN | phi }
  Pos pos;
};

struct DatatypeDecl {
  std::string type_name;
  std::vector<CtorDecl> ctors;
  Pos pos;
};

struct LocationDecl {
  std::string name;
  Sort sort;  // a ref sort
  Pos pos;
};

// A pre- or postcondition block with its binder prefix:
//   pre:  \(h : heap). \ (G : s), ... . body
//   post: \(h : heap), (v : t), (h' : heap). \ (G : s), ... . body
struct SpecProp {
  std::string heap_in;    // always bound
  std::string result_var; // post only ("" in a pre)
  std::string heap_out;   // post only
  std::vector<GhostBinder> ghosts;
  Prop body;

  bool is_post() const { return !heap_out.empty(); }
};

struct ComponentSpec {
  std::string name;
  std::vector<Param> params;
  SpecProp pre;
  RefinementType result;
  SpecProp post;
  Pos pos;
};

struct QuerySpec {
  std::string name;
  std::vector<Param> params;
  SpecProp pre;
  RefinementType result;
  SpecProp post;
  Pos pos;
};

struct SpecFile {
  std::vector<std::string> sorts;
  std::vector<LocationDecl> locations;
  std::vector<QualifierDecl> qualifiers;
  std::vector<DatatypeDecl> datatypes;
  std::vector<ComponentSpec> library;
  QuerySpec query;

  const ComponentSpec* find_component(const std::string& n) const;
  const CtorDecl* find_ctor(const std::string& n, std::string* type_name = nullptr) const;
  const QualifierDecl* find_qualifier(const std::string& n) const;
  const LocationDecl* find_location(const std::string& n) const;
  bool sort_declared(const Sort& s) const;
};

struct Violation {
  std::string kind;  // UndeclaredSymbol, ArityMismatch, ...
  std::string symbol;
  Pos pos;
  std::string message;
};

SpecFile parse_spec_file(const std::string& text, const std::string& filename = "<input>");
std::string pretty(const SpecFile& f);
std::vector<Violation> check_well_formed(const SpecFile& f);

}  // namespace cobalt

#endif  // COBALT_SPECLANG_HPP
