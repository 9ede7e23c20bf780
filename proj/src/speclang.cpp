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

#include "cobalt/speclang.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "cobalt/lexer.hpp"

namespace cobalt {

const ComponentSpec* SpecFile::find_component(const std::string& n) const {
  for (auto& c : library)
    if (c.name == n) return &c;
  return nullptr;
}

const CtorDecl* SpecFile::find_ctor(const std::string& n, std::string* type_name) const {
  for (auto& d : datatypes)
    for (auto& c : d.ctors)
      if (c.name == n) {
        if (type_name) *type_name = d.type_name;
        return &c;
      }
  return nullptr;
}

const QualifierDecl* SpecFile::find_qualifier(const std::string& n) const {
  for (auto& q : qualifiers)
    if (q.name == n) return &q;
  return nullptr;
}

const LocationDecl* SpecFile::find_location(const std::string& n) const {
  for (auto& l : locations)
    if (l.name == n) return &l;
  return nullptr;
}

bool SpecFile::sort_declared(const Sort& s) const {
  Sort b = s;
  while (b.is_ref()) b = b.pointee();
  if (b.text.size() >= 2 && b.text.front() == '[' && b.text.back() == ']') b = Sort(b.text.substr(1, b.text.size() - 2));
  if (b.text == "int" || b.text == "bool" || b.text == "unit" || b.text == "float" || b.text == "string" || b.text == "heap" || b.text == "a") return true;
  for (auto& u : sorts)
    if (u == b.text) return true;
  for (auto& d : datatypes)
    if (d.type_name == b.text) return true;
  return false;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

class SpecParser {
 public:
  SpecParser(const std::string& text, const std::string& filename) : lx_(text, filename) {}

  SpecFile parse() {
    SpecFile f;
    bool have_query = false;
    while (lx_.peek().t != Tok::Eof) {
      Token kw = expect_ident("declaration keyword");
      if (kw.text == "sort") {
        f.sorts.push_back(expect_ident("sort name").text);
        expect(Tok::Semi);
      } else if (kw.text == "location") {
        LocationDecl d;
        d.pos = kw.pos;
        d.name = expect_ident("location name").text;
        expect(Tok::Colon);
        d.sort = parse_sort();
        expect(Tok::Semi);
        f.locations.push_back(d);
      } else if (kw.text == "qualifier") {
        QualifierDecl q;
        q.pos = kw.pos;
        q.name = expect_ident("qualifier name").text;
        expect(Tok::Colon);
        expect(Tok::LParen);
        if (lx_.peek().t != Tok::RParen) {
          q.arg_sorts.push_back(parse_sort());
          while (lx_.peek().t == Tok::Comma) {
            lx_.next();
            q.arg_sorts.push_back(parse_sort());
          }
        }
        expect(Tok::RParen);
        expect(Tok::Arrow);
        q.result_sort = parse_sort();
        expect(Tok::Semi);
        classify_interpreted(q);
        f.qualifiers.push_back(q);
      } else if (kw.text == "datatype") {
        DatatypeDecl d;
        d.pos = kw.pos;
        d.type_name = expect_ident("datatype name").text;
        expect(Tok::Eq);
        d.ctors.push_back(parse_ctor());
        while (lx_.peek().t == Tok::Pipe) {
          lx_.next();
          d.ctors.push_back(parse_ctor());
        }
        expect(Tok::Semi);
        f.datatypes.push_back(d);
      } else if (kw.text == "component") {
        ComponentSpec c;
        c.pos = kw.pos;
        parse_signature(c.name, c.params, c.pre, c.result, c.post);
        f.library.push_back(c);
      } else if (kw.text == "query") {
        if (have_query) lx_.fail_at("SyntaxError", kw.pos, "multiple queries; exactly one query per file");
        have_query = true;
        QuerySpec q;
        q.pos = kw.pos;
        parse_signature(q.name, q.params, q.pre, q.result, q.post);
        f.query = q;
      } else {
        lx_.fail_at("SyntaxError", kw.pos, "expected sort/location/qualifier/datatype/component/query, got '" + kw.text + "'");
      }
    }
    if (!have_query) lx_.fail("MissingQuery", "specification file contains no query");
    return f;
  }

 private:
  void classify_interpreted(QualifierDecl& q) {
    auto is = [](const Sort& s, const char* t) { return s.text == t; };
    if (q.arg_sorts.size() == 2 && is(q.arg_sorts[0], "heap") && is(q.arg_sorts[1], "location") && is(q.result_sort, "value")) {
      q.interpreted = true;
      q.is_update = false;
    } else if (q.arg_sorts.size() == 3 && is(q.arg_sorts[0], "heap") && is(q.arg_sorts[1], "location") && is(q.result_sort, "heap")) {
      q.interpreted = true;
      q.is_update = true;
    }
  }

  CtorDecl parse_ctor() {
    CtorDecl c;
    c.pos = lx_.peek().pos;
    c.name = expect_ident("constructor name").text;
    expect(Tok::Colon);
    while (lx_.peek().t == Tok::LParen) {
      expect(Tok::LParen);
      Param p;
      p.pos = lx_.peek().pos;
      p.name = expect_ident("parameter name").text;
      expect(Tok::Colon);
      p.type = parse_rtype();
      expect(Tok::RParen);
      expect(Tok::Arrow);
      c.params.push_back(p);
    }
    c.result = parse_rtype();
    return c;
  }

  void parse_signature(std::string& name, std::vector<Param>& params, SpecProp& pre, RefinementType& result, SpecProp& post) {
    name = expect_ident("name").text;
    expect(Tok::Colon);
    while (lx_.peek().t == Tok::LParen) {
      expect(Tok::LParen);
      Param p;
      p.pos = lx_.peek().pos;
      p.name = expect_ident("parameter name").text;
      expect(Tok::Colon);
      p.type = parse_rtype();
      expect(Tok::RParen);
      expect(Tok::Arrow);
      params.push_back(p);
    }
    Token st = expect_ident("State");
    if (st.text != "State") lx_.fail_at("SyntaxError", st.pos, "expected 'State', got '" + st.text + "'");
    expect(Tok::LBrace);
    pre = parse_spec_prop(false);
    expect(Tok::RBrace);
    Token v = expect_ident("v");
    if (v.text != "v") lx_.fail_at("SyntaxError", v.pos, "result variable must be named v");
    expect(Tok::Colon);
    result = parse_rtype();
    expect(Tok::LBrace);
    post = parse_spec_prop(true);
    expect(Tok::RBrace);
    expect(Tok::Semi);
  }

  SpecProp parse_spec_prop(bool is_post) {
    SpecProp sp;
    expect(Tok::Backslash);
    expect(Tok::LParen);
    sp.heap_in = expect_ident("heap variable").text;
    expect(Tok::Colon);
    Sort hs = parse_sort();
    if (!hs.is_heap()) lx_.fail("SyntaxError", "first binder must have sort heap");
    expect(Tok::RParen);
    if (is_post) {
      expect(Tok::Comma);
      expect(Tok::LParen);
      sp.result_var = expect_ident("result variable").text;
      expect(Tok::Colon);
      parse_sort();  // the result base sort; checked against the signature later
      expect(Tok::RParen);
      expect(Tok::Comma);
      expect(Tok::LParen);
      sp.heap_out = expect_ident("post-heap variable").text;
      expect(Tok::Colon);
      Sort hs2 = parse_sort();
      if (!hs2.is_heap()) lx_.fail("SyntaxError", "post-heap binder must have sort heap");
      expect(Tok::RParen);
    }
    expect(Tok::Dot);
    if (lx_.peek().t == Tok::Backslash) {
      lx_.next();
      while (true) {
        expect(Tok::LParen);
        GhostBinder g;
        g.pos = lx_.peek().pos;
        g.name = expect_ident("ghost name").text;
        expect(Tok::Colon);
        g.sort = parse_sort();
        expect(Tok::RParen);
        sp.ghosts.push_back(g);
        if (lx_.peek().t == Tok::Comma) {
          lx_.next();
          continue;
        }
        break;
      }
      expect(Tok::Dot);
    }
    sp.body = parse_prop();
    return sp;
  }

  RefinementType parse_rtype() {
    RefinementType r;
    if (lx_.peek().t == Tok::LBrace) {
      lx_.next();
      Token v = expect_ident("v");
      if (v.text != "v") lx_.fail_at("SyntaxError", v.pos, "refinement variable must be named v");
      expect(Tok::Colon);
      r.base = parse_sort();
      expect(Tok::Pipe);
      r.phi = parse_prop();
      expect(Tok::RBrace);
      return r;
    }
    r.base = parse_sort();
    r.phi = Prop::mk_true();
    return r;
  }

  Sort parse_sort() {
    if (lx_.peek().t == Tok::LBrack) {
      lx_.next();
      Sort inner = parse_sort();
      expect(Tok::RBrack);
      return Sort::List(inner);
    }
    Token id = expect_ident("sort");
    if (id.text == "ref") return Sort::Ref(parse_sort());
    return Sort(id.text);
  }

  // --- propositions ---

  Prop parse_prop() {
    Prop lhs = parse_or();
    if (lx_.peek().t == Tok::Implies) {
      lx_.next();
      return Prop::implies(std::move(lhs), parse_prop());
    }
    if (lx_.peek().t == Tok::Iff) {
      lx_.next();
      return Prop::iff(std::move(lhs), parse_prop());
    }
    return lhs;
  }

  Prop parse_or() {
    Prop lhs = parse_and();
    if (lx_.peek().t != Tok::Or) return lhs;
    std::vector<Prop> kids;
    kids.push_back(std::move(lhs));
    while (lx_.peek().t == Tok::Or) {
      lx_.next();
      kids.push_back(parse_and());
    }
    return Prop::disj(std::move(kids));
  }

  Prop parse_and() {
    Prop lhs = parse_unary();
    if (lx_.peek().t != Tok::And) return lhs;
    std::vector<Prop> kids;
    kids.push_back(std::move(lhs));
    while (lx_.peek().t == Tok::And) {
      lx_.next();
      kids.push_back(parse_unary());
    }
    return Prop::conj(std::move(kids));
  }

  Prop parse_unary() {
    const Token& t = lx_.peek();
    if (t.t == Tok::Ident && t.text == "not") {
      lx_.next();
      return Prop::neg(parse_unary());
    }
    if (t.t == Tok::Ident && (t.text == "forall" || t.text == "exists")) {
      bool fa = t.text == "forall";
      lx_.next();
      expect(Tok::LParen);
      std::string var = expect_ident("bound variable").text;
      expect(Tok::Colon);
      Sort s = parse_sort();
      expect(Tok::RParen);
      expect(Tok::Dot);
      Prop body = parse_unary();
      return fa ? Prop::forall(var, s, std::move(body)) : Prop::exists(var, s, std::move(body));
    }
    return parse_primary();
  }

  Prop parse_primary() {
    const Token& t = lx_.peek();
    if (t.t == Tok::Ident && t.text == "true" && !starts_term_continuation(1)) {
      lx_.next();
      return Prop::mk_true();
    }
    if (t.t == Tok::Ident && t.text == "false" && !starts_term_continuation(1)) {
      lx_.next();
      return Prop::mk_false();
    }
    if (t.t == Tok::LBrack) {
      lx_.next();
      Prop c = parse_cmp(true);
      expect(Tok::RBrack);
      return c;
    }
    if (t.t == Tok::LParen) {
      // try a term comparison first; fall back to a parenthesized proposition
      size_t m = lx_.mark();
      try {
        return parse_cmp(false);
      } catch (ParseError&) {
        lx_.reset(m);
      }
      lx_.next();
      Prop p = parse_prop();
      expect(Tok::RParen);
      return p;
    }
    return parse_cmp(false);
  }

  bool starts_term_continuation(int ahead) {
    Tok t = lx_.peek(ahead).t;
    return t == Tok::Eq || t == Tok::Lt || t == Tok::Le || t == Tok::Gt || t == Tok::Ge || t == Tok::Plus || t == Tok::Minus;
  }

  Prop parse_cmp(bool require_op) {
    Pos p = lx_.peek().pos;
    Term lhs = parse_term();
    Tok op = lx_.peek().t;
    if (op == Tok::Eq) {
      lx_.next();
      return Prop::eq(std::move(lhs), parse_term());
    }
    if (op == Tok::Lt || op == Tok::Le || op == Tok::Gt || op == Tok::Ge) {
      std::string o = lx_.next().text;
      return Prop::cmp(o, std::move(lhs), parse_term());
    }
    if (require_op) lx_.fail("SyntaxError", "expected comparison operator inside [...]");
    // a bare qualifier application used as a boolean atom
    if (lhs.k == Term::K::App) {
      Prop q;
      q.k = Prop::K::App;
      q.name = lhs.name;
      q.args = lhs.args;
      return q;
    }
    lx_.fail_at("SyntaxError", p, "expected proposition");
  }

  Term parse_term() {
    Term lhs = parse_factor();
    while (lx_.peek().t == Tok::Plus || lx_.peek().t == Tok::Minus) {
      bool add = lx_.next().t == Tok::Plus;
      Term rhs = parse_factor();
      lhs = add ? Term::add(std::move(lhs), std::move(rhs)) : Term::sub(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Term parse_factor() {
    const Token& t = lx_.peek();
    switch (t.t) {
      case Tok::Int: {
        long long v = atoll(lx_.next().text.c_str());
        return Term::intlit(v);
      }
      case Tok::Float:
        return Term::floatlit(lx_.next().text);
      case Tok::Str:
        return Term::strlit(lx_.next().text);
      case Tok::Minus: {
        lx_.next();
        Token n = lx_.next();
        if (n.t == Tok::Int) return Term::intlit(-atoll(n.text.c_str()));
        if (n.t == Tok::Float) return Term::floatlit("-" + n.text);
        lx_.fail_at("SyntaxError", n.pos, "expected numeric literal after '-'");
      }
      case Tok::LParen: {
        lx_.next();
        if (lx_.peek().t == Tok::RParen) {
          lx_.next();
          return Term::unit();
        }
        Term inner = parse_term();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Ident: {
        Token id = lx_.next();
        if (id.text == "true") return Term::boollit(true);
        if (id.text == "false") return Term::boollit(false);
        if (lx_.peek().t == Tok::LParen) {
          lx_.next();
          std::vector<Term> args;
          if (lx_.peek().t != Tok::RParen) {
            args.push_back(parse_term());
            while (lx_.peek().t == Tok::Comma) {
              lx_.next();
              args.push_back(parse_term());
            }
          }
          expect(Tok::RParen);
          return Term::app(id.text, std::move(args));
        }
        return Term::var(id.text);
      }
      default:
        lx_.fail("SyntaxError", "expected term, got '" + t.text + "'");
    }
  }

  Token expect(Tok t) {
    if (lx_.peek().t != t) lx_.fail("SyntaxError", "unexpected token '" + lx_.peek().text + "'");
    return lx_.next();
  }

  Token expect_ident(const std::string& what) {
    if (lx_.peek().t != Tok::Ident) lx_.fail("SyntaxError", "expected " + what + ", got '" + lx_.peek().text + "'");
    return lx_.next();
  }

  Lexer lx_;
};

}  // namespace

SpecFile parse_spec_file(const std::string& text, const std::string& filename) {
  SpecParser p(text, filename);
  return p.parse();
}

// ---------------------------------------------------------------------------
// pretty printing (canonical layout; shipped spec files are in this format)
// ---------------------------------------------------------------------------

namespace {

std::string rtype_str(const RefinementType& r) {
  if (r.trivial()) return r.base.text;
  return "{ v : " + r.base.text + " | " + to_string(r.phi) + " }";
}

void print_body(std::ostream& o, const Prop& p, const std::string& ind) {
  if (p.k == Prop::K::And) {
    for (size_t i = 0; i < p.kids.size(); i++) {
      if (i) o << " /\\\n" << ind;
      o << to_string_prec(p.kids[i], 3);
    }
    return;
  }
  if (p.k == Prop::K::Implies) {
    o << "(" << to_string_prec(p.kids[0], 0) << ")\n" << ind << "=> (";
    print_body(o, p.kids[1], ind + "    ");
    o << ")";
    return;
  }
  o << to_string(p);
}

void print_spec_prop(std::ostream& o, const SpecProp& sp, const Sort& result_base, const std::string& ind) {
  o << "{\\(" << sp.heap_in << " : heap)";
  if (sp.is_post()) o << ", (" << sp.result_var << " : " << result_base.text << "), (" << sp.heap_out << " : heap)";
  o << ".\n" << ind;
  if (!sp.ghosts.empty()) {
    o << "\\ ";
    for (size_t i = 0; i < sp.ghosts.size(); i++) {
      if (i) o << ", ";
      o << "(" << sp.ghosts[i].name << " : " << sp.ghosts[i].sort.text << ")";
    }
    o << ".\n" << ind;
  }
  print_body(o, sp.body, ind);
  o << "}";
}

void print_signature(std::ostream& o, const std::string& kw, const std::string& name, const std::vector<Param>& params, const SpecProp& pre, const RefinementType& result, const SpecProp& post) {
  o << kw << " " << name << " :";
  for (auto& p : params) o << " (" << p.name << " : " << rtype_str(p.type) << ") ->";
  o << "\n  State ";
  print_spec_prop(o, pre, result.base, "    ");
  o << "\n  v : " << rtype_str(result) << "\n  ";
  print_spec_prop(o, post, result.base, "    ");
  o << ";\n";
}

}  // namespace

std::string pretty(const SpecFile& f) {
  std::ostringstream o;
  for (auto& s : f.sorts) o << "sort " << s << ";\n";
  if (!f.sorts.empty()) o << "\n";
  for (auto& l : f.locations) o << "location " << l.name << " : " << l.sort.text << ";\n";
  if (!f.locations.empty()) o << "\n";
  for (auto& q : f.qualifiers) {
    o << "qualifier " << q.name << " : (";
    for (size_t i = 0; i < q.arg_sorts.size(); i++) {
      if (i) o << ", ";
      o << q.arg_sorts[i].text;
    }
    o << ") -> " << q.result_sort.text << ";\n";
  }
  if (!f.qualifiers.empty()) o << "\n";
  for (auto& d : f.datatypes) {
    o << "datatype " << d.type_name << " =\n";
    for (size_t i = 0; i < d.ctors.size(); i++) {
      o << (i ? "  | " : "  ") << d.ctors[i].name << " :";
      for (auto& p : d.ctors[i].params) o << " (" << p.name << " : " << rtype_str(p.type) << ") ->";
      o << " " << rtype_str(d.ctors[i].result);
    }
    o << ";\n\n";
  }
  for (auto& c : f.library) {
    print_signature(o, "component", c.name, c.params, c.pre, c.result, c.post);
    o << "\n";
  }
  print_signature(o, "query", f.query.name, f.query.params, f.query.pre, f.query.result, f.query.post);
  return o.str();
}

// ---------------------------------------------------------------------------
// well-formedness
// ---------------------------------------------------------------------------

namespace {

struct WfCtx {
  const SpecFile* f;
  std::vector<Violation>* out;
  std::map<std::string, Sort> env;  // variables in scope
  Pos where;

  void violation(const std::string& kind, const std::string& sym, const std::string& msg) { out->push_back(Violation{kind, sym, where, msg}); }

  bool capitalized(const std::string& n) { return !n.empty() && std::isupper((unsigned char)n[0]); }

  std::optional<Sort> infer(const Term& t) {
    switch (t.k) {
      case Term::K::IntLit:
        return Sort::Int();
      case Term::K::FloatLit:
        return Sort::Float();
      case Term::K::BoolLit:
        return Sort::Bool();
      case Term::K::StrLit:
        return Sort::String();
      case Term::K::UnitLit:
        return Sort::Unit();
      case Term::K::Var: {
        auto it = env.find(t.name);
        if (it != env.end()) return it->second;
        if (auto* l = f->find_location(t.name)) return l->sort;
        violation("UndeclaredSymbol", t.name, "undeclared " + std::string(capitalized(t.name) ? "ghost variable" : "variable") + " '" + t.name + "'");
        return std::nullopt;
      }
      case Term::K::Add:
      case Term::K::Sub: {
        auto a = infer(t.args[0]), b = infer(t.args[1]);
        if (a && b && *a != *b) violation("SortMismatch", "", "arithmetic over mixed sorts " + a->text + " and " + b->text);
        if (a && !a->is_numeric()) violation("SortMismatch", "", "arithmetic over non-numeric sort " + a->text);
        return a;
      }
      case Term::K::App: {
        const QualifierDecl* q = f->find_qualifier(t.name);
        if (!q) {
          violation("UndeclaredSymbol", t.name, "undeclared qualifier '" + t.name + "'");
          for (auto& a : t.args) infer(a);
          return std::nullopt;
        }
        if (q->interpreted) return infer_interpreted(*q, t);
        if (t.args.size() != q->arg_sorts.size()) {
          violation("ArityMismatch", t.name, "qualifier '" + t.name + "' applied to " + std::to_string(t.args.size()) + " arguments, declared with " + std::to_string(q->arg_sorts.size()));
          return q->result_sort;
        }
        for (size_t i = 0; i < t.args.size(); i++) {
          auto a = infer(t.args[i]);
          if (a && *a != q->arg_sorts[i]) violation("SortMismatch", t.name, "argument " + std::to_string(i + 1) + " of '" + t.name + "' has sort " + a->text + ", expected " + q->arg_sorts[i].text);
        }
        return q->result_sort;
      }
    }
    return std::nullopt;
  }

  std::optional<Sort> infer_interpreted(const QualifierDecl& q, const Term& t) {
    size_t want = q.is_update ? 3 : 2;
    if (t.args.size() != want) {
      violation("ArityMismatch", q.name, "interpreted qualifier '" + q.name + "' takes " + std::to_string(want) + " arguments");
      return std::nullopt;
    }
    auto h = infer(t.args[0]);
    if (h && !h->is_heap()) violation("SortMismatch", q.name, "first argument of '" + q.name + "' must be a heap variable");
    auto l = infer(t.args[1]);
    if (l && !l->is_ref()) {
      violation("SortMismatch", q.name, "second argument of '" + q.name + "' must be a reference, got " + l->text);
      return std::nullopt;
    }
    if (q.is_update) {
      auto v = infer(t.args[2]);
      if (v && l && *v != l->pointee()) violation("SortMismatch", q.name, "stored value sort " + v->text + " does not match location sort " + l->pointee().text);
      return Sort::Heap();
    }
    return l ? std::optional<Sort>(l->pointee()) : std::nullopt;
  }

  void check_prop(const Prop& p) {
    switch (p.k) {
      case Prop::K::True:
      case Prop::K::False:
        return;
      case Prop::K::App: {
        Term t = Term::app(p.name, p.args);
        auto s = infer(t);
        if (s && !s->is_bool()) violation("SortMismatch", p.name, "qualifier '" + p.name + "' used as proposition but returns " + s->text);
        return;
      }
      case Prop::K::Eq: {
        auto a = infer(p.args[0]), b = infer(p.args[1]);
        if (a && b && *a != *b) violation("SortMismatch", "", "equality over mixed sorts " + a->text + " and " + b->text);
        return;
      }
      case Prop::K::Cmp: {
        auto a = infer(p.args[0]), b = infer(p.args[1]);
        if (a && !a->is_numeric()) violation("SortMismatch", "", "comparison over non-numeric sort " + a->text);
        if (a && b && *a != *b) violation("SortMismatch", "", "comparison over mixed sorts " + a->text + " and " + b->text);
        return;
      }
      case Prop::K::Forall:
      case Prop::K::Exists: {
        auto saved = env;
        env[p.name] = p.sort;
        check_prop(p.kids[0]);
        env = saved;
        return;
      }
      default:
        for (auto& kch : p.kids) check_prop(kch);
        return;
    }
  }

  void check_sort_declared(const Sort& s, const std::string& context) {
    if (s.is_placeholder()) {
      violation("SortMismatch", s.text, "placeholder sort '" + s.text + "' outside an interpreted qualifier signature (" + context + ")");
      return;
    }
    if (!f->sort_declared(s)) violation("UndeclaredSymbol", s.text, "undeclared sort '" + s.text + "' in " + context);
  }
};

void check_signature(WfCtx& cx, const std::string& name, const std::vector<Param>& params, const SpecProp& pre, const RefinementType& result, const SpecProp& post, Pos pos) {
  cx.where = pos;
  for (auto& p : params) cx.check_sort_declared(p.type.base, "parameter " + p.name + " of " + name);
  cx.check_sort_declared(result.base, "result of " + name);
  for (auto& g : pre.ghosts) cx.check_sort_declared(g.sort, "ghost " + g.name + " of " + name);
  for (auto& g : post.ghosts) cx.check_sort_declared(g.sort, "ghost " + g.name + " of " + name);

  // ghost capitalization: capitalized identifiers must be prefix ghosts
  for (auto& g : pre.ghosts)
    if (!cx.capitalized(g.name)) cx.violation("GhostConvention", g.name, "ghost '" + g.name + "' must be capitalized");
  for (auto& g : post.ghosts)
    if (!cx.capitalized(g.name)) cx.violation("GhostConvention", g.name, "ghost '" + g.name + "' must be capitalized");

  std::map<std::string, Sort> base;
  for (auto& p : params) base[p.name] = p.type.base;

  // parameter refinements mention v and earlier params
  for (auto& p : params) {
    cx.env = base;
    cx.env["v"] = p.type.base;
    cx.check_prop(p.type.phi);
  }

  // pre: params + heap_in + ghosts
  cx.env = base;
  cx.env[pre.heap_in] = Sort::Heap();
  for (auto& g : pre.ghosts) cx.env[g.name] = g.sort;
  cx.check_prop(pre.body);

  // result refinement: params + v
  cx.env = base;
  cx.env["v"] = result.base;
  cx.check_prop(result.phi);

  // post: params + both heaps + result var + ghosts
  cx.env = base;
  cx.env[post.heap_in] = Sort::Heap();
  cx.env[post.heap_out] = Sort::Heap();
  cx.env[post.result_var] = result.base;
  for (auto& g : post.ghosts) cx.env[g.name] = g.sort;
  cx.check_prop(post.body);
}

}  // namespace

std::vector<Violation> check_well_formed(const SpecFile& f) {
  std::vector<Violation> out;
  WfCtx cx{&f, &out, {}, {}};

  std::set<std::string> seen;
  for (auto& q : f.qualifiers) {
    cx.where = q.pos;
    if (!seen.insert(q.name).second) cx.violation("DuplicateName", q.name, "qualifier '" + q.name + "' declared twice");
    if (!q.interpreted) {
      bool uses_placeholder = q.result_sort.is_placeholder();
      for (auto& a : q.arg_sorts) uses_placeholder |= a.is_placeholder();
      if (uses_placeholder)
        cx.violation("ArityMismatch", q.name, "qualifier '" + q.name + "' uses location/value placeholders but does not match the select (heap, location) -> value or update (heap, location, value) -> heap shape");
      else {
        for (auto& a : q.arg_sorts) cx.check_sort_declared(a, "qualifier " + q.name);
        cx.check_sort_declared(q.result_sort, "qualifier " + q.name);
      }
    }
  }
  seen.clear();
  for (auto& l : f.locations) {
    cx.where = l.pos;
    if (!seen.insert(l.name).second) cx.violation("DuplicateName", l.name, "location '" + l.name + "' declared twice");
    if (!l.sort.is_ref()) cx.violation("SortMismatch", l.name, "location '" + l.name + "' must have a reference sort");
    cx.check_sort_declared(l.sort, "location " + l.name);
  }
  seen.clear();
  for (auto& d : f.datatypes) {
    cx.where = d.pos;
    for (auto& c : d.ctors) {
      if (!seen.insert(c.name).second) cx.violation("DuplicateName", c.name, "constructor '" + c.name + "' declared twice");
      if (c.result.base.text != d.type_name) cx.violation("SortMismatch", c.name, "constructor '" + c.name + "' result sort " + c.result.base.text + " differs from datatype " + d.type_name);
      cx.where = c.pos;
      std::map<std::string, Sort> env;
      for (auto& p : c.params) {
        cx.check_sort_declared(p.type.base, "constructor " + c.name);
        env[p.name] = p.type.base;
      }
      env["v"] = c.result.base;
      cx.env = env;
      cx.check_prop(c.result.phi);
    }
  }
  seen.clear();
  for (auto& c : f.library) {
    cx.where = c.pos;
    if (!seen.insert(c.name).second) cx.violation("DuplicateName", c.name, "component '" + c.name + "' declared twice");
    check_signature(cx, c.name, c.params, c.pre, c.result, c.post, c.pos);
  }
  check_signature(cx, f.query.name, f.query.params, f.query.pre, f.query.result, f.query.post, f.query.pos);
  return out;
}

}  // namespace cobalt
