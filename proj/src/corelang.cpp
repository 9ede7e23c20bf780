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

#include "cobalt/corelang.hpp"

#include <map>
#include <sstream>

#include "cobalt/lexer.hpp"

namespace cobalt {

Expr Expr::var(std::string n) {
  Expr e;
  e.k = K::Var;
  e.name = std::move(n);
  return e;
}
Expr Expr::cst(Term lit) {
  Expr e;
  e.k = K::Const;
  e.lit = std::move(lit);
  return e;
}
Expr Expr::loc(std::string n) {
  Expr e;
  e.k = K::Loc;
  e.name = std::move(n);
  return e;
}
Expr Expr::lambda(std::vector<Param> ps, Expr body) {
  Expr e;
  e.k = K::Lambda;
  e.params = std::move(ps);
  e.kids.push_back(std::move(body));
  return e;
}
Expr Expr::cons_app(std::string ctor, std::vector<Expr> args) {
  Expr e;
  e.k = K::ConsApp;
  e.name = std::move(ctor);
  e.kids = std::move(args);
  return e;
}
Expr Expr::call(std::string comp, std::vector<Expr> args) {
  Expr e;
  e.k = K::Call;
  e.name = std::move(comp);
  e.kids = std::move(args);
  return e;
}
Expr Expr::ref(Expr init) {
  Expr e;
  e.k = K::Ref;
  e.kids.push_back(std::move(init));
  return e;
}
Expr Expr::match_(Expr scrut, std::vector<MatchBranch> brs, std::vector<Expr> bodies) {
  Expr e;
  e.k = K::Match;
  e.kids.push_back(std::move(scrut));
  for (auto& b : bodies) e.kids.push_back(std::move(b));
  e.branches = std::move(brs);
  return e;
}
Expr Expr::if_(Expr cond, Expr then_e, Expr else_e) {
  Expr e;
  e.k = K::If;
  e.kids = {std::move(cond), std::move(then_e), std::move(else_e)};
  return e;
}
Expr Expr::ret(Expr pure) {
  Expr e;
  e.k = K::Return;
  e.kids.push_back(std::move(pure));
  return e;
}
Expr Expr::seq(std::string binder, Expr first, Expr rest) {
  Expr e;
  e.k = K::Seq;
  e.name = std::move(binder);
  e.kids = {std::move(first), std::move(rest)};
  return e;
}
Expr Expr::hole(int id, Sort s) {
  Expr e;
  e.k = K::Hole;
  e.hole_id = id;
  e.hole_sort = std::move(s);
  return e;
}
Expr Expr::skip() { return Expr{}; }

bool Expr::operator==(const Expr& o) const {
  if (k != o.k || name != o.name) return false;
  if (k == K::Const && !(lit == o.lit)) return false;
  if (k == K::Hole && (hole_id != o.hole_id || hole_sort != o.hole_sort)) return false;
  if (kids.size() != o.kids.size() || branches.size() != o.branches.size() || params.size() != o.params.size()) return false;
  for (size_t i = 0; i < params.size(); i++)
    if (params[i].name != o.params[i].name || params[i].type.base != o.params[i].type.base) return false;
  for (size_t i = 0; i < branches.size(); i++)
    if (branches[i].ctor != o.branches[i].ctor || branches[i].binders != o.branches[i].binders) return false;
  for (size_t i = 0; i < kids.size(); i++)
    if (!(kids[i] == o.kids[i])) return false;
  return true;
}

static void collect_holes(const Expr& e, std::vector<std::pair<int, Sort>>& out) {
  if (e.k == Expr::K::Hole) out.emplace_back(e.hole_id, e.hole_sort);
  for (auto& kch : e.kids) collect_holes(kch, out);
}

std::vector<std::pair<int, Sort>> Hypothesis::holes() const {
  std::vector<std::pair<int, Sort>> out;
  collect_holes(shape, out);
  return out;
}

int expr_size(const Expr& e) {
  int n = 1;
  for (auto& kch : e.kids) n += expr_size(kch);
  return n;
}

bool has_holes(const Expr& e) {
  if (e.k == Expr::K::Hole) return true;
  for (auto& kch : e.kids)
    if (has_holes(kch)) return true;
  return false;
}

Expr path_to_expr(const Path& p) {
  Expr tail = Expr::skip();
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) {
    std::vector<Expr> args;
    for (auto& a : it->args) {
      if (a.k == Term::K::Var)
        args.push_back(Expr::var(a.name));
      else
        args.push_back(Expr::cst(a));
    }
    tail = Expr::seq("_", Expr::call(it->component, std::move(args)), std::move(tail));
  }
  return tail;
}

// ---------------------------------------------------------------------------
// pretty printing
// ---------------------------------------------------------------------------

namespace {

void print_pure(const Expr& e, std::ostream& o) {
  switch (e.k) {
    case Expr::K::Var:
    case Expr::K::Loc:
      o << e.name;
      return;
    case Expr::K::Const:
      o << to_string(e.lit);
      return;
    case Expr::K::ConsApp: {
      o << e.name << " (";
      for (size_t i = 0; i < e.kids.size(); i++) {
        if (i) o << ", ";
        print_pure(e.kids[i], o);
      }
      o << ")";
      return;
    }
    case Expr::K::Hole:
      o << "(?? : " << e.hole_sort.text << ")";
      return;
    default:
      o << "<impure>";
      return;
  }
}

void print_stmt(const Expr& e, std::ostream& o, const std::string& ind);

void print_block(const Expr& e, std::ostream& o, const std::string& ind) {
  o << "{\n" << ind << "  ";
  print_stmt(e, o, ind + "  ");
  o << "\n" << ind << "}";
}

void print_rhs(const Expr& e, std::ostream& o, const std::string& ind) {
  switch (e.k) {
    case Expr::K::Call: {
      o << e.name << " (";
      for (size_t i = 0; i < e.kids.size(); i++) {
        if (i) o << ", ";
        print_pure(e.kids[i], o);
      }
      o << ")";
      return;
    }
    case Expr::K::Ref:
      o << "ref ";
      print_pure(e.kids[0], o);
      return;
    case Expr::K::Hole:
      o << "(?? : " << e.hole_sort.text << ")";
      return;
    default:
      // nested computation on the right of a bind
      o << "(";
      print_stmt(e, o, ind);
      o << ")";
      return;
  }
}

void print_stmt(const Expr& e, std::ostream& o, const std::string& ind) {
  switch (e.k) {
    case Expr::K::Skip:
      o << "skip";
      return;
    case Expr::K::Return:
      o << "return ";
      print_pure(e.kids[0], o);
      return;
    case Expr::K::Seq: {
      o << e.name << " \xe2\x86\x90 ";
      print_rhs(e.kids[0], o, ind);
      o << ";\n" << ind;
      print_stmt(e.kids[1], o, ind);
      return;
    }
    case Expr::K::If: {
      o << "if (";
      print_pure(e.kids[0], o);
      o << ") then ";
      print_block(e.kids[1], o, ind);
      o << " else ";
      print_block(e.kids[2], o, ind);
      return;
    }
    case Expr::K::Match: {
      o << "match ";
      print_pure(e.kids[0], o);
      o << " with";
      for (size_t i = 0; i < e.branches.size(); i++) {
        o << "\n" << ind << "| " << e.branches[i].ctor;
        if (!e.branches[i].binders.empty()) {
          o << " (";
          for (size_t j = 0; j < e.branches[i].binders.size(); j++) {
            if (j) o << ", ";
            o << e.branches[i].binders[j];
          }
          o << ")";
        }
        o << " -> ";
        print_block(e.kids[i + 1], o, ind);
      }
      return;
    }
    case Expr::K::Call:
    case Expr::K::Ref:
      print_rhs(e, o, ind);
      return;
    default:
      print_pure(e, o);
      return;
  }
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::ostringstream o;
  if (e.k == Expr::K::Lambda) {
    o << "\\";
    for (size_t i = 0; i < e.params.size(); i++) {
      if (i) o << ",";
      o << "(" << e.params[i].name << " : " << e.params[i].type.base.text << ")";
    }
    o << ".\n";
    print_stmt(e.kids[0], o, "");
    return o.str();
  }
  print_stmt(e, o, "");
  return o.str();
}

// ---------------------------------------------------------------------------
// alpha normalization
// ---------------------------------------------------------------------------

namespace {

struct AlphaCtx {
  std::map<std::string, std::string> ren;
  int counter = 0;
  int hole_counter = 0;

  std::string fresh(const std::string& orig) {
    std::string n = "v" + std::to_string(++counter);
    ren[orig] = n;
    return n;
  }
};

Expr alpha_walk(const Expr& e, AlphaCtx& cx) {
  switch (e.k) {
    case Expr::K::Var:
    case Expr::K::Loc: {
      Expr r = e;
      auto it = cx.ren.find(e.name);
      if (it != cx.ren.end()) r.name = it->second;
      return r;
    }
    case Expr::K::Seq: {
      Expr first = alpha_walk(e.kids[0], cx);
      AlphaCtx saved = cx;  // binder scopes over rest only
      std::string b = e.name == "_" ? "_" : cx.fresh(e.name);
      Expr rest = alpha_walk(e.kids[1], cx);
      Expr r = Expr::seq(b, std::move(first), std::move(rest));
      return r;
    }
    case Expr::K::Lambda: {
      Expr r = e;
      for (auto& p : r.params) {
        std::string n = cx.fresh(p.name);
        p.name = n;
      }
      r.kids[0] = alpha_walk(e.kids[0], cx);
      return r;
    }
    case Expr::K::Match: {
      Expr r = e;
      r.kids[0] = alpha_walk(e.kids[0], cx);
      for (size_t i = 0; i < r.branches.size(); i++) {
        AlphaCtx inner = cx;
        for (auto& b : r.branches[i].binders) b = inner.fresh(b);
        cx.counter = inner.counter;
        r.kids[i + 1] = alpha_walk(e.kids[i + 1], inner);
        cx.counter = inner.counter;
        cx.hole_counter = inner.hole_counter;
      }
      return r;
    }
    case Expr::K::Hole: {
      Expr r = e;
      r.hole_id = ++cx.hole_counter;
      return r;
    }
    default: {
      Expr r = e;
      for (auto& kch : r.kids) kch = alpha_walk(kch, cx);
      return r;
    }
  }
}

}  // namespace

Expr alpha_normalize(const Expr& e) {
  AlphaCtx cx;
  return alpha_walk(e, cx);
}

bool alpha_equal(const Expr& a, const Expr& b) { return alpha_normalize(a) == alpha_normalize(b); }

// ---------------------------------------------------------------------------
// sort inference and hypothesis matching
// ---------------------------------------------------------------------------

static std::optional<Sort> term_sort(const Term& t, const SortEnv& env) {
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
      auto it = env.vars.find(t.name);
      if (it != env.vars.end()) return it->second;
      if (env.file)
        if (auto* l = env.file->find_location(t.name)) return l->sort;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<Sort> expr_sort(const Expr& e, const SortEnv& env) {
  switch (e.k) {
    case Expr::K::Var: {
      auto it = env.vars.find(e.name);
      if (it != env.vars.end()) return it->second;
      if (env.file)
        if (auto* l = env.file->find_location(e.name)) return l->sort;
      return std::nullopt;
    }
    case Expr::K::Loc: {
      if (env.file)
        if (auto* l = env.file->find_location(e.name)) return l->sort;
      auto it = env.vars.find(e.name);
      if (it != env.vars.end()) return it->second;
      return std::nullopt;
    }
    case Expr::K::Const:
      return term_sort(e.lit, env);
    case Expr::K::ConsApp: {
      std::string tn;
      if (env.file && env.file->find_ctor(e.name, &tn)) return Sort::Named(tn);
      return std::nullopt;
    }
    case Expr::K::Call: {
      if (env.file)
        if (auto* c = env.file->find_component(e.name)) return c->result.base;
      return std::nullopt;
    }
    case Expr::K::Ref: {
      auto s = expr_sort(e.kids[0], env);
      if (s) return Sort::Ref(*s);
      return std::nullopt;
    }
    case Expr::K::Return:
      return expr_sort(e.kids[0], env);
    case Expr::K::Seq: {
      SortEnv inner = env;
      auto fs = expr_sort(e.kids[0], env);
      if (fs && e.name != "_") inner.vars[e.name] = *fs;
      return expr_sort(e.kids[1], inner);
    }
    case Expr::K::If:
      return expr_sort(e.kids[1], env);
    case Expr::K::Match: {
      if (e.kids.size() < 2) return std::nullopt;
      SortEnv inner = env;
      if (env.file) {
        if (auto* c = env.file->find_ctor(e.branches[0].ctor))
          for (size_t i = 0; i < c->params.size() && i < e.branches[0].binders.size(); i++) inner.vars[e.branches[0].binders[i]] = c->params[i].type.base;
      }
      return expr_sort(e.kids[1], inner);
    }
    case Expr::K::Hole:
      return e.hole_sort;
    case Expr::K::Skip:
      return Sort::Unit();
    case Expr::K::Lambda:
      return std::nullopt;
  }
  return std::nullopt;
}

// ren maps the hypothesis's binder names onto the candidate's.
static bool match_walk(const Expr& t, const Expr& h, SortEnv env, std::map<std::string, std::string> ren) {
  if (h.k == Expr::K::Hole) {
    auto s = expr_sort(t, env);
    return s && *s == h.hole_sort;
  }
  if (t.k != h.k) return false;
  switch (h.k) {
    case Expr::K::Var:
    case Expr::K::Loc: {
      auto it = ren.find(h.name);
      return (it != ren.end() ? it->second : h.name) == t.name;
    }
    case Expr::K::Const:
      return t.lit == h.lit;
    case Expr::K::Seq: {
      if (!match_walk(t.kids[0], h.kids[0], env, ren)) return false;
      auto fs = expr_sort(t.kids[0], env);
      if (fs && t.name != "_") env.vars[t.name] = *fs;
      if (h.name != "_") ren[h.name] = t.name;
      return match_walk(t.kids[1], h.kids[1], env, ren);
    }
    case Expr::K::Match: {
      if (t.branches.size() != h.branches.size() || t.kids.size() != h.kids.size()) return false;
      if (!match_walk(t.kids[0], h.kids[0], env, ren)) return false;
      for (size_t i = 0; i < t.branches.size(); i++) {
        if (t.branches[i].ctor != h.branches[i].ctor) return false;
        if (t.branches[i].binders.size() != h.branches[i].binders.size()) return false;
        auto ren2 = ren;
        for (size_t j = 0; j < t.branches[i].binders.size(); j++) ren2[h.branches[i].binders[j]] = t.branches[i].binders[j];
        if (!match_walk(t.kids[i + 1], h.kids[i + 1], env, ren2)) return false;
      }
      return true;
    }
    default: {
      if (t.name != h.name || t.kids.size() != h.kids.size()) return false;
      for (size_t i = 0; i < t.kids.size(); i++)
        if (!match_walk(t.kids[i], h.kids[i], env, ren)) return false;
      return true;
    }
  }
}

bool matches_hypothesis(const Expr& t, const Hypothesis& h, const SortEnv& env) {
  if (has_holes(t)) return false;
  return match_walk(t, h.shape, env, {});
}

// ---------------------------------------------------------------------------
// program parsing
// ---------------------------------------------------------------------------

namespace {

class ProgramParser {
 public:
  ProgramParser(const std::string& text, const SpecFile& file, const std::string& filename) : lx_(text, filename), file_(file) {}

  Expr parse() {
    Expr e;
    if (lx_.peek().t == Tok::Backslash) {
      lx_.next();
      std::vector<Param> params;
      while (true) {
        expect(Tok::LParen);
        Param p;
        p.pos = lx_.peek().pos;
        p.name = ident("parameter");
        expect(Tok::Colon);
        p.type.base = parse_sort();
        p.type.phi = Prop::mk_true();
        expect(Tok::RParen);
        params.push_back(p);
        if (lx_.peek().t == Tok::Comma) {
          lx_.next();
          continue;
        }
        break;
      }
      expect(Tok::Dot);
      Expr body = parse_stmt();
      expect_eof();
      return Expr::lambda(std::move(params), std::move(body));
    }
    e = parse_stmt();
    expect_eof();
    return e;
  }

 private:
  void expect_eof() {
    if (lx_.peek().t != Tok::Eof) lx_.fail("SyntaxError", "trailing input after program");
  }

  Sort parse_sort() {
    if (lx_.peek().t == Tok::LBrack) {
      lx_.next();
      Sort inner = parse_sort();
      expect(Tok::RBrack);
      return Sort::List(inner);
    }
    std::string id = ident("sort");
    if (id == "ref") return Sort::Ref(parse_sort());
    return Sort(id);
  }

  Expr parse_stmt() {
    const Token& t = lx_.peek();
    if (t.t == Tok::Ident && t.text == "skip") {
      lx_.next();
      return Expr::skip();
    }
    if (t.t == Tok::Ident && (t.text == "return" || t.text == "ret")) {
      lx_.next();
      return Expr::ret(parse_pure());
    }
    if (t.t == Tok::Ident && t.text == "if") {
      lx_.next();
      expect(Tok::LParen);
      Expr cond = parse_pure();
      expect(Tok::RParen);
      Token kw = lx_.next();
      if (kw.text != "then") lx_.fail_at("SyntaxError", kw.pos, "expected 'then'");
      Expr then_e = parse_block();
      kw = lx_.next();
      if (kw.text != "else") lx_.fail_at("SyntaxError", kw.pos, "expected 'else'");
      Expr else_e = parse_block();
      return Expr::if_(std::move(cond), std::move(then_e), std::move(else_e));
    }
    if (t.t == Tok::Ident && t.text == "match") {
      lx_.next();
      Expr scrut = parse_pure();
      Token kw = lx_.next();
      if (kw.text != "with") lx_.fail_at("SyntaxError", kw.pos, "expected 'with'");
      std::vector<MatchBranch> brs;
      std::vector<Expr> bodies;
      while (lx_.peek().t == Tok::Pipe) {
        lx_.next();
        MatchBranch b;
        b.ctor = ident("constructor");
        if (lx_.peek().t == Tok::LParen) {
          lx_.next();
          if (lx_.peek().t != Tok::RParen) {
            b.binders.push_back(ident("binder"));
            while (lx_.peek().t == Tok::Comma) {
              lx_.next();
              b.binders.push_back(ident("binder"));
            }
          }
          expect(Tok::RParen);
        }
        expect(Tok::Arrow);
        bodies.push_back(parse_block());
        brs.push_back(std::move(b));
      }
      if (brs.empty()) lx_.fail("SyntaxError", "match with no branches");
      return Expr::match_(std::move(scrut), std::move(brs), std::move(bodies));
    }
    // binder <- rhs ; rest   (also a bare tail call)
    if (t.t == Tok::Ident || (t.t == Tok::LParen)) {
      size_t m = lx_.mark();
      if (t.t == Tok::Ident) {
        std::string binder = lx_.next().text;
        if (lx_.peek().t == Tok::Bind) {
          lx_.next();
          Expr first = parse_rhs();
          expect(Tok::Semi);
          Expr rest = parse_stmt();
          return Expr::seq(binder, std::move(first), std::move(rest));
        }
        lx_.reset(m);
      }
      Expr call = parse_rhs();
      return call;
    }
    lx_.fail("SyntaxError", "expected statement, got '" + t.text + "'");
  }

  Expr parse_block() {
    if (lx_.peek().t == Tok::LBrace) {
      lx_.next();
      Expr e = parse_stmt();
      expect(Tok::RBrace);
      return e;
    }
    return parse_stmt();
  }

  Expr parse_rhs() {
    const Token& t = lx_.peek();
    if (t.t == Tok::LParen) {
      // hole or parenthesized computation
      lx_.next();
      if (lx_.peek().t == Tok::Hole) {
        lx_.next();
        expect(Tok::Colon);
        Sort s = parse_sort();
        expect(Tok::RParen);
        return Expr::hole(++hole_ctr_, s);
      }
      Expr inner = parse_stmt();
      expect(Tok::RParen);
      return inner;
    }
    if (t.t == Tok::Ident && t.text == "ref") {
      lx_.next();
      return Expr::ref(parse_pure());
    }
    Pos p = t.pos;
    std::string name = ident("call");
    expect(Tok::LParen);
    std::vector<Expr> args;
    if (lx_.peek().t != Tok::RParen) {
      args.push_back(parse_pure());
      while (lx_.peek().t == Tok::Comma) {
        lx_.next();
        args.push_back(parse_pure());
      }
    }
    expect(Tok::RParen);
    if (file_.find_component(name)) return Expr::call(name, std::move(args));
    if (file_.find_ctor(name)) return Expr::cons_app(name, std::move(args));
    lx_.fail_at("UndeclaredSymbol", p, "unknown component or constructor '" + name + "'");
  }

  Expr parse_pure() {
    const Token& t = lx_.peek();
    switch (t.t) {
      case Tok::Int:
        return Expr::cst(Term::intlit(atoll(lx_.next().text.c_str())));
      case Tok::Float:
        return Expr::cst(Term::floatlit(lx_.next().text));
      case Tok::Str:
        return Expr::cst(Term::strlit(lx_.next().text));
      case Tok::Minus: {
        lx_.next();
        Token n = lx_.next();
        if (n.t == Tok::Int) return Expr::cst(Term::intlit(-atoll(n.text.c_str())));
        lx_.fail_at("SyntaxError", n.pos, "expected numeric literal");
      }
      case Tok::LParen: {
        lx_.next();
        if (lx_.peek().t == Tok::RParen) {
          lx_.next();
          return Expr::cst(Term::unit());
        }
        if (lx_.peek().t == Tok::Hole) {
          lx_.next();
          expect(Tok::Colon);
          Sort s = parse_sort();
          expect(Tok::RParen);
          return Expr::hole(++hole_ctr_, s);
        }
        Expr inner = parse_pure();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Ident: {
        Token id = lx_.next();
        if (id.text == "true") return Expr::cst(Term::boollit(true));
        if (id.text == "false") return Expr::cst(Term::boollit(false));
        if (lx_.peek().t == Tok::LParen) {
          lx_.next();
          std::vector<Expr> args;
          if (lx_.peek().t != Tok::RParen) {
            args.push_back(parse_pure());
            while (lx_.peek().t == Tok::Comma) {
              lx_.next();
              args.push_back(parse_pure());
            }
          }
          expect(Tok::RParen);
          if (file_.find_ctor(id.text)) return Expr::cons_app(id.text, std::move(args));
          lx_.fail_at("UndeclaredSymbol", id.pos, "unknown constructor '" + id.text + "'");
        }
        if (file_.find_location(id.text)) return Expr::loc(id.text);
        return Expr::var(id.text);
      }
      default:
        lx_.fail("SyntaxError", "expected pure expression, got '" + t.text + "'");
    }
  }

  Token expect(Tok t) {
    if (lx_.peek().t != t) lx_.fail("SyntaxError", "unexpected token '" + lx_.peek().text + "'");
    return lx_.next();
  }

  std::string ident(const std::string& what) {
    if (lx_.peek().t != Tok::Ident) lx_.fail("SyntaxError", "expected " + what + ", got '" + lx_.peek().text + "'");
    return lx_.next().text;
  }

  Lexer lx_;
  const SpecFile& file_;
  int hole_ctr_ = 0;
};

}  // namespace

Expr parse_program(const std::string& text, const SpecFile& file, const std::string& filename) {
  ProgramParser p(text, file, filename);
  return p.parse();
}

}  // namespace cobalt
