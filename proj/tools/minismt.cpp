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

// minismt: a small SMT-LIB2 solver for the fragment cobalt emits --
// uninterpreted functions over free sorts, linear integer/real arithmetic,
// shallow quantifiers. Positive universals are replaced by boolean guards
// and ground-instantiated (guard => instance), existentials are Skolemized,
// uninterpreted functions are reduced Ackermann-style, and the ground
// residue is decided by DPLL over the boolean skeleton with union-find
// equality reasoning and Fourier-Motzkin elimination at full assignments.
//
// "unsat" answers are sound. "sat" answers may be artifacts of finite
// instantiation or of deciding arithmetic over the rationals; clients that
// need conservative behavior must treat sat/unknown as "not valid".

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace minismt {

struct SolverLimit {
  const char* what;
};

struct ParseErr {
  std::string msg;
};

// ---------------------------------------------------------------------------
// exact rational arithmetic
// ---------------------------------------------------------------------------

struct Rat {
  long long n = 0, d = 1;

  Rat() = default;
  Rat(long long v) : n(v), d(1) {}

  static Rat make(__int128 nn, __int128 dd) {
    if (dd == 0) throw SolverLimit{"division by zero"};
    if (dd < 0) {
      nn = -nn;
      dd = -dd;
    }
    __int128 a = nn < 0 ? -nn : nn, b = dd;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      nn /= a;
      dd /= a;
    }
    const __int128 lim = (__int128)1 << 62;
    if (nn >= lim || nn <= -lim || dd >= lim) throw SolverLimit{"rational overflow"};
    Rat r;
    r.n = (long long)nn;
    r.d = (long long)dd;
    return r;
  }

  bool zero() const { return n == 0; }
  bool neg() const { return n < 0; }
  bool pos() const { return n > 0; }

  Rat operator+(const Rat& o) const { return make((__int128)n * o.d + (__int128)o.n * d, (__int128)d * o.d); }
  Rat operator-(const Rat& o) const { return make((__int128)n * o.d - (__int128)o.n * d, (__int128)d * o.d); }
  Rat operator*(const Rat& o) const { return make((__int128)n * o.n, (__int128)d * o.d); }
  Rat operator/(const Rat& o) const {
    if (o.n == 0) throw SolverLimit{"division by zero"};
    return make((__int128)n * o.d, (__int128)d * o.n);
  }
  Rat operator-() const { return make(-(__int128)n, d); }
  bool operator==(const Rat& o) const { return n == o.n && d == o.d; }
};

// ---------------------------------------------------------------------------
// s-expression reader (incremental, pipe friendly)
// ---------------------------------------------------------------------------

struct SExpr {
  bool atom = false;
  std::string s;
  std::vector<SExpr> list;
};

class SexprReader {
 public:
  void feed(char c, std::vector<SExpr>& out) {
    if (in_comment_) {
      if (c == '\n') in_comment_ = false;
      return;
    }
    if (in_quote_) {
      buf_.push_back(c);
      if (c == '|') in_quote_ = false;
      return;
    }
    if (in_string_) {
      buf_.push_back(c);
      if (c == '"') in_string_ = false;
      return;
    }
    switch (c) {
      case ';':
        in_comment_ = true;
        return;
      case '|':
        in_quote_ = true;
        buf_.push_back(c);
        return;
      case '"':
        in_string_ = true;
        buf_.push_back(c);
        return;
      case '(':
        depth_++;
        buf_.push_back(c);
        return;
      case ')':
        depth_--;
        buf_.push_back(c);
        if (depth_ < 0) throw ParseErr{"unbalanced ')'"};
        if (depth_ == 0) {
          size_t pos = 0;
          out.push_back(parse(buf_, pos));
          buf_.clear();
        }
        return;
      default:
        if (depth_ > 0) buf_.push_back(c);
        return;
    }
  }

  static SExpr parse(const std::string& s, size_t& pos) {
    skip_ws(s, pos);
    if (pos >= s.size()) throw ParseErr{"unexpected end of input"};
    if (s[pos] == '(') {
      pos++;
      SExpr e;
      while (true) {
        skip_ws(s, pos);
        if (pos >= s.size()) throw ParseErr{"unexpected end of list"};
        if (s[pos] == ')') {
          pos++;
          return e;
        }
        e.list.push_back(parse(s, pos));
      }
    }
    SExpr a;
    a.atom = true;
    if (s[pos] == '|') {
      pos++;
      while (pos < s.size() && s[pos] != '|') a.s.push_back(s[pos++]);
      if (pos >= s.size()) throw ParseErr{"unterminated quoted symbol"};
      pos++;
      return a;
    }
    if (s[pos] == '"') {
      a.s.push_back(s[pos++]);
      while (pos < s.size() && s[pos] != '"') a.s.push_back(s[pos++]);
      if (pos >= s.size()) throw ParseErr{"unterminated string"};
      a.s.push_back(s[pos++]);
      return a;
    }
    while (pos < s.size() && !std::isspace((unsigned char)s[pos]) && s[pos] != '(' && s[pos] != ')') a.s.push_back(s[pos++]);
    return a;
  }

 private:
  static void skip_ws(const std::string& s, size_t& pos) {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) pos++;
  }

  std::string buf_;
  int depth_ = 0;
  bool in_comment_ = false, in_quote_ = false, in_string_ = false;
};

// ---------------------------------------------------------------------------
// typed terms
// ---------------------------------------------------------------------------

enum class TK { Sym, Num, App, And, Or, Not, Implies, Eq, Lt, Le, Add, Sub, Mul, Forall, Exists, True, False };

struct Node {
  TK k = TK::True;
  std::string name;
  Rat num;
  std::vector<Node> kids;
  std::vector<std::pair<std::string, std::string>> binders;
};

struct FunDecl {
  std::vector<std::string> args;
  std::string ret;
};

struct Frame {
  std::vector<Node> assertions;
  std::vector<std::string> declared_funs;
  std::vector<std::string> declared_sorts;
};

class Solver {
 public:
  Solver() { frames_.emplace_back(); }

  void command(const SExpr& e, std::ostream& out) {
    if (e.atom) throw ParseErr{"expected command, got atom '" + e.s + "'"};
    if (e.list.empty() || !e.list[0].atom) throw ParseErr{"malformed command"};
    const std::string& cmd = e.list[0].s;
    if (cmd == "set-option" || cmd == "set-info" || cmd == "set-logic") return;
    if (cmd == "exit") std::exit(0);
    if (cmd == "reset") {
      sorts_.clear();
      funs_.clear();
      frames_.clear();
      frames_.emplace_back();
      return;
    }
    if (cmd == "push") {
      int n = e.list.size() > 1 ? atoi(e.list[1].s.c_str()) : 1;
      for (int i = 0; i < n; i++) frames_.emplace_back();
      return;
    }
    if (cmd == "pop") {
      int n = e.list.size() > 1 ? atoi(e.list[1].s.c_str()) : 1;
      for (int i = 0; i < n; i++) {
        if (frames_.size() <= 1) throw ParseErr{"pop on empty stack"};
        for (auto& f : frames_.back().declared_funs) funs_.erase(f);
        for (auto& s : frames_.back().declared_sorts) sorts_.erase(s);
        frames_.pop_back();
      }
      return;
    }
    if (cmd == "declare-sort") {
      sorts_.insert(e.list[1].s);
      frames_.back().declared_sorts.push_back(e.list[1].s);
      return;
    }
    if (cmd == "declare-fun" || cmd == "declare-const") {
      FunDecl d;
      std::string name = e.list[1].s;
      if (cmd == "declare-fun") {
        for (auto& a : e.list[2].list) d.args.push_back(a.s);
        d.ret = e.list[3].s;
      } else {
        d.ret = e.list[2].s;
      }
      funs_[name] = d;
      frames_.back().declared_funs.push_back(name);
      return;
    }
    if (cmd == "assert") {
      frames_.back().assertions.push_back(convert(e.list[1]));
      return;
    }
    if (cmd == "check-sat") {
      out << run_check() << "\n";
      out.flush();
      return;
    }
    if (cmd == "get-model") {
      out << "(model)\n";
      out.flush();
      return;
    }
    throw ParseErr{"unsupported command '" + cmd + "'"};
  }

 private:
  // ---- conversion -----------------------------------------------------------

  Node convert(const SExpr& e) {
    Node n;
    if (e.atom) {
      const std::string& s = e.s;
      if (s == "true") {
        n.k = TK::True;
        return n;
      }
      if (s == "false") {
        n.k = TK::False;
        return n;
      }
      if (!s.empty() && (std::isdigit((unsigned char)s[0]) || (s.size() > 1 && s[0] == '-' && std::isdigit((unsigned char)s[1])))) {
        n.k = TK::Num;
        n.num = parse_num(s);
        return n;
      }
      n.k = TK::Sym;
      n.name = s;
      return n;
    }
    if (e.list.empty()) throw ParseErr{"empty application"};
    if (!e.list[0].atom) throw ParseErr{"higher-order application"};
    const std::string& h = e.list[0].s;
    auto child = [&](size_t i) {
      if (i >= e.list.size()) throw ParseErr{"missing argument to " + h};
      return convert(e.list[i]);
    };
    if (h == "and" || h == "or") {
      n.k = h == "and" ? TK::And : TK::Or;
      for (size_t i = 1; i < e.list.size(); i++) n.kids.push_back(child(i));
      return n;
    }
    if (h == "not") {
      n.k = TK::Not;
      n.kids.push_back(child(1));
      return n;
    }
    if (h == "=>") {
      n.k = TK::Implies;
      n.kids.push_back(child(1));
      n.kids.push_back(child(2));
      return n;
    }
    if (h == "=" || h == "distinct") {
      n.k = TK::Eq;
      n.kids.push_back(child(1));
      n.kids.push_back(child(2));
      if (h == "distinct") {
        Node neg;
        neg.k = TK::Not;
        neg.kids.push_back(n);
        return neg;
      }
      return n;
    }
    if (h == "<" || h == ">" || h == "<=" || h == ">=") {
      Node a = child(1), b = child(2);
      n.k = (h == "<" || h == ">") ? TK::Lt : TK::Le;
      if (h == ">" || h == ">=") std::swap(a, b);
      n.kids.push_back(a);
      n.kids.push_back(b);
      return n;
    }
    if (h == "+" || h == "-" || h == "*") {
      n.k = h == "+" ? TK::Add : (h == "-" ? TK::Sub : TK::Mul);
      for (size_t i = 1; i < e.list.size(); i++) n.kids.push_back(child(i));
      if (n.k == TK::Sub && n.kids.size() == 1) {
        Node z;
        z.k = TK::Num;
        n.kids.insert(n.kids.begin(), z);
      }
      return n;
    }
    if (h == "forall" || h == "exists") {
      n.k = h == "forall" ? TK::Forall : TK::Exists;
      for (auto& b : e.list[1].list) {
        if (b.list.size() != 2) throw ParseErr{"malformed binder"};
        n.binders.emplace_back(b.list[0].s, b.list[1].s);
      }
      n.kids.push_back(child(2));
      return n;
    }
    n.k = TK::App;
    n.name = h;
    for (size_t i = 1; i < e.list.size(); i++) n.kids.push_back(child(i));
    return n;
  }

  static Rat parse_num(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(atoll(s.c_str()));
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    long long scale = 1;
    for (size_t i = 0; i < fp.size(); i++) scale *= 10;
    long long sign = (!ip.empty() && ip[0] == '-') ? -1 : 1;
    return Rat::make((__int128)atoll(ip.c_str()) * scale + (__int128)sign * atoll(fp.c_str()), scale);
  }

  // ---- sorts ---------------------------------------------------------------

  std::string sort_of(const Node& n, const std::map<std::string, std::string>& bound) const {
    switch (n.k) {
      case TK::Num:
        return n.num.d == 1 ? "Int" : "Real";
      case TK::Sym: {
        auto b = bound.find(n.name);
        if (b != bound.end()) return b->second;
        auto f = funs_.find(n.name);
        if (f != funs_.end()) return f->second.ret;
        throw ParseErr{"undeclared symbol '" + n.name + "'"};
      }
      case TK::App: {
        auto f = funs_.find(n.name);
        if (f != funs_.end()) return f->second.ret;
        throw ParseErr{"undeclared function '" + n.name + "'"};
      }
      case TK::Add:
      case TK::Sub:
      case TK::Mul: {
        for (auto& k : n.kids)
          if (sort_of(k, bound) == "Real") return "Real";
        return "Int";
      }
      default:
        return "Bool";
    }
  }

  static bool numeric(const std::string& s) { return s == "Int" || s == "Real"; }

  // ---- NNF / guards / skolemization -----------------------------------------

  struct Axiom {
    std::string guard;  // boolean symbol; instances asserted as guard => inst
    std::vector<std::pair<std::string, std::string>> binders;
    Node body;  // not yet in NNF; instantiated then normalized
  };

  // Produces an NNF, quantifier-free tree. Positive foralls become guard
  // symbols recorded in `axioms`; existentials are Skolemized.
  Node nnf(const Node& n, bool pol, std::vector<Axiom>& axioms, std::map<std::string, std::string>& bound) {
    switch (n.k) {
      case TK::True:
      case TK::False: {
        Node r;
        r.k = ((n.k == TK::True) == pol) ? TK::True : TK::False;
        return r;
      }
      case TK::Not:
        return nnf(n.kids[0], !pol, axioms, bound);
      case TK::And:
      case TK::Or: {
        Node r;
        r.k = ((n.k == TK::And) == pol) ? TK::And : TK::Or;
        for (auto& k : n.kids) r.kids.push_back(nnf(k, pol, axioms, bound));
        return r;
      }
      case TK::Implies: {
        Node r;
        r.k = pol ? TK::Or : TK::And;
        r.kids.push_back(nnf(n.kids[0], !pol, axioms, bound));
        r.kids.push_back(nnf(n.kids[1], pol, axioms, bound));
        return r;
      }
      case TK::Eq: {
        if (sort_of(n.kids[0], bound) == "Bool") {
          Node c1;
          c1.k = pol ? TK::Or : TK::And;
          c1.kids.push_back(nnf(n.kids[0], !pol, axioms, bound));
          c1.kids.push_back(nnf(n.kids[1], pol, axioms, bound));
          Node c2;
          c2.k = pol ? TK::Or : TK::And;
          c2.kids.push_back(nnf(n.kids[0], pol, axioms, bound));
          c2.kids.push_back(nnf(n.kids[1], !pol, axioms, bound));
          Node r;
          r.k = pol ? TK::And : TK::Or;
          r.kids.push_back(c1);
          r.kids.push_back(c2);
          return r;
        }
        if (pol) return n;
        Node neg;
        neg.k = TK::Not;
        neg.kids.push_back(n);
        return neg;
      }
      case TK::Lt:
      case TK::Le: {
        if (pol) return n;
        Node r;
        r.k = n.k == TK::Lt ? TK::Le : TK::Lt;
        r.kids.push_back(n.kids[1]);
        r.kids.push_back(n.kids[0]);
        return r;
      }
      case TK::Forall:
      case TK::Exists: {
        bool is_forall = (n.k == TK::Forall) == pol;
        if (is_forall) {
          Axiom ax;
          ax.guard = fresh_name("grd!");
          funs_[ax.guard] = FunDecl{{}, "Bool"};
          frames_.back().declared_funs.push_back(ax.guard);
          ax.binders = n.binders;
          ax.body = pol ? n.kids[0] : negate(n.kids[0]);
          axioms.push_back(ax);
          Node g;
          g.k = TK::Sym;
          g.name = ax.guard;
          return g;
        }
        std::map<std::string, Node> sk;
        for (auto& b : n.binders) {
          std::string c = fresh_name("sk!");
          funs_[c] = FunDecl{{}, b.second};
          frames_.back().declared_funs.push_back(c);
          Node cn;
          cn.k = TK::Sym;
          cn.name = c;
          sk[b.first] = cn;
        }
        Node inst = substitute(n.kids[0], sk);
        return nnf(inst, pol, axioms, bound);
      }
      default: {  // Sym / App boolean atoms
        if (pol) return n;
        Node neg;
        neg.k = TK::Not;
        neg.kids.push_back(n);
        return neg;
      }
    }
  }

  static Node negate(const Node& n) {
    Node r;
    r.k = TK::Not;
    r.kids.push_back(n);
    return r;
  }

  static Node substitute(const Node& n, const std::map<std::string, Node>& sub) {
    if (n.k == TK::Sym) {
      auto it = sub.find(n.name);
      if (it != sub.end()) return it->second;
      return n;
    }
    Node r = n;
    for (auto& k : r.kids) k = substitute(k, sub);
    return r;
  }

  void collect_ground(const Node& n, std::map<std::string, std::set<std::string>>& by_sort, std::map<std::string, Node>& terms) {
    if (n.k == TK::Forall || n.k == TK::Exists) return;  // skip bound regions
    if (n.k == TK::Sym || n.k == TK::App || n.k == TK::Num) {
      std::string srt;
      try {
        srt = sort_of(n, {});
      } catch (ParseErr&) {
        srt.clear();
      }
      if (!srt.empty() && srt != "Bool") {
        std::string key = print_node(n);
        if (!terms.count(key)) {
          terms[key] = n;
          by_sort[srt].insert(key);
        }
      }
    }
    for (auto& k : n.kids) collect_ground(k, by_sort, terms);
  }

  static std::string print_node(const Node& n) {
    std::ostringstream o;
    print_node(n, o);
    return o.str();
  }

  static void print_node(const Node& n, std::ostream& o) {
    switch (n.k) {
      case TK::Sym:
        o << n.name;
        return;
      case TK::Num:
        o << n.num.n << (n.num.d != 1 ? "/" + std::to_string(n.num.d) : "");
        return;
      case TK::True:
        o << "true";
        return;
      case TK::False:
        o << "false";
        return;
      default: {
        static const char* names[] = {"?", "?", "app", "and", "or", "not", "=>", "=", "<", "<=", "+", "-", "*", "forall", "exists"};
        o << "(" << (n.k == TK::App ? n.name : names[(int)n.k]);
        for (auto& b : n.binders) o << " [" << b.first << " " << b.second << "]";
        for (auto& k : n.kids) {
          o << " ";
          print_node(k, o);
        }
        o << ")";
      }
    }
  }

  std::string fresh_name(const char* prefix) { return std::string(prefix) + std::to_string(fresh_ctr_++); }

  // ---- ground context --------------------------------------------------------

  struct LinExpr {
    std::map<int, Rat> coef;
    Rat cst;

    void add(const LinExpr& o, const Rat& mul) {
      for (auto& [v, c] : o.coef) {
        auto it = coef.find(v);
        if (it == coef.end()) {
          Rat nc = c * mul;
          if (!nc.zero()) coef[v] = nc;
        } else {
          it->second = it->second + c * mul;
          if (it->second.zero()) coef.erase(it);
        }
      }
      cst = cst + o.cst * mul;
    }
    void scale(const Rat& m) {
      for (auto& [v, c] : coef) c = c * m;
      cst = cst * m;
    }
    LinExpr negated() const {
      LinExpr e = *this;
      e.scale(Rat(-1));
      return e;
    }
    std::string key() const {
      std::ostringstream o;
      for (auto& [v, c] : coef) o << v << "*" << c.n << "/" << c.d << " ";
      o << "|" << cst.n << "/" << cst.d;
      return o.str();
    }
  };

  enum class AtomKind { Bool, UEq, LinEq, LinLe, LinLt };

  struct Atom {
    AtomKind kind;
    int var = 0;  // sat variable (1-based)
    int a = -1, b = -1;
    LinExpr lin;
  };

  struct Ctx {
    std::map<std::string, int> tvar_ids;
    std::vector<std::string> tvar_sort;
    std::map<std::string, int> num_ids;
    int num_ctr = 0;
    std::map<std::string, int> atom_index;  // canonical key -> atoms idx
    std::vector<Atom> atoms;
    std::map<std::string, std::vector<std::pair<std::vector<Node>, Node>>> apps;
    std::map<std::string, Node> app_vars;
    std::vector<std::vector<int>> clauses;
    int sat_vars = 0;
    int true_var = 0;
  };

  int tvar(Ctx& cx, const std::string& key, const std::string& srt) {
    auto it = cx.tvar_ids.find(key);
    if (it != cx.tvar_ids.end()) return it->second;
    int id = (int)cx.tvar_sort.size();
    cx.tvar_ids[key] = id;
    cx.tvar_sort.push_back(srt);
    return id;
  }

  int numvar(Ctx& cx, const std::string& key) {
    auto it = cx.num_ids.find(key);
    if (it != cx.num_ids.end()) return it->second;
    return cx.num_ids[key] = cx.num_ctr++;
  }

  int new_sat_var(Ctx& cx) { return ++cx.sat_vars; }

  int true_lit(Ctx& cx) {
    if (cx.true_var == 0) {
      cx.true_var = new_sat_var(cx);
      cx.clauses.push_back({cx.true_var});
    }
    return cx.true_var;
  }

  Node flatten_app(Ctx& cx, const Node& n) {
    std::vector<Node> args;
    for (auto& a : n.kids) args.push_back(a.k == TK::App ? flatten_app(cx, a) : a);
    Node canonical;
    canonical.k = TK::App;
    canonical.name = n.name;
    canonical.kids = args;
    std::string key = print_node(canonical);
    auto it = cx.app_vars.find(key);
    if (it != cx.app_vars.end()) return it->second;
    auto fit = funs_.find(n.name);
    if (fit == funs_.end()) throw ParseErr{"undeclared function '" + n.name + "'"};
    std::string vn = "app!" + std::to_string(fresh_ctr_++);
    funs_[vn] = FunDecl{{}, fit->second.ret};
    frames_.back().declared_funs.push_back(vn);
    Node v;
    v.k = TK::Sym;
    v.name = vn;
    cx.app_vars[key] = v;
    cx.apps[n.name].push_back({args, v});
    return v;
  }

  LinExpr lin_of(Ctx& cx, const Node& n) {
    LinExpr e;
    switch (n.k) {
      case TK::Num:
        e.cst = n.num;
        return e;
      case TK::Sym:
        e.coef[numvar(cx, n.name)] = Rat(1);
        return e;
      case TK::App: {
        Node v = flatten_app(cx, n);
        e.coef[numvar(cx, v.name)] = Rat(1);
        return e;
      }
      case TK::Add:
        for (auto& k : n.kids) e.add(lin_of(cx, k), Rat(1));
        return e;
      case TK::Sub:
        e = lin_of(cx, n.kids[0]);
        for (size_t i = 1; i < n.kids.size(); i++) e.add(lin_of(cx, n.kids[i]), Rat(-1));
        return e;
      case TK::Mul: {
        if (n.kids.size() != 2) throw SolverLimit{"nonlinear product"};
        if (n.kids[0].k == TK::Num) {
          e = lin_of(cx, n.kids[1]);
          e.scale(n.kids[0].num);
          return e;
        }
        if (n.kids[1].k == TK::Num) {
          e = lin_of(cx, n.kids[0]);
          e.scale(n.kids[1].num);
          return e;
        }
        throw SolverLimit{"nonlinear product"};
      }
      default:
        throw SolverLimit{"non-numeric term in arithmetic position"};
    }
  }

  int intern_atom(Ctx& cx, AtomKind k, const std::string& key, Atom a) {
    std::string full = std::to_string((int)k) + "|" + key;
    auto it = cx.atom_index.find(full);
    if (it != cx.atom_index.end()) return cx.atoms[it->second].var;
    a.kind = k;
    a.var = new_sat_var(cx);
    cx.atom_index[full] = (int)cx.atoms.size();
    cx.atoms.push_back(a);
    if (k == AtomKind::LinEq) {
      // (e = 0) or (e < 0) or (0 < e): makes negated equalities complete
      Atom lt1;
      lt1.lin = a.lin;
      Atom lt2;
      lt2.lin = a.lin.negated();
      int l1 = intern_atom(cx, AtomKind::LinLt, lt1.lin.key(), lt1);
      int l2 = intern_atom(cx, AtomKind::LinLt, lt2.lin.key(), lt2);
      cx.clauses.push_back({a.var, l1, l2});
    }
    return cx.atoms[cx.atom_index[full]].var;
  }

  int atom_lit(Ctx& cx, const Node& n, bool positive) {
    switch (n.k) {
      case TK::Sym: {
        Atom a;
        int v = intern_atom(cx, AtomKind::Bool, n.name, a);
        return positive ? v : -v;
      }
      case TK::App: {
        Node v = flatten_app(cx, n);
        return atom_lit(cx, v, positive);
      }
      case TK::Eq: {
        std::string srt = sort_of(n.kids[0], {});
        if (numeric(srt)) {
          LinExpr e = lin_of(cx, n.kids[0]);
          e.add(lin_of(cx, n.kids[1]), Rat(-1));
          normalize_sign(e);
          Atom a;
          a.lin = e;
          int v = intern_atom(cx, AtomKind::LinEq, e.key(), a);
          return positive ? v : -v;
        }
        Node l = n.kids[0].k == TK::App ? flatten_app(cx, n.kids[0]) : n.kids[0];
        Node r = n.kids[1].k == TK::App ? flatten_app(cx, n.kids[1]) : n.kids[1];
        if (l.k != TK::Sym || r.k != TK::Sym) throw SolverLimit{"unsupported equality operand"};
        int va = tvar(cx, l.name, srt), vb = tvar(cx, r.name, srt);
        if (va == vb) return positive ? true_lit(cx) : -true_lit(cx);
        if (va > vb) std::swap(va, vb);
        Atom a;
        a.a = va;
        a.b = vb;
        int v = intern_atom(cx, AtomKind::UEq, std::to_string(va) + "=" + std::to_string(vb), a);
        return positive ? v : -v;
      }
      case TK::Lt:
      case TK::Le: {
        LinExpr e = lin_of(cx, n.kids[0]);
        e.add(lin_of(cx, n.kids[1]), Rat(-1));
        Atom a;
        a.lin = e;
        int v = intern_atom(cx, n.k == TK::Lt ? AtomKind::LinLt : AtomKind::LinLe, e.key(), a);
        return positive ? v : -v;
      }
      default:
        throw SolverLimit{"unexpected node in atom position"};
    }
  }

  static void normalize_sign(LinExpr& e) {
    if (!e.coef.empty() && e.coef.begin()->second.neg()) e.scale(Rat(-1));
  }

  int tseitin(Ctx& cx, const Node& n) {
    switch (n.k) {
      case TK::True:
        return true_lit(cx);
      case TK::False:
        return -true_lit(cx);
      case TK::Not:
        return -tseitin(cx, n.kids[0]);
      case TK::And:
      case TK::Or: {
        if (n.kids.empty()) return n.k == TK::And ? true_lit(cx) : -true_lit(cx);
        if (n.kids.size() == 1) return tseitin(cx, n.kids[0]);
        std::vector<int> lits;
        for (auto& k : n.kids) lits.push_back(tseitin(cx, k));
        int v = new_sat_var(cx);
        std::vector<int> big;
        if (n.k == TK::And) {
          big.push_back(v);
          for (int l : lits) {
            cx.clauses.push_back({-v, l});
            big.push_back(-l);
          }
        } else {
          big.push_back(-v);
          for (int l : lits) {
            cx.clauses.push_back({v, -l});
            big.push_back(l);
          }
        }
        cx.clauses.push_back(big);
        return v;
      }
      case TK::Implies: {
        int a = tseitin(cx, n.kids[0]), b = tseitin(cx, n.kids[1]);
        int v = new_sat_var(cx);
        cx.clauses.push_back({-v, -a, b});
        cx.clauses.push_back({v, a});
        cx.clauses.push_back({v, -b});
        return v;
      }
      case TK::Forall:
      case TK::Exists:
        // leftover nested quantifier (after the instantiation rounds): treat
        // as an unconstrained boolean -- weakens the formula, keeps "unsat"
        // answers sound
        return new_sat_var(cx);
      default:
        return atom_lit(cx, n, true);
    }
  }

  // ---- DPLL + theory ---------------------------------------------------------

  bool unit_propagate(const Ctx& cx, std::vector<int>& assign) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& cl : cx.clauses) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int l : cl) {
          int v = l > 0 ? l : -l;
          int a = assign[v];
          if (a == 0) {
            unassigned++;
            last = l;
          } else if ((a > 0) == (l > 0)) {
            sat = true;
            break;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          assign[last > 0 ? last : -last] = last > 0 ? 1 : -1;
          changed = true;
        }
      }
    }
    return true;
  }

  bool dpll(const Ctx& cx, std::vector<int> assign) {
    if (++dpll_steps_ > 500000) throw SolverLimit{"dpll step limit"};
    if (!unit_propagate(cx, assign)) return false;
    int pick = 0;
    for (int v = 1; v <= cx.sat_vars; v++)
      if (assign[v] == 0) {
        pick = v;
        break;
      }
    if (pick == 0) return theory_check(cx, assign);
    for (int val : {1, -1}) {
      std::vector<int> a2 = assign;
      a2[pick] = val;
      if (dpll(cx, a2)) return true;
    }
    return false;
  }

  bool theory_check(const Ctx& cx, const std::vector<int>& assign) {
    std::vector<int> parent(cx.tvar_sort.size());
    for (size_t i = 0; i < parent.size(); i++) parent[i] = (int)i;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto& a : cx.atoms)
      if (a.kind == AtomKind::UEq && assign[a.var] == 1) parent[find(a.a)] = find(a.b);
    for (auto& a : cx.atoms)
      if (a.kind == AtomKind::UEq && assign[a.var] == -1 && find(a.a) == find(a.b)) return false;

    std::vector<std::pair<LinExpr, int>> cons;  // 0 eq, 1 le, 2 lt
    for (auto& a : cx.atoms) {
      int asg = assign[a.var];
      if (asg == 0) continue;
      switch (a.kind) {
        case AtomKind::LinEq:
          if (asg == 1) cons.push_back({a.lin, 0});
          break;  // negation covered by the split clause
        case AtomKind::LinLe:
          cons.push_back(asg == 1 ? std::make_pair(a.lin, 1) : std::make_pair(a.lin.negated(), 2));
          break;
        case AtomKind::LinLt:
          cons.push_back(asg == 1 ? std::make_pair(a.lin, 2) : std::make_pair(a.lin.negated(), 1));
          break;
        default:
          break;
      }
    }
    return lra_feasible(std::move(cons));
  }

  bool lra_feasible(std::vector<std::pair<LinExpr, int>> cons) {
    // substitute out equalities
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t i = 0; i < cons.size(); i++) {
        if (cons[i].second != 0 || cons[i].first.coef.empty()) continue;
        LinExpr eq = cons[i].first;
        int var = eq.coef.begin()->first;
        Rat cv = eq.coef.begin()->second;
        cons.erase(cons.begin() + i);
        for (auto& [e, op] : cons) {
          auto it = e.coef.find(var);
          if (it == e.coef.end()) continue;
          Rat mult = it->second / cv;
          e.coef.erase(var);
          LinExpr rest = eq;
          rest.coef.erase(var);
          rest.scale(-mult);
          e.add(rest, Rat(1));
        }
        progress = true;
        break;
      }
    }
    std::set<int> vars;
    std::vector<std::pair<LinExpr, int>> ineqs;
    for (auto& [e, op] : cons) {
      if (e.coef.empty()) {
        if (op == 0 && !e.cst.zero()) return false;
        if (op == 1 && e.cst.pos()) return false;
        if (op == 2 && !e.cst.neg()) return false;
        continue;
      }
      if (op == 0) {
        ineqs.push_back({e, 1});
        ineqs.push_back({e.negated(), 1});
      } else {
        ineqs.push_back({e, op});
      }
      for (auto& [v, c] : e.coef) vars.insert(v);
    }
    for (int v : vars) {
      std::vector<std::pair<LinExpr, int>> lower, upper, rest;
      for (auto& [e, op] : ineqs) {
        auto it = e.coef.find(v);
        if (it == e.coef.end())
          rest.push_back({e, op});
        else if (it->second.pos())
          upper.push_back({e, op});
        else
          lower.push_back({e, op});
      }
      if (lower.size() * upper.size() > 20000) throw SolverLimit{"fourier-motzkin blowup"};
      for (auto& [lo, lop] : lower)
        for (auto& [up, uop] : upper) {
          Rat cl = lo.coef.at(v), cu = up.coef.at(v);
          LinExpr comb = lo;
          comb.scale(cu);
          LinExpr ups = up;
          ups.scale(-cl);
          comb.add(ups, Rat(1));
          comb.coef.erase(v);
          int op = (lop == 2 || uop == 2) ? 2 : 1;
          if (comb.coef.empty()) {
            if (op == 1 && comb.cst.pos()) return false;
            if (op == 2 && !comb.cst.neg()) return false;
          } else {
            rest.push_back({comb, op});
          }
        }
      ineqs = std::move(rest);
      if (ineqs.size() > 20000) throw SolverLimit{"fourier-motzkin blowup"};
    }
    return true;
  }

  // ---- check-sat --------------------------------------------------------------

  std::string run_check() {
    dpll_steps_ = 0;
    try {
      Node conj;
      conj.k = TK::And;
      for (auto& f : frames_)
        for (auto& a : f.assertions) conj.kids.push_back(a);

      std::vector<Axiom> axioms;
      std::map<std::string, std::string> bound;
      Node matrix = nnf(conj, true, axioms, bound);

      // ground instantiation: guard => instance
      std::vector<Node> guarded;
      std::set<std::string> seen;
      for (int round = 0; round < 3 && !axioms.empty(); round++) {
        std::map<std::string, std::set<std::string>> by_sort;
        std::map<std::string, Node> terms;
        collect_ground(matrix, by_sort, terms);
        for (auto& g : guarded) collect_ground(g, by_sort, terms);
        bool added = false;
        for (auto& ax : axioms) {
          std::vector<std::vector<std::string>> choices;
          bool skip = false;
          for (auto& b : ax.binders) {
            auto& pool = by_sort[b.second];
            if (pool.empty()) {
              std::string w = fresh_name("wit!");
              funs_[w] = FunDecl{{}, b.second};
              frames_.back().declared_funs.push_back(w);
              Node wn;
              wn.k = TK::Sym;
              wn.name = w;
              terms[w] = wn;
              pool.insert(w);
            }
            choices.push_back(std::vector<std::string>(pool.begin(), pool.end()));
            if (choices.back().size() > 64) skip = true;
          }
          if (skip) continue;
          std::vector<size_t> idx(ax.binders.size(), 0);
          bool done = ax.binders.empty();
          bool first = true;
          while (first || !done) {
            first = false;
            std::map<std::string, Node> sub;
            for (size_t i = 0; i < ax.binders.size(); i++) sub[ax.binders[i].first] = terms.at(choices[i][idx[i]]);
            Node body = substitute(ax.body, sub);
            Node impl;
            impl.k = TK::Implies;
            Node g;
            g.k = TK::Sym;
            g.name = ax.guard;
            impl.kids.push_back(g);
            impl.kids.push_back(body);
            std::string key = print_node(impl);
            if (!seen.count(key)) {
              seen.insert(key);
              if (seen.size() > 20000) throw SolverLimit{"instantiation limit"};
              guarded.push_back(impl);
              added = true;
            }
            if (ax.binders.empty()) break;
            size_t i = 0;
            for (; i < idx.size(); i++) {
              if (++idx[i] < choices[i].size()) break;
              idx[i] = 0;
            }
            done = (i == idx.size());
          }
        }
        if (!added) break;
      }

      Node all;
      all.k = TK::And;
      all.kids.push_back(matrix);
      for (auto& g : guarded) {
        std::vector<Axiom> nested;  // instances may carry nested quantifiers
        std::map<std::string, std::string> b2;
        all.kids.push_back(nnf(g, true, nested, b2));
        // nested axioms left uninstantiated: their guards are unconstrained,
        // which only weakens the assertion set
      }

      Ctx cx;
      int root = tseitin(cx, all);
      cx.clauses.push_back({root});
      // Ackermann functional-consistency clauses
      for (auto& [fname, apps] : cx.apps) {
        for (size_t i = 0; i < apps.size(); i++)
          for (size_t j = i + 1; j < apps.size(); j++) {
            std::vector<int> clause;
            bool trivially_true = false;
            for (size_t k = 0; k < apps[i].first.size(); k++) {
              Node eq;
              eq.k = TK::Eq;
              eq.kids.push_back(apps[i].first[k]);
              eq.kids.push_back(apps[j].first[k]);
              int lit = atom_lit(cx, eq, false);
              if (lit == -true_lit(cx))
                continue;  // identical args
              else if (lit == true_lit(cx)) {
                trivially_true = true;
                break;
              }
              clause.push_back(lit);
            }
            if (trivially_true) continue;
            std::string ret = funs_.at(apps[i].second.name).ret;
            if (ret == "Bool") {
              int bi = atom_lit(cx, apps[i].second, true);
              int bj = atom_lit(cx, apps[j].second, true);
              std::vector<int> c1 = clause, c2 = clause;
              c1.push_back(-bi);
              c1.push_back(bj);
              c2.push_back(bi);
              c2.push_back(-bj);
              cx.clauses.push_back(c1);
              cx.clauses.push_back(c2);
            } else {
              Node eq;
              eq.k = TK::Eq;
              eq.kids.push_back(apps[i].second);
              eq.kids.push_back(apps[j].second);
              clause.push_back(atom_lit(cx, eq, true));
              cx.clauses.push_back(clause);
            }
          }
      }

      std::vector<int> assign(cx.sat_vars + 1, 0);
      return dpll(cx, std::move(assign)) ? "sat" : "unsat";
    } catch (SolverLimit&) {
      return "unknown";
    }
  }

  std::set<std::string> sorts_;
  std::map<std::string, FunDecl> funs_;
  std::vector<Frame> frames_;
  long long fresh_ctr_ = 0;
  long long dpll_steps_ = 0;
};

}  // namespace minismt

int main(int argc, char** argv) {
  using namespace minismt;
  std::ifstream file;
  std::istream* in = &std::cin;
  if (argc > 1 && std::strcmp(argv[1], "--version") == 0) {
    std::cout << "minismt 0.1\n";
    return 0;
  }
  if (argc > 1) {
    file.open(argv[1]);
    if (!file) {
      std::cerr << "minismt: cannot open " << argv[1] << "\n";
      return 1;
    }
    in = &file;
  }
  Solver solver;
  SexprReader reader;
  std::vector<SExpr> ready;
  char c;
  while (in->get(c)) {
    try {
      reader.feed(c, ready);
    } catch (ParseErr& e) {
      std::cout << "(error \"" << e.msg << "\")" << std::endl;
      return 1;
    }
    for (auto& e : ready) {
      try {
        solver.command(e, std::cout);
      } catch (ParseErr& err) {
        std::cout << "(error \"" << err.msg << "\")" << std::endl;
      }
    }
    ready.clear();
  }
  return 0;
}
