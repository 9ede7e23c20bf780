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

#include "cobalt/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cobalt {

// ---------------------------------------------------------------------------
// session
// ---------------------------------------------------------------------------

SmtSession::SmtSession(std::string solver_path) : path_(std::move(solver_path)) { spawn(); }

SmtSession::~SmtSession() { kill_child(); }

void SmtSession::spawn() {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw SolverCrash("pipe() failed");
  pid_ = fork();
  if (pid_ < 0) throw SolverCrash("fork() failed");
  if (pid_ == 0) {
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execlp(path_.c_str(), path_.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  rdbuf_.clear();
  std::string hello = "(set-option :print-success false)\n(set-logic UFLIRA)\n";
  if (write(to_child_, hello.data(), hello.size()) < 0) throw SolverCrash("solver rejected input");
}

void SmtSession::kill_child() {
  if (pid_ > 0) {
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
}

std::string SmtSession::read_line(long long budget_ms) {
  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_ms);
  while (true) {
    auto nl = rdbuf_.find('\n');
    if (nl != std::string::npos) {
      std::string line = rdbuf_.substr(0, nl);
      rdbuf_.erase(0, nl + 1);
      if (!line.empty()) return line;
      continue;
    }
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) return "";
    long long left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    struct pollfd pfd {
      from_child_, POLLIN, 0
    };
    int pr = poll(&pfd, 1, (int)std::max(1LL, left));
    if (pr < 0) throw SolverCrash("poll() failed");
    if (pr == 0) return "";
    char buf[4096];
    ssize_t n = read(from_child_, buf, sizeof buf);
    if (n <= 0) throw SolverCrash("solver process exited");
    rdbuf_.append(buf, (size_t)n);
  }
}

std::string SmtSession::check(const std::string& body, long long budget_ms) {
  if (pid_ < 0) spawn();
  std::string msg = "(push 1)\n" + body + "(check-sat)\n";
  ssize_t w = write(to_child_, msg.data(), msg.size());
  if (w < 0 || (size_t)w != msg.size()) {
    kill_child();
    throw SolverCrash("write to solver failed");
  }
  std::string line;
  try {
    line = read_line(budget_ms);
  } catch (SolverCrash&) {
    kill_child();
    throw;
  }
  if (line.empty()) {
    // timeout: the child may be stuck in search; restart it
    kill_child();
    return "timeout";
  }
  std::string done = "(pop 1)\n";
  if (write(to_child_, done.data(), done.size()) < 0) kill_child();
  return line;
}

// ---------------------------------------------------------------------------
// encoding
// ---------------------------------------------------------------------------

namespace {

bool simple_sym(const std::string& s) {
  if (s.empty() || std::isdigit((unsigned char)s[0])) return false;
  for (char c : s) {
    if (std::isalnum((unsigned char)c)) continue;
    if (std::strchr("~!@$%^&*_-+=<>.?/", c)) continue;
    return false;
  }
  return true;
}

std::string sym(const std::string& s) { return simple_sym(s) ? s : "|" + s + "|"; }

std::string smt_sort(const Sort& s) {
  if (s.text == "int") return "Int";
  if (s.text == "float") return "Real";
  if (s.text == "bool") return "Bool";
  if (s.text == "unit") return "Unit";
  if (s.text == "string") return "Str";
  if (s.text == "heap") return "Heap";
  if (s.text == "a") return "Elem";
  if (s.is_ref()) return "rf_" + smt_sort(s.pointee());
  if (s.text.size() >= 2 && s.text.front() == '[' && s.text.back() == ']') return "ls_" + smt_sort(Sort(s.text.substr(1, s.text.size() - 2)));
  return "s_" + s.text;
}

struct Encoder {
  const SpecFile* file;
  const SymTab* st;
  std::set<std::string> used_sorts;       // smt sort names needing declare-sort
  std::map<std::string, std::string> consts;  // name -> smt sort
  std::map<std::string, std::string> funs;    // qualifier/ctor -> signature
  std::map<std::string, int> strlits;     // literal -> id
  std::map<std::string, Sort> bound;      // quantifier binders in scope

  void note_sort(const Sort& s) {
    std::string t = smt_sort(s);
    if (t != "Int" && t != "Real" && t != "Bool") used_sorts.insert(t);
  }

  void note_fun(const std::string& name, const std::vector<Sort>& args, const Sort& ret) {
    std::ostringstream o;
    o << "(declare-fun " << sym(name) << " (";
    for (size_t i = 0; i < args.size(); i++) {
      if (i) o << " ";
      o << smt_sort(args[i]);
      note_sort(args[i]);
    }
    o << ") " << smt_sort(ret) << ")";
    note_sort(ret);
    funs[name] = o.str();
  }

  std::string term(const Term& t) {
    switch (t.k) {
      case Term::K::Var: {
        auto b = bound.find(t.name);
        if (b == bound.end()) {
          auto it = st->syms.find(t.name);
          if (it != st->syms.end()) {
            consts[t.name] = smt_sort(it->second);
            note_sort(it->second);
          } else {
            throw ProtocolError("unsorted symbol in SMT encoding: " + t.name);
          }
        }
        return sym(t.name);
      }
      case Term::K::IntLit:
        return t.i < 0 ? "(- " + std::to_string(-t.i) + ")" : std::to_string(t.i);
      case Term::K::FloatLit: {
        std::string s = t.s;
        if (!s.empty() && s[0] == '-') return "(- " + s.substr(1) + (s.find('.') == std::string::npos ? ".0" : "") + ")";
        if (s.find('.') == std::string::npos) s += ".0";
        return s;
      }
      case Term::K::BoolLit:
        return t.b ? "true" : "false";
      case Term::K::StrLit: {
        auto it = strlits.find(t.s);
        int id = it == strlits.end() ? (int)strlits.size() : it->second;
        strlits[t.s] = id;
        used_sorts.insert("Str");
        return "strlit!" + std::to_string(id);
      }
      case Term::K::UnitLit:
        used_sorts.insert("Unit");
        consts["unit!val"] = "Unit";
        return "unit!val";
      case Term::K::App: {
        // qualifier or datatype constructor
        if (auto* q = file->find_qualifier(t.name)) {
          if (!q->interpreted) note_fun(t.name, q->arg_sorts, q->result_sort);
          // interpreted select/update left unresolved: encode as an opaque
          // function over (Heap, ref) pairs
          if (q->interpreted) {
            std::vector<Sort> args;
            for (auto& a : t.args) args.push_back(infer(a));
            note_fun(t.name, args, q->is_update ? Sort::Heap() : infer_sel_result(t));
          }
        } else {
          std::string tn;
          if (auto* c = file->find_ctor(t.name, &tn)) {
            std::vector<Sort> args;
            for (auto& p : c->params) args.push_back(p.type.base);
            note_fun(t.name, args, Sort::Named(tn));
          } else {
            throw ProtocolError("unknown function symbol in SMT encoding: " + t.name);
          }
        }
        if (t.args.empty()) return sym(t.name);
        std::string r = "(" + sym(t.name);
        for (auto& a : t.args) r += " " + term(a);
        return r + ")";
      }
      case Term::K::Add:
      case Term::K::Sub:
        return std::string("(") + (t.k == Term::K::Add ? "+" : "-") + " " + term(t.args[0]) + " " + term(t.args[1]) + ")";
    }
    return "true";
  }

  Sort infer(const Term& t) {
    switch (t.k) {
      case Term::K::Var: {
        auto b = bound.find(t.name);
        if (b != bound.end()) return b->second;
        auto it = st->syms.find(t.name);
        if (it != st->syms.end()) return it->second;
        return Sort::Unit();
      }
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
      case Term::K::App: {
        if (auto* q = file->find_qualifier(t.name)) {
          if (q->interpreted && !q->is_update) return infer_sel_result(t);
          return q->result_sort;
        }
        std::string tn;
        if (file->find_ctor(t.name, &tn)) return Sort::Named(tn);
        return Sort::Unit();
      }
      case Term::K::Add:
      case Term::K::Sub:
        return infer(t.args[0]);
    }
    return Sort::Unit();
  }

  Sort infer_sel_result(const Term& t) {
    if (t.args.size() == 2) {
      Sort ls = infer(t.args[1]);
      if (ls.is_ref()) return ls.pointee();
    }
    return Sort::Unit();
  }

  std::string prop(const Prop& p) {
    switch (p.k) {
      case Prop::K::True:
        return "true";
      case Prop::K::False:
        return "false";
      case Prop::K::App:
        return term(Term::app(p.name, p.args));
      case Prop::K::Not:
        return "(not " + prop(p.kids[0]) + ")";
      case Prop::K::And:
      case Prop::K::Or: {
        if (p.kids.empty()) return p.k == Prop::K::And ? "true" : "false";
        if (p.kids.size() == 1) return prop(p.kids[0]);
        std::string r = p.k == Prop::K::And ? "(and" : "(or";
        for (auto& kch : p.kids) r += " " + prop(kch);
        return r + ")";
      }
      case Prop::K::Implies:
        return "(=> " + prop(p.kids[0]) + " " + prop(p.kids[1]) + ")";
      case Prop::K::Iff:
        return "(= " + prop(p.kids[0]) + " " + prop(p.kids[1]) + ")";
      case Prop::K::Eq:
        return "(= " + term(p.args[0]) + " " + term(p.args[1]) + ")";
      case Prop::K::Cmp:
        return "(" + p.name + " " + term(p.args[0]) + " " + term(p.args[1]) + ")";
      case Prop::K::Forall:
      case Prop::K::Exists: {
        auto saved = bound;
        bound[p.name] = p.sort;
        note_sort(p.sort);
        std::string body = prop(p.kids[0]);
        bound = saved;
        return std::string("(") + (p.k == Prop::K::Forall ? "forall" : "exists") + " ((" + sym(p.name) + " " + smt_sort(p.sort) + ")) " + body + ")";
      }
    }
    return "true";
  }
};

}  // namespace

SolverContext::SolverContext(const SpecFile& file, std::string solver_path, long long budget_ms) : file_(file), path_(std::move(solver_path)), budget_ms_(budget_ms) {}

std::string SolverContext::encode(const SymTab& st, const std::vector<Prop>& facts, const Prop& goal) const {
  Encoder enc;
  enc.file = &file_;
  enc.st = &st;
  std::vector<std::string> assert_lines;
  for (auto& f : facts) {
    Prop s = simplify(f);
    if (s.is_true()) continue;
    assert_lines.push_back("(assert " + enc.prop(s) + ")");
  }
  assert_lines.push_back("(assert (not " + enc.prop(simplify(goal)) + "))");

  std::ostringstream o;
  o << "(set-logic UFLIRA)\n";
  for (auto& s : enc.used_sorts) o << "(declare-sort " << s << " 0)\n";
  for (auto& [name, sig] : enc.funs) o << sig << "\n";
  for (auto& [name, srt] : enc.consts) o << "(declare-fun " << sym(name) << " () " << srt << ")\n";
  for (auto& [lit, id] : enc.strlits) o << "(declare-fun strlit!" << id << " () Str)\n";
  if (enc.strlits.size() > 1) {
    o << "(assert (distinct";
    for (auto& [lit, id] : enc.strlits) o << " strlit!" << id;
    o << "))\n";
  }
  for (auto& a : assert_lines) o << a << "\n";
  o << "(check-sat)\n";
  return o.str();
}

ValidityResult SolverContext::check_valid(const SymTab& st, const std::vector<Prop>& facts, const Prop& goal) {
  std::string script;
  try {
    script = encode(st, facts, goal);
  } catch (ProtocolError& e) {
    return ValidityResult::unknown(e.what());
  }
  auto it = cache_.find(script);
  if (it != cache_.end()) {
    hits_++;
    return it->second;
  }
  if (!emit_dir_.empty()) {
    std::ofstream f(emit_dir_ + "/q" + std::to_string(emit_ctr_++) + ".smt2");
    f << script;
  }
  if (!session_) session_ = std::make_unique<SmtSession>(path_);
  issued_++;
  // strip the set-logic line: the session already configured the logic
  std::string body = script.substr(script.find('\n') + 1);
  body = body.substr(0, body.rfind("(check-sat)"));
  std::string verdict;
  try {
    verdict = session_->check(body, budget_ms_);
  } catch (SolverCrash&) {
    session_.reset();
    throw;
  }
  ValidityResult r;
  if (verdict == "unsat")
    r = ValidityResult::valid_();
  else if (verdict == "sat")
    r = ValidityResult::invalid();
  else if (verdict == "timeout" || verdict == "unknown")
    r = ValidityResult::unknown(verdict);
  else
    throw ProtocolError("unparseable solver reply: " + verdict);
  cache_[script] = r;
  return r;
}

std::string find_solver(const std::string& explicit_path, const std::string& argv0) {
  auto usable = [](const std::string& p) {
    struct stat sb {};
    return !p.empty() && stat(p.c_str(), &sb) == 0 && (sb.st_mode & S_IXUSR);
  };
  if (!explicit_path.empty()) return explicit_path;
  if (const char* env = std::getenv("COBALT_SOLVER"); env && *env) return env;
  auto slash = argv0.rfind('/');
  if (slash != std::string::npos) {
    std::string cand = argv0.substr(0, slash + 1) + "minismt";
    if (usable(cand)) return cand;
  }
  if (const char* path = std::getenv("PATH")) {
    std::stringstream ss(path);
    std::string dir;
    for (auto& name : {"z3", "cvc5", "minismt"}) {
      std::stringstream ss2(path);
      while (std::getline(ss2, dir, ':')) {
        std::string cand = dir + "/" + name;
        if (usable(cand)) return cand;
      }
    }
    (void)ss;
  }
  return "";
}

}  // namespace cobalt
