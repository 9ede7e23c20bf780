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

#ifndef COBALT_SMT_HPP
#define COBALT_SMT_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cobalt/transformers.hpp"

namespace cobalt {

struct ValidityResult {
  enum class K { Valid, Invalid, Unknown } k = K::Unknown;
  std::string reason;  // Unknown: solver's verbatim reason or "timeout"

  bool valid() const { return k == K::Valid; }
  static ValidityResult valid_() { return {K::Valid, ""}; }
  static ValidityResult invalid(std::string model = "") { return {K::Invalid, std::move(model)}; }
  static ValidityResult unknown(std::string why) { return {K::Unknown, std::move(why)}; }
};

struct SolverCrash : std::runtime_error {
  explicit SolverCrash(const std::string& m) : std::runtime_error(m) {}
};
struct ProtocolError : std::runtime_error {
  explicit ProtocolError(const std::string& m) : std::runtime_error(m) {}
};

// One solver child process speaking SMT-LIB2, one query per push/pop frame.
class SmtSession {
 public:
  explicit SmtSession(std::string solver_path);
  ~SmtSession();
  SmtSession(const SmtSession&) = delete;
  SmtSession& operator=(const SmtSession&) = delete;

  // body: declarations + assertions; runs (push) body (check-sat) (pop) and
  // returns the verdict line. Kills and respawns the child on timeout.
  std::string check(const std::string& body, long long budget_ms);

 private:
  void spawn();
  void kill_child();
  std::string read_line(long long budget_ms);

  std::string path_;
  int pid_ = -1;
  int to_child_ = -1, from_child_ = -1;
  std::string rdbuf_;
};

// Per-run solver frontend: deterministic encoding, caching, statistics,
// optional script dumping.
class SolverContext {
 public:
  SolverContext(const SpecFile& file, std::string solver_path, long long budget_ms = 2000);

  // Valid iff facts /\ not(goal) is unsatisfiable.
  ValidityResult check_valid(const SymTab& st, const std::vector<Prop>& facts, const Prop& goal);

  // Standalone script text; byte-stable for identical inputs.
  std::string encode(const SymTab& st, const std::vector<Prop>& facts, const Prop& goal) const;

  void set_emit_dir(std::string dir) { emit_dir_ = std::move(dir); }
  long long queries_issued() const { return issued_; }
  long long cache_hits() const { return hits_; }
  const std::string& solver_path() const { return path_; }

 private:
  const SpecFile& file_;
  std::string path_;
  long long budget_ms_;
  std::unique_ptr<SmtSession> session_;
  std::unordered_map<std::string, ValidityResult> cache_;
  std::string emit_dir_;
  long long issued_ = 0, hits_ = 0, emit_ctr_ = 0;
};

// Resolution order: explicit path, COBALT_SOLVER, minismt next to argv0,
// then z3/cvc5/minismt on PATH. Empty result means nothing was found.
std::string find_solver(const std::string& explicit_path, const std::string& argv0);

}  // namespace cobalt

#endif  // COBALT_SMT_HPP
