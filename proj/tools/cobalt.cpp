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

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cobalt/engine.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cobalt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream o;
  o << f.rdbuf();
  return o.str();
}

Mode parse_mode(const std::string& m) {
  if (m == "cobalt") return Mode::Cobalt;
  if (m == "fw-alone") return Mode::FwAlone;
  if (m == "bw-alone") return Mode::BwAlone;
  if (m == "fw-no-cdcl") return Mode::FwNoCdcl;
  throw CLI::ValidationError("--mode must be cobalt|fw-alone|bw-alone|fw-no-cdcl");
}

SpecFile load_spec(const std::string& path) {
  SpecFile f = parse_spec_file(slurp(path), path);
  auto violations = check_well_formed(f);
  if (!violations.empty()) {
    for (auto& v : violations) std::cerr << path << ":" << v.pos.line << ":" << v.pos.col << ": " << v.kind << ": " << v.message << "\n";
    throw ParseError(violations[0].kind, violations[0].pos, "specification file is not well-formed");
  }
  return f;
}

json stats_json(const RunStats& st) {
  return json{{"outcome", st.outcome},
              {"program", st.program},
              {"program_size", st.program_size},
              {"nodes_expanded", st.nodes_expanded},
              {"nodes_pruned", st.nodes_pruned},
              {"smt_queries", st.smt_queries},
              {"smt_cache_hits", st.smt_cache_hits},
              {"stuck_nodes", st.stuck_nodes},
              {"wall_ms", st.wall_ms}};
}

struct BenchRow {
  std::string name;
  std::string expected;  // "" when no sidecar
  bool has_golden = false;
  bool golden_ok = false;
  bool pass = false;
  std::map<std::string, RunStats> by_mode;
};

RunStats run_one(const SpecFile& file, const std::string& solver_path, Mode mode, int depth, long long smt_ms, long long total_s) {
  SolverContext solver(file, solver_path, smt_ms);
  EngineConfig cfg;
  cfg.mode = mode;
  cfg.depth_k = depth;
  cfg.global_budget_ms = total_s * 1000;
  return synthesize_query(file, solver, cfg).stats;
}

int cmd_synth(const std::string& spec_path, const std::string& mode_s, int depth, const std::string& solver_flag, long long smt_ms, long long total_s, const std::string& emit_dir, const std::string& stats_out, bool trace, const std::string& argv0) {
  SpecFile file = load_spec(spec_path);
  std::string solver_path = find_solver(solver_flag, argv0);
  if (solver_path.empty()) {
    std::cerr << "cobalt: no SMT solver found (set --solver or COBALT_SOLVER)\n";
    return 3;
  }
  SolverContext solver(file, solver_path, smt_ms);
  if (!emit_dir.empty()) {
    fs::create_directories(emit_dir);
    solver.set_emit_dir(emit_dir);
  }
  EngineConfig cfg;
  cfg.mode = parse_mode(mode_s);
  cfg.depth_k = depth;
  cfg.global_budget_ms = total_s * 1000;

  SynthesisResult r;
  try {
    r = synthesize_query(file, solver, cfg);
  } catch (SolverCrash& e) {
    std::cerr << "cobalt: solver failure: " << e.what() << "\n";
    return 3;
  }
  std::cout << "outcome: " << r.stats.outcome << "\n";
  if (r.program) std::cout << r.stats.program << "\n";
  std::cout << "nodes expanded: " << r.stats.nodes_expanded << ", pruned: " << r.stats.nodes_pruned << ", stuck: " << r.stats.stuck_nodes << ", smt queries: " << r.stats.smt_queries << " (+" << r.stats.smt_cache_hits << " cached), wall: " << r.stats.wall_ms
            << " ms\n";
  if (trace && r.program) {
    auto tr = vc_trace(file, *r.program, file.query, solver);
    for (auto& e : tr) std::cout << "  [" << (e.result.valid() ? "ok" : "FAIL") << "] " << e.description << ": " << to_string(e.goal) << "\n";
  }
  if (!stats_out.empty()) {
    std::ofstream f(stats_out);
    f << stats_json(r.stats).dump(2) << "\n";
  }
  if (r.stats.outcome == "timeout") return 4;
  return r.stats.outcome == "solved" ? 0 : 1;
}

int cmd_verify(const std::string& spec_path, const std::string& prog_path, const std::string& solver_flag, long long smt_ms, bool trace, const std::string& argv0) {
  SpecFile file = load_spec(spec_path);
  std::string solver_path = find_solver(solver_flag, argv0);
  if (solver_path.empty()) {
    std::cerr << "cobalt: no SMT solver found (set --solver or COBALT_SOLVER)\n";
    return 3;
  }
  Expr program = parse_program(slurp(prog_path), file, prog_path);
  SolverContext solver(file, solver_path, smt_ms);
  VerifyResult r = typecheck(file, program, file.query, solver);
  if (trace)
    for (auto& e : r.trace) std::cout << "  [" << (e.result.valid() ? "ok" : "FAIL") << "] " << e.description << ": " << to_string(e.goal) << "\n";
  if (r.ok) {
    std::cout << "verified\n";
    return 0;
  }
  std::cout << "rejected: " << r.reason << "\n";
  return 1;
}

std::pair<std::string, std::string> read_expect(const std::string& path) {
  std::ifstream f(path);
  std::string line, outcome, golden;
  bool in_golden = false;
  while (std::getline(f, line)) {
    if (in_golden) {
      golden += line + "\n";
      continue;
    }
    if (line.rfind("outcome:", 0) == 0) {
      outcome = line.substr(8);
      while (!outcome.empty() && outcome.front() == ' ') outcome.erase(0, 1);
    } else if (line.rfind("golden:", 0) == 0) {
      in_golden = true;
    }
  }
  return {outcome, golden};
}

int cmd_bench(const std::string& dir, int jobs, const std::string& solver_flag, int depth, long long smt_ms, long long total_s, const std::string& json_out, const std::string& argv0) {
  std::string solver_path = find_solver(solver_flag, argv0);
  if (solver_path.empty()) {
    std::cerr << "cobalt: no SMT solver found (set --solver or COBALT_SOLVER)\n";
    return 3;
  }
  std::vector<std::string> specs;
  for (auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".spec") specs.push_back(e.path().string());
  std::sort(specs.begin(), specs.end());

  const char* mode_names[] = {"cobalt", "fw-alone", "bw-alone", "fw-no-cdcl"};
  const Mode modes[] = {Mode::Cobalt, Mode::FwAlone, Mode::BwAlone, Mode::FwNoCdcl};

  auto run_spec = [&](const std::string& path) -> BenchRow {
    BenchRow row;
    row.name = fs::path(path).stem().string();
    SpecFile file = load_spec(path);
    for (int m = 0; m < 4; m++) row.by_mode[mode_names[m]] = run_one(file, solver_path, modes[m], depth, smt_ms, total_s);
    std::string expect_path = fs::path(path).replace_extension(".expect").string();
    if (fs::exists(expect_path)) {
      auto [outcome, golden] = read_expect(expect_path);
      row.expected = outcome;
      row.pass = row.by_mode["cobalt"].outcome == outcome;
      if (!golden.empty()) {
        row.has_golden = true;
        if (row.by_mode["cobalt"].outcome == "solved") {
          Expr got = parse_program(row.by_mode["cobalt"].program, file);
          Expr want = parse_program(golden, file);
          row.golden_ok = alpha_equal(got, want);
        }
        row.pass = row.pass && row.golden_ok;
      }
    } else {
      row.pass = row.by_mode["cobalt"].outcome == "solved";
    }
    return row;
  };

  std::vector<BenchRow> rows;
  if (jobs <= 1) {
    for (auto& s : specs) rows.push_back(run_spec(s));
  } else {
    std::vector<std::future<BenchRow>> futs;
    size_t next = 0;
    while (next < specs.size() || !futs.empty()) {
      while ((int)futs.size() < jobs && next < specs.size()) futs.push_back(std::async(std::launch::async, run_spec, specs[next++]));
      futs.front().wait();
      rows.push_back(futs.front().get());
      futs.erase(futs.begin());
    }
    std::sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.name < b.name; });
  }

  // aligned text table
  printf("%-14s %-6s", "query", "pass");
  for (auto& m : mode_names) printf(" %22s", m);
  printf("\n");
  for (auto& r : rows) {
    printf("%-14s %-6s", r.name.c_str(), r.pass ? "yes" : "NO");
    for (auto& m : mode_names) {
      auto& st = r.by_mode[m];
      char buf[64];
      snprintf(buf, sizeof buf, "%s n=%lld t=%lldms", st.outcome.substr(0, 6).c_str(), st.nodes_expanded, st.wall_ms);
      printf(" %22s", buf);
    }
    printf("\n");
  }

  json out = json::array();
  for (auto& r : rows) {
    json jr{{"query", r.name}, {"pass", r.pass}, {"expected", r.expected}};
    for (auto& [m, st] : r.by_mode) jr[m] = stats_json(st);
    if (r.has_golden) jr["golden_match"] = r.golden_ok;
    out.push_back(jr);
  }
  if (!json_out.empty()) {
    std::ofstream f(json_out);
    f << out.dump(2) << "\n";
  }
  bool all = true;
  for (auto& r : rows) all = all && r.pass;
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cobalt: specification-guided component-based synthesis"};
  app.require_subcommand(1);

  std::string spec_path, prog_path, mode = "cobalt", solver_flag, emit_dir, stats_out, bench_dir, json_out;
  int depth = 5, jobs = 1;
  long long smt_ms = 2000, total_s = 600;
  bool trace = false;

  auto* synth = app.add_subcommand("synth", "synthesize a program for the query in FILE");
  synth->add_option("file", spec_path, "specification file")->required();
  synth->add_option("--mode", mode, "cobalt|fw-alone|bw-alone|fw-no-cdcl");
  synth->add_option("--depth", depth, "depth bound k (default 5)");
  synth->add_option("--solver", solver_flag, "SMT solver binary");
  synth->add_option("--smt-timeout", smt_ms, "per-query solver budget in ms (default 2000)");
  synth->add_option("--timeout", total_s, "global budget in seconds (default 600)");
  synth->add_option("--emit-smt", emit_dir, "dump every solver script into DIR");
  synth->add_option("--stats", stats_out, "write run statistics as JSON");
  synth->add_flag("--trace", trace, "print the verification trace of the result");

  auto* verify = app.add_subcommand("verify", "check a program against the query in FILE");
  verify->add_option("file", spec_path, "specification file")->required();
  verify->add_option("--program", prog_path, "program text file")->required();
  verify->add_option("--solver", solver_flag, "SMT solver binary");
  verify->add_option("--smt-timeout", smt_ms, "per-query solver budget in ms");
  verify->add_flag("--trace", trace, "print every entailment discharged");

  auto* bench = app.add_subcommand("bench", "run every *.spec in DIR in all four modes");
  bench->add_option("dir", bench_dir, "benchmark directory")->required();
  bench->add_option("--jobs", jobs, "parallel worker count");
  bench->add_option("--solver", solver_flag, "SMT solver binary");
  bench->add_option("--depth", depth, "depth bound k");
  bench->add_option("--smt-timeout", smt_ms, "per-query solver budget in ms");
  bench->add_option("--timeout", total_s, "per-run budget in seconds");
  bench->add_option("--json", json_out, "write the machine-readable report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(spec_path, mode, depth, solver_flag, smt_ms, total_s, emit_dir, stats_out, trace, argv[0]);
    if (verify->parsed()) return cmd_verify(spec_path, prog_path, solver_flag, smt_ms, trace, argv[0]);
    if (bench->parsed()) return cmd_bench(bench_dir, jobs, solver_flag, depth, smt_ms, total_s, json_out, argv[0]);
  } catch (ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (SolverCrash& e) {
    std::cerr << "cobalt: solver failure: " << e.what() << "\n";
    return 3;
  } catch (std::exception& e) {
    std::cerr << "cobalt: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
