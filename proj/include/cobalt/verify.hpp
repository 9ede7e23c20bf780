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

#ifndef COBALT_VERIFY_HPP
#define COBALT_VERIFY_HPP

#include "cobalt/corelang.hpp"
#include "cobalt/smt.hpp"

namespace cobalt {

struct TraceEntry {
  std::string description;
  Prop goal;
  ValidityResult result;
};

struct VerifyResult {
  bool ok = false;
  std::string reason;  // set when !ok
  std::vector<TraceEntry> trace;
};

// Post-hoc checker: decides whether a hole-free program satisfies the query
// by pushing strongest postconditions through sequences and discharging the
// subsumption side conditions at branch ends.
VerifyResult typecheck(const SpecFile& file, const Expr& program, const QuerySpec& query, SolverContext& solver);

// The ordered entailments typecheck discharged.
std::vector<TraceEntry> vc_trace(const SpecFile& file, const Expr& program, const QuerySpec& query, SolverContext& solver);

}  // namespace cobalt

#endif  // COBALT_VERIFY_HPP
