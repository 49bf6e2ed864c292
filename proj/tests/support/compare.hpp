// Copyright 2026 The parm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Miner versus oracle comparison shared by unit and acceptance tests.

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parm/miner.hpp"
#include "parm/oracle.hpp"
#include "parm/pattern.hpp"

namespace parm::testing {

/// Every frequent pattern the miner reports, with its sources.
inline std::map<PathPattern, std::vector<VertexId>> miner_patterns(const MineResult& r) {
  std::map<PathPattern, std::vector<VertexId>> out;
  for (const auto& level : r.sets.by_length)
    for (const FrequentPattern& p : level) out.emplace(p.pattern(), p.table.sources());
  for (const FrequentPattern& p : r.sets.reachability) out.emplace(p.pattern(), p.table.sources());
  return out;
}

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

/// Human-readable differences; empty when the results agree.
inline std::vector<std::string> compare_with_oracle(const PropertyGraph& g, const MineResult& mined,
                                                    const OracleResult& oracle, double tol = 1e-12) {
  std::vector<std::string> diffs;
  const auto ours = miner_patterns(mined);
  for (const auto& [p, sources] : oracle.patterns) {
    auto it = ours.find(p);
    if (it == ours.end()) diffs.push_back("missing pattern " + to_text(p, g));
    else if (it->second != sources) diffs.push_back("sources differ for " + to_text(p, g));
  }
  for (const auto& [p, sources] : ours)
    if (!oracle.patterns.count(p)) diffs.push_back("extra pattern " + to_text(p, g));

  using Key = std::pair<PathPattern, PathPattern>;
  std::map<Key, const OracleRule*> expected;
  for (const OracleRule& r : oracle.rules) expected.emplace(Key{r.antecedent, r.consequent}, &r);
  std::size_t matched = 0;
  for (const Rule& r : mined.rules) {
    auto it = expected.find(Key{r.antecedent, r.consequent});
    const std::string name = to_text(r.antecedent, g) + " => " + to_text(r.consequent, g);
    if (it == expected.end()) {
      diffs.push_back("extra rule " + name);
      continue;
    }
    ++matched;
    const OracleRule& o = *it->second;
    if (!close(r.asupp, static_cast<double>(o.asupp), tol) || !close(r.rsupp, o.rsupp, tol) ||
        !close(r.conf, o.conf, tol) || !close(r.lift, o.lift, tol))
      diffs.push_back("metrics differ for " + name);
  }
  if (matched != expected.size() || mined.rules.size() != matched)
    diffs.push_back("rule count " + std::to_string(mined.rules.size()) + " vs oracle " +
                    std::to_string(expected.size()));
  return diffs;
}

}  // namespace parm::testing
