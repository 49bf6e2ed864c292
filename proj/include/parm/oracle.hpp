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

#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "parm/graph.hpp"
#include "parm/pattern.hpp"

namespace parm {

/// Exhaustive reference miner for small graphs. It shares nothing with the
/// pruned miner except the graph and pattern value types, so the two can
/// check each other.

struct OracleLimits {
  std::size_t max_vertices = 200;
  std::size_t max_attributes = 12;
  std::size_t max_length = 3;
  std::size_t max_attributes_per_vertex = 4;
};

class OracleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OracleStrategy {
  /// Depth-first walk enumeration from every source.
  PathEnumeration,
  /// Level-wise composition of (source, end) relations.
  RelationalJoin,
};

struct OracleRule {
  PathPattern antecedent;
  PathPattern consequent;
  std::size_t asupp = 0;
  double rsupp = 0;
  double conf = 0;
  double lift = 0;
};

struct OracleResult {
  double threshold = 0;
  /// Every frequent pattern (including length 0) with its matched sources.
  std::map<PathPattern, std::vector<VertexId>> patterns;
  /// Ordered by (antecedent, consequent).
  std::vector<OracleRule> rules;
};

/// Throws OracleGuardError when the instance exceeds `limits`.
OracleResult oracle_mine(const PropertyGraph& g, double threshold, std::size_t max_length,
                         bool unbounded_reachability = false,
                         OracleStrategy strategy = OracleStrategy::PathEnumeration, OracleLimits limits = {});

/// Every nonempty pattern that matches at least one source, frequent or not,
/// with its sources. Same guard as oracle_mine.
std::map<PathPattern, std::vector<VertexId>> oracle_all_matches(const PropertyGraph& g, std::size_t max_length,
                                                                bool unbounded_reachability = false,
                                                                OracleStrategy strategy =
                                                                    OracleStrategy::PathEnumeration,
                                                                OracleLimits limits = {});

}  // namespace parm
