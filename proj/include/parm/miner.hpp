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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "parm/approx.hpp"
#include "parm/graph.hpp"
#include "parm/matcher.hpp"
#include "parm/pattern.hpp"
#include "parm/scheduler.hpp"

namespace parm {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Absolute count, or a fraction of |V| when `relative`.
struct MinSupport {
  double value = 1.0;
  bool relative = false;
};

enum class ReachabilityBound { KBounded, Unbounded };

struct MinerConfig {
  MinSupport min_support;
  std::size_t max_length = 2;
  std::optional<double> candidate_reduction;  // psi in (0, 1]
  std::optional<double> sampling_rate;        // rho in (0, 1]
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  double z = 1.96;
  ReachabilityBound reachability_bound = ReachabilityBound::KBounded;
  /// Unpruned reference pipeline: every label and attribute is tried, joins
  /// are naive all-pairs, rules come from all pattern pairs.
  bool baseline = false;
  /// Scale sampling variance by (1 - rho).
  bool finite_population_correction = true;

  /// Throws ConfigError.
  void validate() const;
  /// The absolute threshold for a graph with `num_vertices` vertices.
  double threshold(std::size_t num_vertices) const;
  bool sampling() const { return sampling_rate && *sampling_rate < 1.0; }
  double psi() const { return candidate_reduction.value_or(1.0); }
};

/// A frequent pattern with its match table. In sampling mode the table holds
/// sampled sources only and `support` is the scaled-up estimate.
struct FrequentPattern {
  MatchTable table;
  double support = 0;
  std::optional<FrequencyEstimate> estimate;

  const PathPattern& pattern() const { return table.pattern; }
  std::size_t matched() const { return table.size(); }
};

/// Labels and trailing hops that can still lead to frequent patterns.
struct Frontier {
  std::vector<AttrId> frequent_attributes;  // ascending
  /// Labels that may start a frequent simple pattern.
  std::vector<LabelId> first_labels;
  /// Labels that may carry a frequent reachability pattern.
  std::vector<LabelId> reach_labels;
  /// Union of the above; drives cost estimation and reach-set construction.
  std::vector<LabelId> labels;
  /// Per label: every attribute b with |E({b}, label)| > 0.
  std::vector<std::vector<SuffixCandidate>> targets;
  std::size_t max_in_degree = 0;
};

/// Where a pattern lives inside FrequentSets: `group` is its length for
/// simple patterns and kReachGroup for reachability patterns.
struct PatternRef {
  static constexpr std::uint32_t kReachGroup = 0xffffffffu;
  std::uint32_t group;
  std::uint32_t index;
};

struct FrequentSets {
  /// by_length[i] holds the frequent simple patterns of length i (P_0..P_k).
  std::vector<std::vector<FrequentPattern>> by_length;
  std::vector<FrequentPattern> reachability;
  Frontier frontier;
  /// Rule-side patterns (lengths 1..k, then reachability) numbered densely;
  /// links[i] lists the frequent one-step extensions of rule pattern i.
  std::vector<PatternRef> rule_patterns;
  std::vector<std::vector<std::uint32_t>> links;

  const FrequentPattern& at(PatternRef ref) const;
  const FrequentPattern& rule_pattern(std::size_t i) const { return at(rule_patterns[i]); }
  std::size_t count_simple() const;
  /// Null when `p` is not frequent.
  const FrequentPattern* find(const PathPattern& p) const;
  /// Renumbers rule_patterns and rebuilds the lookup index and links.
  void rebuild_index();

 private:
  std::unordered_map<PathPattern, PatternRef, PatternHash> index_;
};

struct Rule {
  PathPattern antecedent;
  PathPattern consequent;
  double asupp = 0;
  double rsupp = 0;
  double conf = 0;
  double lift = 0;
  bool estimated = false;
  std::optional<FrequencyEstimate> estimate;
};

struct RuleMetrics {
  double asupp, rsupp, conf, lift;
};

/// Support, relative support, confidence and lift from the co-matched count,
/// the two sides' matched counts and |V|.
RuleMetrics compute_metrics(double both, double antecedent, double consequent, double num_vertices);

struct MineStats {
  std::size_t attribute_sets = 0;
  std::size_t simple_patterns = 0;
  std::size_t reachability_patterns = 0;
  std::size_t rules = 0;
  std::size_t simple_candidates = 0;
  std::size_t reachability_candidates = 0;
  std::size_t rule_candidates = 0;
  std::size_t pruned_suffixes = 0;
  std::vector<std::string> warnings;
};

struct MineResult {
  double threshold = 0;
  FrequentSets sets;
  std::vector<Rule> rules;  // canonical order
  MineStats stats;
  Partition partition;
  std::optional<SamplePlan> plan;
};

/// Frequent nonempty attribute sets, level-wise. Tables hold every matching
/// vertex and no targets.
std::vector<FrequentPattern> discover_attribute_sets(const PropertyGraph& g, double threshold);

Frontier compute_frontier(const PropertyGraph& g, const std::vector<FrequentPattern>& attribute_sets,
                          double threshold, std::size_t max_length,
                          ReachabilityBound bound = ReachabilityBound::KBounded);

/// |E(set, label)| * max_in_degree^(psi * (length - 1)) > threshold.
bool suffix_admissible(const PropertyGraph& g, const AttrSet& set, LabelId label, std::size_t length,
                       double threshold, double psi = 1.0);

/// Upper bound on sources of a reachability pattern whose path ends in an
/// edge counted by `target_edges`: paths of 1..k hops give sum_{j<k} d_m^j.
bool reach_target_admissible(std::uint64_t target_edges, std::size_t max_in_degree, std::size_t max_length,
                             double threshold);

/// Runs the whole pipeline. Throws ConfigError for invalid configurations.
MineResult mine(const PropertyGraph& g, const MinerConfig& config);

/// Order used for output: total length, then antecedent text, then consequent text.
void sort_rules(std::vector<Rule>& rules, const PropertyGraph& g);

}  // namespace parm
