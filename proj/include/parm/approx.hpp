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
#include <vector>

#include "parm/graph.hpp"

namespace parm {

/// A trailing (label, attribute) hop together with |E({attribute}, label)|.
struct SuffixCandidate {
  LabelId label;
  AttrId attribute;
  std::uint64_t target_edges;
  friend bool operator==(const SuffixCandidate&, const SuffixCandidate&) = default;
};

/// target_edges * max_in_degree^exponent > threshold.
bool suffix_bound_exceeds(std::uint64_t target_edges, std::size_t max_in_degree, double exponent, double threshold);

/// Keeps the suffixes whose bound for a length-`length` pattern, with the
/// exponent scaled by `psi`, still exceeds `threshold`. psi = 1 is exact pruning.
std::vector<SuffixCandidate> apply_candidate_reduction(const std::vector<SuffixCandidate>& frontier, double psi,
                                                       double threshold, std::size_t length,
                                                       std::size_t max_in_degree);

/// Vertices grouped by their full set of frequent attributes.
struct Stratum {
  AttrSet signature;
  std::vector<VertexId> members;  // ascending
  std::vector<VertexId> sampled;  // ascending, ceil(rate * |members|) of them
};

struct SamplePlan {
  double rate = 1.0;
  std::uint64_t seed = 0;
  std::vector<Stratum> strata;          // ordered by signature
  std::vector<std::int32_t> stratum_of;  // per vertex; -1 when in no stratum
  std::vector<std::uint8_t> in_sample;   // per vertex

  std::size_t sample_size() const;
  /// Population and sample size over the strata whose signature contains `set`.
  std::pair<std::uint64_t, std::uint64_t> coverage(const AttrSet& set) const;
};

/// `frequent_attributes` must be ascending. Throws std::invalid_argument when
/// rate is outside (0, 1].
SamplePlan build_sample(const PropertyGraph& g, const std::vector<AttrId>& frequent_attributes, double rate,
                        std::uint64_t seed);

struct FrequencyEstimate {
  double point = 0;
  std::optional<double> variance;
  double ci_low = 0;
  double ci_high = 0;
  double z = 1.96;
};

/// Scales a sample count up by 1/rate. `population` is the number of vertices
/// in the strata the pattern can draw sources from and `sampled` how many of
/// them were drawn; they feed the indicator variance and the interval.
/// `finite_population` applies the (1 - rate) correction to the variance of
/// the mean.
FrequencyEstimate estimate_frequency(std::uint64_t matched, double rate, std::uint64_t population,
                                     std::uint64_t sampled, double z = 1.96, bool finite_population = true);

}  // namespace parm
