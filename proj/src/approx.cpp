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

#include "parm/approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace parm {

bool suffix_bound_exceeds(std::uint64_t target_edges, std::size_t max_in_degree, double exponent, double threshold) {
  const long double bound =
      static_cast<long double>(target_edges) * std::pow(static_cast<long double>(max_in_degree), exponent);
  return bound > threshold;
}

std::vector<SuffixCandidate> apply_candidate_reduction(const std::vector<SuffixCandidate>& frontier, double psi,
                                                       double threshold, std::size_t length,
                                                       std::size_t max_in_degree) {
  if (!(psi > 0.0 && psi <= 1.0)) throw std::invalid_argument("candidate reduction factor must be in (0, 1]");
  if (length == 0) throw std::invalid_argument("suffix length must be at least 1");
  const double exponent = psi * static_cast<double>(length - 1);
  std::vector<SuffixCandidate> kept;
  for (const auto& s : frontier)
    if (suffix_bound_exceeds(s.target_edges, max_in_degree, exponent, threshold)) kept.push_back(s);
  return kept;
}

std::size_t SamplePlan::sample_size() const {
  std::size_t n = 0;
  for (const auto& s : strata) n += s.sampled.size();
  return n;
}

std::pair<std::uint64_t, std::uint64_t> SamplePlan::coverage(const AttrSet& set) const {
  std::uint64_t population = 0, sampled = 0;
  for (const auto& s : strata)
    if (is_subset(set, s.signature)) {
      population += s.members.size();
      sampled += s.sampled.size();
    }
  return {population, sampled};
}

SamplePlan build_sample(const PropertyGraph& g, const std::vector<AttrId>& frequent_attributes, double rate,
                        std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("sampling rate must be in (0, 1]");
  std::map<AttrSet, std::vector<VertexId>> groups;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    AttrSet sig;
    for (AttrId a : g.attributes_of(v))
      if (std::binary_search(frequent_attributes.begin(), frequent_attributes.end(), a)) sig.push_back(a);
    if (!sig.empty()) groups[std::move(sig)].push_back(v);
  }
  SamplePlan plan;
  plan.rate = rate;
  plan.seed = seed;
  plan.stratum_of.assign(g.num_vertices(), -1);
  plan.in_sample.assign(g.num_vertices(), 0);
  std::mt19937_64 rng(seed);
  for (auto& [sig, members] : groups) {
    Stratum s;
    s.signature = sig;
    s.members = std::move(members);
    const auto want = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(s.members.size()) - 1e-12));
    const std::size_t take = std::min(s.members.size(), std::max<std::size_t>(want, 1));
    std::sample(s.members.begin(), s.members.end(), std::back_inserter(s.sampled), take, rng);
    const auto index = static_cast<std::int32_t>(plan.strata.size());
    for (VertexId v : s.members) plan.stratum_of[v] = index;
    for (VertexId v : s.sampled) plan.in_sample[v] = 1;
    plan.strata.push_back(std::move(s));
  }
  return plan;
}

FrequencyEstimate estimate_frequency(std::uint64_t matched, double rate, std::uint64_t population,
                                     std::uint64_t sampled, double z, bool finite_population) {
  if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("sampling rate must be in (0, 1]");
  FrequencyEstimate e;
  e.z = z;
  e.point = static_cast<double>(matched) / rate;
  e.ci_low = e.ci_high = e.point;
  const double n_expected = rate * static_cast<double>(population);
  if (population == 0 || sampled < 2 || n_expected - 1.0 <= 0.0) return e;
  const double N = static_cast<double>(population);
  const double mean = e.point / N;
  const double m = static_cast<double>(matched);
  const double rest = static_cast<double>(sampled) - m;
  const double ss = m * (1.0 - mean) * (1.0 - mean) + std::max(rest, 0.0) * mean * mean;
  const double var = ss / (n_expected - 1.0);
  e.variance = var;
  double half = z * std::sqrt(var) / std::sqrt(n_expected);
  if (finite_population) half *= std::sqrt(1.0 - rate);
  e.ci_low = N * (mean - half);
  e.ci_high = N * (mean + half);
  return e;
}

}  // namespace parm
