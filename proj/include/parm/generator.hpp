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

#include "parm/graph.hpp"

namespace parm {

struct GeneratorParams {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t labels = 1;
  std::size_t attributes = 1;
  /// Mean of the Poisson-distributed per-vertex attribute count.
  double attrs_per_vertex = 1.0;
  /// Hard cap on attributes per vertex; defaults to `attributes`.
  std::optional<std::size_t> max_attrs_per_vertex;
  /// Zipf exponent for attribute popularity; 0 is uniform.
  double attr_skew = 0.0;
  std::uint64_t seed = 0;
};

/// Vertices `v0..`, labels `l0..`, attributes `a0..`. Edge endpoints and
/// labels are uniform. Throws std::invalid_argument on infeasible parameters.
PropertyGraph generate_graph(const GeneratorParams& params);

}  // namespace parm
