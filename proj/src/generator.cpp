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

#include "parm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace parm {

PropertyGraph generate_graph(const GeneratorParams& p) {
  if (p.edges > 0 && p.vertices == 0) throw std::invalid_argument("edges need at least one vertex");
  if (p.edges > 0 && p.labels == 0) throw std::invalid_argument("edges need at least one label");
  if (!(p.attrs_per_vertex >= 0) || !std::isfinite(p.attrs_per_vertex))
    throw std::invalid_argument("attributes per vertex must be a nonnegative number");
  if (p.attrs_per_vertex > 0 && p.attributes == 0)
    throw std::invalid_argument("attributes per vertex is positive but there are no attributes");
  if (!(p.attr_skew >= 0) || !std::isfinite(p.attr_skew))
    throw std::invalid_argument("attribute skew must be a nonnegative number");
  if (p.vertices > 0xfffffff0u) throw std::invalid_argument("too many vertices");

  std::mt19937_64 rng(p.seed);
  GraphBuilder b;
  std::vector<AttrId> attr_ids;
  for (std::size_t a = 0; a < p.attributes; ++a) attr_ids.push_back(b.intern_attribute("a" + std::to_string(a)));
  std::vector<LabelId> label_ids;
  for (std::size_t l = 0; l < p.labels; ++l) label_ids.push_back(b.intern_label("l" + std::to_string(l)));

  std::vector<double> weights(p.attributes);
  for (std::size_t a = 0; a < p.attributes; ++a) weights[a] = 1.0 / std::pow(static_cast<double>(a + 1), p.attr_skew);
  std::discrete_distribution<std::size_t> pick_attr(weights.begin(), weights.end());
  std::poisson_distribution<int> count_attrs(p.attrs_per_vertex > 0 ? p.attrs_per_vertex : 1.0);
  const std::size_t cap = std::min(p.max_attrs_per_vertex.value_or(p.attributes), p.attributes);

  for (std::size_t v = 0; v < p.vertices; ++v) {
    AttrSet attrs;
    if (p.attrs_per_vertex > 0) {
      const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(count_attrs(rng)), cap);
      while (attrs.size() < want) {
        const AttrId a = attr_ids[pick_attr(rng)];
        if (std::find(attrs.begin(), attrs.end(), a) == attrs.end()) attrs.push_back(a);
      }
    }
    b.add_vertex_ids("v" + std::to_string(v), std::move(attrs));
  }
  if (p.edges > 0) {
    std::uniform_int_distribution<VertexId> pick_vertex(0, static_cast<VertexId>(p.vertices - 1));
    std::uniform_int_distribution<std::size_t> pick_label(0, p.labels - 1);
    for (std::size_t e = 0; e < p.edges; ++e) {
      const VertexId s = pick_vertex(rng);
      const LabelId l = label_ids[pick_label(rng)];
      const VertexId d = pick_vertex(rng);
      b.add_edge_ids(s, l, d);
    }
  }
  return std::move(b).finish();
}

}  // namespace parm
