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

#include "parm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <string>
#include <utility>

namespace parm {

namespace {

// Source sets as fixed-width bitsets; the guard keeps |V| small.
class VertexBits {
 public:
  explicit VertexBits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(VertexId v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t count_and(const VertexBits& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  std::vector<VertexId> list() const {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < words_.size(); ++i)
      for (std::uint64_t w = words_[i]; w; w &= w - 1)
        out.push_back(static_cast<VertexId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
    return out;
  }

 private:
  std::vector<std::uint64_t> words_;
};

using Matches = std::map<PathPattern, VertexBits>;

void check_guard(const PropertyGraph& g, std::size_t k, const OracleLimits& lim) {
  std::size_t widest = 0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) widest = std::max(widest, g.attributes_of(v).size());
  if (g.num_vertices() > lim.max_vertices || g.num_attributes() > lim.max_attributes || k > lim.max_length ||
      widest > lim.max_attributes_per_vertex) {
    throw OracleGuardError("instance too large for exhaustive mining: |V|=" + std::to_string(g.num_vertices()) +
                           " (max " + std::to_string(lim.max_vertices) + "), |A|=" +
                           std::to_string(g.num_attributes()) + " (max " + std::to_string(lim.max_attributes) +
                           "), k=" + std::to_string(k) + " (max " + std::to_string(lim.max_length) +
                           "), attributes per vertex " + std::to_string(widest) + " (max " +
                           std::to_string(lim.max_attributes_per_vertex) + ")");
  }
  if (k == 0) throw OracleGuardError("maximum length must be at least 1");
}

// All nonempty subsets of a vertex's attributes.
std::vector<AttrSet> nonempty_subsets(std::span<const AttrId> attrs) {
  std::vector<AttrSet> out;
  const std::size_t n = attrs.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    AttrSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(attrs[i]);
    out.push_back(std::move(s));
  }
  return out;
}

void record(Matches& m, const PathPattern& p, VertexId source, std::size_t n) {
  auto it = m.find(p);
  if (it == m.end()) it = m.emplace(p, VertexBits(n)).first;
  it->second.set(source);
}

// Distinct (label, destination) pairs out of every vertex, straight from the edge list.
std::vector<std::vector<std::pair<LabelId, VertexId>>> adjacency(const PropertyGraph& g) {
  std::vector<std::vector<std::pair<LabelId, VertexId>>> adj(g.num_vertices());
  for (const Edge& e : g.edges()) adj[e.src].emplace_back(e.label, e.dst);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

// Vertices at the end of some walk of 1..k edges labeled `label` from v.
std::vector<std::set<VertexId>> label_reach(const PropertyGraph& g,
                                            const std::vector<std::vector<std::pair<LabelId, VertexId>>>& adj,
                                            LabelId label, std::size_t k, bool unbounded) {
  const std::size_t n = g.num_vertices();
  // Walks longer than |V| revisit a (vertex, depth) state, so n bounds the closure.
  const std::size_t depth = unbounded ? std::max<std::size_t>(n, 1) : k;
  std::vector<std::set<VertexId>> reach(n);
  for (VertexId v = 0; v < n; ++v) {
    std::set<VertexId> layer{v};
    for (std::size_t d = 1; d <= depth && !layer.empty(); ++d) {
      std::set<VertexId> next;
      for (VertexId u : layer)
        for (auto [l, w] : adj[u])
          if (l == label) next.insert(w);
      reach[v].insert(next.begin(), next.end());
      layer = std::move(next);
    }
  }
  return reach;
}

void add_reachability(const PropertyGraph& g, std::size_t k, bool unbounded,
                      const std::vector<std::vector<std::pair<LabelId, VertexId>>>& adj,
                      const std::vector<std::vector<AttrSet>>& subsets, Matches& m) {
  for (LabelId l = 0; l < g.num_labels(); ++l) {
    auto reach = label_reach(g, adj, l, k, unbounded);
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      for (VertexId w : reach[v])
        for (const AttrSet& s0 : subsets[v])
          for (const AttrSet& s1 : subsets[w]) record(m, PathPattern::reachability(s0, l, s1), v, g.num_vertices());
  }
}

Matches by_path_enumeration(const PropertyGraph& g, std::size_t k, bool unbounded) {
  const std::size_t n = g.num_vertices();
  auto adj = adjacency(g);
  std::vector<std::vector<AttrSet>> subsets(n);
  for (VertexId v = 0; v < n; ++v) subsets[v] = nonempty_subsets(g.attributes_of(v));
  Matches m;
  std::vector<VertexId> walk;
  std::vector<LabelId> labels;

  // Emits every pattern realized by the current walk.
  auto emit = [&](VertexId source) {
    std::vector<std::size_t> pick(walk.size(), 0);
    while (true) {
      std::vector<AttrSet> sets;
      for (std::size_t i = 0; i < walk.size(); ++i) sets.push_back(subsets[walk[i]][pick[i]]);
      record(m, PathPattern::simple(std::move(sets), labels), source, n);
      std::size_t i = 0;
      while (i < walk.size() && ++pick[i] == subsets[walk[i]].size()) pick[i++] = 0;
      if (i == walk.size()) break;
    }
  };
  std::function<void(VertexId)> dfs = [&](VertexId source) {
    emit(source);
    if (labels.size() == k) return;
    for (auto [l, w] : adj[walk.back()]) {
      if (subsets[w].empty()) continue;
      walk.push_back(w);
      labels.push_back(l);
      dfs(source);
      walk.pop_back();
      labels.pop_back();
    }
  };
  for (VertexId v = 0; v < n; ++v) {
    if (subsets[v].empty()) continue;
    walk.assign(1, v);
    labels.clear();
    dfs(v);
  }
  add_reachability(g, k, unbounded, adj, subsets, m);
  return m;
}

Matches by_relational_join(const PropertyGraph& g, std::size_t k, bool unbounded) {
  const std::size_t n = g.num_vertices();
  using Relation = std::set<std::pair<VertexId, VertexId>>;  // (source, current end)
  std::set<AttrSet> family;
  for (VertexId v = 0; v < n; ++v)
    for (auto& s : nonempty_subsets(g.attributes_of(v))) family.insert(std::move(s));
  auto carries = [&](VertexId v, const AttrSet& s) {
    auto a = g.attributes_of(v);
    return std::includes(a.begin(), a.end(), s.begin(), s.end());
  };
  std::map<LabelId, Relation> edges;
  for (const Edge& e : g.edges()) edges[e.label].insert({e.src, e.dst});

  Matches m;
  // Depth-first over patterns so only one relation per length is alive.
  std::function<void(const PathPattern&, const Relation&, std::size_t)> grow =
      [&](const PathPattern& p, const Relation& r, std::size_t len) {
        for (auto [src, end] : r) record(m, p, src, n);
        if (len == k) return;
        for (const auto& [l, er] : edges)
          for (const AttrSet& s : family) {
            Relation out;
            for (auto [src, end] : r)
              for (auto it = er.lower_bound({end, 0}); it != er.end() && it->first == end; ++it)
                if (carries(it->second, s)) out.insert({src, it->second});
            if (!out.empty()) grow(vertical_extend(p, l, s), out, len + 1);
          }
      };
  for (const AttrSet& s : family) {
    Relation r;
    for (VertexId v = 0; v < n; ++v)
      if (carries(v, s)) r.insert({v, v});
    if (!r.empty()) grow(PathPattern::vertex(s), r, 0);
  }

  // Bounded closure by repeated composition with the label's edge relation.
  for (const auto& [l, er] : edges) {
    Relation closure = er, frontier = er;
    const std::size_t depth = unbounded ? std::max<std::size_t>(n, 1) : k;
    for (std::size_t d = 2; d <= depth && !frontier.empty(); ++d) {
      Relation step;
      for (auto [src, end] : frontier)
        for (auto it = er.lower_bound({end, 0}); it != er.end() && it->first == end; ++it) step.insert({src, it->second});
      frontier.clear();
      for (const auto& pr : step)
        if (closure.insert(pr).second || !unbounded) frontier.insert(pr);
    }
    for (const AttrSet& s0 : family)
      for (const AttrSet& s1 : family) {
        PathPattern p = PathPattern::reachability(s0, l, s1);
        for (auto [src, end] : closure)
          if (carries(src, s0) && carries(end, s1)) record(m, p, src, n);
      }
  }
  return m;
}

bool oracle_dominates(const PathPattern& big, const PathPattern& small) {
  if (big.is_reachability() != small.is_reachability()) return false;
  if (small.labels().size() > big.labels().size()) return false;
  for (std::size_t i = 0; i < small.labels().size(); ++i)
    if (big.labels()[i] != small.labels()[i]) return false;
  for (std::size_t i = 0; i < small.sets().size(); ++i) {
    const AttrSet& a = big.sets()[i];
    for (AttrId x : small.sets()[i])
      if (std::find(a.begin(), a.end(), x) == a.end()) return false;
  }
  return true;
}

Matches compute(const PropertyGraph& g, std::size_t k, bool unbounded, OracleStrategy strategy,
                const OracleLimits& limits) {
  check_guard(g, k, limits);
  return strategy == OracleStrategy::PathEnumeration ? by_path_enumeration(g, k, unbounded)
                                                     : by_relational_join(g, k, unbounded);
}

}  // namespace

std::map<PathPattern, std::vector<VertexId>> oracle_all_matches(const PropertyGraph& g, std::size_t max_length,
                                                                bool unbounded_reachability,
                                                                OracleStrategy strategy, OracleLimits limits) {
  std::map<PathPattern, std::vector<VertexId>> out;
  for (auto& [p, bits] : compute(g, max_length, unbounded_reachability, strategy, limits)) out.emplace(p, bits.list());
  return out;
}

OracleResult oracle_mine(const PropertyGraph& g, double threshold, std::size_t max_length,
                         bool unbounded_reachability, OracleStrategy strategy, OracleLimits limits) {
  OracleResult res;
  res.threshold = threshold;
  Matches all = compute(g, max_length, unbounded_reachability, strategy, limits);
  std::vector<std::pair<const PathPattern*, const VertexBits*>> rule_side;
  for (const auto& [p, bits] : all) {
    const std::size_t c = bits.count();
    if (!(static_cast<double>(c) > threshold)) continue;
    res.patterns.emplace(p, bits.list());
    if (p.length() >= 1) rule_side.emplace_back(&p, &bits);
  }
  const double nv = static_cast<double>(g.num_vertices());
  for (const auto& [x, xb] : rule_side)
    for (const auto& [y, yb] : rule_side) {
      if (x == y) continue;
      if (oracle_dominates(*x, *y) || oracle_dominates(*y, *x)) continue;
      const std::size_t both = xb->count_and(*yb);
      if (!(static_cast<double>(both) > threshold)) continue;
      OracleRule r;
      r.antecedent = *x;
      r.consequent = *y;
      r.asupp = both;
      const double b = static_cast<double>(both);
      const double cx = static_cast<double>(xb->count());
      const double cy = static_cast<double>(yb->count());
      r.rsupp = b / nv;
      r.conf = b / cx;
      r.lift = b * nv / (cx * cy);
      res.rules.push_back(std::move(r));
    }
  return res;
}

}  // namespace parm
