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

#include "parm/matcher.hpp"

#include <algorithm>
#include <stdexcept>

namespace parm {

bool MatchTable::contains(VertexId v) const { return find(v) != size(); }

std::size_t MatchTable::find(VertexId v) const {
  auto it = std::lower_bound(sources_.begin(), sources_.end(), v);
  if (it == sources_.end() || *it != v) return size();
  return static_cast<std::size_t>(it - sources_.begin());
}

void MatchTable::add(VertexId src, std::span<const VertexId> targets) {
  if (!has_targets_) throw std::logic_error("table has no targets");
  sources_.push_back(src);
  targets_.insert(targets_.end(), targets.begin(), targets.end());
  offsets_.push_back(targets_.size());
}

void MatchTable::add_source(VertexId src) {
  if (has_targets_) throw std::logic_error("table keeps targets");
  sources_.push_back(src);
}

void MatchTable::drop_targets() {
  has_targets_ = false;
  targets_ = {};
  offsets_ = {0};
}

MatchTable MatchTable::sources_only(PathPattern p, std::vector<VertexId> sources) {
  MatchTable t(std::move(p));
  t.has_targets_ = false;
  t.offsets_ = {0};
  t.sources_ = std::move(sources);
  return t;
}

MatchTable match_zero(const PropertyGraph& g, const AttrSet& set, Shard shard) {
  MatchTable t(PathPattern::vertex(set));
  auto consider = [&](VertexId v) {
    if (shard.owns(v) && g.has_all(v, set)) {
      VertexId self = v;
      t.add(v, std::span<const VertexId>(&self, 1));
    }
  };
  if (set.empty()) {
    for (VertexId v = 0; v < g.num_vertices(); ++v) consider(v);
  } else if (set[0] < g.num_attributes()) {
    for (VertexId v : g.vertices_with(set[0])) consider(v);
  }
  return t;
}

namespace {

void require_targets(const MatchTable& table) {
  if (!table.has_targets()) throw std::invalid_argument("table was built without targets");
}

// Entry indices of `table` to visit: all of them, or those whose source is in `only`.
template <typename Fn>
void for_each_entry(const MatchTable& table, Shard shard, const std::vector<VertexId>* only, Fn&& fn) {
  if (only == nullptr) {
    for (std::size_t i = 0; i < table.size(); ++i)
      if (shard.owns(table.source(i))) fn(i);
    return;
  }
  const auto& src = table.sources();
  std::size_t i = 0;
  for (VertexId v : *only) {
    while (i < src.size() && src[i] < v) ++i;
    if (i == src.size()) break;
    if (src[i] == v && shard.owns(v)) fn(i);
  }
}

}  // namespace

MatchTable extend_matches(const PropertyGraph& g, const MatchTable& table, LabelId label, const AttrSet& set,
                          Shard shard, const std::vector<VertexId>* only) {
  require_targets(table);
  MatchTable out(vertical_extend(table.pattern, label, set));
  if (label >= g.num_labels()) return out;
  std::vector<VertexId> next;
  for_each_entry(table, shard, only, [&](std::size_t i) {
    next.clear();
    for (VertexId t : table.targets_of(i))
      for (VertexId w : g.out_neighbors(t, label))
        if (g.has_all(w, set)) next.push_back(w);
    if (next.empty()) return;
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out.add(table.source(i), next);
  });
  return out;
}

std::vector<std::uint32_t> extension_counts(const PropertyGraph& g, const MatchTable& table, LabelId label,
                                            Shard shard) {
  require_targets(table);
  std::vector<std::uint32_t> counts(g.num_attributes(), 0);
  if (label >= g.num_labels()) return counts;
  std::vector<std::uint32_t> seen(g.num_attributes(), 0);
  std::uint32_t stamp = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!shard.owns(table.source(i))) continue;
    ++stamp;
    for (VertexId t : table.targets_of(i))
      for (VertexId w : g.out_neighbors(t, label))
        for (AttrId b : g.attributes_of(w))
          if (seen[b] != stamp) {
            seen[b] = stamp;
            ++counts[b];
          }
  }
  return counts;
}

std::vector<std::uint32_t> extension_counts_all(const PropertyGraph& g, const MatchTable& table, Shard shard) {
  require_targets(table);
  const std::size_t na = g.num_attributes();
  std::vector<std::uint32_t> counts(g.num_labels() * na, 0);
  std::vector<std::uint32_t> seen(counts.size(), 0);
  std::uint32_t stamp = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!shard.owns(table.source(i))) continue;
    ++stamp;
    for (VertexId t : table.targets_of(i)) {
      auto labels = g.out_labels(t);
      auto dsts = g.out_targets(t);
      for (std::size_t e = 0; e < labels.size(); ++e)
        for (AttrId b : g.attributes_of(dsts[e])) {
          const std::size_t slot = labels[e] * na + b;
          if (seen[slot] != stamp) {
            seen[slot] = stamp;
            ++counts[slot];
          }
        }
    }
  }
  return counts;
}

MatchTable restrict_sources(const PropertyGraph& g, const MatchTable& table, const AttrSet& extra,
                            std::size_t position) {
  if (position != 0) throw std::invalid_argument("restrict_sources only applies to the source position");
  AttrSet merged = table.pattern.set(0);
  merged.insert(merged.end(), extra.begin(), extra.end());
  PathPattern p = table.pattern.with_set(0, std::move(merged));
  if (!table.has_targets()) {
    std::vector<VertexId> kept;
    for (VertexId v : table.sources())
      if (g.has_all(v, extra)) kept.push_back(v);
    return MatchTable::sources_only(std::move(p), std::move(kept));
  }
  MatchTable out(std::move(p));
  for (std::size_t i = 0; i < table.size(); ++i)
    if (g.has_all(table.source(i), extra)) out.add(table.source(i), table.targets_of(i));
  return out;
}

ReachSet build_reach_set(const PropertyGraph& g, LabelId label, std::size_t k, bool unbounded) {
  if (k == 0 && !unbounded) throw std::invalid_argument("reachability depth must be at least 1");
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> offsets{0};
  offsets.reserve(n + 1);
  std::vector<VertexId> targets;
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t stamp = 0;
  std::vector<VertexId> frontier, next, found;
  for (VertexId v = 0; v < n; ++v) {
    ++stamp;
    found.clear();
    frontier.assign(1, v);
    // The start vertex is only reported when a cycle leads back to it.
    for (std::size_t depth = 1; !frontier.empty() && (unbounded || depth <= k); ++depth) {
      next.clear();
      for (VertexId u : frontier)
        for (VertexId w : g.out_neighbors(u, label))
          if (mark[w] != stamp) {
            mark[w] = stamp;
            next.push_back(w);
            found.push_back(w);
          }
      frontier.swap(next);
    }
    std::sort(found.begin(), found.end());
    targets.insert(targets.end(), found.begin(), found.end());
    offsets.push_back(targets.size());
  }
  return ReachSet(label, std::move(offsets), std::move(targets));
}

ReachSets build_reach_sets(const PropertyGraph& g, const std::vector<LabelId>& labels, std::size_t k,
                           bool unbounded) {
  ReachSets out;
  for (LabelId l : labels)
    if (l < g.num_labels()) out.emplace(l, build_reach_set(g, l, k, unbounded));
  return out;
}

MatchTable match_reachability(const PropertyGraph& g, const PathPattern& pattern, const ReachSet& reach,
                              Shard shard, const std::vector<VertexId>* only, bool keep_targets) {
  if (!pattern.is_reachability()) throw std::invalid_argument("not a reachability pattern");
  const AttrSet& a0 = pattern.set(0);
  const AttrSet& a1 = pattern.set(1);
  MatchTable out = keep_targets ? MatchTable(pattern) : MatchTable::sources_only(pattern, {});
  std::vector<VertexId> hit;
  auto consider = [&](VertexId v) {
    if (!shard.owns(v) || !g.has_all(v, a0)) return;
    hit.clear();
    for (VertexId w : reach.reach(v))
      if (g.has_all(w, a1)) {
        if (!keep_targets) {
          out.add_source(v);
          return;
        }
        hit.push_back(w);
      }
    if (!hit.empty()) out.add(v, hit);
  };
  if (only != nullptr) {
    for (VertexId v : *only) consider(v);
  } else if (!a0.empty() && a0[0] < g.num_attributes()) {
    for (VertexId v : g.vertices_with(a0[0])) consider(v);
  } else if (a0.empty()) {
    for (VertexId v = 0; v < g.num_vertices(); ++v) consider(v);
  }
  return out;
}

std::vector<std::uint32_t> reachability_counts(const PropertyGraph& g, const MatchTable& table,
                                               const ReachSet& reach, Shard shard) {
  std::vector<std::uint32_t> counts(g.num_attributes(), 0);
  std::vector<std::uint32_t> seen(g.num_attributes(), 0);
  std::uint32_t stamp = 0;
  for (VertexId v : table.sources()) {
    if (!shard.owns(v)) continue;
    ++stamp;
    for (VertexId w : reach.reach(v))
      for (AttrId b : g.attributes_of(w))
        if (seen[b] != stamp) {
          seen[b] = stamp;
          ++counts[b];
        }
  }
  return counts;
}

MatchTable match_pattern(const PropertyGraph& g, const PathPattern& pattern, const ReachSets& reach, Shard shard) {
  if (pattern.is_reachability()) {
    auto it = reach.find(pattern.label(0));
    if (it == reach.end()) {
      if (pattern.label(0) < g.num_labels()) throw std::invalid_argument("reach set missing for pattern label");
      return MatchTable(pattern);
    }
    return match_reachability(g, pattern, it->second, shard);
  }
  MatchTable t = match_zero(g, pattern.set(0), shard);
  for (std::size_t i = 0; i < pattern.length() && !t.empty(); ++i)
    t = extend_matches(g, t, pattern.label(i), pattern.set(i + 1));
  if (t.pattern != pattern) t.pattern = pattern;
  return t;
}

MatchTable merge_tables(std::vector<MatchTable> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return std::move(parts[0]);
  const bool targets = std::all_of(parts.begin(), parts.end(), [](const MatchTable& t) { return t.has_targets(); });
  struct Ref {
    VertexId source;
    std::size_t part, index;
  };
  std::vector<Ref> refs;
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (std::size_t i = 0; i < parts[p].size(); ++i) refs.push_back({parts[p].source(i), p, i});
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) { return a.source < b.source; });
  if (!targets) {
    std::vector<VertexId> src;
    src.reserve(refs.size());
    for (const Ref& r : refs) src.push_back(r.source);
    return MatchTable::sources_only(parts[0].pattern, std::move(src));
  }
  MatchTable out(parts[0].pattern);
  for (const Ref& r : refs) out.add(r.source, parts[r.part].targets_of(r.index));
  return out;
}

std::vector<VertexId> intersect(std::span<const VertexId> a, std::span<const VertexId> b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t intersection_size(std::span<const VertexId> a, std::span<const VertexId> b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace parm
