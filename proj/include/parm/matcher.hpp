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
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "parm/graph.hpp"
#include "parm/pattern.hpp"

namespace parm {

/// Matched sources of a pattern, each with the end vertices of its matching
/// paths. Sources are ascending; each target list is ascending and nonempty.
/// Tables that will never be extended may drop their targets to save memory.
class MatchTable {
 public:
  MatchTable() = default;
  explicit MatchTable(PathPattern p) : pattern(std::move(p)) {}

  PathPattern pattern;

  std::size_t size() const { return sources_.size(); }
  bool empty() const { return sources_.empty(); }
  const std::vector<VertexId>& sources() const { return sources_; }
  VertexId source(std::size_t i) const { return sources_[i]; }
  bool has_targets() const { return has_targets_; }
  std::span<const VertexId> targets_of(std::size_t i) const {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }
  std::size_t total_targets() const { return targets_.size(); }
  bool contains(VertexId v) const;
  /// Index of `v` among the sources, or size() when absent.
  std::size_t find(VertexId v) const;

  /// Appends an entry; `src` must exceed every source already present.
  void add(VertexId src, std::span<const VertexId> targets);
  /// Appends a source without targets (only on target-less tables).
  void add_source(VertexId src);
  void drop_targets();
  static MatchTable sources_only(PathPattern p, std::vector<VertexId> sources);

 private:
  std::vector<VertexId> sources_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> targets_;
  bool has_targets_ = true;
};

/// Restricts matching to the vertices a worker owns. `owner[v]` names the
/// worker, or kUnowned for vertices eliminated from matching. A null owner
/// array means every vertex belongs to the shard.
struct Shard {
  static constexpr std::uint16_t kUnowned = 0xffff;
  const std::vector<std::uint16_t>* owner = nullptr;
  std::uint16_t id = 0;
  bool owns(VertexId v) const { return owner == nullptr || (*owner)[v] == id; }
};

/// Per-source vertices reachable through 1..k edges of one label.
class ReachSet {
 public:
  ReachSet() = default;
  ReachSet(LabelId label, std::vector<std::size_t> offsets, std::vector<VertexId> targets)
      : label_(label), offsets_(std::move(offsets)), targets_(std::move(targets)) {}
  LabelId label() const { return label_; }
  std::span<const VertexId> reach(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t total() const { return targets_.size(); }

 private:
  LabelId label_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> targets_;
};

using ReachSets = std::unordered_map<LabelId, ReachSet>;

/// Length-0 table: every owned v with A ⊆ A(v), mapped to {v}.
MatchTable match_zero(const PropertyGraph& g, const AttrSet& set, Shard shard = {});

/// One hop along `label` into vertices carrying `set`. Only entries owned by
/// `shard` are processed, and when `only` is given only sources listed in it
/// (ascending) are considered.
MatchTable extend_matches(const PropertyGraph& g, const MatchTable& table, LabelId label, const AttrSet& set,
                          Shard shard = {}, const std::vector<VertexId>* only = nullptr);

/// For one (table, label): number of owned sources whose one-hop extension
/// reaches a vertex carrying attribute b, for every attribute b.
std::vector<std::uint32_t> extension_counts(const PropertyGraph& g, const MatchTable& table, LabelId label,
                                            Shard shard = {});

/// All labels at once: entry [label * num_attributes + b] of the result.
std::vector<std::uint32_t> extension_counts_all(const PropertyGraph& g, const MatchTable& table, Shard shard = {});

/// Horizontal extension at the source position: keeps sources carrying `extra`.
/// Rejects any other position.
MatchTable restrict_sources(const PropertyGraph& g, const MatchTable& table, const AttrSet& extra,
                            std::size_t position);

/// BFS over each label's subgraph. `k` bounds path length unless `unbounded`.
ReachSets build_reach_sets(const PropertyGraph& g, const std::vector<LabelId>& labels, std::size_t k,
                           bool unbounded = false);
ReachSet build_reach_set(const PropertyGraph& g, LabelId label, std::size_t k, bool unbounded = false);

MatchTable match_reachability(const PropertyGraph& g, const PathPattern& pattern, const ReachSet& reach,
                              Shard shard = {}, const std::vector<VertexId>* only = nullptr,
                              bool keep_targets = true);

/// Reachability counterpart of extension_counts: for sources in `table`
/// (a length-0 table), how many reach a vertex carrying b.
std::vector<std::uint32_t> reachability_counts(const PropertyGraph& g, const MatchTable& table,
                                               const ReachSet& reach, Shard shard = {});

/// From-scratch evaluation of any pattern. Reachability patterns need their
/// label in `reach`.
MatchTable match_pattern(const PropertyGraph& g, const PathPattern& pattern, const ReachSets& reach,
                         Shard shard = {});

/// Concatenates per-shard tables of the same pattern into one ascending table.
MatchTable merge_tables(std::vector<MatchTable> parts);

std::vector<VertexId> intersect(std::span<const VertexId> a, std::span<const VertexId> b);
std::size_t intersection_size(std::span<const VertexId> a, std::span<const VertexId> b);

}  // namespace parm
