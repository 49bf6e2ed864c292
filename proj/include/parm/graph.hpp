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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace parm {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;
using AttrId = std::uint32_t;

/// Sorted, duplicate-free list of attribute ids.
using AttrSet = std::vector<AttrId>;

/// Sorts and deduplicates in place; returns the argument for chaining.
AttrSet& normalize(AttrSet& set);
AttrSet normalized(AttrSet set);

/// True iff every element of `needle` is in `hay`. Both must be sorted.
bool is_subset(std::span<const AttrId> needle, std::span<const AttrId> hay);

/// Raised for malformed input files; carries the 1-based line number.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::string source, std::size_t line, const std::string& what);
  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// Bidirectional name <-> dense id map.
class Dictionary {
 public:
  std::uint32_t intern(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

struct Edge {
  VertexId src;
  LabelId label;
  VertexId dst;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class GraphBuilder;

/// Immutable directed property graph with interned labels and attributes.
///
/// Besides the raw edge list it keeps, per vertex, the distinct out-edges
/// sorted by (label, destination), in-degrees counted with multiplicity, and
/// the singleton count tables used by suffix pruning. Safe for concurrent
/// reads once built.
class PropertyGraph {
 public:
  PropertyGraph() = default;

  std::size_t num_vertices() const { return vertex_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_attributes() const { return attributes_.size(); }

  const Dictionary& labels() const { return labels_; }
  const Dictionary& attributes() const { return attributes_; }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
  std::optional<VertexId> find_vertex(std::string_view name) const;

  std::span<const AttrId> attributes_of(VertexId v) const {
    return {attr_ids_.data() + attr_offsets_[v], attr_ids_.data() + attr_offsets_[v + 1]};
  }
  bool has_all(VertexId v, std::span<const AttrId> set) const {
    return is_subset(set, attributes_of(v));
  }

  std::span<const Edge> edges() const { return edges_; }

  /// Distinct destinations of `label`-edges leaving `v`, ascending.
  std::span<const VertexId> out_neighbors(VertexId v, LabelId label) const;
  /// Distinct (label, destination) pairs leaving `v`, ordered by label then destination.
  std::span<const LabelId> out_labels(VertexId v) const {
    return {out_label_.data() + out_offsets_[v], out_label_.data() + out_offsets_[v + 1]};
  }
  std::span<const VertexId> out_targets(VertexId v) const {
    return {out_dst_.data() + out_offsets_[v], out_dst_.data() + out_offsets_[v + 1]};
  }

  /// Degrees count multi-edges.
  std::size_t out_degree(VertexId v) const { return out_degree_[v]; }
  std::size_t in_degree(VertexId v) const { return in_degree_[v]; }
  std::size_t max_in_degree() const { return max_in_degree_; }
  std::size_t label_edge_count(LabelId label) const { return label_edges_.at(label); }

  /// Vertices carrying attribute `a`, ascending.
  std::span<const VertexId> vertices_with(AttrId a) const {
    return {inv_ids_.data() + inv_offsets_[a], inv_ids_.data() + inv_offsets_[a + 1]};
  }

  /// |{v : A ⊆ A(v), v has an out-edge labeled `label`}|. Unknown ids yield 0.
  std::uint64_t count_sources(std::span<const AttrId> set, LabelId label) const;
  /// |{(v, label, v') ∈ E : A ⊆ A(v')}|, multi-edges counted. Unknown ids yield 0.
  std::uint64_t count_target_edges(std::span<const AttrId> set, LabelId label) const;

  /// Vertices created implicitly because the edge file referenced them.
  std::size_t implicit_vertices() const { return implicit_vertices_; }

 private:
  friend class GraphBuilder;

  std::vector<std::string> vertex_names_;
  std::unordered_map<std::string, VertexId> vertex_ids_;
  Dictionary labels_;
  Dictionary attributes_;

  std::vector<std::size_t> attr_offsets_{0};
  std::vector<AttrId> attr_ids_;
  std::vector<Edge> edges_;

  std::vector<std::size_t> out_offsets_{0};
  std::vector<LabelId> out_label_;
  std::vector<VertexId> out_dst_;
  std::vector<std::size_t> out_degree_;
  std::vector<std::size_t> in_degree_;
  std::size_t max_in_degree_ = 0;
  std::vector<std::size_t> label_edges_;
  std::vector<std::uint64_t> label_sources_;

  std::vector<std::size_t> inv_offsets_{0};
  std::vector<VertexId> inv_ids_;

  // Singleton tables keyed by attr * num_labels + label.
  std::unordered_map<std::uint64_t, std::uint64_t> single_sources_;
  std::unordered_map<std::uint64_t, std::uint64_t> single_targets_;
  // Per label: destination of every edge (with multiplicity), and the
  // distinct sources.
  std::vector<std::size_t> label_dst_offsets_{0};
  std::vector<VertexId> label_dst_;
  std::vector<std::size_t> label_src_offsets_{0};
  std::vector<VertexId> label_src_;

  std::size_t implicit_vertices_ = 0;
};

/// Incremental construction of a PropertyGraph.
class GraphBuilder {
 public:
  /// Adds a vertex; throws std::invalid_argument on a duplicate name.
  VertexId add_vertex(std::string_view name, const std::vector<std::string>& attrs);
  /// Adds an edge; unknown endpoint names create attribute-less vertices.
  void add_edge(std::string_view src, std::string_view label, std::string_view dst);
  /// Id-based variants for generators and bindings.
  VertexId add_vertex_ids(std::string_view name, AttrSet attrs);
  void add_edge_ids(VertexId src, LabelId label, VertexId dst);

  AttrId intern_attribute(std::string_view name) { return g_.attributes_.intern(name); }
  LabelId intern_label(std::string_view name) { return g_.labels_.intern(name); }
  bool has_vertex(std::string_view name) const { return g_.vertex_ids_.contains(std::string(name)); }
  std::size_t implicit_vertices() const { return implicit_; }

  PropertyGraph finish() &&;

 private:
  VertexId vertex_or_implicit(std::string_view name);

  PropertyGraph g_;
  std::vector<AttrSet> pending_attrs_;
  std::size_t implicit_ = 0;
};

/// Parses the vertex and edge TSV streams.
///
/// Vertex lines are `id<TAB>a1,a2,...` (the attribute field may be empty or
/// missing); edge lines are `src<TAB>label<TAB>dst`. Blank lines and lines
/// starting with `#` are ignored. Throws FormatError on malformed lines.
PropertyGraph load_graph(std::istream& vertex_source, std::istream& edge_source);
PropertyGraph load_graph_files(const std::string& vertex_path, const std::string& edge_path);

/// Writes the graph in the same TSV formats: vertices in id order with their
/// attribute names sorted, edges in insertion order. load_graph of the output
/// reproduces g, and saving that again yields identical text.
void save_graph(const PropertyGraph& graph, std::ostream& vertex_out, std::ostream& edge_out);

/// True iff names, attributes, labels and edge lists are identical.
bool same_graph(const PropertyGraph& a, const PropertyGraph& b);

/// Characters that would make the canonical pattern text ambiguous.
bool valid_name(std::string_view name, bool is_label);

}  // namespace parm
