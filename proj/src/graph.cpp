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

#include "parm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>

namespace parm {

AttrSet& normalize(AttrSet& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

AttrSet normalized(AttrSet set) {
  normalize(set);
  return set;
}

bool is_subset(std::span<const AttrId> needle, std::span<const AttrId> hay) {
  if (needle.size() > hay.size()) return false;
  if (needle.size() == 1) return std::binary_search(hay.begin(), hay.end(), needle[0]);
  return std::includes(hay.begin(), hay.end(), needle.begin(), needle.end());
}

FormatError::FormatError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      source_(std::move(source)),
      line_(line) {}

std::uint32_t Dictionary::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Dictionary::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

bool valid_name(std::string_view name, bool is_label) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == '{' || c == '}' || c == '<' || c == '>' || c == ',' || c == ' ' || c == '\t' ||
        c == '\n' || c == '\r')
      return false;
  }
  if (is_label && (name.back() == '*' || name.find("->") != std::string_view::npos)) return false;
  return true;
}

std::optional<VertexId> PropertyGraph::find_vertex(std::string_view name) const {
  auto it = vertex_ids_.find(std::string(name));
  if (it == vertex_ids_.end()) return std::nullopt;
  return it->second;
}

std::span<const VertexId> PropertyGraph::out_neighbors(VertexId v, LabelId label) const {
  auto first = out_label_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v]);
  auto last = out_label_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v + 1]);
  auto [lo, hi] = std::equal_range(first, last, label);
  auto b = static_cast<std::size_t>(lo - out_label_.begin());
  auto e = static_cast<std::size_t>(hi - out_label_.begin());
  return {out_dst_.data() + b, out_dst_.data() + e};
}

std::uint64_t PropertyGraph::count_sources(std::span<const AttrId> set, LabelId label) const {
  if (label >= num_labels()) return 0;
  for (AttrId a : set)
    if (a >= num_attributes()) return 0;
  if (set.empty()) return label_sources_[label];
  if (set.size() == 1) {
    auto it = single_sources_.find(std::uint64_t{set[0]} * num_labels() + label);
    return it == single_sources_.end() ? 0 : it->second;
  }
  std::span<const VertexId> srcs{label_src_.data() + label_src_offsets_[label],
                                 label_src_.data() + label_src_offsets_[label + 1]};
  std::uint64_t n = 0;
  for (VertexId v : srcs)
    if (has_all(v, set)) ++n;
  return n;
}

std::uint64_t PropertyGraph::count_target_edges(std::span<const AttrId> set, LabelId label) const {
  if (label >= num_labels()) return 0;
  for (AttrId a : set)
    if (a >= num_attributes()) return 0;
  if (set.empty()) return label_edges_[label];
  if (set.size() == 1) {
    auto it = single_targets_.find(std::uint64_t{set[0]} * num_labels() + label);
    return it == single_targets_.end() ? 0 : it->second;
  }
  std::span<const VertexId> dsts{label_dst_.data() + label_dst_offsets_[label],
                                 label_dst_.data() + label_dst_offsets_[label + 1]};
  std::uint64_t n = 0;
  for (VertexId v : dsts)
    if (has_all(v, set)) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// GraphBuilder

VertexId GraphBuilder::add_vertex_ids(std::string_view name, AttrSet attrs) {
  normalize(attrs);
  auto it = g_.vertex_ids_.find(std::string(name));
  if (it != g_.vertex_ids_.end()) throw std::invalid_argument("duplicate vertex '" + std::string(name) + "'");
  auto id = static_cast<VertexId>(g_.vertex_names_.size());
  g_.vertex_names_.emplace_back(name);
  g_.vertex_ids_.emplace(g_.vertex_names_.back(), id);
  pending_attrs_.push_back(std::move(attrs));
  return id;
}

VertexId GraphBuilder::add_vertex(std::string_view name, const std::vector<std::string>& attrs) {
  AttrSet ids;
  ids.reserve(attrs.size());
  for (const auto& a : attrs) ids.push_back(g_.attributes_.intern(a));
  return add_vertex_ids(name, std::move(ids));
}

VertexId GraphBuilder::vertex_or_implicit(std::string_view name) {
  auto it = g_.vertex_ids_.find(std::string(name));
  if (it != g_.vertex_ids_.end()) return it->second;
  ++implicit_;
  return add_vertex_ids(name, {});
}

void GraphBuilder::add_edge(std::string_view src, std::string_view label, std::string_view dst) {
  VertexId s = vertex_or_implicit(src);
  VertexId d = vertex_or_implicit(dst);
  add_edge_ids(s, g_.labels_.intern(label), d);
}

void GraphBuilder::add_edge_ids(VertexId src, LabelId label, VertexId dst) {
  if (src >= g_.vertex_names_.size() || dst >= g_.vertex_names_.size())
    throw std::out_of_range("edge endpoint out of range");
  if (label >= g_.labels_.size()) throw std::out_of_range("edge label out of range");
  g_.edges_.push_back({src, label, dst});
}

PropertyGraph GraphBuilder::finish() && {
  PropertyGraph g = std::move(g_);
  const std::size_t n = g.vertex_names_.size();
  const std::size_t nl = g.labels_.size();
  const std::size_t na = g.attributes_.size();
  g.implicit_vertices_ = implicit_;

  g.attr_offsets_.assign(1, 0);
  g.attr_offsets_.reserve(n + 1);
  for (auto& attrs : pending_attrs_) {
    g.attr_ids_.insert(g.attr_ids_.end(), attrs.begin(), attrs.end());
    g.attr_offsets_.push_back(g.attr_ids_.size());
  }
  pending_attrs_.clear();

  // Inverted attribute lists.
  std::vector<std::size_t> attr_count(na, 0);
  for (AttrId a : g.attr_ids_) ++attr_count[a];
  g.inv_offsets_.assign(na + 1, 0);
  for (std::size_t a = 0; a < na; ++a) g.inv_offsets_[a + 1] = g.inv_offsets_[a] + attr_count[a];
  g.inv_ids_.assign(g.attr_ids_.size(), 0);
  {
    std::vector<std::size_t> cursor(g.inv_offsets_.begin(), g.inv_offsets_.end() - 1);
    for (VertexId v = 0; v < n; ++v)
      for (AttrId a : g.attributes_of(v)) g.inv_ids_[cursor[a]++] = v;
  }

  // Degrees and distinct out-edges.
  g.out_degree_.assign(n, 0);
  g.in_degree_.assign(n, 0);
  g.label_edges_.assign(nl, 0);
  std::vector<std::pair<VertexId, std::pair<LabelId, VertexId>>> out;
  out.reserve(g.edges_.size());
  for (const Edge& e : g.edges_) {
    ++g.out_degree_[e.src];
    ++g.in_degree_[e.dst];
    ++g.label_edges_[e.label];
    out.push_back({e.src, {e.label, e.dst}});
  }
  g.max_in_degree_ = n == 0 ? 0 : *std::max_element(g.in_degree_.begin(), g.in_degree_.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  g.out_offsets_.assign(n + 1, 0);
  g.out_label_.resize(out.size());
  g.out_dst_.resize(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    ++g.out_offsets_[out[i].first + 1];
    g.out_label_[i] = out[i].second.first;
    g.out_dst_[i] = out[i].second.second;
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());

  // Per-label edge destinations (with multiplicity) and distinct sources.
  g.label_dst_offsets_.assign(nl + 1, 0);
  for (const Edge& e : g.edges_) ++g.label_dst_offsets_[e.label + 1];
  std::partial_sum(g.label_dst_offsets_.begin(), g.label_dst_offsets_.end(), g.label_dst_offsets_.begin());
  g.label_dst_.assign(g.edges_.size(), 0);
  {
    std::vector<std::size_t> cursor(g.label_dst_offsets_.begin(), g.label_dst_offsets_.end() - 1);
    for (const Edge& e : g.edges_) g.label_dst_[cursor[e.label]++] = e.dst;
  }
  g.label_sources_.assign(nl, 0);
  g.label_src_offsets_.assign(nl + 1, 0);
  for (VertexId v = 0; v < n; ++v) {
    auto labels = g.out_labels(v);
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (i == 0 || labels[i] != labels[i - 1]) ++g.label_src_offsets_[labels[i] + 1];
  }
  std::partial_sum(g.label_src_offsets_.begin(), g.label_src_offsets_.end(), g.label_src_offsets_.begin());
  g.label_src_.assign(g.label_src_offsets_.back(), 0);
  {
    std::vector<std::size_t> cursor(g.label_src_offsets_.begin(), g.label_src_offsets_.end() - 1);
    for (VertexId v = 0; v < n; ++v) {
      auto labels = g.out_labels(v);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0 && labels[i] == labels[i - 1]) continue;
        g.label_src_[cursor[labels[i]]++] = v;
        ++g.label_sources_[labels[i]];
        for (AttrId a : g.attributes_of(v)) ++g.single_sources_[std::uint64_t{a} * nl + labels[i]];
      }
    }
  }
  for (const Edge& e : g.edges_)
    for (AttrId a : g.attributes_of(e.dst)) ++g.single_targets_[std::uint64_t{a} * nl + e.label];

  return g;
}

// ---------------------------------------------------------------------------
// TSV loading

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <class Fn>
void for_each_line(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    fn(std::string_view(line), lineno);
  }
  if (in.bad()) throw FormatError(source, lineno, "read error");
}

}  // namespace

PropertyGraph load_graph(std::istream& vertex_source, std::istream& edge_source) {
  GraphBuilder b;
  for_each_line(vertex_source, "vertices", [&](std::string_view line, std::size_t no) {
    auto fields = split(line, '\t');
    if (fields.size() > 2) throw FormatError("vertices", no, "expected 'id<TAB>attributes', got " +
                                             std::to_string(fields.size()) + " fields");
    if (!valid_name(fields[0], false))
      throw FormatError("vertices", no, "invalid vertex id '" + std::string(fields[0]) + "'");
    if (b.has_vertex(fields[0]))
      throw FormatError("vertices", no, "duplicate vertex id '" + std::string(fields[0]) + "'");
    std::vector<std::string> attrs;
    if (fields.size() == 2 && !fields[1].empty()) {
      for (auto tok : split(fields[1], ',')) {
        if (tok.empty()) continue;
        if (!valid_name(tok, false))
          throw FormatError("vertices", no, "invalid attribute name '" + std::string(tok) + "'");
        attrs.emplace_back(tok);
      }
    }
    b.add_vertex(fields[0], attrs);
  });
  for_each_line(edge_source, "edges", [&](std::string_view line, std::size_t no) {
    auto fields = split(line, '\t');
    if (fields.size() != 3)
      throw FormatError("edges", no, "expected 'src<TAB>label<TAB>dst', got " + std::to_string(fields.size()) +
                                         " fields");
    if (!valid_name(fields[0], false) || !valid_name(fields[2], false))
      throw FormatError("edges", no, "invalid vertex id");
    if (!valid_name(fields[1], true))
      throw FormatError("edges", no, "invalid label '" + std::string(fields[1]) + "'");
    b.add_edge(fields[0], fields[1], fields[2]);
  });
  return std::move(b).finish();
}

PropertyGraph load_graph_files(const std::string& vertex_path, const std::string& edge_path) {
  std::ifstream vin(vertex_path);
  if (!vin) throw FormatError(vertex_path, 0, "cannot open");
  std::ifstream ein(edge_path);
  if (!ein) throw FormatError(edge_path, 0, "cannot open");
  try {
    return load_graph(vin, ein);
  } catch (const FormatError& e) {
    const std::string& path = e.source() == "vertices" ? vertex_path : edge_path;
    const std::string what = e.what();
    throw FormatError(path, e.line(), what.substr(what.find(": ") + 2));
  }
}

void save_graph(const PropertyGraph& graph, std::ostream& vertex_out, std::ostream& edge_out) {
  for (VertexId v = 0; v < graph.num_vertices(); ++v) {
    vertex_out << graph.vertex_name(v) << '\t';
    std::vector<std::string_view> names;
    for (AttrId a : graph.attributes_of(v)) names.push_back(graph.attributes().name(a));
    std::sort(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) vertex_out << (i ? "," : "") << names[i];
    vertex_out << '\n';
  }
  for (const Edge& e : graph.edges())
    edge_out << graph.vertex_name(e.src) << '\t' << graph.labels().name(e.label) << '\t'
             << graph.vertex_name(e.dst) << '\n';
}

bool same_graph(const PropertyGraph& a, const PropertyGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  for (VertexId v = 0; v < a.num_vertices(); ++v) {
    if (a.vertex_name(v) != b.vertex_name(v)) return false;
    std::set<std::string> sa, sb;
    for (AttrId x : a.attributes_of(v)) sa.insert(a.attributes().name(x));
    for (AttrId x : b.attributes_of(v)) sb.insert(b.attributes().name(x));
    if (sa != sb) return false;
  }
  for (std::size_t i = 0; i < a.num_edges(); ++i) {
    const Edge& x = a.edges()[i];
    const Edge& y = b.edges()[i];
    if (x.src != y.src || x.dst != y.dst || a.labels().name(x.label) != b.labels().name(y.label)) return false;
  }
  return true;
}

}  // namespace parm
