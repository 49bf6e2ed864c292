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

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parm/graph.hpp"

namespace parm {

enum class PatternKind : std::uint8_t { Simple = 0, Reachability = 1 };

/// A path pattern: attribute-set constraints on vertices joined by edge labels.
///
/// Simple patterns hold n+1 attribute sets and n labels (n >= 0). A
/// reachability pattern holds exactly two sets and one label, read as "a path
/// of one or more edges all carrying that label". Empty sets are wildcards.
/// Every stored set is sorted and duplicate-free, so structurally equal
/// patterns compare equal.
class PathPattern {
 public:
  PathPattern() : sets_(1) {}

  static PathPattern vertex(AttrSet set);
  static PathPattern simple(std::vector<AttrSet> sets, std::vector<LabelId> labels);
  static PathPattern reachability(AttrSet source, LabelId label, AttrSet target);

  PatternKind kind() const { return kind_; }
  bool is_simple() const { return kind_ == PatternKind::Simple; }
  bool is_reachability() const { return kind_ == PatternKind::Reachability; }

  /// Number of hops; a reachability pattern counts as one.
  std::size_t length() const { return labels_.size(); }
  std::size_t total_attributes() const;

  const std::vector<AttrSet>& sets() const { return sets_; }
  const std::vector<LabelId>& labels() const { return labels_; }
  const AttrSet& set(std::size_t i) const { return sets_.at(i); }
  LabelId label(std::size_t i) const { return labels_.at(i); }

  /// First `n` hops of a simple pattern.
  PathPattern prefix(std::size_t n) const;
  /// Copy with the set at `position` replaced.
  PathPattern with_set(std::size_t position, AttrSet set) const;

  std::size_t hash() const;

  friend bool operator==(const PathPattern&, const PathPattern&) = default;
  friend std::strong_ordering operator<=>(const PathPattern& a, const PathPattern& b);

 private:
  PatternKind kind_ = PatternKind::Simple;
  std::vector<AttrSet> sets_;
  std::vector<LabelId> labels_;
};

struct PatternHash {
  std::size_t operator()(const PathPattern& p) const { return p.hash(); }
};

/// `p` dominates `q` iff q is no longer than p, shares p's labels on its
/// positions, and each of q's sets is a subset of p's set at the same position.
/// Patterns of different kinds never dominate each other.
bool dominates(const PathPattern& p, const PathPattern& q);

/// Appends one hop. Throws std::invalid_argument for reachability patterns.
PathPattern vertical_extend(const PathPattern& p, LabelId label, AttrSet set);

/// Apriori join of two siblings: same kind, length and labels, sets equal
/// everywhere except one position where each side contributes one attribute
/// the other lacks. Returns the union pattern, or nothing when they do not join.
std::optional<PathPattern> horizontal_extend(const PathPattern& p, const PathPattern& q);

/// Every attribute set has exactly one element.
bool is_unit(const PathPattern& p);

/// Canonical text: `<{a,b} -label-> {c}>`, `<{a} -label*-> {b}>`, `<{a}>`.
/// Attribute names are sorted lexicographically inside braces.
std::string to_text(const PathPattern& p, const PropertyGraph& graph);
std::string to_text(const PathPattern& p, const Dictionary& labels, const Dictionary& attributes);

/// Inverse of to_text. Throws std::invalid_argument on syntax errors or
/// names missing from the dictionaries.
PathPattern parse_pattern(std::string_view text, const Dictionary& labels, const Dictionary& attributes);
PathPattern parse_pattern(std::string_view text, const PropertyGraph& graph);

/// A rule candidate p_X => p_Y.
struct RuleCandidate {
  PathPattern antecedent;
  PathPattern consequent;
  friend bool operator==(const RuleCandidate&, const RuleCandidate&) = default;
};

/// Neither side dominates the other.
bool mutually_non_dominating(const PathPattern& x, const PathPattern& y);

}  // namespace parm
