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

#include "parm/pattern.hpp"

#include <algorithm>
#include <stdexcept>

namespace parm {

PathPattern PathPattern::vertex(AttrSet set) {
  PathPattern p;
  p.sets_[0] = normalized(std::move(set));
  return p;
}

PathPattern PathPattern::simple(std::vector<AttrSet> sets, std::vector<LabelId> labels) {
  if (sets.size() != labels.size() + 1)
    throw std::invalid_argument("simple pattern needs exactly one more attribute set than labels");
  PathPattern p;
  p.sets_ = std::move(sets);
  for (auto& s : p.sets_) normalize(s);
  p.labels_ = std::move(labels);
  return p;
}

PathPattern PathPattern::reachability(AttrSet source, LabelId label, AttrSet target) {
  PathPattern p;
  p.kind_ = PatternKind::Reachability;
  p.sets_ = {normalized(std::move(source)), normalized(std::move(target))};
  p.labels_ = {label};
  return p;
}

std::size_t PathPattern::total_attributes() const {
  std::size_t n = 0;
  for (const auto& s : sets_) n += s.size();
  return n;
}

PathPattern PathPattern::prefix(std::size_t n) const {
  if (!is_simple()) throw std::invalid_argument("prefix of a reachability pattern");
  if (n > length()) throw std::out_of_range("prefix longer than pattern");
  PathPattern p;
  p.sets_.assign(sets_.begin(), sets_.begin() + static_cast<std::ptrdiff_t>(n + 1));
  p.labels_.assign(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(n));
  return p;
}

PathPattern PathPattern::with_set(std::size_t position, AttrSet set) const {
  PathPattern p = *this;
  p.sets_.at(position) = normalized(std::move(set));
  return p;
}

std::size_t PathPattern::hash() const {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    mix(0xabcdefULL + sets_[i].size());
    for (AttrId a : sets_[i]) mix(a);
    if (i < labels_.size()) mix(0x51ed27ULL ^ labels_[i]);
  }
  return h;
}

std::strong_ordering operator<=>(const PathPattern& a, const PathPattern& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.labels_.size() <=> b.labels_.size(); c != 0) return c;
  if (auto c = a.labels_ <=> b.labels_; c != 0) return c;
  return a.sets_ <=> b.sets_;
}

bool dominates(const PathPattern& p, const PathPattern& q) {
  if (p.kind() != q.kind()) return false;
  if (q.length() > p.length()) return false;
  for (std::size_t i = 0; i < q.length(); ++i)
    if (q.label(i) != p.label(i)) return false;
  for (std::size_t i = 0; i <= q.length(); ++i)
    if (!is_subset(q.set(i), p.set(i))) return false;
  return true;
}

bool mutually_non_dominating(const PathPattern& x, const PathPattern& y) {
  return !dominates(x, y) && !dominates(y, x);
}

PathPattern vertical_extend(const PathPattern& p, LabelId label, AttrSet set) {
  if (!p.is_simple()) throw std::invalid_argument("reachability patterns do not extend vertically");
  auto sets = p.sets();
  auto labels = p.labels();
  sets.push_back(std::move(set));
  labels.push_back(label);
  return PathPattern::simple(std::move(sets), std::move(labels));
}

std::optional<PathPattern> horizontal_extend(const PathPattern& p, const PathPattern& q) {
  if (p.kind() != q.kind() || p.length() != q.length() || p.labels() != q.labels()) return std::nullopt;
  std::optional<std::size_t> diff;
  for (std::size_t i = 0; i < p.sets().size(); ++i) {
    if (p.set(i) == q.set(i)) continue;
    if (diff) return std::nullopt;
    diff = i;
  }
  if (!diff) return std::nullopt;
  const AttrSet& a = p.set(*diff);
  const AttrSet& b = q.set(*diff);
  if (a.size() != b.size()) return std::nullopt;
  AttrSet u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  if (u.size() != a.size() + 1) return std::nullopt;
  return p.with_set(*diff, std::move(u));
}

bool is_unit(const PathPattern& p) {
  return std::all_of(p.sets().begin(), p.sets().end(), [](const AttrSet& s) { return s.size() == 1; });
}

// ---------------------------------------------------------------------------
// Canonical text

namespace {

void append_set(std::string& out, const AttrSet& set, const Dictionary& attributes) {
  std::vector<std::string_view> names;
  names.reserve(set.size());
  for (AttrId a : set) names.emplace_back(attributes.name(a));
  std::sort(names.begin(), names.end());
  out += '{';
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  out += '}';
}

class PatternParser {
 public:
  PatternParser(std::string_view text, const Dictionary& labels, const Dictionary& attributes)
      : s_(text), labels_(labels), attributes_(attributes) {}

  PathPattern parse() {
    expect('<');
    std::vector<AttrSet> sets{parse_set()};
    std::vector<LabelId> labels;
    bool reach = false;
    while (peek() != '>') {
      if (reach) fail("reachability pattern has exactly one hop");
      expect(' ');
      expect('-');
      auto end = s_.find("-> ", pos_);
      if (end == std::string_view::npos) fail("unterminated label");
      std::string_view label = s_.substr(pos_, end - pos_);
      pos_ = end + 3;
      if (!label.empty() && label.back() == '*') {
        if (!labels.empty()) fail("starred label inside a simple pattern");
        reach = true;
        label.remove_suffix(1);
      }
      auto id = labels_.find(label);
      if (!id) fail("unknown label '" + std::string(label) + "'");
      labels.push_back(*id);
      sets.push_back(parse_set());
    }
    expect('>');
    if (pos_ != s_.size()) fail("trailing characters");
    if (reach) return PathPattern::reachability(std::move(sets[0]), labels[0], std::move(sets[1]));
    return PathPattern::simple(std::move(sets), std::move(labels));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("pattern '" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  char peek() const {
    if (pos_ >= s_.size()) fail("unexpected end");
    return s_[pos_];
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  AttrSet parse_set() {
    expect('{');
    AttrSet set;
    if (peek() == '}') {
      ++pos_;
      return set;
    }
    while (true) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}') ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto id = attributes_.find(name);
      if (!id) fail("unknown attribute '" + std::string(name) + "'");
      set.push_back(*id);
      if (peek() == '}') {
        ++pos_;
        return set;
      }
      expect(',');
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  const Dictionary& labels_;
  const Dictionary& attributes_;
};

}  // namespace

std::string to_text(const PathPattern& p, const Dictionary& labels, const Dictionary& attributes) {
  std::string out = "<";
  append_set(out, p.set(0), attributes);
  for (std::size_t i = 0; i < p.length(); ++i) {
    out += " -";
    out += labels.name(p.label(i));
    if (p.is_reachability()) out += '*';
    out += "-> ";
    append_set(out, p.set(i + 1), attributes);
  }
  out += '>';
  return out;
}

std::string to_text(const PathPattern& p, const PropertyGraph& graph) {
  return to_text(p, graph.labels(), graph.attributes());
}

PathPattern parse_pattern(std::string_view text, const Dictionary& labels, const Dictionary& attributes) {
  return PatternParser(text, labels, attributes).parse();
}

PathPattern parse_pattern(std::string_view text, const PropertyGraph& graph) {
  return parse_pattern(text, graph.labels(), graph.attributes());
}

}  // namespace parm
