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

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parm/graph.hpp"
#include "parm/miner.hpp"
#include "parm/oracle.hpp"

namespace parm {

/// One output line: a rule with its patterns in canonical text.
struct RuleRecord {
  std::string antecedent;
  std::string consequent;
  double asupp = 0;
  double rsupp = 0;
  double conf = 0;
  double lift = 0;
  bool estimated = false;
  std::optional<std::pair<double, double>> ci;
  friend bool operator==(const RuleRecord&, const RuleRecord&) = default;
};

class RuleParseError : public std::runtime_error {
 public:
  RuleParseError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// 12 significant digits; integral values keep a trailing ".0".
std::string format_real(double x);

RuleRecord to_record(const Rule& rule, const PropertyGraph& g);
RuleRecord to_record(const OracleRule& rule, const PropertyGraph& g);

/// JSON object with keys in a fixed order, no trailing newline.
std::string serialize_rule(const RuleRecord& record);
RuleRecord parse_rule(std::string_view line, std::size_t line_number = 0);

void write_rules(std::ostream& out, const std::vector<Rule>& rules, const PropertyGraph& g);
/// Skips blank lines.
std::vector<RuleRecord> read_rules(std::istream& in);

}  // namespace parm
