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

#include "parm/rule_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace parm {

RuleParseError::RuleParseError(std::size_t line, std::string field, const std::string& what)
    : std::runtime_error("rule line " + std::to_string(line) + ", field '" + field + "': " + what),
      line_(line),
      field_(std::move(field)) {}

std::string format_real(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string format_count(double x, bool estimated) {
  if (!estimated && x == std::floor(x) && std::fabs(x) < 9e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", x);
    return buf;
  }
  return format_real(x);
}

}  // namespace

RuleRecord to_record(const Rule& rule, const PropertyGraph& g) {
  RuleRecord r;
  r.antecedent = to_text(rule.antecedent, g);
  r.consequent = to_text(rule.consequent, g);
  r.asupp = rule.asupp;
  r.rsupp = rule.rsupp;
  r.conf = rule.conf;
  r.lift = rule.lift;
  r.estimated = rule.estimated;
  if (rule.estimated && rule.estimate) r.ci = std::make_pair(rule.estimate->ci_low, rule.estimate->ci_high);
  return r;
}

RuleRecord to_record(const OracleRule& rule, const PropertyGraph& g) {
  RuleRecord r;
  r.antecedent = to_text(rule.antecedent, g);
  r.consequent = to_text(rule.consequent, g);
  r.asupp = static_cast<double>(rule.asupp);
  r.rsupp = rule.rsupp;
  r.conf = rule.conf;
  r.lift = rule.lift;
  return r;
}

std::string serialize_rule(const RuleRecord& r) {
  std::string out = "{\"antecedent\":";
  out += nlohmann::json(r.antecedent).dump();
  out += ",\"consequent\":";
  out += nlohmann::json(r.consequent).dump();
  out += ",\"asupp\":" + format_count(r.asupp, r.estimated);
  out += ",\"rsupp\":" + format_real(r.rsupp);
  out += ",\"conf\":" + format_real(r.conf);
  out += ",\"lift\":" + format_real(r.lift);
  out += r.estimated ? ",\"estimated\":true" : ",\"estimated\":false";
  if (r.ci) out += ",\"ci\":[" + format_real(r.ci->first) + "," + format_real(r.ci->second) + "]";
  out += '}';
  return out;
}

RuleRecord parse_rule(std::string_view line, std::size_t line_number) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw RuleParseError(line_number, "(line)", e.what());
  }
  if (!j.is_object()) throw RuleParseError(line_number, "(line)", "expected a JSON object");
  RuleRecord r;
  auto text = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw RuleParseError(line_number, key, "missing or not a string");
    return it->get<std::string>();
  };
  auto number = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw RuleParseError(line_number, key, "missing or not a number");
    return it->get<double>();
  };
  r.antecedent = text("antecedent");
  r.consequent = text("consequent");
  r.asupp = number("asupp");
  r.rsupp = number("rsupp");
  r.conf = number("conf");
  r.lift = number("lift");
  auto est = j.find("estimated");
  if (est == j.end() || !est->is_boolean()) throw RuleParseError(line_number, "estimated", "missing or not a boolean");
  r.estimated = est->get<bool>();
  if (auto ci = j.find("ci"); ci != j.end()) {
    if (!ci->is_array() || ci->size() != 2 || !(*ci)[0].is_number() || !(*ci)[1].is_number())
      throw RuleParseError(line_number, "ci", "expected a pair of numbers");
    r.ci = std::make_pair((*ci)[0].get<double>(), (*ci)[1].get<double>());
  }
  return r;
}

void write_rules(std::ostream& out, const std::vector<Rule>& rules, const PropertyGraph& g) {
  for (const Rule& r : rules) out << serialize_rule(to_record(r, g)) << '\n';
}

std::vector<RuleRecord> read_rules(std::istream& in) {
  std::vector<RuleRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_rule(line, n));
  }
  return out;
}

}  // namespace parm
