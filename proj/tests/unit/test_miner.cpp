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

#include <doctest.h>

#include <set>
#include <sstream>

#include "compare.hpp"
#include "parm/miner.hpp"
#include "parm/oracle.hpp"
#include "parm/rule_io.hpp"
#include "reference.hpp"

using namespace parm;

namespace {

MinerConfig exact(double theta, std::size_t k) {
  MinerConfig cfg;
  cfg.min_support.value = theta;
  cfg.max_length = k;
  return cfg;
}

std::string rules_text(const MineResult& r, const PropertyGraph& g) {
  std::ostringstream out;
  write_rules(out, r.rules, g);
  return out.str();
}

const Rule* find_rule(const MineResult& r, const PropertyGraph& g, const std::string& x, const std::string& y) {
  const PathPattern px = parse_pattern(x, g), py = parse_pattern(y, g);
  for (const Rule& rule : r.rules)
    if (rule.antecedent == px && rule.consequent == py) return &rule;
  return nullptr;
}

std::vector<std::string> names(const PropertyGraph& g, const std::vector<VertexId>& vs) {
  std::vector<std::string> out;
  for (VertexId v : vs) out.push_back(g.vertex_name(v));
  return out;
}

}  // namespace

TEST_CASE("social fixture rules and metrics") {
  const PropertyGraph g = testing::social_graph();
  const MineResult r = mine(g, exact(1, 2));
  const Rule* r1 = find_rule(r, g, "<{CS} -Follows-> {Art}>", "<{Male} -BelongTo-> {Uni}>");
  REQUIRE(r1);
  CHECK(r1->asupp == 2);
  CHECK(r1->rsupp == 2.0 / 12.0);
  CHECK(r1->conf == 1.0);
  CHECK(r1->lift == 6.0);
  CHECK_FALSE(r1->estimated);
  CHECK(find_rule(r, g, "<{CS} -Follows-> {Art}>", "<{CS} -BelongTo-> {Uni}>"));

  const FrequentPattern* mm = r.sets.find(parse_pattern("<{Male} -Follows-> {Male}>", g));
  REQUIRE(mm);
  CHECK(names(g, mm->table.sources()) == std::vector<std::string>{"v8", "v9", "v12"});
  const FrequentPattern* ma = r.sets.find(parse_pattern("<{Male} -Follows-> {Art}>", g));
  REQUIRE(ma);
  CHECK(names(g, ma->table.sources()) == std::vector<std::string>{"v8", "v9"});

  const PathPattern cs_chem = parse_pattern("<{CS} -Follows-> {Chem}>", g);
  CHECK_FALSE(r.sets.find(cs_chem));
  for (const auto& level : r.sets.by_length)
    for (const FrequentPattern& p : level)
      if (p.pattern().length() >= 1) CHECK_FALSE(dominates(p.pattern().prefix(1), cs_chem));

  const FrequentPattern* reach = r.sets.find(parse_pattern("<{CS,Male} -Follows*-> {CS,Male}>", g));
  REQUIRE(reach);
  CHECK(names(g, reach->table.sources()) == std::vector<std::string>{"v9", "v12"});
  CHECK(r.sets.find(parse_pattern("<{Male}>", g)));

  for (const Rule& rule : r.rules) {
    CHECK(rule.antecedent != rule.consequent);
    CHECK(mutually_non_dominating(rule.antecedent, rule.consequent));
    CHECK(rule.asupp > r.threshold);
    CHECK(rule.rsupp == rule.asupp / 12.0);
    CHECK(rule.conf > 0);
    CHECK(rule.conf <= 1);
    CHECK(rule.lift > 0);
  }
}

TEST_CASE("metric arithmetic") {
  const RuleMetrics m = compute_metrics(2, 2, 2, 12);
  CHECK(m.asupp == 2);
  CHECK(m.rsupp == 1.0 / 6.0);
  CHECK(m.conf == 1.0);
  CHECK(m.lift == 6.0);
  CHECK(compute_metrics(5, 5, 9, 30).conf == 1.0);
  const RuleMetrics ind = compute_metrics(3, 7, 11, 50);
  CHECK(ind.lift == doctest::Approx(3.0 * 50.0 / (7.0 * 11.0)));
}

TEST_CASE("degenerate thresholds and graphs") {
  const PropertyGraph g = testing::social_graph();
  const MineResult all = mine(g, exact(12, 2));
  CHECK(all.rules.empty());
  CHECK_FALSE(all.stats.warnings.empty());
  const MineResult empty = mine(PropertyGraph{}, exact(1, 2));
  CHECK(empty.rules.empty());
  CHECK_FALSE(empty.stats.warnings.empty());
}

TEST_CASE("relative threshold") {
  MinerConfig cfg;
  cfg.min_support = {0.10, true};
  CHECK(cfg.threshold(200) == doctest::Approx(20.0));
  cfg.min_support = {0.5, true};
  CHECK(cfg.threshold(7) == 3.5);
}

TEST_CASE("config validation") {
  auto bad = [](auto mutate) {
    MinerConfig cfg = exact(1, 2);
    mutate(cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  bad([](MinerConfig& c) { c.min_support.value = -1; });
  bad([](MinerConfig& c) { c.min_support = {1.5, true}; });
  bad([](MinerConfig& c) { c.max_length = 0; });
  bad([](MinerConfig& c) { c.candidate_reduction = 0.0; });
  bad([](MinerConfig& c) { c.candidate_reduction = 1.2; });
  bad([](MinerConfig& c) { c.sampling_rate = 0.0; });
  bad([](MinerConfig& c) { c.threads = 0; });
  bad([](MinerConfig& c) { c.z = 0; });
  CHECK_NOTHROW(exact(1, 2).validate());
  CHECK_THROWS_AS(mine(testing::social_graph(), [] {
                    MinerConfig c = exact(1, 2);
                    c.threads = 0;
                    return c;
                  }()),
                  ConfigError);
}

TEST_CASE("frequent attribute sets equal a powerset scan") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    const auto sets = discover_attribute_sets(c.graph, c.threshold);
    std::set<AttrSet> got;
    for (const auto& p : sets) {
      got.insert(p.pattern().set(0));
      CHECK(static_cast<double>(p.table.size()) > c.threshold);
    }
    std::set<AttrSet> expected;
    const std::size_t na = c.graph.num_attributes();
    for (std::uint32_t mask = 1; mask < (1u << na); ++mask) {
      AttrSet s;
      for (AttrId a = 0; a < na; ++a)
        if (mask >> a & 1) s.push_back(a);
      std::size_t count = 0;
      for (VertexId v = 0; v < c.graph.num_vertices(); ++v)
        if (c.graph.has_all(v, s)) ++count;
      if (static_cast<double>(count) > c.threshold) expected.insert(s);
    }
    CHECK(got == expected);
  }
}

TEST_CASE("frontier") {
  const PropertyGraph g = testing::social_graph();
  const auto sets = discover_attribute_sets(g, 1);
  const Frontier f = compute_frontier(g, sets, 1, 2);
  const LabelId follows = *g.labels().find("Follows");
  CHECK(std::find(f.labels.begin(), f.labels.end(), follows) != f.labels.end());
  CHECK(f.max_in_degree == g.max_in_degree());

  std::istringstream v("a\tx\nb\tx\nc\tx\n"), e("a\tonce\tb\na\ttwice\tb\nc\ttwice\tb\n");
  const PropertyGraph h = load_graph(v, e);
  const Frontier fh = compute_frontier(h, discover_attribute_sets(h, 1), 1, 1);
  const LabelId once = *h.labels().find("once");
  CHECK(std::find(fh.first_labels.begin(), fh.first_labels.end(), once) == fh.first_labels.end());
  CHECK(std::find(fh.first_labels.begin(), fh.first_labels.end(), *h.labels().find("twice")) != fh.first_labels.end());
}

TEST_CASE("suffix admissibility") {
  const PropertyGraph g = testing::social_graph();
  const LabelId follows = *g.labels().find("Follows");
  const AttrSet art{*g.attributes().find("Art")};
  const std::uint64_t e_art = g.count_target_edges(art, follows);
  CHECK(suffix_admissible(g, art, follows, 1, 1) == (e_art > 1));
  CHECK(suffix_admissible(g, art, follows, 1, 1, 0.2) == suffix_admissible(g, art, follows, 1, 1, 1.0));
  std::istringstream v("a\tx\n"), e("");
  const PropertyGraph edgeless = load_graph(v, e);
  for (std::size_t n = 2; n <= 4; ++n) CHECK_FALSE(suffix_admissible(edgeless, {0}, 0, n, 0));
  CHECK(reach_target_admissible(2, 3, 2, 7));
  CHECK_FALSE(reach_target_admissible(2, 3, 2, 8));
}

TEST_CASE("reachability along a 2-chain") {
  std::istringstream v("a\ts\nb\nc\tt\n"), e("a\tl\tb\nb\tl\tc\n");
  const PropertyGraph g = load_graph(v, e);
  const MineResult r = mine(g, exact(0, 2));
  const FrequentPattern* p = r.sets.find(parse_pattern("<{s} -l*-> {t}>", g));
  REQUIRE(p);
  CHECK(names(g, p->table.sources()) == std::vector<std::string>{"a"});
  const MineResult short_k = mine(g, exact(0, 1));
  CHECK_FALSE(short_k.sets.find(parse_pattern("<{s} -l*-> {t}>", g)));
}

TEST_CASE("miner equals the oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    const MineResult r = mine(c.graph, exact(c.threshold, c.max_length));
    const OracleResult o = oracle_mine(c.graph, c.threshold, c.max_length);
    const auto diffs = testing::compare_with_oracle(c.graph, r, o);
    INFO("seed " << seed << ": " << (diffs.empty() ? "" : diffs.front()));
    CHECK(diffs.empty());
  }
}

TEST_CASE("unbounded reachability equals the oracle") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    MinerConfig cfg = exact(c.threshold, c.max_length);
    cfg.reachability_bound = ReachabilityBound::Unbounded;
    const auto diffs = testing::compare_with_oracle(c.graph, mine(c.graph, cfg),
                                                    oracle_mine(c.graph, c.threshold, c.max_length, true));
    INFO("seed " << seed);
    CHECK(diffs.empty());
  }
}

TEST_CASE("baseline pipeline equals the optimized one") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    MinerConfig cfg = exact(c.threshold, c.max_length);
    const std::string fast = rules_text(mine(c.graph, cfg), c.graph);
    cfg.baseline = true;
    CHECK(rules_text(mine(c.graph, cfg), c.graph) == fast);
  }
}

TEST_CASE("output does not depend on the thread count") {
  const PropertyGraph g = testing::social_graph();
  const std::string one = rules_text(mine(g, exact(1, 2)), g);
  for (std::size_t n : {2, 4, 8}) {
    MinerConfig cfg = exact(1, 2);
    cfg.threads = n;
    CHECK(rules_text(mine(g, cfg), g) == one);
  }
}

TEST_CASE("prefix and dominance invariants on stored tables") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    const MineResult r = mine(c.graph, exact(c.threshold, c.max_length));
    for (std::size_t len = 1; len < r.sets.by_length.size(); ++len)
      for (const FrequentPattern& p : r.sets.by_length[len]) CHECK(r.sets.find(p.pattern().prefix(len - 1)));
    const auto all = testing::miner_patterns(r);
    for (const auto& [p, ps] : all)
      for (const auto& [q, qs] : all)
        if (dominates(p, q)) CHECK(std::includes(qs.begin(), qs.end(), ps.begin(), ps.end()));
  }
}

TEST_CASE("sampling mode flags estimates") {
  const PropertyGraph g = testing::social_graph();
  MinerConfig cfg = exact(1, 2);
  cfg.sampling_rate = 0.5;
  cfg.seed = 3;
  const MineResult r = mine(g, cfg);
  REQUIRE(r.plan);
  for (const Rule& rule : r.rules) {
    CHECK(rule.estimated);
    CHECK(rule.estimate);
  }
  CHECK(rules_text(mine(g, cfg), g) == rules_text(r, g));
}
