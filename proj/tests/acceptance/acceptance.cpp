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

// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Pass criterion numbers to run a subset.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "compare.hpp"
#include "parm/cli.hpp"
#include "parm/generator.hpp"
#include "parm/miner.hpp"
#include "parm/oracle.hpp"
#include "parm/rule_io.hpp"
#include "parm/scheduler.hpp"
#include "reference.hpp"

using namespace parm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

constexpr std::uint64_t kSuiteSize = 120;

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

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

// 1. Exact-mode equivalence with the oracle.
Outcome oracle_equivalence() {
  std::size_t failures = 0, rules = 0, patterns = 0, cross_checked = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    const bool in_bounds = c.graph.num_vertices() <= 30 && c.graph.num_edges() <= 60 && c.graph.num_labels() <= 5 &&
                           c.graph.num_attributes() <= 6;
    const MineResult mined = mine(c.graph, exact(c.threshold, c.max_length));
    const OracleResult o = oracle_mine(c.graph, c.threshold, c.max_length);
    auto diffs = testing::compare_with_oracle(c.graph, mined, o);
    if (seed % 4 == 0) {
      const OracleResult rel =
          oracle_mine(c.graph, c.threshold, c.max_length, false, OracleStrategy::RelationalJoin);
      if (rel.patterns != o.patterns || rel.rules.size() != o.rules.size()) diffs.push_back("oracle strategies disagree");
      ++cross_checked;
    }
    if (!in_bounds) diffs.push_back("instance outside the suite bounds");
    if (!diffs.empty()) {
      ++failures;
      if (first.empty()) first = "seed " + std::to_string(seed) + ": " + diffs.front();
    }
    rules += o.rules.size();
    patterns += o.patterns.size();
  }
  return {failures == 0, std::to_string(kSuiteSize) + " graphs, " + std::to_string(patterns) + " patterns, " +
                             std::to_string(rules) + " rules, " + std::to_string(cross_checked) +
                             " relational cross-checks, " + std::to_string(failures) + " mismatching" +
                             (first.empty() ? "" : " (" + first + ")")};
}

// 2. Social fixture facts.
Outcome social_fixture() {
  const PropertyGraph g = testing::social_graph();
  const MineResult r = mine(g, exact(1, 2));
  const PathPattern x = parse_pattern("<{CS} -Follows-> {Art}>", g);
  const PathPattern y = parse_pattern("<{Male} -BelongTo-> {Uni}>", g);
  const Rule* r1 = nullptr;
  for (const Rule& rule : r.rules)
    if (rule.antecedent == x && rule.consequent == y) r1 = &rule;
  if (!r1) return {false, "rule r1 not found"};
  const bool metrics = r1->asupp == 2 && r1->rsupp == 2.0 / 12.0 && r1->conf == 1.0 && r1->lift == 6.0;
  const FrequentPattern* mm = r.sets.find(parse_pattern("<{Male} -Follows-> {Male}>", g));
  std::vector<std::string> names;
  if (mm)
    for (VertexId v : mm->table.sources()) names.push_back(g.vertex_name(v));
  const bool sources = names == std::vector<std::string>{"v8", "v9", "v12"};
  const bool shape = g.num_vertices() == 12 && g.num_edges() == 15;
  return {metrics && sources && shape, "r1 = (" + format_real(r1->asupp) + ", " + format_real(r1->rsupp) + ", " +
                                           format_real(r1->conf) + ", " + format_real(r1->lift) +
                                           "), V(<{Male} -Follows-> {Male}>) has " + std::to_string(names.size()) +
                                           " sources" + (sources ? " {v8,v9,v12}" : "")};
}

// 3. Every rejected suffix is confirmed by the oracle.
Outcome pruning_soundness() {
  std::size_t rejected = 0, violations = 0;
  for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    const OracleResult o = oracle_mine(c.graph, c.threshold, c.max_length);
    const std::size_t na = c.graph.num_attributes();
    for (std::uint32_t mask = 1; mask < (1u << na); ++mask) {
      AttrSet set;
      for (AttrId a = 0; a < na; ++a)
        if (mask >> a & 1) set.push_back(a);
      for (LabelId l = 0; l < c.graph.num_labels(); ++l)
        for (std::size_t n = 1; n <= c.max_length; ++n) {
          if (suffix_admissible(c.graph, set, l, n, c.threshold, 1.0)) continue;
          ++rejected;
          for (const auto& [p, sources] : o.patterns)
            if (p.is_simple() && p.length() == n && p.label(n - 1) == l &&
                std::includes(p.set(n).begin(), p.set(n).end(), set.begin(), set.end()))
              ++violations;
        }
    }
  }
  return {violations == 0,
          std::to_string(rejected) + " rejected (label, set, length) triples, " + std::to_string(violations) + " violations"};
}

// 4. Containment under dominance and prefix frequency on every stored table.
Outcome anti_monotone() {
  std::size_t pairs = 0, containment = 0, prefixes = 0, missing_prefix = 0;
  for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    const MineResult r = mine(c.graph, exact(c.threshold, c.max_length));
    const auto all = testing::miner_patterns(r);
    for (const auto& [p, ps] : all) {
      if (p.length() > 0) {
        ++prefixes;
        const PathPattern parent = p.is_simple() ? p.prefix(p.length() - 1) : PathPattern::vertex(p.set(0));
        if (!r.sets.find(parent)) ++missing_prefix;
      }
      for (const auto& [q, qs] : all)
        if (&p != &q && dominates(p, q)) {
          ++pairs;
          if (!std::includes(qs.begin(), qs.end(), ps.begin(), ps.end())) ++containment;
        }
    }
  }
  return {containment == 0 && missing_prefix == 0,
          std::to_string(pairs) + " dominance pairs with " + std::to_string(containment) + " containment violations, " +
              std::to_string(prefixes) + " prefixes with " + std::to_string(missing_prefix) + " infrequent"};
}

// 5. Candidate reduction never emits anything exact mode does not.
Outcome reduction_precision() {
  std::map<double, std::pair<std::size_t, std::size_t>> recall;  // psi -> (found rules, exact rules)
  std::size_t false_patterns = 0, false_rules = 0;
  std::size_t exact_rules = 0;
  for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    const MineResult full = mine(c.graph, exact(c.threshold, c.max_length));
    const auto truth = testing::miner_patterns(full);
    std::map<std::string, std::string> truth_rules;
    for (const Rule& r : full.rules) {
      const RuleRecord rec = to_record(r, c.graph);
      truth_rules.emplace(rec.antecedent + "|" + rec.consequent, serialize_rule(rec));
    }
    exact_rules += full.rules.size();
    for (double psi : {0.2, 0.4, 0.6, 0.8}) {
      MinerConfig cfg = exact(c.threshold, c.max_length);
      cfg.candidate_reduction = psi;
      const MineResult reduced = mine(c.graph, cfg);
      for (const auto& [p, sources] : testing::miner_patterns(reduced)) {
        auto it = truth.find(p);
        if (it == truth.end() || it->second != sources) ++false_patterns;
      }
      for (const Rule& r : reduced.rules) {
        const RuleRecord rec = to_record(r, c.graph);
        auto it = truth_rules.find(rec.antecedent + "|" + rec.consequent);
        if (it == truth_rules.end() || it->second != serialize_rule(rec)) ++false_rules;
      }
      recall[psi].first += reduced.rules.size();
      recall[psi].second += full.rules.size();
    }
  }
  std::string detail = std::to_string(false_patterns) + " false patterns, " + std::to_string(false_rules) +
                       " false rules; rule recall";
  for (const auto& [psi, fr] : recall)
    detail += " psi=" + fmt(psi, 1) + ":" + fmt(fr.second ? static_cast<double>(fr.first) / fr.second : 1.0);
  return {false_patterns == 0 && false_rules == 0, detail};
}

// Planted graph for the sampling experiment: 6000 s-vertices (half also w),
// 2000 t-vertices and 2000 u-vertices. Vertices i < 6000 with i % 10 < 3
// carry a link edge into a t-vertex, so <{s} -link-> {t}> has 1800 sources.
PropertyGraph planted_graph() {
  GraphBuilder b;
  const AttrId s = b.intern_attribute("s"), t = b.intern_attribute("t"), u = b.intern_attribute("u"),
               w = b.intern_attribute("w");
  const LabelId link = b.intern_label("link"), other = b.intern_label("other");
  for (int i = 0; i < 10000; ++i) {
    AttrSet attrs;
    if (i < 6000) {
      attrs.push_back(s);
      if (i % 2 == 1) attrs.push_back(w);
    } else {
      attrs.push_back(i < 8000 ? t : u);
    }
    b.add_vertex_ids("v" + std::to_string(i), normalized(attrs));
  }
  for (VertexId i = 0; i < 6000; ++i)
    if (i % 10 < 3) b.add_edge_ids(i, link, 6000 + i % 2000);
  for (VertexId i = 6000; i < 8000; ++i) b.add_edge_ids(i, other, (i * 7) % 6000);
  for (VertexId i = 8000; i < 10000; ++i) b.add_edge_ids(i, link, 8000 + (i * 13) % 2000);
  return std::move(b).finish();
}

// 6. Sampling estimates are unbiased and their intervals cover the truth.
Outcome sampling_soundness() {
  const PropertyGraph g = planted_graph();
  const PathPattern planted = parse_pattern("<{s} -link-> {t}>", g);
  const double truth = static_cast<double>(mine(g, exact(100, 1)).sets.find(planted)->table.size());
  const int runs = 1000;
  double sum = 0;
  int covered = 0, missing = 0;
  for (int seed = 0; seed < runs; ++seed) {
    MinerConfig cfg = exact(100, 1);
    cfg.sampling_rate = 0.4;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const MineResult r = mine(g, cfg);
    const FrequentPattern* p = r.sets.find(planted);
    if (!p || !p->estimate) {
      ++missing;
      continue;
    }
    sum += p->estimate->point;
    if (p->estimate->ci_low <= truth && truth <= p->estimate->ci_high) ++covered;
  }
  const double mean = sum / (runs - missing);
  const double error = std::fabs(mean - truth) / truth;
  const double coverage = static_cast<double>(covered) / runs;
  const bool pass = missing == 0 && error <= 0.02 && coverage >= 0.92 && coverage <= 0.98;
  return {pass, "truth " + fmt(truth, 0) + ", mean estimate " + fmt(mean, 2) + " (error " + fmt(100 * error, 3) +
                    "%), CI coverage " + fmt(100 * coverage, 1) + "% over " + std::to_string(runs) + " runs" +
                    (missing ? ", " + std::to_string(missing) + " runs lost the pattern" : "")};
}

// 7. Thread count does not change output bytes.
Outcome thread_invariance() {
  const fs::path dir = fs::temp_directory_path() / "parm_acceptance_threads";
  fs::create_directories(dir);
  struct Input {
    std::string name, vertices, edges, support;
    std::vector<std::string> extra;
  };
  std::vector<Input> inputs{{"social", testing::data_path("social.vertices.tsv"),
                             testing::data_path("social.edges.tsv"), "1", {}}};
  for (int i = 0; i < 3; ++i) {
    GeneratorParams p;
    p.vertices = 300 + 100 * i;
    p.edges = 1200 + 300 * i;
    p.labels = 4;
    p.attributes = 8;
    p.attrs_per_vertex = 2;
    p.attr_skew = 0.5;
    p.seed = 500 + i;
    const PropertyGraph g = generate_graph(p);
    const std::string base = (dir / ("random" + std::to_string(i))).string();
    std::ofstream v(base + ".vertices.tsv"), e(base + ".edges.tsv");
    save_graph(g, v, e);
    inputs.push_back({"random" + std::to_string(i), base + ".vertices.tsv", base + ".edges.tsv", "4", {}});
  }
  inputs.push_back({"random0-sampled", inputs[1].vertices, inputs[1].edges, "4", {"--sampling-rate", "0.5", "--seed", "3"}});
  std::size_t compared = 0, differing = 0;
  std::ostringstream sink;
  for (const Input& in : inputs) {
    std::string reference;
    for (int n : {1, 2, 4, 8}) {
      const fs::path out = dir / (in.name + "." + std::to_string(n) + ".jsonl");
      std::vector<std::string> args{"mine",          "--vertices",   in.vertices, "--edges", in.edges,
                                    "--min-support", in.support,    "--max-length", "2",     "--threads",
                                    std::to_string(n), "--output", out.string()};
      args.insert(args.end(), in.extra.begin(), in.extra.end());
      if (run_main(args, sink, sink) != kExitOk) return {false, "mine failed on " + in.name};
      const std::string bytes = slurp(out);
      if (n == 1) reference = bytes;
      else if (bytes != reference) ++differing;
      ++compared;
    }
    if (reference.empty() && in.name != "social") return {false, in.name + " produced no rules"};
  }
  return {differing == 0, std::to_string(inputs.size()) + " inputs x N in {1,2,4,8}: " + std::to_string(compared) +
                              " files, " + std::to_string(differing) + " differing from N=1"};
}

// 8. rho = 1 and psi = 1 reproduce exact output byte for byte.
Outcome degeneracy() {
  std::size_t differing = 0;
  for (std::uint64_t seed = 0; seed < kSuiteSize; ++seed) {
    const testing::SuiteCase c = testing::suite_case(seed);
    MinerConfig cfg = exact(c.threshold, c.max_length);
    const std::string plain = rules_text(mine(c.graph, cfg), c.graph);
    cfg.sampling_rate = 1.0;
    cfg.candidate_reduction = 1.0;
    if (rules_text(mine(c.graph, cfg), c.graph) != plain) ++differing;
  }
  return {differing == 0, std::to_string(kSuiteSize) + " graphs, " + std::to_string(differing) + " differing outputs"};
}

// 9. Pruned pipeline beats the unpruned baseline by at least 10%.
Outcome performance_trend() {
  GeneratorParams p;
  p.vertices = 100000;
  p.edges = 500000;
  p.labels = 8;
  p.attributes = 50;
  p.attrs_per_vertex = 3;
  p.attr_skew = 1.0;
  p.seed = 1;
  const PropertyGraph g = generate_graph(p);
  MinerConfig cfg;
  cfg.min_support = {0.02, true};
  cfg.max_length = 2;
  auto t0 = std::chrono::steady_clock::now();
  const MineResult fast = mine(g, cfg);
  const double ours = seconds_since(t0);
  cfg.baseline = true;
  t0 = std::chrono::steady_clock::now();
  const MineResult slow = mine(g, cfg);
  const double base = seconds_since(t0);
  const bool same = rules_text(fast, g) == rules_text(slow, g);
  return {same && base >= 1.1 * ours,
          "|V|=100000 |E|=500000 |A|=50 k=2 theta=2%: optimized " + fmt(ours, 1) + "s, baseline " + fmt(base, 1) +
              "s (" + fmt(base / ours, 2) + "x), " + std::to_string(fast.rules.size()) + " rules, outputs " +
              (same ? "identical" : "DIFFER")};
}

// 10. Greedy partitioning stays within 4/3 of the optimum.
Outcome scheduler_quality() {
  std::mt19937_64 rng(2026);
  int within = 0, within_uncapped = 0;
  double worst = 1.0, worst_uncapped = 1.0;
  const int instances = 1000;
  for (int i = 0; i < instances; ++i) {
    const std::size_t n = 1 + rng() % 12;
    const std::size_t threads = 2 + rng() % 3;
    std::vector<std::uint64_t> costs(n);
    for (auto& c : costs) c = rng() % 5 == 0 ? 0 : 1 + rng() % 100;
    const std::uint64_t greedy = partition(costs, threads).max_load();
    const std::uint64_t opt = testing::search_optimal_max_load(costs, threads, true);
    const std::uint64_t free_opt = testing::search_optimal_max_load(costs, threads, false);
    if (3 * greedy <= 4 * opt) ++within;
    if (3 * greedy <= 4 * free_opt) ++within_uncapped;
    if (opt) worst = std::max(worst, static_cast<double>(greedy) / static_cast<double>(opt));
    if (free_opt) worst_uncapped = std::max(worst_uncapped, static_cast<double>(greedy) / static_cast<double>(free_opt));
  }
  return {within == instances, std::to_string(within) + "/" + std::to_string(instances) +
                                   " within 4/3 of the capacity-limited optimum (worst ratio " + fmt(worst) + "); " +
                                   std::to_string(within_uncapped) + "/" + std::to_string(instances) +
                                   " against the unlimited optimum (worst " + fmt(worst_uncapped) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence (exact mode)", oracle_equivalence},
      {"social fixture", social_fixture},
      {"pruning soundness", pruning_soundness},
      {"anti-monotone invariants", anti_monotone},
      {"candidate reduction precision", reduction_precision},
      {"sampling statistical soundness", sampling_soundness},
      {"thread invariance", thread_invariance},
      {"rho=1 and psi=1 degeneracy", degeneracy},
      {"performance trend", performance_trend},
      {"scheduler quality", scheduler_quality},
  };
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(n));
  }
  if (selected.empty())
    for (std::size_t i = 1; i <= criteria.size(); ++i) selected.push_back(i);

  bool all = true;
  for (std::size_t n : selected) {
    const auto& [name, fn] = criteria[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): " << o.detail << " ["
              << fmt(seconds_since(t0), 1) << "s]" << std::endl;
  }
  return all ? 0 : 1;
}
