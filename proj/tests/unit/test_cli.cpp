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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "parm/cli.hpp"
#include "parm/miner.hpp"
#include "parm/rule_io.hpp"
#include "reference.hpp"

using namespace parm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "parm_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> fixture_args(const std::string& cmd) {
  return {cmd, "--vertices", testing::data_path("social.vertices.tsv"), "--edges",
          testing::data_path("social.edges.tsv")};
}

}  // namespace

TEST_CASE("minimum support parsing") {
  CHECK(parse_min_support("3").value == 3);
  CHECK_FALSE(parse_min_support("3").relative);
  const MinSupport rel = parse_min_support("10%");
  CHECK(rel.relative);
  MinerConfig cfg;
  cfg.min_support = rel;
  CHECK(cfg.threshold(200) == doctest::Approx(20));
  CHECK_THROWS_AS(parse_min_support(""), ConfigError);
  CHECK_THROWS_AS(parse_min_support("abc"), ConfigError);
  CHECK_THROWS_AS(parse_min_support("-1"), ConfigError);
  CHECK_THROWS_AS(parse_min_support("5%%"), ConfigError);
}

TEST_CASE("rule serialization") {
  const PropertyGraph g = testing::social_graph();
  MinerConfig cfg;
  cfg.min_support.value = 1;
  const MineResult r = mine(g, cfg);
  bool seen = false;
  for (const Rule& rule : r.rules) {
    const RuleRecord rec = to_record(rule, g);
    const std::string line = serialize_rule(rec);
    const RuleRecord back = parse_rule(line);
    CHECK(serialize_rule(back) == line);
    CHECK(back.antecedent == rec.antecedent);
    CHECK(back.consequent == rec.consequent);
    CHECK(back.asupp == rec.asupp);
    CHECK(parse_pattern(back.antecedent, g) == rule.antecedent);
    CHECK(parse_pattern(back.consequent, g) == rule.consequent);
    CHECK(back.rsupp == doctest::Approx(rec.rsupp).epsilon(1e-11));
    if (rec.antecedent == "<{CS} -Follows-> {Art}>" && rec.consequent == "<{Male} -BelongTo-> {Uni}>") {
      seen = true;
      CHECK(line.find("\"asupp\":2,") != std::string::npos);
      CHECK(line.find("\"lift\":6.0") != std::string::npos);
      CHECK(line.find("\"conf\":1.0") != std::string::npos);
      CHECK(line.find("\"rsupp\":0.166666666667") != std::string::npos);
    }
  }
  CHECK(seen);

  RuleRecord est;
  est.antecedent = "<{a}>";
  est.consequent = "<{b}>";
  est.asupp = 12.5;
  est.estimated = true;
  est.ci = std::make_pair(10.0, 15.0);
  CHECK(parse_rule(serialize_rule(est)) == est);
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(2) == "2.0");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("malformed rule lines name the field") {
  auto field_of = [](const std::string& line) {
    try {
      parse_rule(line, 7);
    } catch (const RuleParseError& e) {
      CHECK(e.line() == 7);
      return e.field();
    }
    return std::string("(none)");
  };
  CHECK(field_of("not json") == "(line)");
  CHECK(field_of("[1,2]") == "(line)");
  CHECK(field_of(R"({"consequent":"<{a}>","asupp":1,"rsupp":1,"conf":1,"lift":1,"estimated":false})") == "antecedent");
  CHECK(field_of(R"({"antecedent":"<{a}>","consequent":"<{a}>","asupp":"x","rsupp":1,"conf":1,"lift":1,"estimated":false})") ==
        "asupp");
  CHECK(field_of(R"({"antecedent":"<{a}>","consequent":"<{a}>","asupp":1,"rsupp":1,"conf":1,"lift":1})") == "estimated");
  CHECK(field_of(R"({"antecedent":"<{a}>","consequent":"<{a}>","asupp":1,"rsupp":1,"conf":1,"lift":1,"estimated":true,"ci":[1]})") ==
        "ci");
  std::istringstream in("\n{\"antecedent\":1}\n");
  try {
    read_rules(in);
    FAIL("expected a parse error");
  } catch (const RuleParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("mine subcommand") {
  const fs::path out = scratch("social.jsonl");
  auto args = fixture_args("mine");
  args.insert(args.end(), {"--min-support", "1", "--max-length", "2", "--output", out.string()});
  const Run first = run(args);
  REQUIRE(first.code == kExitOk);
  CHECK(first.err.find("theta: 1\n") != std::string::npos);
  CHECK(first.err.find("attribute sets: ") != std::string::npos);
  CHECK(first.err.find("reachability paths: ") != std::string::npos);
  CHECK(first.err.find("rules: 0") == std::string::npos);
  const std::string text = slurp(out);
  CHECK(text.find(R"("antecedent":"<{CS} -Follows-> {Art}>","consequent":"<{Male} -BelongTo-> {Uni}>","asupp":2,)") !=
        std::string::npos);
  REQUIRE(run(args).code == kExitOk);
  CHECK(slurp(out) == text);

  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "4"});
  REQUIRE(run(threaded).code == kExitOk);
  CHECK(slurp(out) == text);

  std::istringstream lines(text);
  std::size_t previous_length = 0;
  std::string previous_key;
  const PropertyGraph g = testing::social_graph();
  for (const RuleRecord& r : read_rules(lines)) {
    const std::size_t length = parse_pattern(r.antecedent, g).length() + parse_pattern(r.consequent, g).length();
    const std::string key = r.antecedent + '\n' + r.consequent;
    if (length == previous_length) CHECK(key > previous_key);
    CHECK(length >= previous_length);
    previous_length = length;
    previous_key = key;
  }

  auto all = fixture_args("mine");
  all.insert(all.end(), {"--min-support", "100%", "--output", out.string()});
  const Run none = run(all);
  CHECK(none.code == kExitOk);
  CHECK(none.err.find("rules: 0") != std::string::npos);
  CHECK(none.err.find("warning: ") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  auto missing = fixture_args("mine");
  missing.insert(missing.end(), {"--min-support", "1"});
  CHECK(run(missing).code == kExitUsage);

  const fs::path out = scratch("x.jsonl");
  auto bad_support = fixture_args("mine");
  bad_support.insert(bad_support.end(), {"--min-support", "ten", "--output", out.string()});
  CHECK(run(bad_support).code == kExitUsage);
  auto bad_rate = fixture_args("mine");
  bad_rate.insert(bad_rate.end(), {"--min-support", "1", "--sampling-rate", "2", "--output", out.string()});
  CHECK(run(bad_rate).code == kExitUsage);

  const fs::path broken = scratch("broken.edges.tsv");
  std::ofstream(broken) << "v1\tFollows\n";
  const Run format = run({"mine", "--vertices", testing::data_path("social.vertices.tsv"), "--edges",
                          broken.string(), "--min-support", "1", "--output", out.string()});
  CHECK(format.code == kExitInput);
  CHECK(format.err.find("broken.edges.tsv:1: ") != std::string::npos);
  CHECK(run({"mine", "--vertices", "/nonexistent", "--edges", "/nonexistent", "--min-support", "1", "--output",
             out.string()})
            .code == kExitInput);
}

TEST_CASE("oracle subcommand and diff") {
  const fs::path mined = scratch("mined.jsonl");
  auto args = fixture_args("mine");
  args.insert(args.end(), {"--min-support", "1", "--output", mined.string()});
  REQUIRE(run(args).code == kExitOk);
  auto oracle = fixture_args("oracle");
  oracle.insert(oracle.end(), {"--min-support", "1", "--diff", mined.string()});
  const Run same = run(oracle);
  CHECK(same.code == kExitOk);
  CHECK(same.err.find("differences: 0") != std::string::npos);

  const fs::path trimmed = scratch("trimmed.jsonl");
  std::string text = slurp(mined);
  text.erase(0, text.find('\n') + 1);
  std::ofstream(trimmed, std::ios::binary) << text;
  oracle.back() = trimmed.string();
  const Run differs = run(oracle);
  CHECK(differs.code == kExitDiffers);
  CHECK(differs.out.rfind("> ", 0) == 0);

  auto plain = fixture_args("oracle");
  plain.insert(plain.end(), {"--min-support", "1"});
  const Run printed = run(plain);
  CHECK(printed.code == kExitOk);
  CHECK(printed.out == slurp(mined));
}

TEST_CASE("gen and stats subcommands") {
  const fs::path prefix = scratch("gen");
  const std::vector<std::string> gen{"gen", "--vertices", "12", "--edges", "15", "--labels", "4", "--attributes", "8",
                                     "--attrs-per-vertex", "1.5", "--seed", "9", "--out-prefix", prefix.string()};
  REQUIRE(run(gen).code == kExitOk);
  const std::string v = slurp(prefix.string() + ".vertices.tsv");
  const std::string e = slurp(prefix.string() + ".edges.tsv");
  REQUIRE(run(gen).code == kExitOk);
  CHECK(slurp(prefix.string() + ".vertices.tsv") == v);
  CHECK(slurp(prefix.string() + ".edges.tsv") == e);
  const PropertyGraph g = load_graph_files(prefix.string() + ".vertices.tsv", prefix.string() + ".edges.tsv");
  CHECK(g.num_vertices() == 12);
  CHECK(g.num_edges() == 15);

  const Run edgeless = run({"gen", "--vertices", "5", "--edges", "0", "--out-prefix", prefix.string()});
  CHECK(edgeless.code == kExitOk);
  CHECK(run({"gen", "--vertices", "0", "--edges", "5", "--out-prefix", prefix.string()}).code == kExitUsage);

  auto stats = fixture_args("stats");
  stats.insert(stats.end(), {"--min-support", "1", "--threads", "3"});
  const Run s = run(stats);
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("vertices: 12") != std::string::npos);
  CHECK(s.out.find("implicit vertices: 0") != std::string::npos);
  CHECK(s.out.find("thread 2: load ") != std::string::npos);
}
