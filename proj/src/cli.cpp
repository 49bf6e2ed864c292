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

#include "parm/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>

#include "parm/generator.hpp"
#include "parm/graph.hpp"
#include "parm/oracle.hpp"
#include "parm/rule_io.hpp"
#include "parm/scheduler.hpp"

namespace parm {

namespace {

/// Raised for unreadable or unwritable files; maps to the input exit code.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphInputs {
  std::string vertices;
  std::string edges;
};

struct MineFlags {
  GraphInputs input;
  std::string min_support;
  std::size_t max_length = 2;
  std::size_t threads = 1;
  std::optional<double> candidate_reduction;
  std::optional<double> sampling_rate;
  std::uint64_t seed = 0;
  double z = 1.96;
  std::string output;
  bool unbounded = false;
  bool baseline = false;
  bool no_fpc = false;
};

void add_inputs(CLI::App* cmd, GraphInputs& in) {
  cmd->add_option("--vertices", in.vertices, "vertex TSV: name, then attributes")->required();
  cmd->add_option("--edges", in.edges, "edge TSV: source, label, target")->required();
}

void add_mining(CLI::App* cmd, MineFlags& f) {
  add_inputs(cmd, f.input);
  cmd->add_option("--min-support", f.min_support, "absolute count X or relative X%")->required();
  cmd->add_option("--max-length", f.max_length, "maximum pattern length k")->capture_default_str();
  cmd->add_flag("--unbounded-reachability", f.unbounded, "reachability paths of any length");
  cmd->add_flag("--baseline", f.baseline, "unpruned reference pipeline");
}

MinerConfig to_config(const MineFlags& f) {
  MinerConfig cfg;
  cfg.min_support = parse_min_support(f.min_support);
  cfg.max_length = f.max_length;
  cfg.threads = f.threads;
  cfg.candidate_reduction = f.candidate_reduction;
  cfg.sampling_rate = f.sampling_rate;
  cfg.seed = f.seed;
  cfg.z = f.z;
  cfg.reachability_bound = f.unbounded ? ReachabilityBound::Unbounded : ReachabilityBound::KBounded;
  cfg.baseline = f.baseline;
  cfg.finite_population_correction = !f.no_fpc;
  cfg.validate();
  return cfg;
}

PropertyGraph load(const GraphInputs& in) { return load_graph_files(in.vertices, in.edges); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string format_threshold(double theta) {
  if (theta == std::floor(theta) && std::fabs(theta) < 1e15) return std::to_string(static_cast<long long>(theta));
  return format_real(theta);
}

void print_summary(std::ostream& err, double theta, std::size_t attribute_sets, std::size_t simple,
                   std::size_t reach, std::size_t rules, const std::vector<std::string>& warnings) {
  err << "theta: " << format_threshold(theta) << '\n'
      << "attribute sets: " << attribute_sets << '\n'
      << "simple paths: " << simple << '\n'
      << "reachability paths: " << reach << '\n'
      << "rules: " << rules << '\n';
  for (const std::string& w : warnings) err << "warning: " << w << '\n';
}

int cmd_mine(const MineFlags& f, std::ostream& err) {
  const MinerConfig cfg = to_config(f);
  const PropertyGraph g = load(f.input);
  const MineResult r = mine(g, cfg);
  std::ostringstream body;
  write_rules(body, r.rules, g);
  write_text_file(f.output, body.str());
  print_summary(err, r.threshold, r.stats.attribute_sets, r.stats.simple_patterns, r.stats.reachability_patterns,
                r.stats.rules, r.stats.warnings);
  return kExitOk;
}

std::vector<RuleRecord> oracle_records(const OracleResult& res, const PropertyGraph& g) {
  struct Keyed {
    std::size_t length;
    RuleRecord rec;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(res.rules.size());
  for (const OracleRule& r : res.rules)
    keyed.push_back({r.antecedent.length() + r.consequent.length(), to_record(r, g)});
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.length, a.rec.antecedent, a.rec.consequent) <
           std::tie(b.length, b.rec.antecedent, b.rec.consequent);
  });
  std::vector<RuleRecord> out;
  out.reserve(keyed.size());
  for (Keyed& k : keyed) out.push_back(std::move(k.rec));
  return out;
}

int cmd_oracle(const MineFlags& f, const std::string& diff_path, std::ostream& out, std::ostream& err) {
  MinerConfig cfg = to_config(f);
  const PropertyGraph g = load(f.input);
  const double theta = cfg.threshold(g.num_vertices());
  const OracleResult res = oracle_mine(g, theta, cfg.max_length, f.unbounded);
  const std::vector<RuleRecord> records = oracle_records(res, g);

  std::size_t attribute_sets = 0, simple = 0, reach = 0;
  for (const auto& [p, sources] : res.patterns) {
    if (p.kind() == PatternKind::Reachability) ++reach;
    else if (p.length() == 0) ++attribute_sets;
    else ++simple;
  }

  std::ostringstream body;
  for (const RuleRecord& r : records) body << serialize_rule(r) << '\n';
  if (!f.output.empty()) write_text_file(f.output, body.str());
  else if (diff_path.empty()) out << body.str();
  print_summary(err, theta, attribute_sets, simple, reach, records.size(), {});

  if (diff_path.empty()) return kExitOk;
  std::ifstream in(diff_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + diff_path + "'");
  std::set<std::string> theirs;
  for (const RuleRecord& r : read_rules(in)) theirs.insert(serialize_rule(r));
  std::set<std::string> ours;
  for (const RuleRecord& r : records) ours.insert(serialize_rule(r));
  std::size_t differences = 0;
  for (const std::string& line : theirs)
    if (!ours.count(line)) {
      out << "< " << line << '\n';
      ++differences;
    }
  for (const std::string& line : ours)
    if (!theirs.count(line)) {
      out << "> " << line << '\n';
      ++differences;
    }
  err << "differences: " << differences << '\n';
  return differences == 0 ? kExitOk : kExitDiffers;
}

struct GenFlags {
  GeneratorParams params;
  std::optional<std::size_t> max_attrs;
  std::string prefix;
};

int cmd_gen(const GenFlags& f, std::ostream& err) {
  GeneratorParams p = f.params;
  p.max_attrs_per_vertex = f.max_attrs;
  PropertyGraph g;
  try {
    g = generate_graph(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::ostringstream v, e;
  save_graph(g, v, e);
  write_text_file(f.prefix + ".vertices.tsv", v.str());
  write_text_file(f.prefix + ".edges.tsv", e.str());
  err << "wrote " << g.num_vertices() << " vertices and " << g.num_edges() << " edges to " << f.prefix
      << ".{vertices,edges}.tsv\n";
  return kExitOk;
}

int cmd_stats(const MineFlags& f, std::ostream& out) {
  const MinerConfig cfg = to_config(f);
  const PropertyGraph g = load(f.input);
  const double theta = cfg.threshold(g.num_vertices());
  out << "vertices: " << g.num_vertices() << '\n'
      << "edges: " << g.num_edges() << '\n'
      << "implicit vertices: " << g.implicit_vertices() << '\n'
      << "labels: " << g.labels().size() << '\n'
      << "attributes: " << g.attributes().size() << '\n'
      << "max in-degree: " << g.max_in_degree() << '\n'
      << "theta: " << format_threshold(theta) << '\n';
  const std::vector<FrequentPattern> sets = discover_attribute_sets(g, theta);
  const Frontier frontier = compute_frontier(g, sets, theta, cfg.max_length, cfg.reachability_bound);
  out << "frequent attributes: " << frontier.frequent_attributes.size() << '\n'
      << "frequent labels: " << frontier.labels.size() << '\n';
  const Partition part = partition(estimate_costs(g, frontier.labels, frontier.frequent_attributes), cfg.threads);
  out << "thread capacity: " << part.capacity << '\n';
  for (std::size_t t = 0; t < part.loads.size(); ++t)
    out << "thread " << t << ": load " << part.loads[t] << ", vertices " << part.assignments[t].size() << '\n';
  return kExitOk;
}

}  // namespace

MinSupport parse_min_support(std::string_view text) {
  MinSupport s;
  std::string_view digits = text;
  if (!digits.empty() && digits.back() == '%') {
    s.relative = true;
    digits.remove_suffix(1);
  }
  double value = 0;
  const char* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, value);
  if (digits.empty() || ec != std::errc() || ptr != end || !std::isfinite(value) || value < 0)
    throw ConfigError("invalid minimum support '" + std::string(text) + "'");
  s.value = s.relative ? value / 100.0 : value;
  return s;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Path association rule mining over property graphs", "parm");
  app.require_subcommand(1);

  MineFlags mine_flags;
  CLI::App* mine_cmd = app.add_subcommand("mine", "mine frequent path patterns and rules");
  add_mining(mine_cmd, mine_flags);
  mine_cmd->add_option("--threads", mine_flags.threads, "worker threads")->capture_default_str();
  mine_cmd->add_option("--candidate-reduction", mine_flags.candidate_reduction, "suffix bound exponent psi");
  mine_cmd->add_option("--sampling-rate", mine_flags.sampling_rate, "stratified sampling rate rho");
  mine_cmd->add_option("--seed", mine_flags.seed, "sampling seed")->capture_default_str();
  mine_cmd->add_option("--z", mine_flags.z, "confidence interval z score")->capture_default_str();
  mine_cmd->add_flag("--no-finite-population-correction", mine_flags.no_fpc);
  mine_cmd->add_option("--output", mine_flags.output, "rules file (JSON lines)")->required();

  MineFlags oracle_flags;
  std::string diff_path;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force reference miner for small graphs");
  add_mining(oracle_cmd, oracle_flags);
  oracle_cmd->add_option("--output", oracle_flags.output, "rules file; stdout when omitted");
  oracle_cmd->add_option("--diff", diff_path, "compare against a miner rules file");

  GenFlags gen_flags;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a seeded synthetic property graph");
  gen_cmd->add_option("--vertices", gen_flags.params.vertices)->required();
  gen_cmd->add_option("--edges", gen_flags.params.edges)->required();
  gen_cmd->add_option("--labels", gen_flags.params.labels)->capture_default_str();
  gen_cmd->add_option("--attributes", gen_flags.params.attributes)->capture_default_str();
  gen_cmd->add_option("--attrs-per-vertex", gen_flags.params.attrs_per_vertex, "Poisson mean")
      ->capture_default_str();
  gen_cmd->add_option("--max-attrs-per-vertex", gen_flags.max_attrs);
  gen_cmd->add_option("--attr-skew", gen_flags.params.attr_skew, "Zipf exponent; 0 is uniform")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_flags.params.seed)->capture_default_str();
  gen_cmd->add_option("--out-prefix", gen_flags.prefix)->required();

  MineFlags stats_flags;
  CLI::App* stats_cmd = app.add_subcommand("stats", "graph statistics and per-thread load estimates");
  add_mining(stats_cmd, stats_flags);
  stats_cmd->add_option("--threads", stats_flags.threads)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (mine_cmd->parsed()) return cmd_mine(mine_flags, err);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_flags, diff_path, out, err);
    if (gen_cmd->parsed()) return cmd_gen(gen_flags, err);
    if (stats_cmd->parsed()) return cmd_stats(stats_flags, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OracleGuardError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const RuleParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace parm
