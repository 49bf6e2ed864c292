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

// Python bindings. Results are converted to plain records eagerly so they
// outlive the graph they were mined from.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <variant>

#include "parm/cli.hpp"
#include "parm/generator.hpp"
#include "parm/graph.hpp"
#include "parm/miner.hpp"
#include "parm/oracle.hpp"
#include "parm/rule_io.hpp"

namespace py = pybind11;
using namespace parm;

namespace {

struct PatternInfo {
  std::string text;
  std::size_t length = 0;
  bool reachability = false;
  double support = 0;
  std::vector<std::string> sources;
  std::optional<std::pair<double, double>> ci;
};

struct PyMineResult {
  double threshold = 0;
  std::vector<RuleRecord> rules;
  std::vector<PatternInfo> patterns;
  MineStats stats;

  std::string to_jsonl() const {
    std::string out;
    for (const RuleRecord& r : rules) out += serialize_rule(r) + '\n';
    return out;
  }
};

PatternInfo describe(const FrequentPattern& fp, const PropertyGraph& g) {
  PatternInfo info;
  info.text = to_text(fp.pattern(), g);
  info.length = fp.pattern().length();
  info.reachability = !fp.pattern().is_simple();
  info.support = fp.support;
  for (VertexId v : fp.table.sources()) info.sources.push_back(g.vertex_name(v));
  if (fp.estimate) info.ci = std::make_pair(fp.estimate->ci_low, fp.estimate->ci_high);
  return info;
}

MinSupport to_min_support(const std::variant<double, std::string>& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return parse_min_support(*s);
  MinSupport m;
  m.value = std::get<double>(v);
  return m;
}

PyMineResult run_mine(const PropertyGraph& g, const std::variant<double, std::string>& min_support,
                      std::size_t max_length, std::optional<double> candidate_reduction,
                      std::optional<double> sampling_rate, std::size_t threads, std::uint64_t seed, double z,
                      bool finite_population_correction, bool unbounded_reachability, bool baseline) {
  MinerConfig cfg;
  cfg.min_support = to_min_support(min_support);
  cfg.max_length = max_length;
  cfg.candidate_reduction = candidate_reduction;
  cfg.sampling_rate = sampling_rate;
  cfg.threads = threads;
  cfg.seed = seed;
  cfg.z = z;
  cfg.finite_population_correction = finite_population_correction;
  cfg.reachability_bound = unbounded_reachability ? ReachabilityBound::Unbounded : ReachabilityBound::KBounded;
  cfg.baseline = baseline;
  MineResult r;
  {
    py::gil_scoped_release release;
    r = mine(g, cfg);
  }
  PyMineResult out;
  out.threshold = r.threshold;
  out.stats = r.stats;
  for (const Rule& rule : r.rules) out.rules.push_back(to_record(rule, g));
  for (const auto& level : r.sets.by_length)
    for (const FrequentPattern& fp : level) out.patterns.push_back(describe(fp, g));
  for (const FrequentPattern& fp : r.sets.reachability) out.patterns.push_back(describe(fp, g));
  return out;
}

py::dict stats_dict(const MineStats& s) {
  py::dict d;
  d["attribute_sets"] = s.attribute_sets;
  d["simple_patterns"] = s.simple_patterns;
  d["reachability_patterns"] = s.reachability_patterns;
  d["rules"] = s.rules;
  d["simple_candidates"] = s.simple_candidates;
  d["reachability_candidates"] = s.reachability_candidates;
  d["rule_candidates"] = s.rule_candidates;
  d["pruned_suffixes"] = s.pruned_suffixes;
  d["warnings"] = s.warnings;
  return d;
}

std::vector<std::string> names(const Dictionary& d) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(d.name(static_cast<std::uint32_t>(i)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_parm, m) {
  m.doc() = "Frequent path association rule mining on property graphs.";

  static py::exception<FormatError> format_error(m, "FormatError", PyExc_ValueError);
  static py::exception<RuleParseError> rule_parse_error(m, "RuleParseError", PyExc_ValueError);
  static py::exception<OracleGuardError> guard_error(m, "OracleGuardError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const FormatError& e) {
      py::set_error(format_error, e.what());
    } catch (const RuleParseError& e) {
      py::set_error(rule_parse_error, e.what());
    } catch (const OracleGuardError& e) {
      py::set_error(guard_error, e.what());
    }
  });

  py::class_<PropertyGraph>(m, "Graph")
      .def_static("load", &load_graph_files, py::arg("vertices"), py::arg("edges"),
                  "Reads a vertex TSV and an edge TSV from disk.")
      .def_static(
          "from_tsv",
          [](const std::string& vertices, const std::string& edges) {
            std::istringstream v(vertices), e(edges);
            return load_graph(v, e);
          },
          py::arg("vertices"), py::arg("edges"), "Parses TSV text already in memory.")
      .def("to_tsv",
           [](const PropertyGraph& g) {
             std::ostringstream v, e;
             save_graph(g, v, e);
             return std::make_pair(v.str(), e.str());
           })
      .def_property_readonly("num_vertices", &PropertyGraph::num_vertices)
      .def_property_readonly("num_edges", &PropertyGraph::num_edges)
      .def_property_readonly("labels", [](const PropertyGraph& g) { return names(g.labels()); })
      .def_property_readonly("attributes", [](const PropertyGraph& g) { return names(g.attributes()); })
      .def_property_readonly("max_in_degree", &PropertyGraph::max_in_degree)
      .def("vertex_name", &PropertyGraph::vertex_name)
      .def("vertex_attributes",
           [](const PropertyGraph& g, const std::string& name) {
             const auto v = g.find_vertex(name);
             if (!v) throw py::key_error(name);
             std::vector<std::string> out;
             for (AttrId a : g.attributes_of(*v)) out.push_back(g.attributes().name(a));
             return out;
           })
      .def("__repr__", [](const PropertyGraph& g) {
        return "<parm.Graph vertices=" + std::to_string(g.num_vertices()) +
               " edges=" + std::to_string(g.num_edges()) + ">";
      });

  py::class_<RuleRecord>(m, "Rule")
      .def_readonly("antecedent", &RuleRecord::antecedent)
      .def_readonly("consequent", &RuleRecord::consequent)
      .def_readonly("asupp", &RuleRecord::asupp)
      .def_readonly("rsupp", &RuleRecord::rsupp)
      .def_readonly("conf", &RuleRecord::conf)
      .def_readonly("lift", &RuleRecord::lift)
      .def_readonly("estimated", &RuleRecord::estimated)
      .def_readonly("ci", &RuleRecord::ci)
      .def("to_json", &serialize_rule)
      .def_static("from_json", [](const std::string& line) { return parse_rule(line, 1); })
      .def("__repr__", [](const RuleRecord& r) { return "<parm.Rule " + r.antecedent + " => " + r.consequent + ">"; });

  py::class_<PatternInfo>(m, "Pattern")
      .def_readonly("text", &PatternInfo::text)
      .def_readonly("length", &PatternInfo::length)
      .def_readonly("reachability", &PatternInfo::reachability)
      .def_readonly("support", &PatternInfo::support)
      .def_readonly("sources", &PatternInfo::sources)
      .def_readonly("ci", &PatternInfo::ci)
      .def("__repr__", [](const PatternInfo& p) { return "<parm.Pattern " + p.text + ">"; });

  py::class_<PyMineResult>(m, "MineResult")
      .def_readonly("threshold", &PyMineResult::threshold)
      .def_readonly("rules", &PyMineResult::rules)
      .def_readonly("patterns", &PyMineResult::patterns)
      .def_property_readonly("stats", [](const PyMineResult& r) { return stats_dict(r.stats); })
      .def("to_jsonl", &PyMineResult::to_jsonl, "Rules in the CLI output format.");

  m.def("mine", &run_mine, py::arg("graph"), py::arg("min_support") = 1.0, py::arg("max_length") = 2,
        py::kw_only(), py::arg("candidate_reduction") = py::none(), py::arg("sampling_rate") = py::none(),
        py::arg("threads") = 1, py::arg("seed") = 0, py::arg("z") = 1.96,
        py::arg("finite_population_correction") = true, py::arg("unbounded_reachability") = false,
        py::arg("baseline") = false,
        "Mines frequent path association rules. `min_support` is an absolute count or a string like '2%'.");

  m.def(
      "oracle",
      [](const PropertyGraph& g, double threshold, std::size_t max_length, bool unbounded) {
        const OracleResult o = oracle_mine(g, threshold, max_length, unbounded);
        std::vector<RuleRecord> out;
        for (const OracleRule& r : o.rules) out.push_back(to_record(r, g));
        return out;
      },
      py::arg("graph"), py::arg("threshold"), py::arg("max_length") = 2, py::arg("unbounded_reachability") = false,
      "Exhaustive reference miner for small graphs. Rules are ordered by (antecedent, consequent).");

  m.def(
      "generate",
      [](std::size_t vertices, std::size_t edges, std::size_t labels, std::size_t attributes, double attrs_per_vertex,
         std::optional<std::size_t> max_attrs_per_vertex, double attr_skew, std::uint64_t seed) {
        GeneratorParams p;
        p.vertices = vertices;
        p.edges = edges;
        p.labels = labels;
        p.attributes = attributes;
        p.attrs_per_vertex = attrs_per_vertex;
        p.max_attrs_per_vertex = max_attrs_per_vertex;
        p.attr_skew = attr_skew;
        p.seed = seed;
        return generate_graph(p);
      },
      py::arg("vertices"), py::arg("edges"), py::kw_only(), py::arg("labels") = 1, py::arg("attributes") = 1,
      py::arg("attrs_per_vertex") = 1.0, py::arg("max_attrs_per_vertex") = py::none(), py::arg("attr_skew") = 0.0,
      py::arg("seed") = 0, "Random property graph with Zipf-distributed attributes and uniform edges.");
}
