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

#include "parm/miner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <tuple>
#include <unordered_set>

namespace parm {

// ---------------------------------------------------------------------------
// Configuration and result containers

void MinerConfig::validate() const {
  if (!std::isfinite(min_support.value) || min_support.value < 0)
    throw ConfigError("minimum support must be a nonnegative number");
  if (min_support.relative && !(min_support.value > 0 && min_support.value <= 1))
    throw ConfigError("relative minimum support must be in (0, 1]");
  if (max_length < 1) throw ConfigError("maximum length must be at least 1");
  if (candidate_reduction && !(*candidate_reduction > 0 && *candidate_reduction <= 1))
    throw ConfigError("candidate reduction factor must be in (0, 1]");
  if (sampling_rate && !(*sampling_rate > 0 && *sampling_rate <= 1))
    throw ConfigError("sampling rate must be in (0, 1]");
  if (threads < 1 || threads > 1024) throw ConfigError("thread count must be between 1 and 1024");
  if (!std::isfinite(z) || z <= 0) throw ConfigError("z must be a positive number");
}

double MinerConfig::threshold(std::size_t num_vertices) const {
  return min_support.relative ? min_support.value * static_cast<double>(num_vertices) : min_support.value;
}

const FrequentPattern& FrequentSets::at(PatternRef ref) const {
  if (ref.group == PatternRef::kReachGroup) return reachability.at(ref.index);
  return by_length.at(ref.group).at(ref.index);
}

std::size_t FrequentSets::count_simple() const {
  std::size_t n = 0;
  for (std::size_t i = 1; i < by_length.size(); ++i) n += by_length[i].size();
  return n;
}

const FrequentPattern* FrequentSets::find(const PathPattern& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? nullptr : &at(it->second);
}

void FrequentSets::rebuild_index() {
  index_.clear();
  rule_patterns.clear();
  std::vector<std::uint32_t> offset(by_length.size() + 1, 0);
  for (std::uint32_t g = 0; g < by_length.size(); ++g) {
    for (std::uint32_t i = 0; i < by_length[g].size(); ++i) {
      index_.emplace(by_length[g][i].pattern(), PatternRef{g, i});
      if (g >= 1) rule_patterns.push_back({g, i});
    }
  }
  for (std::uint32_t i = 0; i < reachability.size(); ++i) {
    index_.emplace(reachability[i].pattern(), PatternRef{PatternRef::kReachGroup, i});
    rule_patterns.push_back({PatternRef::kReachGroup, i});
  }
  std::uint32_t running = 0;
  for (std::size_t g = 1; g < by_length.size(); ++g) {
    offset[g] = running;
    running += static_cast<std::uint32_t>(by_length[g].size());
  }
  const std::uint32_t reach_offset = running;
  auto rule_index = [&](const PathPattern& p) -> std::optional<std::uint32_t> {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    if (it->second.group == PatternRef::kReachGroup) return reach_offset + it->second.index;
    if (it->second.group == 0) return std::nullopt;
    return offset[it->second.group] + it->second.index;
  };
  links.assign(rule_patterns.size(), {});
  for (std::uint32_t c = 0; c < rule_patterns.size(); ++c) {
    const PathPattern& p = rule_pattern(c).pattern();
    for (std::size_t j = 0; j < p.sets().size(); ++j) {
      const AttrSet& s = p.set(j);
      if (s.size() < 2) continue;
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        AttrSet smaller;
        for (std::size_t t = 0; t < s.size(); ++t)
          if (t != drop) smaller.push_back(s[t]);
        if (auto parent = rule_index(p.with_set(j, std::move(smaller)))) links[*parent].push_back(c);
      }
    }
    if (p.is_simple() && p.length() >= 2 && p.set(p.length()).size() == 1)
      if (auto parent = rule_index(p.prefix(p.length() - 1))) links[*parent].push_back(c);
  }
  for (auto& l : links) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
}

RuleMetrics compute_metrics(double both, double antecedent, double consequent, double num_vertices) {
  return {both, both / num_vertices, both / antecedent, both * num_vertices / (antecedent * consequent)};
}

void sort_rules(std::vector<Rule>& rules, const PropertyGraph& g) {
  struct Keyed {
    std::size_t length;
    std::string x, y;
    std::size_t index;
  };
  std::vector<Keyed> keys;
  keys.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i)
    keys.push_back({rules[i].antecedent.length() + rules[i].consequent.length(), to_text(rules[i].antecedent, g),
                    to_text(rules[i].consequent, g), i});
  std::sort(keys.begin(), keys.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.length, a.x, a.y) < std::tie(b.length, b.x, b.y);
  });
  std::vector<Rule> sorted;
  sorted.reserve(rules.size());
  for (const auto& k : keys) sorted.push_back(std::move(rules[k.index]));
  rules = std::move(sorted);
}

// ---------------------------------------------------------------------------
// Frequent attribute sets and the frontier

namespace {

struct AttrSetHash {
  std::size_t operator()(const AttrSet& s) const {
    std::size_t h = s.size();
    for (AttrId a : s) h ^= a + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

std::vector<FrequentPattern> discover_attribute_sets(const PropertyGraph& g, double threshold) {
  std::vector<FrequentPattern> out;
  std::vector<AttrSet> level;
  std::vector<std::vector<VertexId>> sources;
  for (AttrId a = 0; a < g.num_attributes(); ++a) {
    auto vs = g.vertices_with(a);
    if (static_cast<double>(vs.size()) > threshold) {
      level.push_back({a});
      sources.emplace_back(vs.begin(), vs.end());
    }
  }
  while (!level.empty()) {
    std::unordered_set<AttrSet, AttrSetHash> known(level.begin(), level.end());
    std::vector<AttrSet> next;
    std::vector<std::vector<VertexId>> next_sources;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        if (!std::equal(level[i].begin(), level[i].end() - 1, level[j].begin())) break;
        AttrSet cand = level[i];
        cand.push_back(level[j].back());
        bool closed = true;
        for (std::size_t drop = 0; drop + 2 < cand.size() && closed; ++drop) {
          AttrSet sub;
          for (std::size_t x = 0; x < cand.size(); ++x)
            if (x != drop) sub.push_back(cand[x]);
          closed = known.contains(sub);
        }
        if (!closed) continue;
        auto both = intersect(sources[i], sources[j]);
        if (static_cast<double>(both.size()) > threshold) {
          next.push_back(std::move(cand));
          next_sources.push_back(std::move(both));
        }
      }
    }
    for (std::size_t i = 0; i < level.size(); ++i) {
      FrequentPattern fp;
      fp.support = static_cast<double>(sources[i].size());
      fp.table = MatchTable::sources_only(PathPattern::vertex(level[i]), std::move(sources[i]));
      out.push_back(std::move(fp));
    }
    level = std::move(next);
    sources = std::move(next_sources);
  }
  return out;
}

bool suffix_admissible(const PropertyGraph& g, const AttrSet& set, LabelId label, std::size_t length,
                       double threshold, double psi) {
  if (length == 0) throw std::invalid_argument("suffix length must be at least 1");
  return suffix_bound_exceeds(g.count_target_edges(set, label), g.max_in_degree(),
                              psi * static_cast<double>(length - 1), threshold);
}

bool reach_target_admissible(std::uint64_t target_edges, std::size_t max_in_degree, std::size_t max_length,
                             double threshold) {
  long double paths = 0, power = 1;
  for (std::size_t j = 0; j < max_length; ++j) {
    paths += power;
    power *= static_cast<long double>(max_in_degree);
  }
  return static_cast<long double>(target_edges) * paths > threshold;
}

Frontier compute_frontier(const PropertyGraph& g, const std::vector<FrequentPattern>& attribute_sets,
                          double threshold, std::size_t max_length, ReachabilityBound bound) {
  Frontier f;
  f.max_in_degree = g.max_in_degree();
  for (const auto& p : attribute_sets)
    if (p.pattern().set(0).size() == 1) f.frequent_attributes.push_back(p.pattern().set(0)[0]);
  std::sort(f.frequent_attributes.begin(), f.frequent_attributes.end());
  f.targets.resize(g.num_labels());
  for (LabelId l = 0; l < g.num_labels(); ++l) {
    std::uint64_t best_source = 0, best_target = 0;
    for (AttrId a : f.frequent_attributes) {
      AttrId one[1] = {a};
      best_source = std::max(best_source, g.count_sources(one, l));
    }
    for (AttrId b = 0; b < g.num_attributes(); ++b) {
      AttrId one[1] = {b};
      const std::uint64_t c = g.count_target_edges(one, l);
      if (c > 0) f.targets[l].push_back({l, b, c});
      best_target = std::max(best_target, c);
    }
    const bool source_ok = static_cast<double>(best_source) > threshold;
    if (source_ok && static_cast<double>(best_target) > threshold) f.first_labels.push_back(l);
    const bool reach_ok = bound == ReachabilityBound::Unbounded
                              ? best_target > 0
                              : reach_target_admissible(best_target, f.max_in_degree, max_length, threshold);
    if (source_ok && reach_ok) f.reach_labels.push_back(l);
  }
  std::set_union(f.first_labels.begin(), f.first_labels.end(), f.reach_labels.begin(), f.reach_labels.end(),
                 std::back_inserter(f.labels));
  return f;
}

// ---------------------------------------------------------------------------
// The pipeline

namespace {

using TableJob = std::function<MatchTable(Shard)>;
using CountJob = std::function<std::vector<std::uint32_t>(Shard)>;
using PatternIndex = std::unordered_map<PathPattern, std::uint32_t, PatternHash>;

// Siblings that can join at `position`: everything but that position's last
// attribute agrees.
struct GroupKey {
  PathPattern base;
  std::size_t position;
  friend bool operator==(const GroupKey&, const GroupKey&) = default;
};

struct GroupKeyHash {
  std::size_t operator()(const GroupKey& k) const { return k.base.hash() * 31 + k.position; }
};

// A join product waiting for evaluation.
struct JoinCandidate {
  PathPattern pattern;
  std::size_t position;
  std::uint32_t left;
  std::vector<VertexId> both;  // sources shared by the two parents
};

AttrSet without(const AttrSet& s, std::size_t drop) {
  AttrSet out;
  out.reserve(s.size() - 1);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != drop) out.push_back(s[i]);
  return out;
}

// Table of `table` restricted to the sources in `keep` (a subset of them).
MatchTable select_sources(const MatchTable& table, const std::vector<VertexId>& keep, PathPattern pattern) {
  if (!table.has_targets()) return MatchTable::sources_only(std::move(pattern), keep);
  MatchTable out(std::move(pattern));
  std::size_t i = 0;
  for (VertexId v : keep) {
    while (i < table.size() && table.source(i) < v) ++i;
    if (i < table.size() && table.source(i) == v) out.add(v, table.targets_of(i));
  }
  return out;
}

class Engine {
 public:
  Engine(const PropertyGraph& g, const MinerConfig& config) : g_(g), cfg_(config), pool_(config.threads) {}

  MineResult run();

 private:
  bool frequent(std::size_t count) const { return static_cast<double>(count) / rho_ > theta_; }
  FrequentPattern make_frequent(MatchTable table) const;
  Shard shard(std::size_t w) const { return Shard{&owner_, static_cast<std::uint16_t>(w)}; }

  std::vector<MatchTable> evaluate(const std::vector<TableJob>& jobs);
  std::vector<std::vector<std::uint32_t>> count(const std::vector<CountJob>& jobs);
  MatchTable owned_zero(const FrequentPattern& p) const;
  const MatchTable& prefix_table(std::size_t length, std::uint32_t index) const;
  void add_pattern(std::size_t length, MatchTable table, std::vector<std::uint32_t>& fresh);
  void add_reach(MatchTable table, std::vector<std::uint32_t>& fresh);
  bool all_subpatterns_frequent(const PathPattern& c, const PatternIndex& index) const;

  void setup_partition();
  void discover_simple();
  void discover_simple_baseline();
  void discover_reachability();
  void discover_reachability_baseline();
  void discover_rules();
  void discover_rules_baseline();
  void emit(std::uint32_t x, std::uint32_t y, std::size_t both);
  std::vector<std::uint32_t> join_fixpoint(std::vector<std::uint32_t> fresh, std::size_t length, bool reach);

  const PropertyGraph& g_;
  const MinerConfig& cfg_;
  WorkerPool pool_;
  double theta_ = 0;
  double rho_ = 1.0;
  std::size_t k_ = 1;
  std::vector<std::uint16_t> owner_;
  std::vector<MatchTable> zero_tables_;
  std::vector<PatternIndex> simple_index_;
  PatternIndex reach_index_;
  ReachSets reach_;
  MineResult result_;
};

FrequentPattern Engine::make_frequent(MatchTable table) const {
  FrequentPattern fp;
  fp.support = static_cast<double>(table.size()) / rho_;
  if (result_.plan) {
    auto [population, sampled] = result_.plan->coverage(table.pattern.set(0));
    fp.estimate = estimate_frequency(table.size(), rho_, population, sampled, cfg_.z,
                                     cfg_.finite_population_correction);
  }
  fp.table = std::move(table);
  return fp;
}

std::vector<MatchTable> Engine::evaluate(const std::vector<TableJob>& jobs) {
  std::vector<MatchTable> out(jobs.size());
  const std::size_t workers = pool_.size();
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) out[j] = jobs[j](shard(0));
    return out;
  }
  std::vector<std::vector<MatchTable>> parts(jobs.size(), std::vector<MatchTable>(workers));
  pool_.run([&](std::size_t w) {
    for (std::size_t j = 0; j < jobs.size(); ++j) parts[j][w] = jobs[j](shard(w));
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) out[j] = merge_tables(std::move(parts[j]));
  return out;
}

std::vector<std::vector<std::uint32_t>> Engine::count(const std::vector<CountJob>& jobs) {
  std::vector<std::vector<std::uint32_t>> out(jobs.size());
  const std::size_t workers = pool_.size();
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) out[j] = jobs[j](shard(0));
    return out;
  }
  std::vector<std::vector<std::vector<std::uint32_t>>> parts(jobs.size(),
                                                             std::vector<std::vector<std::uint32_t>>(workers));
  pool_.run([&](std::size_t w) {
    for (std::size_t j = 0; j < jobs.size(); ++j) parts[j][w] = jobs[j](shard(w));
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    out[j] = std::move(parts[j][0]);
    for (std::size_t w = 1; w < workers; ++w)
      for (std::size_t i = 0; i < out[j].size(); ++i) out[j][i] += parts[j][w][i];
  }
  return out;
}

MatchTable Engine::owned_zero(const FrequentPattern& p) const {
  MatchTable t(p.pattern());
  for (VertexId v : p.table.sources())
    if (owner_[v] != Shard::kUnowned) t.add(v, std::span<const VertexId>(&v, 1));
  return t;
}

const MatchTable& Engine::prefix_table(std::size_t length, std::uint32_t index) const {
  if (length == 0) return zero_tables_.at(index);
  return result_.sets.by_length.at(length).at(index).table;
}

void Engine::add_pattern(std::size_t length, MatchTable table, std::vector<std::uint32_t>& fresh) {
  auto& level = result_.sets.by_length[length];
  const auto id = static_cast<std::uint32_t>(level.size());
  simple_index_[length].emplace(table.pattern, id);
  level.push_back(make_frequent(std::move(table)));
  fresh.push_back(id);
}

void Engine::add_reach(MatchTable table, std::vector<std::uint32_t>& fresh) {
  auto& level = result_.sets.reachability;
  const auto id = static_cast<std::uint32_t>(level.size());
  reach_index_.emplace(table.pattern, id);
  level.push_back(make_frequent(std::move(table)));
  fresh.push_back(id);
}

bool Engine::all_subpatterns_frequent(const PathPattern& c, const PatternIndex& index) const {
  for (std::size_t j = 0; j < c.sets().size(); ++j) {
    const AttrSet& s = c.set(j);
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop)
      if (!index.contains(c.with_set(j, without(s, drop)))) return false;
  }
  return true;
}

void Engine::setup_partition() {
  const Frontier& f = result_.sets.frontier;
  std::vector<LabelId> cost_labels = f.labels;
  if (cfg_.baseline) {
    cost_labels.resize(g_.num_labels());
    std::iota(cost_labels.begin(), cost_labels.end(), LabelId{0});
  }
  auto costs = estimate_costs(g_, cost_labels, f.frequent_attributes);
  if (cfg_.sampling()) {
    result_.plan = build_sample(g_, f.frequent_attributes, *cfg_.sampling_rate, cfg_.seed);
    for (VertexId v = 0; v < costs.size(); ++v)
      if (!result_.plan->in_sample[v]) costs[v] = 0;
  }
  result_.partition = partition(costs, cfg_.threads);
  owner_ = result_.partition.owner_map(g_.num_vertices());
}

// Horizontal closure of one length: joins siblings that share all positions
// but one, where they differ in their last attribute only.
std::vector<std::uint32_t> Engine::join_fixpoint(std::vector<std::uint32_t> fresh, std::size_t length, bool reach) {
  std::vector<std::uint32_t> all_new;
  auto& patterns = reach ? result_.sets.reachability : result_.sets.by_length[length];
  PatternIndex& index = reach ? reach_index_ : simple_index_[length];
  while (!fresh.empty()) {
    all_new.insert(all_new.end(), fresh.begin(), fresh.end());
    std::unordered_map<GroupKey, std::vector<std::uint32_t>, GroupKeyHash> groups;
    std::vector<const GroupKey*> order;
    for (std::uint32_t id : fresh) {
      const PathPattern& p = patterns[id].pattern();
      for (std::size_t j = 0; j < p.sets().size(); ++j) {
        const AttrSet& s = p.set(j);
        GroupKey key{p.with_set(j, AttrSet(s.begin(), s.end() - 1)), j};
        auto [it, inserted] = groups.try_emplace(std::move(key));
        if (inserted) order.push_back(&it->first);
        it->second.push_back(id);
      }
    }
    std::unordered_set<PathPattern, PatternHash> seen;
    std::vector<JoinCandidate> cands;
    for (const GroupKey* key : order) {
      const auto& members = groups.at(*key);
      for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          const auto& p = patterns[members[a]];
          const auto& q = patterns[members[b]];
          auto joined = horizontal_extend(p.pattern(), q.pattern());
          if (!joined || index.contains(*joined) || !seen.insert(*joined).second) continue;
          if (reach) {
            ++result_.stats.reachability_candidates;
          } else {
            ++result_.stats.simple_candidates;
          }
          if (!all_subpatterns_frequent(*joined, index)) continue;
          std::size_t position = 0;
          while (joined->set(position) == p.pattern().set(position)) ++position;
          if (!reach && !simple_index_[length - 1].contains(joined->prefix(length - 1))) continue;
          auto both = intersect(p.table.sources(), q.table.sources());
          if (!frequent(both.size())) continue;
          cands.push_back({std::move(*joined), position, members[a], std::move(both)});
        }
    }
    std::sort(cands.begin(), cands.end(),
              [](const JoinCandidate& a, const JoinCandidate& b) { return a.pattern < b.pattern; });
    std::vector<MatchTable> results(cands.size());
    std::vector<TableJob> jobs;
    std::vector<std::size_t> job_of;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const JoinCandidate& jc = cands[c];
      if (jc.position == 0) {
        results[c] = select_sources(patterns[jc.left].table, jc.both, jc.pattern);
        continue;
      }
      job_of.push_back(c);
      if (reach) {
        const ReachSet* rs = &reach_.at(jc.pattern.label(0));
        jobs.push_back([this, &jc, rs](Shard s) {
          return match_reachability(g_, jc.pattern, *rs, s, &jc.both, false);
        });
      } else {
        const PathPattern prefix = jc.pattern.prefix(length - 1);
        const MatchTable* base = &prefix_table(length - 1, simple_index_[length - 1].at(prefix));
        jobs.push_back([this, &jc, base, length](Shard s) {
          return extend_matches(g_, *base, jc.pattern.label(length - 1), jc.pattern.set(length), s, &jc.both);
        });
      }
    }
    auto evaluated = evaluate(jobs);
    for (std::size_t j = 0; j < jobs.size(); ++j) results[job_of[j]] = std::move(evaluated[j]);
    fresh.clear();
    for (auto& t : results) {
      if (!frequent(t.size())) continue;
      if (reach) {
        add_reach(std::move(t), fresh);
      } else {
        add_pattern(length, std::move(t), fresh);
      }
    }
  }
  return all_new;
}

void Engine::discover_simple() {
  const Frontier& f = result_.sets.frontier;
  const double psi = cfg_.psi();
  const std::size_t na = g_.num_attributes();
  for (std::size_t len = 1; len <= k_; ++len) {
    std::vector<std::uint32_t> units;
    const std::size_t prev_count = len == 1 ? zero_tables_.size() : result_.sets.by_length[len - 1].size();
    for (std::uint32_t i = 0; i < prev_count; ++i)
      if (is_unit(prefix_table(len - 1, i).pattern)) units.push_back(i);

    // Trailing hops that survive suffix pruning at this length, per label.
    std::vector<std::vector<SuffixCandidate>> suffixes(g_.num_labels());
    const std::vector<LabelId>* labels_here = &f.first_labels;
    std::vector<LabelId> every_label;
    if (len > 1) {
      every_label.resize(g_.num_labels());
      std::iota(every_label.begin(), every_label.end(), LabelId{0});
      labels_here = &every_label;
    }
    for (LabelId l : *labels_here) {
      suffixes[l] = apply_candidate_reduction(f.targets[l], psi, theta_, len, f.max_in_degree);
      result_.stats.pruned_suffixes += f.targets[l].size() - suffixes[l].size();
    }

    std::vector<CountJob> count_jobs;
    for (std::uint32_t u : units) {
      const MatchTable* t = &prefix_table(len - 1, u);
      count_jobs.push_back([this, t](Shard s) { return extension_counts_all(g_, *t, s); });
    }
    auto counts = count(count_jobs);

    std::vector<TableJob> jobs;
    for (std::size_t ui = 0; ui < units.size(); ++ui) {
      const MatchTable* t = &prefix_table(len - 1, units[ui]);
      for (LabelId l : *labels_here) {
        if (suffixes[l].empty()) continue;
        if (len == 1 && !(static_cast<double>(g_.count_sources(t->pattern.set(0), l)) > theta_)) continue;
        for (const SuffixCandidate& s : suffixes[l]) {
          ++result_.stats.simple_candidates;
          if (!frequent(counts[ui][l * na + s.attribute])) continue;
          const AttrId b = s.attribute;
          jobs.push_back([this, t, l, b](Shard sh) { return extend_matches(g_, *t, l, AttrSet{b}, sh); });
        }
      }
    }
    std::vector<std::uint32_t> fresh;
    for (auto& table : evaluate(jobs))
      if (frequent(table.size())) add_pattern(len, std::move(table), fresh);
    join_fixpoint(std::move(fresh), len, false);

    if (len == 1) {
      zero_tables_.clear();
    } else {
      for (auto& p : result_.sets.by_length[len - 1]) p.table.drop_targets();
    }
  }
  for (auto& p : result_.sets.by_length[k_]) p.table.drop_targets();
}

void Engine::discover_reachability() {
  const Frontier& f = result_.sets.frontier;
  const bool unbounded = cfg_.reachability_bound == ReachabilityBound::Unbounded;
  reach_ = build_reach_sets(g_, f.reach_labels, k_, unbounded);
  std::vector<MatchTable> seeds;
  for (const auto& p : result_.sets.by_length[0]) {
    if (p.pattern().set(0).size() != 1) continue;
    std::vector<VertexId> owned;
    for (VertexId v : p.table.sources())
      if (owner_[v] != Shard::kUnowned) owned.push_back(v);
    seeds.push_back(MatchTable::sources_only(p.pattern(), std::move(owned)));
  }
  struct Pair {
    std::size_t seed;
    LabelId label;
  };
  std::vector<Pair> pairs;
  std::vector<CountJob> count_jobs;
  for (std::size_t si = 0; si < seeds.size(); ++si)
    for (LabelId l : f.reach_labels) {
      if (!(static_cast<double>(g_.count_sources(seeds[si].pattern.set(0), l)) > theta_)) continue;
      pairs.push_back({si, l});
      const MatchTable* t = &seeds[si];
      const ReachSet* rs = &reach_.at(l);
      count_jobs.push_back([this, t, rs](Shard s) { return reachability_counts(g_, *t, *rs, s); });
    }
  auto counts = count(count_jobs);
  std::vector<TableJob> jobs;
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const LabelId l = pairs[pi].label;
    const MatchTable* seed = &seeds[pairs[pi].seed];
    const ReachSet* rs = &reach_.at(l);
    for (const SuffixCandidate& s : f.targets[l]) {
      if (!unbounded && !reach_target_admissible(s.target_edges, f.max_in_degree, k_, theta_)) {
        ++result_.stats.pruned_suffixes;
        continue;
      }
      ++result_.stats.reachability_candidates;
      if (!frequent(counts[pi][s.attribute])) continue;
      PathPattern p = PathPattern::reachability(seed->pattern.set(0), l, {s.attribute});
      jobs.push_back([this, seed, rs, p](Shard sh) {
        return match_reachability(g_, p, *rs, sh, &seed->sources(), false);
      });
    }
  }
  std::vector<std::uint32_t> fresh;
  for (auto& table : evaluate(jobs))
    if (frequent(table.size())) add_reach(std::move(table), fresh);
  join_fixpoint(std::move(fresh), 1, true);
  reach_.clear();
}

void Engine::discover_simple_baseline() {
  const std::size_t nl = g_.num_labels(), na = g_.num_attributes();
  constexpr std::size_t kChunk = 512;
  for (std::size_t len = 1; len <= k_; ++len) {
    const std::size_t prev_count = len == 1 ? zero_tables_.size() : result_.sets.by_length[len - 1].size();
    std::vector<std::uint32_t> fresh;
    std::vector<TableJob> jobs;
    auto flush = [&] {
      for (auto& table : evaluate(jobs))
        if (frequent(table.size())) add_pattern(len, std::move(table), fresh);
      jobs.clear();
    };
    for (std::uint32_t i = 0; i < prev_count; ++i) {
      const MatchTable* t = &prefix_table(len - 1, i);
      for (LabelId l = 0; l < nl; ++l)
        for (AttrId b = 0; b < na; ++b) {
          ++result_.stats.simple_candidates;
          jobs.push_back([this, t, l, b](Shard sh) { return extend_matches(g_, *t, l, AttrSet{b}, sh); });
          if (jobs.size() == kChunk) flush();
        }
    }
    flush();
    // Naive closure: every new pattern against every pattern of this length.
    std::unordered_set<PathPattern, PatternHash> tried;
    while (!fresh.empty()) {
      std::vector<std::uint32_t> round = std::move(fresh);
      fresh.clear();
      const auto& level = result_.sets.by_length[len];
      std::vector<PathPattern> cands;
      for (std::uint32_t a : round)
        for (std::uint32_t b = 0; b < level.size(); ++b) {
          auto joined = horizontal_extend(level[a].pattern(), level[b].pattern());
          if (!joined || simple_index_[len].contains(*joined) || !tried.insert(*joined).second) continue;
          cands.push_back(std::move(*joined));
        }
      std::sort(cands.begin(), cands.end());
      result_.stats.simple_candidates += cands.size();
      for (const PathPattern& c : cands) {
        auto it = simple_index_[len - 1].find(c.prefix(len - 1));
        if (it != simple_index_[len - 1].end()) {
          const MatchTable* base = &prefix_table(len - 1, it->second);
          jobs.push_back([this, base, c, len](Shard sh) {
            return extend_matches(g_, *base, c.label(len - 1), c.set(len), sh);
          });
        } else {
          jobs.push_back([this, c](Shard sh) { return match_pattern(g_, c, reach_, sh); });
        }
        if (jobs.size() == kChunk) flush();
      }
      flush();
    }
    if (len == 1) {
      zero_tables_.clear();
    } else {
      for (auto& p : result_.sets.by_length[len - 1]) p.table.drop_targets();
    }
  }
  for (auto& p : result_.sets.by_length[k_]) p.table.drop_targets();
}

void Engine::discover_reachability_baseline() {
  const bool unbounded = cfg_.reachability_bound == ReachabilityBound::Unbounded;
  std::vector<LabelId> all(g_.num_labels());
  std::iota(all.begin(), all.end(), LabelId{0});
  reach_ = build_reach_sets(g_, all, k_, unbounded);
  constexpr std::size_t kChunk = 512;
  std::vector<std::uint32_t> fresh;
  std::vector<TableJob> jobs;
  auto flush = [&] {
    for (auto& table : evaluate(jobs)) {
      table.drop_targets();
      if (frequent(table.size())) add_reach(std::move(table), fresh);
    }
    jobs.clear();
  };
  for (const auto& p : result_.sets.by_length[0]) {
    for (LabelId l : all)
      for (AttrId b = 0; b < g_.num_attributes(); ++b) {
        ++result_.stats.reachability_candidates;
        PathPattern c = PathPattern::reachability(p.pattern().set(0), l, {b});
        const ReachSet* rs = &reach_.at(l);
        jobs.push_back([this, c, rs](Shard sh) { return match_reachability(g_, c, *rs, sh, nullptr, false); });
        if (jobs.size() == kChunk) flush();
      }
  }
  flush();
  std::unordered_set<PathPattern, PatternHash> tried;
  while (!fresh.empty()) {
    std::vector<std::uint32_t> round = std::move(fresh);
    fresh.clear();
    const auto& level = result_.sets.reachability;
    std::vector<PathPattern> cands;
    for (std::uint32_t a : round)
      for (std::uint32_t b = 0; b < level.size(); ++b) {
        auto joined = horizontal_extend(level[a].pattern(), level[b].pattern());
        if (!joined || reach_index_.contains(*joined) || !tried.insert(*joined).second) continue;
        cands.push_back(std::move(*joined));
      }
    std::sort(cands.begin(), cands.end());
    result_.stats.reachability_candidates += cands.size();
    for (const PathPattern& c : cands) {
      jobs.push_back([this, c](Shard sh) { return match_pattern(g_, c, reach_, sh); });
      if (jobs.size() == kChunk) flush();
    }
    flush();
  }
  reach_.clear();
}

void Engine::emit(std::uint32_t x, std::uint32_t y, std::size_t both) {
  if (x == y) return;
  const FrequentSets& sets = result_.sets;
  const FrequentPattern& px = sets.rule_pattern(x);
  const FrequentPattern& py = sets.rule_pattern(y);
  if (!mutually_non_dominating(px.pattern(), py.pattern())) return;
  const double n = static_cast<double>(g_.num_vertices());
  const double est = static_cast<double>(both) / rho_;
  std::optional<FrequencyEstimate> estimate;
  if (result_.plan) {
    AttrSet sources = px.pattern().set(0);
    sources.insert(sources.end(), py.pattern().set(0).begin(), py.pattern().set(0).end());
    normalize(sources);
    auto [population, sampled] = result_.plan->coverage(sources);
    estimate = estimate_frequency(both, rho_, population, sampled, cfg_.z, cfg_.finite_population_correction);
  }
  for (int dir = 0; dir < 2; ++dir) {
    const FrequentPattern& a = dir == 0 ? px : py;
    const FrequentPattern& c = dir == 0 ? py : px;
    Rule r;
    r.antecedent = a.pattern();
    r.consequent = c.pattern();
    const RuleMetrics m = compute_metrics(est, a.support, c.support, n);
    r.asupp = m.asupp;
    r.rsupp = m.rsupp;
    r.conf = m.conf;
    r.lift = m.lift;
    r.estimated = result_.plan.has_value();
    r.estimate = estimate;
    result_.rules.push_back(std::move(r));
  }
}

void Engine::discover_rules() {
  FrequentSets& sets = result_.sets;
  const std::size_t total = sets.rule_patterns.size();
  std::vector<std::uint32_t> seeds;
  for (std::uint32_t i = 0; i < total; ++i) {
    const PathPattern& p = sets.rule_pattern(i).pattern();
    if (p.length() == 1 && is_unit(p)) seeds.push_back(i);
  }
  struct PairState {
    std::uint32_t x, y;
    std::vector<VertexId> both;
  };
  auto key = [](std::uint32_t a, std::uint32_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; };
  std::unordered_set<std::uint64_t> visited;
  const std::size_t workers = pool_.size();

  // Seed wave: every unordered pair of unit length-1 patterns.
  std::vector<std::vector<PairState>> per_seed(seeds.size());
  pool_.run([&](std::size_t w) {
    for (std::size_t a = w; a < seeds.size(); a += workers) {
      const auto& xs = sets.rule_pattern(seeds[a]).table.sources();
      for (std::size_t b = a; b < seeds.size(); ++b) {
        auto both = intersect(xs, sets.rule_pattern(seeds[b]).table.sources());
        if (frequent(both.size())) per_seed[a].push_back({seeds[a], seeds[b], std::move(both)});
      }
    }
  });
  result_.stats.rule_candidates += seeds.size() * (seeds.size() + 1) / 2;
  std::vector<PairState> wave;
  for (std::size_t a = 0; a < seeds.size(); ++a)
    for (std::size_t b = a; b < seeds.size(); ++b) visited.insert(key(seeds[a], seeds[b]));
  for (auto& v : per_seed)
    for (auto& s : v) wave.push_back(std::move(s));
  per_seed.clear();

  while (!wave.empty()) {
    for (const auto& s : wave) emit(s.x, s.y, s.both.size());
    struct Child {
      std::uint32_t x, y, added;
      std::size_t parent;
    };
    std::vector<Child> children;
    for (std::size_t pi = 0; pi < wave.size(); ++pi) {
      const auto& s = wave[pi];
      auto push = [&](std::uint32_t c, std::uint32_t other) {
        const std::uint32_t lo = std::min(c, other), hi = std::max(c, other);
        if (visited.insert(key(lo, hi)).second) children.push_back({lo, hi, c, pi});
      };
      for (std::uint32_t c : sets.links[s.x]) push(c, s.y);
      for (std::uint32_t c : sets.links[s.y]) push(c, s.x);
    }
    result_.stats.rule_candidates += children.size();
    std::vector<std::vector<VertexId>> shared(children.size());
    pool_.run([&](std::size_t w) {
      for (std::size_t i = w; i < children.size(); i += workers)
        shared[i] = intersect(sets.rule_pattern(children[i].added).table.sources(), wave[children[i].parent].both);
    });
    std::vector<PairState> next;
    for (std::size_t i = 0; i < children.size(); ++i)
      if (frequent(shared[i].size())) next.push_back({children[i].x, children[i].y, std::move(shared[i])});
    wave = std::move(next);
  }
}

void Engine::discover_rules_baseline() {
  const FrequentSets& sets = result_.sets;
  const std::size_t total = sets.rule_patterns.size();
  const std::size_t workers = pool_.size();
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> hits(total);
  pool_.run([&](std::size_t w) {
    for (std::size_t a = w; a < total; a += workers) {
      const auto& xs = sets.rule_pattern(a).table.sources();
      for (std::size_t b = a + 1; b < total; ++b) {
        const std::size_t both = intersection_size(xs, sets.rule_pattern(b).table.sources());
        if (frequent(both)) hits[a].emplace_back(static_cast<std::uint32_t>(b), both);
      }
    }
  });
  result_.stats.rule_candidates += total * (total - 1) / 2;
  for (std::uint32_t a = 0; a < total; ++a)
    for (auto [b, both] : hits[a]) emit(a, b, both);
}

MineResult Engine::run() {
  cfg_.validate();
  const std::size_t n = g_.num_vertices();
  theta_ = cfg_.threshold(n);
  k_ = cfg_.max_length;
  rho_ = cfg_.sampling() ? *cfg_.sampling_rate : 1.0;
  result_.threshold = theta_;
  result_.sets.by_length.resize(k_ + 1);
  simple_index_.resize(k_ + 1);
  if (n == 0) {
    result_.stats.warnings.push_back("graph has no vertices");
    result_.sets.rebuild_index();
    return std::move(result_);
  }
  if (theta_ >= static_cast<double>(n)) {
    result_.stats.warnings.push_back("minimum support is not below the vertex count; nothing can be frequent");
    result_.sets.rebuild_index();
    return std::move(result_);
  }

  result_.sets.by_length[0] = discover_attribute_sets(g_, theta_);
  for (std::uint32_t i = 0; i < result_.sets.by_length[0].size(); ++i)
    simple_index_[0].emplace(result_.sets.by_length[0][i].pattern(), i);
  result_.sets.frontier = compute_frontier(g_, result_.sets.by_length[0], theta_, k_, cfg_.reachability_bound);
  setup_partition();
  for (const auto& p : result_.sets.by_length[0]) zero_tables_.push_back(owned_zero(p));

  if (cfg_.baseline) {
    discover_simple_baseline();
    discover_reachability_baseline();
  } else {
    discover_simple();
    discover_reachability();
  }
  result_.sets.rebuild_index();
  if (cfg_.baseline) {
    discover_rules_baseline();
  } else {
    discover_rules();
  }
  sort_rules(result_.rules, g_);

  result_.stats.attribute_sets = result_.sets.by_length[0].size();
  result_.stats.simple_patterns = result_.sets.count_simple();
  result_.stats.reachability_patterns = result_.sets.reachability.size();
  result_.stats.rules = result_.rules.size();
  return std::move(result_);
}

}  // namespace

MineResult mine(const PropertyGraph& g, const MinerConfig& config) {
  config.validate();
  Engine engine(g, config);
  return engine.run();
}

}  // namespace parm
