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

#include "parm/scheduler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace parm {

std::vector<std::uint16_t> Partition::owner_map(std::size_t num_vertices) const {
  std::vector<std::uint16_t> owner(num_vertices, 0xffff);
  for (std::size_t w = 0; w < assignments.size(); ++w)
    for (VertexId v : assignments[w]) owner.at(v) = static_cast<std::uint16_t>(w);
  return owner;
}

std::uint64_t Partition::max_load() const {
  return loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
}

std::uint64_t estimate_cost(const PropertyGraph& g, VertexId v, const std::vector<LabelId>& frequent_labels,
                            const std::vector<AttrId>& frequent_attributes) {
  std::uint64_t attrs = 0;
  for (AttrId a : g.attributes_of(v))
    if (std::binary_search(frequent_attributes.begin(), frequent_attributes.end(), a)) ++attrs;
  if (attrs == 0) return 0;
  std::uint64_t degree = 0;
  for (const Edge& e : g.edges())
    if (e.src == v && std::binary_search(frequent_labels.begin(), frequent_labels.end(), e.label)) ++degree;
  return degree * attrs;
}

std::vector<std::uint64_t> estimate_costs(const PropertyGraph& g, const std::vector<LabelId>& frequent_labels,
                                          const std::vector<AttrId>& frequent_attributes) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint8_t> label_ok(g.num_labels(), 0);
  for (LabelId l : frequent_labels)
    if (l < label_ok.size()) label_ok[l] = 1;
  std::vector<std::uint64_t> degree(n, 0);
  for (const Edge& e : g.edges())
    if (label_ok[e.label]) ++degree[e.src];
  std::vector<std::uint64_t> cost(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (degree[v] == 0) continue;
    std::uint64_t attrs = 0;
    for (AttrId a : g.attributes_of(v))
      if (std::binary_search(frequent_attributes.begin(), frequent_attributes.end(), a)) ++attrs;
    cost[v] = degree[v] * attrs;
  }
  return cost;
}

Partition partition(const std::vector<std::uint64_t>& costs, std::size_t threads) {
  if (threads == 0) throw std::invalid_argument("thread count must be positive");
  if (threads > 0xffff) throw std::invalid_argument("too many threads");
  std::vector<VertexId> order;
  for (VertexId v = 0; v < costs.size(); ++v)
    if (costs[v] > 0) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return costs[a] > costs[b]; });
  Partition p;
  p.assignments.assign(threads, {});
  p.loads.assign(threads, 0);
  p.capacity = (order.size() + threads - 1) / threads;
  for (VertexId v : order) {
    std::size_t best = threads;
    for (std::size_t w = 0; w < threads; ++w) {
      if (p.assignments[w].size() >= p.capacity) continue;
      if (best == threads || p.loads[w] < p.loads[best]) best = w;
    }
    p.assignments[best].push_back(v);
    p.loads[best] += costs[v];
  }
  for (auto& a : p.assignments) std::sort(a.begin(), a.end());
  return p;
}

namespace {

void search(const std::vector<std::uint64_t>& items, std::size_t i, std::vector<std::uint64_t>& loads,
            std::vector<std::size_t>& counts, std::size_t capacity, std::uint64_t current, std::uint64_t& best) {
  if (current >= best) return;
  if (i == items.size()) {
    best = current;
    return;
  }
  for (std::size_t w = 0; w < loads.size(); ++w) {
    if (counts[w] >= capacity) continue;
    // Empty threads are interchangeable; trying one is enough.
    if (loads[w] == 0 && counts[w] == 0 && w > 0 && counts[w - 1] == 0) break;
    loads[w] += items[i];
    ++counts[w];
    search(items, i + 1, loads, counts, capacity, std::max(current, loads[w]), best);
    --counts[w];
    loads[w] -= items[i];
  }
}

}  // namespace

std::uint64_t optimal_max_load(const std::vector<std::uint64_t>& costs, std::size_t threads) {
  if (threads == 0) throw std::invalid_argument("thread count must be positive");
  std::vector<std::uint64_t> items;
  for (auto c : costs)
    if (c > 0) items.push_back(c);
  std::sort(items.rbegin(), items.rend());
  if (items.empty()) return 0;
  const std::size_t capacity = (items.size() + threads - 1) / threads;
  std::vector<std::uint64_t> loads(threads, 0);
  std::vector<std::size_t> counts(threads, 0);
  std::uint64_t best = std::accumulate(items.begin(), items.end(), std::uint64_t{0}) + 1;
  search(items, 0, loads, counts, capacity, 0, best);
  return best;
}

WorkerPool::WorkerPool(std::size_t threads) : size_(threads) {
  if (threads == 0) throw std::invalid_argument("thread count must be positive");
  for (std::size_t i = 1; i < threads; ++i) threads_.emplace_back([this, i] { loop(i); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::run(const std::function<void(std::size_t)>& job) {
  if (size_ == 1) {
    job(0);
    return;
  }
  {
    std::lock_guard lock(mu_);
    job_ = &job;
    pending_ = size_ - 1;
    error_ = nullptr;
    ++generation_;
  }
  start_cv_.notify_all();
  std::exception_ptr mine;
  try {
    job(0);
  } catch (...) {
    mine = std::current_exception();
  }
  std::unique_lock lock(mu_);
  done_cv_.wait(lock, [this] { return pending_ == 0; });
  job_ = nullptr;
  if (mine) std::rethrow_exception(mine);
  if (error_) std::rethrow_exception(error_);
}

void WorkerPool::loop(std::size_t id) {
  std::uint64_t seen = 0;
  while (true) {
    const std::function<void(std::size_t)>* job;
    {
      std::unique_lock lock(mu_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
    }
    std::exception_ptr err;
    try {
      (*job)(id);
    } catch (...) {
      err = std::current_exception();
    }
    {
      std::lock_guard lock(mu_);
      if (err && !error_) error_ = err;
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

}  // namespace parm
