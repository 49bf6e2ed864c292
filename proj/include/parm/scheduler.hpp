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

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "parm/graph.hpp"

namespace parm {

/// Static assignment of vertices to worker threads.
struct Partition {
  std::vector<std::vector<VertexId>> assignments;
  std::vector<std::uint64_t> loads;
  std::size_t capacity = 0;

  /// `owner[v]` is the worker of v, or 0xffff when v was eliminated.
  std::vector<std::uint16_t> owner_map(std::size_t num_vertices) const;
  std::uint64_t max_load() const;
};

/// d_F(v) * |A_F(v)|: out-edges (multi-edges counted) whose label is in
/// `frequent_labels`, times the number of v's attributes in `frequent_attributes`.
/// Both lists must be ascending.
std::uint64_t estimate_cost(const PropertyGraph& g, VertexId v, const std::vector<LabelId>& frequent_labels,
                            const std::vector<AttrId>& frequent_attributes);
std::vector<std::uint64_t> estimate_costs(const PropertyGraph& g, const std::vector<LabelId>& frequent_labels,
                                          const std::vector<AttrId>& frequent_attributes);

/// Longest-processing-time greedy. Zero-cost vertices are dropped; the rest
/// are taken by descending cost (ties: lower id first) and each goes to the
/// least-loaded thread still under capacity ceil(retained / threads), ties to
/// the lower thread index.
Partition partition(const std::vector<std::uint64_t>& costs, std::size_t threads);

/// Exhaustive minimum of the maximum load under the same capacity limit.
/// Exponential; meant for a dozen items at most.
std::uint64_t optimal_max_load(const std::vector<std::uint64_t>& costs, std::size_t threads);

/// Fixed set of threads that all run the same job and then meet at a barrier.
/// Worker 0 is the calling thread.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return size_; }
  /// Calls job(w) for every worker w and returns once all are done. The first
  /// exception thrown by any worker is rethrown here.
  void run(const std::function<void(std::size_t)>& job);

 private:
  void loop(std::size_t id);

  std::size_t size_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable start_cv_, done_cv_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::uint64_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

}  // namespace parm
