// Copyright 2026 The fairscore Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "fairscore/estimators.hpp"
#include "fairscore/sampler.hpp"

namespace fairscore::detail {

// Draws s samples from `sampler` in kSampleChunk-sized chunks and hands each to
// body(context, chunk_result, global_index, w). Each worker owns one Context
// (scratch buffers); each chunk owns one Result. Results come back indexed by
// chunk so callers merge them in a fixed order.
template <class Context, class Result, class MakeContext, class Body>
std::vector<Result> sample_in_chunks(const CapSampler& sampler, RngStream& rng, std::size_t s,
                                     const RunOptions& options, MakeContext make_context,
                                     Body body) {
  const RngStream base(rng.next_u64());
  const std::size_t chunks = (s + kSampleChunk - 1) / kSampleChunk;
  std::vector<Result> results(chunks);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      Context context = make_context();
      std::vector<double> w(sampler.dimension());
      for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
        RngStream stream = base.split(c);
        const std::size_t begin = c * kSampleChunk;
        const std::size_t end = std::min(s, begin + kSampleChunk);
        for (std::size_t i = begin; i < end; ++i) {
          sampler.sample_into(stream, w);
          body(context, results[c], i, std::span<const double>(w));
        }
        const std::size_t finished = done.fetch_add(end - begin) + (end - begin);
        if (options.progress) options.progress(finished, s);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(chunks, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace fairscore::detail
