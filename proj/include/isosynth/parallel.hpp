// SPDX-License-Identifier: Apache-2.0
//
// isosynth - omni-equivalent channel synthesis from angle-resolved measurements
// Copyright (C) 2026 The isosynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef ISOSYNTH_PARALLEL_HPP
#define ISOSYNTH_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace isosynth
{

inline unsigned default_workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count) on up to `workers` threads. Work items are
// handed out dynamically; callers write results into per-index slots so the
// outcome never depends on scheduling. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body &&body)
{
    workers = std::max(1u, std::min<unsigned>(workers, unsigned(std::max<std::size_t>(count, 1))));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&]
    {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try
            {
                body(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(count);
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

// Sum with a fixed reduction tree: sequential sums over blocks of 4096
// values, then pairwise combination of the block sums. The result is
// independent of how (or whether) the blocks are computed in parallel.
inline double fixed_tree_sum(std::span<const double> values, unsigned workers = 1)
{
    constexpr std::size_t block = 4096;
    const std::size_t n_blocks = (values.size() + block - 1) / block;
    if (n_blocks == 0)
        return 0.0;

    std::vector<double> partial(n_blocks, 0.0);
    parallel_for(n_blocks, workers,
                 [&](std::size_t b)
                 {
                     const std::size_t lo = b * block;
                     const std::size_t hi = std::min(values.size(), lo + block);
                     double s = 0.0;
                     for (std::size_t i = lo; i < hi; ++i)
                         s += values[i];
                     partial[b] = s;
                 });

    for (std::size_t width = 1; width < n_blocks; width *= 2)
        for (std::size_t i = 0; i + width < n_blocks; i += 2 * width)
            partial[i] += partial[i + width];
    return partial[0];
}

} // namespace isosynth

#endif
