#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fbsdde {

/// Scenario blocks are the unit of parallel work. The partition depends only
/// on the scenario count, never on the worker count, so every blocked
/// reduction below produces the same bits for any number of workers.
inline constexpr std::size_t kScenarioBlock = 2048;

struct BlockRange {
    std::size_t index;
    std::size_t begin;
    std::size_t end;
};

std::size_t block_count(std::size_t n) noexcept;

/// Runs `body` once per block, distributing blocks over `workers` threads.
/// With workers <= 1 everything runs inline on the caller's thread.
void for_each_block(std::size_t n, std::size_t workers,
                    const std::function<void(const BlockRange&)>& body);

/// Sum with a fixed association order: sequential within each block, then
/// block partials added in block order.
double blocked_sum(std::span<const double> values, std::size_t workers = 1);

/// Sample mean and unbiased standard deviation using blocked sums.
struct SampleMoments {
    double mean = 0.0;
    double stddev = 0.0;
};
SampleMoments sample_moments(std::span<const double> values, std::size_t workers = 1);

}  // namespace fbsdde
