#include "src/support/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace fbsdde {

std::size_t block_count(std::size_t n) noexcept {
    return (n + kScenarioBlock - 1) / kScenarioBlock;
}

void for_each_block(std::size_t n, std::size_t workers,
                    const std::function<void(const BlockRange&)>& body) {
    const std::size_t blocks = block_count(n);
    auto range = [n](std::size_t b) {
        const std::size_t begin = b * kScenarioBlock;
        return BlockRange{b, begin, std::min(n, begin + kScenarioBlock)};
    };

    if (workers <= 1 || blocks <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) body(range(b));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        const std::size_t threads = std::min(workers, blocks);
        pool.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
                    try {
                        body(range(b));
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

double blocked_sum(std::span<const double> values, std::size_t workers) {
    std::vector<double> partial(block_count(values.size()), 0.0);
    for_each_block(values.size(), workers, [&](const BlockRange& r) {
        double s = 0.0;
        for (std::size_t k = r.begin; k < r.end; ++k) s += values[k];
        partial[r.index] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

SampleMoments sample_moments(std::span<const double> values, std::size_t workers) {
    SampleMoments out;
    const std::size_t n = values.size();
    if (n == 0) return out;

    // A constant sample has exactly zero spread; skip the rounding noise of
    // the two-pass formula in that case.
    const bool constant = std::all_of(values.begin(), values.end(),
                                      [&](double v) { return v == values.front(); });
    if (constant) {
        out.mean = values.front();
        return out;
    }

    out.mean = blocked_sum(values, workers) / static_cast<double>(n);
    if (n < 2) return out;

    std::vector<double> partial(block_count(n), 0.0);
    for_each_block(n, workers, [&](const BlockRange& r) {
        double s = 0.0;
        for (std::size_t k = r.begin; k < r.end; ++k) {
            const double d = values[k] - out.mean;
            s += d * d;
        }
        partial[r.index] = s;
    });
    double ss = 0.0;
    for (double p : partial) ss += p;
    out.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    return out;
}

}  // namespace fbsdde
