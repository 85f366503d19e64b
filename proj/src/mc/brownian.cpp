#include "src/mc/brownian.hpp"

#include <cmath>
#include <numbers>

#include "src/mc/philox.hpp"
#include "src/support/error.hpp"
#include "src/support/parallel.hpp"

namespace fbsdde {

BrownianLattice::BrownianLattice(TimeGrid grid, std::size_t scenarios,
                                 std::vector<double> increments, std::uint64_t seed)
    : grid_(grid),
      scenarios_(scenarios),
      seed_(seed),
      increments_(std::move(increments)),
      path_((grid.steps() + 1) * scenarios, 0.0) {
    if (scenarios == 0) {
        throw Error(ErrorCode::InvalidArgument, "Brownian lattice needs at least one scenario");
    }
    if (increments_.size() != grid.steps() * scenarios) {
        throw Error(ErrorCode::GridMismatch, "Brownian increment count does not match grid");
    }
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        for (std::size_t m = 0; m < scenarios; ++m) {
            const double dw = increments_[i * scenarios + m];
            if (!std::isfinite(dw)) throw Error(ErrorCode::NonFinite, "non-finite Brownian increment");
            path_[(i + 1) * scenarios + m] = path_[i * scenarios + m] + dw;
        }
    }
}

double standard_normal(std::uint64_t seed, std::uint64_t scenario, std::uint64_t step) noexcept {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(step),
                                  static_cast<std::uint32_t>(step >> 32),
                                  static_cast<std::uint32_t>(scenario),
                                  static_cast<std::uint32_t>(scenario >> 32)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                              static_cast<std::uint32_t>(seed >> 32)};
    const auto r = Philox4x32::generate(ctr, key);
    // 53-bit uniforms; u1 in (0, 1] keeps the logarithm finite.
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 21) ^ (r[1] >> 11);
    const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 21) ^ (r[3] >> 11);
    const double u1 = (static_cast<double>(a & ((1ULL << 53) - 1)) + 1.0) * kScale;
    const double u2 = static_cast<double>(b & ((1ULL << 53) - 1)) * kScale;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BrownianLattice generate_brownian(std::uint64_t seed, std::size_t scenarios, const TimeGrid& grid,
                                  std::size_t workers) {
    if (scenarios == 0) {
        throw Error(ErrorCode::InvalidArgument, "generate_brownian: need M >= 1");
    }
    const std::size_t N = grid.steps();
    const double sd = std::sqrt(grid.dt());
    std::vector<double> inc(N * scenarios);
    for_each_block(scenarios, workers, [&](const BlockRange& r) {
        for (std::size_t m = r.begin; m < r.end; ++m) {
            for (std::size_t i = 0; i < N; ++i) inc[i * scenarios + m] = sd * standard_normal(seed, m, i);
        }
    });
    return BrownianLattice(grid, scenarios, std::move(inc), seed);
}

}  // namespace fbsdde
