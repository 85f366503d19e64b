#pragma once

#include <cstddef>
#include <cstdint>

#include "src/problem/generator.hpp"

namespace fbsdde {

/// Report-only finite-difference check of a declared Lipschitz constant.
///
/// Samples random pairs of path values on the delay atoms and records the
/// largest ratio |phi(u) - phi(u')|^2 / sum_k w_k ||u_k - u'_k||^2. A
/// declared constant below the observed ratio is certainly too small; the
/// converse proves nothing.
struct LipschitzProbe {
    double declared = 0.0;
    double observed = 0.0;
    std::size_t samples = 0;

    bool consistent() const noexcept { return observed <= declared * (1.0 + 1e-9); }
};

LipschitzProbe probe_lipschitz(const GeneratorSpec& coefficient, std::size_t samples = 2000,
                               std::uint64_t seed = 7);

}  // namespace fbsdde
