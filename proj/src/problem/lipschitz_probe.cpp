#include "src/problem/lipschitz_probe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fbsdde {

LipschitzProbe probe_lipschitz(const GeneratorSpec& c, std::size_t samples, std::uint64_t seed) {
    LipschitzProbe out;
    out.declared = c.lipschitz_K();
    out.samples = samples;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto& atoms = c.alpha().atoms();
    const bool uses_z = c.kind() != CoefficientKind::DiffusionG;

    for (std::size_t s = 0; s < samples; ++s) {
        // Mix scales so both the linear region and saturation get probed.
        const double scale = std::pow(10.0, -2.0 + 4.0 * unit(rng));
        const double t = c.alpha().horizon() * unit(rng);
        double xa = 0, ya = 0, za = 0, xb = 0, yb = 0, zb = 0, dist = 0;
        for (const auto& a : atoms) {
            const double x0 = scale * normal(rng), y0 = scale * normal(rng);
            const double z0 = uses_z ? scale * normal(rng) : 0.0;
            const double x1 = scale * normal(rng), y1 = scale * normal(rng);
            const double z1 = uses_z ? scale * normal(rng) : 0.0;
            xa += a.weight * x0; ya += a.weight * y0; za += a.weight * z0;
            xb += a.weight * x1; yb += a.weight * y1; zb += a.weight * z1;
            dist += a.weight * ((x0 - x1) * (x0 - x1) + (y0 - y1) * (y0 - y1) + (z0 - z1) * (z0 - z1));
        }
        if (dist <= 0.0) continue;
        const double d = c.evaluate(t, xa, ya, za) - c.evaluate(t, xb, yb, zb);
        out.observed = std::max(out.observed, d * d / dist);
    }
    return out;
}

}  // namespace fbsdde
