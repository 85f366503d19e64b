#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "src/lattice/path_lattice.hpp"
#include "src/problem/generator.hpp"

namespace fbsdde {

/// Read-only view of the processes a coefficient is evaluated on. A null
/// pointer stands for a process that is identically zero (for instance X in
/// a pure backward problem).
struct ProcessView {
    const PathLattice* x = nullptr;
    const PathLattice* y = nullptr;
    const PathLattice* z = nullptr;

    /// First non-null lattice; throws if all are null.
    const PathLattice& any() const;
};

class BoundCoefficient;

/// Coefficient evaluator phi(t_i, averaged paths).
///
/// In shifted form the z argument is the path v -> Z(v) - g(v, X_v, Y_v)
/// averaged with phi's delay measure: the g-correction is applied pointwise
/// along the path before averaging. Before time 0 both Z and g vanish, so
/// the corrected path is 0 there.
class Coefficient {
public:
    /// Identically zero coefficient.
    Coefficient() = default;
    explicit Coefficient(GeneratorSpec phi);
    Coefficient(GeneratorSpec phi, GeneratorSpec g);

    static Coefficient from_optional(const std::optional<GeneratorSpec>& phi) {
        return phi ? Coefficient(*phi) : Coefficient();
    }

    bool is_zero() const noexcept { return !base_ || base_->is_zero(); }
    const std::optional<GeneratorSpec>& base() const noexcept { return base_; }
    const std::optional<GeneratorSpec>& shift() const noexcept { return shift_; }

    /// Resolves delay atoms once for `grid`; throws Error(Alignment).
    BoundCoefficient bind(const TimeGrid& grid) const;

    /// Convenience evaluation at (scenario, time index); binds on each call.
    double operator()(const ProcessView& u, std::size_t scenario, std::size_t time_index) const;

private:
    std::optional<GeneratorSpec> base_;
    std::optional<GeneratorSpec> shift_;
};

/// Grid-bound evaluator for the sweeps.
class BoundCoefficient {
public:
    /// Value at signed time index i (0 for i < 0). Requires i <= N.
    double operator()(const ProcessView& u, std::size_t m, std::ptrdiff_t i) const;

    bool is_zero() const noexcept { return !base_ || base_->is_zero(); }

    /// Delay atoms of the coefficient itself (empty for the zero coefficient).
    std::span<const ResolvedAtom> atoms() const noexcept { return base_atoms_; }

private:
    friend class Coefficient;
    friend double evaluate_diffusion_g(const BoundCoefficient&, const ProcessView&, std::size_t,
                                       std::ptrdiff_t);

    TimeGrid grid_{1.0, 1};
    std::optional<GeneratorSpec> base_;
    std::optional<GeneratorSpec> shift_;
    std::vector<ResolvedAtom> base_atoms_;
    std::vector<ResolvedAtom> shift_atoms_;
};

/// g(t_j, X_{t_j}, Y_{t_j}) along the lattices, 0 for j < 0. `g` must be a
/// plain (unshifted) coefficient.
double evaluate_diffusion_g(const BoundCoefficient& g, const ProcessView& u, std::size_t m,
                            std::ptrdiff_t j);

/// fbar(t, y_t, z_t) = f(t, y_t, z_t - g(t, y_t)). Throws Error(KindMismatch)
/// unless f is a driver and g a diffusion-g coefficient.
Coefficient make_homogeneous_driver(const GeneratorSpec& f, const GeneratorSpec& g);

struct TransformedCoefficients {
    Coefficient b;
    Coefficient sigma;
    Coefficient f;
};

/// Phi~(t, x_t, y_t, z_t) = Phi(t, x_t, y_t, z_t - g(t, x_t, y_t)) for
/// Phi = b, sigma, f. Absent b or sigma stay identically zero.
TransformedCoefficients make_transformed_coefficients(const std::optional<GeneratorSpec>& b,
                                                      const std::optional<GeneratorSpec>& sigma,
                                                      const GeneratorSpec& f,
                                                      const GeneratorSpec& g);

/// (Y, Z) of the original equation from the homogeneous solution:
/// Y = Ybar, Z(t_i) = Zbar(t_i) - g(t_i, X_{t_i}, Ybar_{t_i}) at every index.
std::pair<PathLattice, PathLattice> map_back_solution(const PathLattice& y_bar,
                                                      const PathLattice& z_bar,
                                                      const GeneratorSpec& g,
                                                      const PathLattice* x = nullptr);

}  // namespace fbsdde
