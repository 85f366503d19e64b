#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fbsdde {

/// Least-squares projection used for E[. | F_{t_i}].
///
/// Regressors are polynomials of total degree 1..max_degree in the chosen
/// F_{t_i}-measurable quantities; an intercept is always present, so degree
/// 0 is the plain scenario mean.
struct RegressionBasis {
    std::size_t max_degree = 2;
    bool use_brownian = true;         ///< W(t_i)
    bool use_state = true;            ///< X^n(t_i), forward-backward problems only
    bool use_delay_averages = false;  ///< driver-delay averages of X^n and Y^{n-1}
    bool ridge = true;                ///< damp ill-conditioned designs instead of failing
};

/// Design columns at one time index (without the intercept).
struct DesignMatrix {
    std::size_t rows = 0;
    std::vector<std::vector<double>> columns;

    bool operator==(const DesignMatrix&) const = default;
};

/// All monomials of total degree 1..degree in `regressors`, graded by
/// degree then lexicographically.
DesignMatrix polynomial_design(const std::vector<std::span<const double>>& regressors,
                               std::size_t rows, std::size_t degree);

/// Fitted projection in centred, standardised coordinates:
///   fitted(m) = target_mean + sum_j beta_j (x_j(m) - mean_j) / scale_j
/// over the active (non-constant) columns. The intercept therefore equals
/// the scenario mean of the target, and a constant target is reproduced
/// exactly.
struct LinearFit {
    bool constant_target = false;
    double target_mean = 0.0;
    std::vector<double> column_mean;
    std::vector<double> column_scale;
    std::vector<std::size_t> active;   ///< indices into DesignMatrix::columns
    std::vector<double> beta;          ///< one per active column
    bool damped = false;

    bool operator==(const LinearFit&) const = default;
};

/// Prepared regression on one design: standardisation, Gram matrix and the
/// conditioning decision are shared by every target fitted against it.
///
/// Reductions run over fixed scenario blocks, so results do not depend on
/// the worker count.
class Regressor {
public:
    /// Throws ConditioningError(time_index) when the Gram matrix is
    /// numerically singular and ridge damping is disabled.
    Regressor(const DesignMatrix& design, bool ridge, std::size_t time_index,
              std::size_t workers = 1);

    LinearFit fit(std::span<const double> target) const;

    /// Fitted values of `fit` on this design.
    std::vector<double> predict(const LinearFit& fit) const;

    bool damped() const noexcept { return damped_; }
    std::size_t active_columns() const noexcept { return active_.size(); }

    /// Ratio of smallest to largest Gram eigenvalue below which the design
    /// counts as singular.
    static constexpr double kConditionThreshold = 1e-10;
    /// Ridge added to the Gram diagonal, relative to its largest entry.
    static constexpr double kRidge = 1e-8;

private:
    std::size_t rows_;
    std::size_t time_index_;
    std::size_t workers_;
    std::vector<double> mean_;
    std::vector<double> scale_;
    std::vector<std::size_t> active_;
    std::vector<std::vector<double>> standardized_;
    std::vector<double> gram_;    ///< row-major, possibly damped
    bool damped_ = false;
};

}  // namespace fbsdde
