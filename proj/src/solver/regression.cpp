#include "src/solver/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "src/support/error.hpp"
#include "src/support/parallel.hpp"

namespace fbsdde {

namespace {

void monomials(const std::vector<std::span<const double>>& r, std::size_t rows,
               std::size_t degree, std::size_t first, std::vector<double>& current,
               std::size_t remaining, DesignMatrix& out) {
    if (remaining == 0) {
        out.columns.push_back(current);
        return;
    }
    for (std::size_t k = first; k < r.size(); ++k) {
        std::vector<double> next(rows);
        for (std::size_t m = 0; m < rows; ++m) next[m] = current[m] * r[k][m];
        monomials(r, rows, degree, k, next, remaining - 1, out);
    }
}

/// Fixed-order sum of body(m) over m, partitioned by scenario blocks.
template <typename Body>
double blocked_reduce(std::size_t n, std::size_t workers, Body&& body) {
    std::vector<double> partial(block_count(n), 0.0);
    for_each_block(n, workers, [&](const BlockRange& r) {
        double s = 0.0;
        for (std::size_t m = r.begin; m < r.end; ++m) s += body(m);
        partial[r.index] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace

DesignMatrix polynomial_design(const std::vector<std::span<const double>>& regressors,
                               std::size_t rows, std::size_t degree) {
    DesignMatrix out;
    out.rows = rows;
    for (const auto& r : regressors) {
        if (r.size() != rows) {
            throw Error(ErrorCode::GridMismatch, "regressor length differs from scenario count");
        }
    }
    for (std::size_t d = 1; d <= degree; ++d) {
        std::vector<double> ones(rows, 1.0);
        monomials(regressors, rows, degree, 0, ones, d, out);
    }
    return out;
}

Regressor::Regressor(const DesignMatrix& design, bool ridge, std::size_t time_index,
                     std::size_t workers)
    : rows_(design.rows), time_index_(time_index), workers_(workers) {
    const std::size_t n_cols = design.columns.size();
    mean_.assign(n_cols, 0.0);
    scale_.assign(n_cols, 0.0);
    for (std::size_t j = 0; j < n_cols; ++j) {
        const auto& col = design.columns[j];
        for (double v : col) {
            if (!std::isfinite(v)) {
                throw ConditioningError(time_index, "non-finite regressor at time index " +
                                                        std::to_string(time_index));
            }
        }
        const auto mom = sample_moments(col, workers);
        mean_[j] = mom.mean;
        scale_[j] = mom.stddev;
        // Columns that do not vary across scenarios carry no information
        // beyond the intercept (W and X at t_0, for example).
        if (mom.stddev > 1e-10 * std::max(1.0, std::abs(mom.mean))) active_.push_back(j);
    }

    const std::size_t p = active_.size();
    standardized_.resize(p);
    for (std::size_t a = 0; a < p; ++a) {
        const std::size_t j = active_[a];
        auto& s = standardized_[a];
        s.resize(rows_);
        for (std::size_t m = 0; m < rows_; ++m) s[m] = (design.columns[j][m] - mean_[j]) / scale_[j];
    }

    gram_.assign(p * p, 0.0);
    const double inv_rows = 1.0 / static_cast<double>(rows_);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t c = a; c < p; ++c) {
            const auto& sa = standardized_[a];
            const auto& sc = standardized_[c];
            const double v = blocked_reduce(rows_, workers_, [&](std::size_t m) { return sa[m] * sc[m]; }) * inv_rows;
            gram_[a * p + c] = v;
            gram_[c * p + a] = v;
        }
    }
    if (p == 0) return;

    Eigen::Map<const Eigen::MatrixXd> G(gram_.data(), static_cast<Eigen::Index>(p),
                                        static_cast<Eigen::Index>(p));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (eig.info() != Eigen::Success || !(lmin > kConditionThreshold * lmax)) {
        if (!ridge) {
            std::ostringstream os;
            os << "singular regression design at time index " << time_index
               << " (eigenvalue ratio " << (lmax > 0 ? lmin / lmax : 0.0) << ")";
            throw ConditioningError(time_index, os.str());
        }
        double diag = 0.0;
        for (std::size_t a = 0; a < p; ++a) diag = std::max(diag, gram_[a * p + a]);
        for (std::size_t a = 0; a < p; ++a) gram_[a * p + a] += kRidge * diag;
        damped_ = true;
    }
}

LinearFit Regressor::fit(std::span<const double> target) const {
    if (target.size() != rows_) {
        throw Error(ErrorCode::GridMismatch, "regression target length differs from design rows");
    }
    LinearFit out;
    out.column_mean = mean_;
    out.column_scale = scale_;
    out.active = active_;
    out.damped = damped_;

    if (std::all_of(target.begin(), target.end(), [&](double v) { return v == target.front(); })) {
        out.constant_target = true;
        out.target_mean = target.front();
        out.beta.assign(active_.size(), 0.0);
        return out;
    }
    out.target_mean = blocked_sum(target, workers_) / static_cast<double>(rows_);

    const std::size_t p = active_.size();
    if (p == 0) return out;
    const double inv_rows = 1.0 / static_cast<double>(rows_);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(p));
    for (std::size_t a = 0; a < p; ++a) {
        const auto& s = standardized_[a];
        rhs[static_cast<Eigen::Index>(a)] =
            blocked_reduce(rows_, workers_, [&](std::size_t m) { return s[m] * (target[m] - out.target_mean); }) *
            inv_rows;
    }
    Eigen::Map<const Eigen::MatrixXd> G(gram_.data(), static_cast<Eigen::Index>(p),
                                        static_cast<Eigen::Index>(p));
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    const Eigen::VectorXd beta = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !beta.allFinite()) {
        throw ConditioningError(time_index_, "regression solve failed at time index " +
                                                 std::to_string(time_index_));
    }
    out.beta.assign(beta.data(), beta.data() + p);
    return out;
}

std::vector<double> Regressor::predict(const LinearFit& fit) const {
    std::vector<double> out(rows_, fit.target_mean);
    if (fit.constant_target) return out;
    for (std::size_t a = 0; a < fit.beta.size(); ++a) {
        const double beta = fit.beta[a];
        const auto& s = standardized_[a];
        for (std::size_t m = 0; m < rows_; ++m) out[m] += beta * s[m];
    }
    return out;
}

}  // namespace fbsdde
