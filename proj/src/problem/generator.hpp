#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "src/lattice/delay_measure.hpp"

namespace fbsdde {

/// Role of a coefficient in the equations.
enum class CoefficientKind { DriftB, DiffusionSigma, DriverF, DiffusionG };

/// Section name used in problem files: "b", "sigma", "f", "g".
std::string_view section_name(CoefficientKind kind) noexcept;

/// Named pointwise function with numeric parameters, as written in problem files.
struct CatalogFunction {
    std::string name;
    std::vector<double> params;

    bool operator==(const CatalogFunction&) const = default;
};

/// Names accepted by PointwiseFunction::from_catalog.
const std::vector<std::string>& catalog_function_names();

/// The pointwise part phi(t, x, y, z) of a coefficient. Either a catalog
/// entry (serializable) or an arbitrary callable (programmatic use only).
///
/// Catalog:
///   zero                 []                          0
///   constant             [c]                         c
///   linear               [cx, cy, cz]                cx x + cy y + cz z
///   affine               [c0, cx, cy, cz]            c0 + cx x + cy y + cz z
///   scaled-identity-x    [s]                         s x   (likewise -y, -z)
///   clipped-linear       [c0, cx, cy, cz, lo, hi]    clamp(affine, lo, hi)
///   saturating           [cx, cy, cz, L]             L tanh((cx x + cy y + cz z) / L)
class PointwiseFunction {
public:
    using Fn = std::function<double(double t, double x, double y, double z)>;

    static PointwiseFunction zero();
    /// Throws Error(InvalidArgument) for unknown names or wrong arity.
    static PointwiseFunction from_catalog(std::string name, std::vector<double> params);
    static PointwiseFunction custom(Fn fn);

    double operator()(double t, double x, double y, double z) const { return fn_(t, x, y, z); }

    const std::optional<CatalogFunction>& catalog() const noexcept { return catalog_; }

    /// True only when the function is known to vanish identically.
    bool is_zero() const noexcept;

    /// False only when the catalog form provably ignores z. Custom functions
    /// are assumed to depend on every argument.
    bool may_depend_on_z() const noexcept;

    /// Catalog entries compare by descriptor; custom functions never compare equal.
    bool operator==(const PointwiseFunction& other) const {
        return catalog_.has_value() && catalog_ == other.catalog_;
    }

private:
    PointwiseFunction(Fn fn, std::optional<CatalogFunction> catalog)
        : fn_(std::move(fn)), catalog_(std::move(catalog)) {}

    Fn fn_;
    std::optional<CatalogFunction> catalog_;
};

/// A coefficient: pointwise function composed with delay averaging, plus its
/// declared Lipschitz constant.
///
/// The argument paths (x, y, z) are averaged with `alpha` before `fn` is
/// applied. Evaluation at t < 0 is exactly 0. A diffusion-g coefficient never
/// sees z: its z argument is always 0.
class GeneratorSpec {
public:
    GeneratorSpec(CoefficientKind kind, PointwiseFunction fn, DelayMeasure alpha,
                  double lipschitz_K);

    CoefficientKind kind() const noexcept { return kind_; }
    const PointwiseFunction& fn() const noexcept { return fn_; }
    const DelayMeasure& alpha() const noexcept { return alpha_; }
    double lipschitz_K() const noexcept { return lipschitz_K_; }

    bool is_zero() const noexcept { return fn_.is_zero(); }

    double evaluate(double t, double x_avg, double y_avg, double z_avg) const {
        if (t < 0.0) return 0.0;
        if (kind_ == CoefficientKind::DiffusionG) z_avg = 0.0;
        return fn_(t, x_avg, y_avg, z_avg);
    }

    bool operator==(const GeneratorSpec&) const = default;

private:
    CoefficientKind kind_;
    PointwiseFunction fn_;
    DelayMeasure alpha_;
    double lipschitz_K_;
};

/// Convenience: catalog generator with delay measure alpha.
GeneratorSpec make_generator(CoefficientKind kind, std::string fn_name, std::vector<double> params,
                             DelayMeasure alpha, double lipschitz_K);

}  // namespace fbsdde
