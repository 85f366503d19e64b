#include "src/problem/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "src/support/error.hpp"

namespace fbsdde {

std::string_view section_name(CoefficientKind kind) noexcept {
    switch (kind) {
        case CoefficientKind::DriftB: return "b";
        case CoefficientKind::DiffusionSigma: return "sigma";
        case CoefficientKind::DriverF: return "f";
        case CoefficientKind::DiffusionG: return "g";
    }
    return "?";
}

namespace {

struct CatalogEntry {
    const char* name;
    std::size_t arity;
};

constexpr CatalogEntry kCatalog[] = {
    {"zero", 0},
    {"constant", 1},
    {"linear", 3},
    {"affine", 4},
    {"scaled-identity-x", 1},
    {"scaled-identity-y", 1},
    {"scaled-identity-z", 1},
    {"clipped-linear", 6},
    {"saturating", 4},
};

PointwiseFunction::Fn build(const std::string& name, const std::vector<double>& p) {
    if (name == "zero") return [](double, double, double, double) { return 0.0; };
    if (name == "constant") {
        const double c = p[0];
        return [c](double, double, double, double) { return c; };
    }
    if (name == "linear") {
        const double cx = p[0], cy = p[1], cz = p[2];
        return [=](double, double x, double y, double z) { return cx * x + cy * y + cz * z; };
    }
    if (name == "affine") {
        const double c0 = p[0], cx = p[1], cy = p[2], cz = p[3];
        return [=](double, double x, double y, double z) {
            return c0 + cx * x + cy * y + cz * z;
        };
    }
    if (name == "scaled-identity-x") {
        const double s = p[0];
        return [s](double, double x, double, double) { return s * x; };
    }
    if (name == "scaled-identity-y") {
        const double s = p[0];
        return [s](double, double, double y, double) { return s * y; };
    }
    if (name == "scaled-identity-z") {
        const double s = p[0];
        return [s](double, double, double, double z) { return s * z; };
    }
    if (name == "clipped-linear") {
        const double c0 = p[0], cx = p[1], cy = p[2], cz = p[3], lo = p[4], hi = p[5];
        if (!(lo <= hi)) {
            throw Error(ErrorCode::InvalidArgument, "clipped-linear needs lo <= hi");
        }
        return [=](double, double x, double y, double z) {
            return std::clamp(c0 + cx * x + cy * y + cz * z, lo, hi);
        };
    }
    if (name == "saturating") {
        const double cx = p[0], cy = p[1], cz = p[2], level = p[3];
        if (!(level > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "saturating needs a positive level L");
        }
        return [=](double, double x, double y, double z) {
            return level * std::tanh((cx * x + cy * y + cz * z) / level);
        };
    }
    throw Error(ErrorCode::InvalidArgument, "unknown catalog function '" + name + "'");
}

}  // namespace

const std::vector<std::string>& catalog_function_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : kCatalog) out.emplace_back(e.name);
        return out;
    }();
    return names;
}

PointwiseFunction PointwiseFunction::zero() { return from_catalog("zero", {}); }

PointwiseFunction PointwiseFunction::from_catalog(std::string name, std::vector<double> params) {
    const auto* entry = std::find_if(std::begin(kCatalog), std::end(kCatalog),
                                     [&](const CatalogEntry& e) { return name == e.name; });
    if (entry == std::end(kCatalog)) {
        throw Error(ErrorCode::InvalidArgument, "unknown catalog function '" + name + "'");
    }
    if (params.size() != entry->arity) {
        std::ostringstream os;
        os << "catalog function '" << name << "' takes " << entry->arity << " parameter(s), got "
           << params.size();
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    for (double v : params) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFinite, "catalog function '" + name + "' has a non-finite parameter");
        }
    }
    auto fn = build(name, params);
    return PointwiseFunction(std::move(fn), CatalogFunction{std::move(name), std::move(params)});
}

PointwiseFunction PointwiseFunction::custom(Fn fn) {
    if (!fn) throw Error(ErrorCode::InvalidArgument, "custom pointwise function is empty");
    return PointwiseFunction(std::move(fn), std::nullopt);
}

bool PointwiseFunction::is_zero() const noexcept {
    if (!catalog_) return false;
    const auto& name = catalog_->name;
    const auto& p = catalog_->params;
    const auto all_zero = [&](std::size_t from, std::size_t to) {
        return std::all_of(p.begin() + from, p.begin() + to, [](double v) { return v == 0.0; });
    };
    if (name == "zero") return true;
    if (name == "constant" || name == "linear" || name == "affine" ||
        name.rfind("scaled-identity-", 0) == 0) {
        return all_zero(0, p.size());
    }
    if (name == "saturating") return all_zero(0, 3);
    if (name == "clipped-linear") {
        return all_zero(0, 4) && p[4] <= 0.0 && 0.0 <= p[5];
    }
    return false;
}

bool PointwiseFunction::may_depend_on_z() const noexcept {
    if (!catalog_) return true;
    const auto& name = catalog_->name;
    const auto& p = catalog_->params;
    if (name == "zero" || name == "constant" || name == "scaled-identity-x" ||
        name == "scaled-identity-y") {
        return false;
    }
    if (name == "linear" || name == "saturating") return p[2] != 0.0;
    if (name == "affine" || name == "clipped-linear") return p[3] != 0.0;
    return true;
}

GeneratorSpec::GeneratorSpec(CoefficientKind kind, PointwiseFunction fn, DelayMeasure alpha,
                             double lipschitz_K)
    : kind_(kind), fn_(std::move(fn)), alpha_(std::move(alpha)), lipschitz_K_(lipschitz_K) {
    if (!(lipschitz_K > 0.0) || !std::isfinite(lipschitz_K)) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("coefficient ") + std::string(section_name(kind)) +
                        ": lipschitz_K must be a positive finite number");
    }
    if (kind == CoefficientKind::DiffusionG && fn_.catalog() && fn_.may_depend_on_z()) {
        throw Error(ErrorCode::InvalidArgument, "coefficient g must not depend on z");
    }
}

GeneratorSpec make_generator(CoefficientKind kind, std::string fn_name, std::vector<double> params,
                             DelayMeasure alpha, double lipschitz_K) {
    return GeneratorSpec(kind, PointwiseFunction::from_catalog(std::move(fn_name), std::move(params)),
                         std::move(alpha), lipschitz_K);
}

}  // namespace fbsdde
