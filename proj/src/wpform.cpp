#include "fanolab/wpform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fanolab/errors.hpp"
#include "fanolab/quadrature.hpp"

namespace fanolab {

const char* to_string(WeightKind kind) { return kind == WeightKind::hL ? "hL" : "hSKE"; }

const char* to_string(WPRoute route) {
    return route == WPRoute::sections ? "sections" : "residual";
}

SectionFamilySpec default_sections(const DerivedConstants& consts, WeightKind kind) {
    SectionFamilySpec spec;
    spec.alpha = consts.alpha;
    spec.beta = consts.beta;
    spec.weight_kind = kind;
    return spec;
}

namespace {

void require_kind(const FiberFamilySolution* sol, FiberKind kind, const char* who) {
    if (sol == nullptr || sol->kind != kind) {
        throw InputError(std::string(who) + ": needs a solved " + to_string(kind) + " family");
    }
}

double min_of(const RadialField& f) { return *std::min_element(f.values.begin(), f.values.end()); }

}  // namespace

SectionVolumeFamily volume_family_from_sections(const ReferenceGeometry& ref,
                                                const SectionFamilySpec& spec,
                                                const FiberFamilySolution* ske) {
    if (spec.beta <= 0 || spec.alpha <= 0) {
        throw InputError("section family: alpha and beta must be positive");
    }
    if (!(spec.scale != 0.0) || !std::isfinite(spec.scale)) {
        throw InputError("section family: F must be nowhere zero");
    }
    if (spec.weight_kind == WeightKind::hSKE) require_kind(ske, FiberKind::ske, "hSKE sections");

    const Grid& grid = ref.grid;
    const Rational ratio(spec.alpha, spec.beta);
    // |s|^{2 alpha/beta} contributes (1+s_f)^{-(alpha/beta) c}; dz ^ dzbar
    // contributes (1+s_f)^2. Anything but a cancellation is a pole or zero.
    if (ratio * ref.spec.c != Rational(2)) {
        throw ModelInconsistencyError("section family: alpha/beta = " + to_string(ratio) +
                                      " leaves a pole of order " +
                                      to_string(ratio * ref.spec.c - Rational(2)) +
                                      " on the fiber (needs alpha/beta = lambda)");
    }
    const double r = to_double(ratio);
    const double b = static_cast<double>(spec.beta);

    SectionVolumeFamily fam;
    fam.spec = spec;
    fam.fiber_density = Field2D(grid);
    // |F|^{2/beta} = |scale|^{2/beta} s_b^{power/beta}, and the h_L weight
    // contributes (1+s_b)^{-(alpha/beta) a}.
    fam.base_weight.fs = -r * to_double(ref.spec.a);
    fam.base_weight.log_s = static_cast<double>(spec.base_power) / b;
    // The constant |scale|^{2/beta} is a base factor too; kept out of the
    // fiber integral it drops out of ddbar exactly.
    fam.base_weight.smooth =
        RadialField(AxisKind::base, grid.nb(), 2.0 / b * std::log(std::abs(spec.scale)));

    for (std::size_t j = 0; j < grid.nb(); ++j) {
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            double weight = ref.hL_weight.smooth(i, j);
            if (spec.weight_kind == WeightKind::hSKE) weight += ske->rho(i, j);
            fam.fiber_density(i, j) = std::exp(-r * weight);
        }
    }
    require_finite(fam.fiber_density, "volume_family_from_sections");
    return fam;
}

double section_family_ricci_defect(const ReferenceGeometry& ref, const SectionVolumeFamily& family,
                                   const FiberFamilySolution* ske) {
    const Grid& grid = ref.grid;
    const double lambda = to_double(ref.consts.lambda);
    const bool use_ske = family.spec.weight_kind == WeightKind::hSKE;
    if (use_ske) require_kind(ske, FiberKind::ske, "section_family_ricci_defect");
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const std::vector<double> ric = ric_curve(grid.fiber(), family.fiber_density.fiber(j));
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const double target = use_ske ? ske->vertical_metric(i, j) : ref.omega0.ff(i, j);
            worst = std::max(worst, std::abs(ric[i] - lambda * target));
        }
    }
    return worst;
}

WPResult wp_from_sections(const Grid& grid, const SectionVolumeFamily& family) {
    WPResult out;
    out.route = WPRoute::sections;
    out.log_norm = family.base_weight;
    const RadialField integrals = fiber_integral(grid, family.fiber_density);
    std::vector<double> log_integrals(grid.nb());
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        if (!(integrals[j] > 0.0)) {
            throw InputError("wp_from_sections: non-positive fiber integral at base node " +
                             std::to_string(j));
        }
        log_integrals[j] = std::log(integrals[j]);
        out.log_norm.smooth[j] += log_integrals[j];
    }
    // Differentiate the two parts separately: adding the base weight first
    // would round the fiber part at the scale of the weight.
    out.wp_base = ddbar_base(grid.base(), family.base_weight);
    const std::vector<double> d_log = ddbar_axis(grid.base(), log_integrals);
    for (std::size_t j = 0; j < grid.nb(); ++j) out.wp_base[j] = -(out.wp_base[j] + d_log[j]);
    out.min_coefficient = min_of(out.wp_base);
    return out;
}

double wp_curvature_defect(const Grid& grid, const WPResult& wp) {
    const Axis& axis = grid.base();
    const std::size_t n = axis.size() - 1;
    const double h = axis.h();
    const std::vector<double>& u = wp.log_norm.smooth.values;
    double worst = 0.0;
    // The log(1+s) term contributes exactly its coefficient and log s is
    // pluriharmonic; the smooth part is differentiated with an independent
    // fourth-order centred stencil.
    for (std::size_t j = 2; j + 2 <= n; ++j) {
        const double x = axis.x(j);
        const double d1 = (-u[j + 2] + 8.0 * u[j + 1] - 8.0 * u[j - 1] + u[j - 2]) / (12.0 * h);
        const double d2 =
            (-u[j + 2] + 16.0 * u[j + 1] - 30.0 * u[j] + 16.0 * u[j - 1] - u[j - 2]) / (12.0 * h * h);
        const double ddbar = wp.log_norm.fs + (1.0 - 2.0 * x) * d1 + x * (1.0 - x) * d2;
        worst = std::max(worst, std::abs(-ddbar - wp.wp_base[j]));
    }
    return worst;
}

Form11Field fibration_residual_form(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                                    const RadialField& theta) {
    const Grid& grid = ref.grid;
    if (theta.size() != grid.nb()) throw InputError("fibration residual: theta size mismatch");
    for (double v : theta.values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InputError("fibration residual: theta must be positive");
    }
    const double lambda = to_double(ref.consts.lambda);

    Form11Field target = ref.omega0;
    if (fiber.kind == FiberKind::ske) target += ddbar_invariant(grid, fiber.rho);

    // The density of omega_b ^ f^*theta factors as u(x_f, b) theta(b), so its
    // log splits and Ric splits accordingly.
    Field2D log_u(grid);
    for (std::size_t k = 0; k < log_u.data().size(); ++k) {
        const double u = fiber.vertical_metric.data()[k];
        if (!(u > 0.0)) throw InputError("fibration residual: vertical metric must be positive");
        log_u.data()[k] = std::log(u);
    }
    const Form11Field ric_vertical = ric_log_volume(grid, log_u);
    const std::vector<double> ric_theta = ric_curve(grid.base(), theta.values);

    Form11Field r = lambda * target;
    r -= ric_vertical;
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        // f^*Ric theta, minus the theta part of Ric(u theta), which is
        // -i ddbar log theta (the FS_b constant sits in ric_vertical).
        const double dd_log_theta = 2.0 - ric_theta[j];
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            r.bb(i, j) += ric_theta[j] + dd_log_theta;
        }
    }
    return r;
}

WPResult wp_from_residual(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                          const RadialField& theta, const SectionVolumeFamily* family,
                          const ResidualRouteOptions& options) {
    const Grid& grid = ref.grid;
    const Form11Field r = fibration_residual_form(ref, fiber, theta);

    WPResult out;
    out.route = WPRoute::residual;
    out.wp_base = fiber_mean(grid, r.bb);

    double ff = 0.0;
    double fb = 0.0;
    double osc = 0.0;
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const auto col = r.bb.fiber(j);
        const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        osc = std::max(osc, *hi - *lo);
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            ff = std::max(ff, std::abs(r.ff(i, j)));
            fb = std::max(fb, std::abs(r.fb(i, j)));
        }
    }
    out.verticality_defect = ff + fb + osc;
    if (!(out.verticality_defect <= options.verticality_tol)) {
        throw PullbackStructureError("wp_from_residual: residual form is not a pullback (defect " +
                                         std::to_string(out.verticality_defect) + ")",
                                     out.verticality_defect);
    }

    if (family != nullptr) {
        const RadialField num = fiber_integral(grid, family->fiber_density);
        const RadialField den = fiber_integral(grid, fiber.vertical_metric);
        out.log_mu = family->base_weight;
        for (std::size_t j = 0; j < grid.nb(); ++j) {
            out.log_mu.smooth[j] += std::log(num[j]) - std::log(den[j]);
        }
        out.has_mu = true;
    }
    out.min_coefficient = min_of(out.wp_base);
    return out;
}

}  // namespace fanolab
