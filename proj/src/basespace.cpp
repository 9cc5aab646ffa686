#include "fanolab/basespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fanolab/calculus.hpp"
#include "fanolab/errors.hpp"
#include "fanolab/poisson.hpp"
#include "fanolab/quadrature.hpp"

namespace fanolab {

const char* to_string(BaseVariant variant) { return variant == BaseVariant::B ? "B" : "Bprime"; }

RadialField pushforward(const Grid& grid, const VolumeDensity& volume) {
    return fiber_integral(grid, volume);
}

double pushforward_adjoint_defect(const Grid& grid, const VolumeDensity& volume) {
    const RadialField push = pushforward(grid, volume);
    const RadialField one(AxisKind::base, grid.nb(), 1.0);
    double worst = 0.0;
    for (int power = 0; power <= 3; ++power) {
        RadialField psi(AxisKind::base, grid.nb());
        for (std::size_t j = 0; j < grid.nb(); ++j) psi[j] = std::pow(grid.base().x(j), power);

        std::vector<double> prod(grid.nb());
        for (std::size_t j = 0; j < grid.nb(); ++j) prod[j] = psi[j] * push[j];
        const double on_base = 2.0 * std::numbers::pi * finite_volume(prod);

        VolumeDensity weighted{pullback(grid, psi)};
        for (std::size_t k = 0; k < weighted.rho.data().size(); ++k) {
            weighted.rho.data()[k] *= volume.rho.data()[k];
        }
        const double on_total = integrate_total(grid, weighted);
        worst = std::max(worst, std::abs(on_base - on_total) / std::max(std::abs(on_total), 1e-300));
    }
    return worst;
}

GprimeReport compute_gprime(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                            double lp_epsilon) {
    const Grid& grid = ref.grid;
    const double lambda = to_double(ref.consts.lambda);
    const double kappa = to_double(ref.consts.kappa);

    GprimeReport out;
    out.kind = fiber.kind;
    out.volume = ref.Omega;
    if (fiber.kind == FiberKind::ske) {
        for (std::size_t k = 0; k < out.volume.rho.data().size(); ++k) {
            out.volume.rho.data()[k] *= std::exp(-lambda * fiber.rho.data()[k]);
        }
    }
    out.pushforward = pushforward(grid, out.volume);
    out.gprime = out.pushforward;
    for (double& v : out.gprime.values) v /= ref.V * kappa;

    out.delta_lower = *std::min_element(out.gprime.values.begin(), out.gprime.values.end());
    if (!(out.delta_lower > 0.0)) {
        throw PositivityError("G' is not positive", out.delta_lower, 0.0, 0.0);
    }

    const RadialField eta = ref.eta;
    for (double p : {1.0, 1.0 + lp_epsilon, 2.0}) {
        RadialField powered(AxisKind::base, grid.nb());
        for (std::size_t j = 0; j < grid.nb(); ++j) powered[j] = std::pow(out.gprime[j], p);
        out.lp_norms[p] = std::pow(integrate_base(grid, powered, eta), 1.0 / p);
    }
    const double with_g = integrate_base(grid, out.gprime, eta);
    const double plain = integrate_base(grid, RadialField(AxisKind::base, grid.nb(), 1.0), eta);
    out.normalization_defect = std::abs(with_g - plain) / plain;
    return out;
}

DescentReport check_g_descends(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                               const GprimeReport& gprime) {
    const Grid& grid = ref.grid;
    if (gprime.kind != fiber.kind) throw InputError("check_g_descends: G' built from another family");
    const double kappa = to_double(ref.consts.kappa);

    DescentReport out;
    out.g = Field2D(grid);
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            // Only the vertical part of omega_b survives the wedge with f^*eta.
            const double g = gprime.volume.rho(i, j) / (2.0 * fiber.vertical_metric(i, j) * kappa);
            out.g(i, j) = g;
            lo = std::min(lo, g);
            hi = std::max(hi, g);
            out.pullback_defect = std::max(out.pullback_defect, std::abs(g - gprime.gprime[j]));
        }
        out.vertical_constancy = std::max(out.vertical_constancy, hi - lo);
    }
    return out;
}

namespace {

double kappa_hat_of(BaseVariant variant, const DerivedConstants& consts) {
    const Rational k = variant == BaseVariant::B ? consts.kappa
                                                 : consts.kappa * (consts.lambda + Rational(1));
    return to_double(k);
}

}  // namespace

BaseMetricSolution solve_base_ma(const Grid& grid, const RadialField& gprime, BaseVariant variant,
                                 FiberKind kind, const DerivedConstants& consts,
                                 const NewtonOptions& options, double init) {
    const Axis& axis = grid.base();
    const std::size_t n = axis.size();
    if (gprime.size() != n) throw InputError("solve_base_ma: G' does not match the base grid");
    for (double g : gprime.values) {
        if (!(g > 0.0) || !std::isfinite(g)) throw InputError("solve_base_ma: G' must be positive");
    }
    const double kh = kappa_hat_of(variant, consts);
    const Tridiagonal lap = flux_laplacian(axis);

    BaseMetricSolution sol;
    sol.variant = variant;
    sol.kind = kind;
    sol.kappa_hat = kh;
    sol.min_zeroth_order = std::numeric_limits<double>::infinity();

    // A(kh G' e^rho - kh) - L rho, with A the half-cell average at the poles.
    auto residual = [&](std::span<const double> rho) {
        std::vector<double> src(n);
        for (std::size_t i = 0; i < n; ++i) src[i] = kh * gprime[i] * std::exp(rho[i]) - kh;
        std::vector<double> r = cell_average(src);
        const std::vector<double> lr = lap.apply(rho);
        for (std::size_t i = 0; i < n; ++i) r[i] -= lr[i];
        return r;
    };
    auto jacobian = [&](std::span<const double> rho) {
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(3 * n + 2);
        const auto ni = static_cast<int>(n);
        for (int i = 0; i < ni; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double z = kh * gprime[ui] * std::exp(rho[ui]);
            sol.min_zeroth_order = std::min(sol.min_zeroth_order, z);
            const bool pole = i == 0 || i + 1 == ni;
            t.emplace_back(i, i, (pole ? 0.75 : 1.0) * z - lap.diag[ui]);
            if (i > 0) t.emplace_back(i, i - 1, -lap.lower[ui]);
            if (i + 1 < ni) t.emplace_back(i, i + 1, -lap.upper[ui]);
        }
        auto z_at = [&](int i) {
            return kh * gprime[static_cast<std::size_t>(i)] * std::exp(rho[static_cast<std::size_t>(i)]);
        };
        t.emplace_back(0, 1, 0.25 * z_at(1));
        t.emplace_back(ni - 1, ni - 2, 0.25 * z_at(ni - 2));
        Eigen::SparseMatrix<double> jac(ni, ni);
        jac.setFromTriplets(t.begin(), t.end());
        return jac;
    };

    const NewtonResult res = newton_solve(residual, jacobian, std::vector<double>(n, init), options);
    sol.trace = res.trace;
    sol.rho = RadialField(AxisKind::base, res.solution);
    sol.discrete_residual = sup_norm(residual(sol.rho.values));

    sol.omega = RadialField(AxisKind::base, ddbar_axis(axis, sol.rho.values));
    std::vector<double> src(n);
    for (std::size_t i = 0; i < n; ++i) {
        sol.omega[i] += kh;
        src[i] = gprime[i] * std::exp(sol.rho[i]);
        sol.pointwise_residual = std::max(sol.pointwise_residual, std::abs(sol.omega[i] - kh * src[i]));
    }
    sol.positivity_margin = *std::min_element(sol.omega.values.begin(), sol.omega.values.end());
    if (!(sol.positivity_margin > 0.0)) {
        std::size_t at = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (sol.omega[i] == sol.positivity_margin) at = i;
        }
        throw PositivityError(std::string("base metric ") + to_string(variant) + " is not positive",
                              sol.positivity_margin, 0.0, axis.x(at));
    }
    sol.integrated_defect = std::abs(finite_volume(src) - 1.0);
    return sol;
}

double base_uniqueness_spread(const Grid& grid, const RadialField& gprime, BaseVariant variant,
                              FiberKind kind, const DerivedConstants& consts,
                              const NewtonOptions& options) {
    std::vector<RadialField> sols;
    for (double init : {0.0, 0.5, -0.5}) {
        sols.push_back(solve_base_ma(grid, gprime, variant, kind, consts, options, init).rho);
    }
    double spread = 0.0;
    for (std::size_t a = 0; a < sols.size(); ++a) {
        for (std::size_t b = a + 1; b < sols.size(); ++b) {
            for (std::size_t j = 0; j < grid.nb(); ++j) {
                spread = std::max(spread, std::abs(sols[a][j] - sols[b][j]));
            }
        }
    }
    return spread;
}

BaseResidual twisted_ke_residual(const Grid& grid, const BaseMetricSolution& sol,
                                 const WPResult& wp, const DerivedConstants& consts) {
    const std::size_t n = grid.nb();
    if (sol.omega.size() != n || wp.wp_base.size() != n) {
        throw InputError("twisted_ke_residual: inputs on different grids");
    }
    const double twist = sol.variant == BaseVariant::B
                             ? to_double(consts.lambda) * to_double(consts.kappa)
                             : 0.0;
    const std::vector<double> ric = ric_curve(grid.base(), sol.omega.values);
    BaseResidual out;
    out.profile = RadialField(AxisKind::base, n);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out.profile[j] = ric[j] + sol.omega[j] + twist - wp.wp_base[j];
        out.sup = std::max(out.sup, std::abs(out.profile[j]));
        scale = std::max(scale, std::abs(sol.omega[j]));
    }
    out.relative = out.sup / scale;
    return out;
}

BaseResidual wpl_fs_residual(const Grid& grid, const RadialField& pushforward_density,
                             const WPResult& wp, const DerivedConstants& consts) {
    const std::size_t n = grid.nb();
    if (pushforward_density.size() != n || wp.wp_base.size() != n) {
        throw InputError("wpl_fs_residual: inputs on different grids");
    }
    const double rhs = to_double(consts.kappa * (consts.lambda + Rational(1)));
    const std::vector<double> ric = ric_curve(grid.base(), pushforward_density.values);
    BaseResidual out;
    out.profile = RadialField(AxisKind::base, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.profile[j] = -ric[j] + wp.wp_base[j] - rhs;
        out.sup = std::max(out.sup, std::abs(out.profile[j]));
    }
    out.relative = out.sup / std::abs(rhs);
    return out;
}

namespace {

double mean_free_sup(const Grid& grid, const Field2D& f) {
    const double mean = integrate_total(grid, VolumeDensity{f}) / (4.0 * std::numbers::pi * std::numbers::pi);
    double worst = 0.0;
    for (double v : f.data()) worst = std::max(worst, std::abs(v - mean));
    return worst;
}

}  // namespace

VolumeIdentityReport volume_identity_residual(int which, const ReferenceGeometry& ref,
                                              const FiberFamilySolution& fiber,
                                              const BaseMetricSolution& base) {
    if (which < 1 || which > 4) throw InputError("volume identity index must be 1..4");
    const FiberKind want_kind = which <= 2 ? FiberKind::spr : FiberKind::ske;
    const BaseVariant want_variant = which % 2 == 1 ? BaseVariant::B : BaseVariant::Bprime;
    if (fiber.kind != want_kind || base.kind != want_kind || base.variant != want_variant) {
        throw InputError("volume identity " + std::to_string(which) + " needs the " +
                         to_string(want_kind) + " fiber family and base metric " +
                         to_string(want_variant));
    }
    const Grid& grid = ref.grid;
    const double lambda = to_double(ref.consts.lambda);
    const double eT = to_double(ref.consts.exp_minus_T);

    // Exponential factor as displayed for each identity.
    double fiber_weight = 0.0;  // multiplies rho_fiber
    double base_weight = 0.0;   // multiplies f^*rho_base
    switch (which) {
        case 1: fiber_weight = -lambda; base_weight = lambda; break;
        case 2: fiber_weight = -lambda; break;
        case 3: base_weight = lambda; break;
        default: break;
    }

    Field2D log_density(grid);
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const double log_base = std::log(2.0 * base.omega[j]);
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            log_density(i, j) = fiber_weight * fiber.rho(i, j) + base_weight * base.rho[j] +
                                std::log(fiber.vertical_metric(i, j)) + log_base;
        }
    }
    const Form11Field ric = ric_log_volume(grid, log_density);
    const Form11Field omega_fiber = ref.omega0 + ddbar_invariant(grid, fiber.rho);

    Form11Field rhs = eT * omega_fiber;
    rhs -= (1.0 - eT) * ric;
    const double lhs_scale = which % 2 == 1 ? 1.0 : 1.0 - eT;

    VolumeIdentityReport out;
    out.which = which;
    out.residual = rhs;
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            out.residual.bb(i, j) -= lhs_scale * base.omega[j];
        }
    }
    out.residual_sup = sup_norm(out.residual);

    const Field2D pulled = pullback(grid, base.rho);
    out.gap_joint = mean_free_sup(grid, fiber.rho - pulled);
    out.gap_fiber = mean_free_sup(grid, fiber.rho);
    out.gap_base = mean_free_sup(grid, pulled);
    return out;
}

}  // namespace fanolab
