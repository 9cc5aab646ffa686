#include "fanolab/fiberwise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fanolab/calculus.hpp"
#include "fanolab/errors.hpp"
#include "fanolab/poisson.hpp"
#include "fanolab/quadrature.hpp"

namespace fanolab {

const char* to_string(FiberKind kind) { return kind == FiberKind::spr ? "spr" : "ske"; }

namespace {

std::vector<double> fiber_column(const Field2D& f, std::size_t j) {
    const auto s = f.fiber(j);
    return {s.begin(), s.end()};
}

// Rescale a positive density to fiber area c (Simpson), then recover the
// potential rho with omega_{0,b} + i ddbar rho = density.
void finish_fiber(const ReferenceGeometry& ref, const FiberOptions& options, std::size_t j,
                  std::vector<double> density, FiberFamilySolution& sol) {
    const Grid& grid = ref.grid;
    const double c = to_double(ref.spec.c);
    for (std::size_t i = 0; i < density.size(); ++i) {
        if (!(density[i] > 0.0) || !std::isfinite(density[i])) {
            throw PositivityError("fiber metric lost positivity on fiber " + std::to_string(j),
                                  density[i], grid.fiber().x(i), grid.base().x(j));
        }
    }
    const double mean = simpson(density);
    for (double& v : density) v *= c / mean;

    std::vector<double> rhs(density.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = density[i] - ref.omega0.ff(i, j);
    const std::vector<double> rho = solve_poisson_1d(grid.fiber(), rhs, options.compat_rel_tol);

    for (std::size_t i = 0; i < rho.size(); ++i) {
        sol.rho(i, j) = rho[i];
        sol.vertical_metric(i, j) = density[i];
    }
}

void measure(const ReferenceGeometry& ref, FiberFamilySolution& sol) {
    sol.residual_sup = fiber_equation_residual(sol, ref);
    const double c = to_double(ref.spec.c);
    const RadialField vol = fiber_integral(ref.grid, sol.vertical_metric);
    double defect = 0.0;
    for (double v : vol.values) {
        defect = std::max(defect, std::abs(v - 2.0 * std::numbers::pi * c) / (2.0 * std::numbers::pi * c));
    }
    sol.volume_defect = defect;
}

}  // namespace

FiberFamilySolution solve_spr(const ReferenceGeometry& ref, const FiberOptions& options) {
    const Grid& grid = ref.grid;
    const double lambda = to_double(ref.consts.lambda);
    FiberFamilySolution sol;
    sol.kind = FiberKind::spr;
    sol.rho = Field2D(grid);
    sol.vertical_metric = Field2D(grid);

    std::vector<double> rhs(grid.nf());
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        // Both sides integrate to 2 - lambda c = 0 over the fiber.
        for (std::size_t i = 0; i < grid.nf(); ++i) rhs[i] = 2.0 - lambda * ref.omega0.ff(i, j);
        const std::vector<double> v = solve_poisson_1d(grid.fiber(), rhs, options.compat_rel_tol);
        std::vector<double> density(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) density[i] = std::exp(v[i]);
        finish_fiber(ref, options, j, std::move(density), sol);
    }
    measure(ref, sol);
    return sol;
}

FiberFamilySolution solve_ske(const ReferenceGeometry& ref, const FiberOptions& options) {
    const Grid& grid = ref.grid;
    const Axis& axis = grid.fiber();
    const std::size_t n = grid.nf();
    const double lambda = to_double(ref.consts.lambda);
    const Tridiagonal lap = flux_laplacian(axis);

    std::vector<double> moment(n);   // 1 - 2x
    std::vector<double> weight(n);   // trapezoid weights
    for (std::size_t i = 0; i < n; ++i) {
        moment[i] = 1.0 - 2.0 * axis.x(i);
        weight[i] = (i == 0 || i + 1 == n ? 0.5 : 1.0) * axis.h();
    }
    const std::vector<double> moment_avg = cell_average(moment);

    FiberFamilySolution sol;
    sol.kind = FiberKind::ske;
    sol.rho = Field2D(grid);
    sol.vertical_metric = Field2D(grid);
    sol.newton_iterations.assign(grid.nb(), 0);

    std::vector<double> state(n + 1, 0.0);  // log density, then multiplier
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const std::vector<double> m = fiber_column(ref.omega0.ff, j);
        double target_moment = 0.0;
        for (std::size_t i = 0; i < n; ++i) target_moment += weight[i] * moment[i] * m[i];

        if (j == 0 || !options.warm_start) {
            for (std::size_t i = 0; i < n; ++i) state[i] = std::log(m[i]);
            state[n] = 0.0;
        }

        auto residual = [&](std::span<const double> z) {
            std::vector<double> r = lap.apply(z.first(n));
            std::vector<double> g(n);
            for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(z[i]);
            const std::vector<double> g_avg = cell_average(g);
            double constraint = -target_moment;
            for (std::size_t i = 0; i < n; ++i) {
                r[i] += lambda * g_avg[i] - 2.0 - z[n] * moment_avg[i];
                constraint += weight[i] * moment[i] * g[i];
            }
            r.push_back(constraint);
            return r;
        };
        auto jacobian = [&](std::span<const double> z) {
            std::vector<Eigen::Triplet<double>> t;
            t.reserve(5 * n + 2);
            const auto ni = static_cast<int>(n);
            for (int i = 0; i < ni; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                const double g = std::exp(z[ui]);
                const bool pole = i == 0 || i + 1 == ni;
                t.emplace_back(i, i, lap.diag[ui] + (pole ? 0.75 : 1.0) * lambda * g);
                if (i > 0) t.emplace_back(i, i - 1, lap.lower[ui]);
                if (i + 1 < ni) t.emplace_back(i, i + 1, lap.upper[ui]);
                // Half-cell average couples the pole rows to their neighbour.
                if (i == 0) t.emplace_back(0, 1, 0.25 * lambda * std::exp(z[1]));
                if (i + 1 == ni) t.emplace_back(i, i - 1, 0.25 * lambda * std::exp(z[ui - 1]));
                t.emplace_back(i, ni, -moment_avg[ui]);
                t.emplace_back(ni, i, weight[ui] * moment[ui] * g);
            }
            Eigen::SparseMatrix<double> jac(ni + 1, ni + 1);
            jac.setFromTriplets(t.begin(), t.end());
            return jac;
        };

        NewtonResult res;
        try {
            res = newton_solve(residual, jacobian, state, options.newton);
        } catch (const NonConvergence& e) {
            throw NonConvergence("SKE fiber " + std::to_string(j) + ": " + e.what(), e.trace);
        }
        sol.newton_iterations[j] = static_cast<int>(res.trace.size()) - 1;
        state = res.solution;

        std::vector<double> density(n);
        for (std::size_t i = 0; i < n; ++i) density[i] = std::exp(state[i]);
        finish_fiber(ref, options, j, std::move(density), sol);
    }
    measure(ref, sol);
    return sol;
}

double fiber_equation_residual(const FiberFamilySolution& sol, const ReferenceGeometry& ref) {
    const Grid& grid = ref.grid;
    const double lambda = to_double(ref.consts.lambda);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const std::vector<double> ric = ric_curve(grid.fiber(), sol.vertical_metric.fiber(j));
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const double target = sol.kind == FiberKind::spr ? ref.omega0.ff(i, j)
                                                             : sol.vertical_metric(i, j);
            worst = std::max(worst, std::abs(ric[i] - lambda * target));
        }
    }
    return worst;
}

FiberReport verify_fiber_family(const FiberFamilySolution& sol, const ReferenceGeometry& ref) {
    const Grid& grid = ref.grid;
    const double lambda = to_double(ref.consts.lambda);
    FiberReport out;
    out.residual_sup = fiber_equation_residual(sol, ref);
    out.volume_defect = sol.volume_defect;
    out.positivity_margin = *std::min_element(sol.vertical_metric.data().begin(),
                                              sol.vertical_metric.data().end());

    const Form11Field ddrho = ddbar_invariant(grid, sol.rho);
    ChartPotential hske = ref.hL_weight;
    hske.smooth += sol.rho;
    const Form11Field curvature = ddbar_invariant(grid, hske);
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const double u = sol.vertical_metric(i, j);
            out.vertical_consistency = std::max(
                out.vertical_consistency, std::abs(ref.omega0.ff(i, j) + ddrho.ff(i, j) - u));
            if (sol.kind == FiberKind::ske) {
                out.hske_curvature_defect =
                    std::max(out.hske_curvature_defect, std::abs(curvature.ff(i, j) - u));
            }
            if (j + 1 < grid.nb()) {
                out.base_derivative_sup =
                    std::max(out.base_derivative_sup,
                             std::abs(sol.rho(i, j + 1) - sol.rho(i, j)) / grid.base().h());
            }
        }
    }

    VolumeDensity weighted{Field2D(grid)};
    for (std::size_t k = 0; k < weighted.rho.data().size(); ++k) {
        weighted.rho.data()[k] =
            std::exp(-2.0 * lambda * sol.rho.data()[k]) * ref.Omega.rho.data()[k];
    }
    out.exp_weight_l2 = std::sqrt(integrate_total(grid, weighted));
    return out;
}

}  // namespace fanolab
