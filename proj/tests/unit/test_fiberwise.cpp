#include <cmath>

#include "doctest.h"

#include "fanolab/fiberwise.hpp"
#include "fanolab/quadrature.hpp"

using namespace fanolab;

namespace {

ReferenceGeometry reference(double eps, int n, WarpShape shape = WarpShape::product) {
    ModelSpec s;
    s.warp_amplitude = eps;
    s.warp_shape = shape;
    s.n_fiber = n;
    s.n_base = n;
    return build_reference(s, derive_constants(s));
}

}  // namespace

TEST_CASE("model A: both fiber families are the reference metric") {
    const ReferenceGeometry ref = reference(0.0, 32);
    for (auto sol : {solve_spr(ref), solve_ske(ref)}) {
        CHECK(sup_norm(sol.rho) < 1e-12);
        for (double u : sol.vertical_metric.data()) CHECK(u == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.residual_sup < 1e-10);
        CHECK(sol.volume_defect < 1e-13);
    }
}

TEST_CASE("model B: fiber equations converge at second order") {
    for (WarpShape shape : {WarpShape::product, WarpShape::skew}) {
        double prev_spr = 0, prev_cons = 0;
        for (int n : {32, 64, 128}) {
            const ReferenceGeometry ref = reference(0.2, n, shape);
            const FiberFamilySolution spr = solve_spr(ref);
            const FiberReport fr = verify_fiber_family(spr, ref);
            CHECK(fr.positivity_margin > 0.0);
            CHECK(fr.volume_defect < 1e-12);
            const FiberFamilySolution ske = solve_ske(ref);
            const FiberReport fk = verify_fiber_family(ske, ref);
            CHECK(fk.volume_defect < 1e-12);
            CHECK(fk.residual_sup < 1e-8);
            if (n > 32) {
                CHECK((fr.residual_sup < 1e-9 || std::log2(prev_spr / fr.residual_sup) > 1.8));
                CHECK(std::log2(prev_cons / fk.hske_curvature_defect) > 1.8);
            }
            prev_spr = fr.residual_sup;
            prev_cons = fk.hske_curvature_defect;
        }
    }
}

TEST_CASE("SKE fibers are round metrics of the right volume") {
    // Ric = lambda omega with lambda c = 2 forces a Mobius image of c FS:
    // the density c s / ((1-x) + s x)^2 for some s > 0. Recover s from the
    // pole values and compare pointwise.
    const ReferenceGeometry ref = reference(0.2, 64, WarpShape::skew);
    const FiberFamilySolution ske = solve_ske(ref);
    const Axis& ax = ref.grid.fiber();
    for (std::size_t j : {std::size_t(5), std::size_t(32), std::size_t(60)}) {
        const double g0 = ske.vertical_metric(0, j);
        const double g1 = ske.vertical_metric(ax.size() - 1, j);
        const double s = std::sqrt(g0 / g1);  // g0 = c s, g1 = c / s
        for (std::size_t i = 0; i < ax.size(); ++i) {
            const double x = ax.x(i);
            const double d = (1 - x) + s * x;
            CHECK(ske.vertical_metric(i, j) == doctest::Approx(std::sqrt(g0 * g1) * s / (d * d)).epsilon(1e-3));
        }
    }
}

TEST_CASE("fiber potentials are mean zero on every fiber") {
    const ReferenceGeometry ref = reference(0.2, 32, WarpShape::skew);
    for (auto sol : {solve_spr(ref), solve_ske(ref)}) {
        const RadialField mean = fiber_mean(ref.grid, sol.rho);
        for (double m : mean.values) CHECK(std::abs(m) < 1e-12);
    }
}
