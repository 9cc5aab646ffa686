#include <cmath>
#include <vector>

#include "doctest.h"

#include "fanolab/errors.hpp"
#include "fanolab/fiberwise.hpp"
#include "fanolab/wpform.hpp"

using namespace fanolab;

namespace {

ReferenceGeometry reference(int a, int c, double eps, int n) {
    ModelSpec s;
    s.a = Rational(a);
    s.c = Rational(c);
    s.warp_amplitude = eps;
    s.n_fiber = n;
    s.n_base = n;
    return build_reference(s, derive_constants(s));
}

double sup_diff(const RadialField& a, const RadialField& b) {
    double w = 0;
    for (std::size_t j = 0; j < a.size(); ++j) w = std::max(w, std::abs(a[j] - b[j]));
    return w;
}

// Independent oracle for the product warp psi = eps x_f(1-x_f) x_b(1-x_b):
// the fiber integral is I(g_b) = int_0^1 exp(-lambda eps g_b x(1-x)) dx up to
// factors that are constant or pluriharmonic, so with F = log I
//   wp = lambda a - [(1-2x)^2 F' - 2 g F' + g (1-2x)^2 F''](g = x_b(1-x_b)).
double product_warp_wp(double lambda, double a, double eps, double xb) {
    const int m = 20000;
    double i0 = 0, i1 = 0, i2 = 0;
    const double g = xb * (1 - xb);
    for (int k = 0; k <= m; ++k) {
        const double x = double(k) / m;
        const double w = (k == 0 || k == m) ? 1 : (k % 2 ? 4 : 2);
        const double q = lambda * eps * x * (1 - x);
        const double e = std::exp(-q * g);
        i0 += w * e;
        i1 += w * (-q) * e;
        i2 += w * q * q * e;
    }
    const double f1 = i1 / i0;
    const double f2 = i2 / i0 - f1 * f1;
    const double s = (1 - 2 * xb) * (1 - 2 * xb);
    return lambda * a - (s * f1 - 2 * g * f1 + g * s * f2);
}

}  // namespace

TEST_CASE("model A: omega_WP is lambda a omega_FS by both routes") {
    for (auto [a, c, expected] : {std::tuple{2, 1, 4.0}, {3, 2, 3.0}}) {
        const ReferenceGeometry ref = reference(a, c, 0.0, 64);
        const FiberFamilySolution spr = solve_spr(ref);
        const SectionVolumeFamily fam = volume_family_from_sections(ref, default_sections(ref.consts));
        const WPResult s = wp_from_sections(ref.grid, fam);
        const WPResult r = wp_from_residual(ref, spr, ref.eta, &fam);
        for (std::size_t j = 0; j < ref.grid.nb(); ++j) {
            CHECK(s.wp_base[j] == doctest::Approx(expected).epsilon(1e-12));
            CHECK(r.wp_base[j] == doctest::Approx(expected).epsilon(1e-12));
        }
        CHECK(r.verticality_defect < 1e-10);
        CHECK(section_family_ricci_defect(ref, fam) < 1e-10);
    }
}

TEST_CASE("model B: both routes match an independent quadrature oracle") {
    double prev_s = 0, prev_diff = 0;
    for (int n : {32, 64, 128}) {
        const ReferenceGeometry ref = reference(2, 1, 0.2, n);
        const FiberFamilySolution spr = solve_spr(ref);
        const SectionVolumeFamily fam = volume_family_from_sections(ref, default_sections(ref.consts));
        const WPResult s = wp_from_sections(ref.grid, fam);
        const WPResult r = wp_from_residual(ref, spr, ref.eta, &fam);
        double err = 0;
        for (std::size_t j = 0; j < ref.grid.nb(); ++j) {
            err = std::max(err, std::abs(s.wp_base[j] - product_warp_wp(2.0, 2.0, 0.2, ref.grid.base().x(j))));
        }
        const double diff = sup_diff(s.wp_base, r.wp_base);
        CHECK(err < 1e-3);
        if (n > 32) {
            CHECK((err < 1e-10 || std::log2(prev_s / err) > 1.8));
            CHECK(std::log2(prev_diff / diff) > 1.8);
        }
        prev_s = err;
        prev_diff = diff;
        CHECK(wp_curvature_defect(ref.grid, s) < 1e-5);
    }
}

TEST_CASE("section rescaling and base powers leave omega_WP unchanged") {
    const ReferenceGeometry ref = reference(2, 1, 0.2, 64);
    const SectionFamilySpec base = default_sections(ref.consts);
    const WPResult w0 = wp_from_sections(ref.grid, volume_family_from_sections(ref, base));
    SectionFamilySpec scaled = base;
    scaled.scale = 5.0;
    scaled.base_power = 3;
    const SectionVolumeFamily fam = volume_family_from_sections(ref, scaled);
    // Density scales by 5^{2/beta} |z_b|^{2 power/beta}.
    const SectionVolumeFamily fam0 = volume_family_from_sections(ref, base);
    const Axis& ax = ref.grid.base();
    const double s7 = ax.x(7) / (1 - ax.x(7));
    CHECK(std::exp(fam.base_weight.value(ax, 7) - fam0.base_weight.value(ax, 7)) ==
          doctest::Approx(std::pow(5.0, 2.0 / double(base.beta)) * std::pow(s7, 3.0 / double(base.beta))).epsilon(1e-13));
    const WPResult w1 = wp_from_sections(ref.grid, fam);
    CHECK(sup_diff(w0.wp_base, w1.wp_base) <= 1e-12);
}

TEST_CASE("h_L constant shift leaves omega_WP unchanged") {
    ReferenceGeometry ref = reference(2, 1, 0.2, 64);
    const WPResult w0 = wp_from_sections(ref.grid, volume_family_from_sections(ref, default_sections(ref.consts)));
    for (double& v : ref.hL_weight.smooth.data()) v += 0.75;
    const WPResult w1 = wp_from_sections(ref.grid, volume_family_from_sections(ref, default_sections(ref.consts)));
    CHECK(sup_diff(w0.wp_base, w1.wp_base) <= 1e-12);
}

TEST_CASE("theta swap leaves the residual route unchanged") {
    const ReferenceGeometry ref = reference(2, 1, 0.2, 64);
    const FiberFamilySolution spr = solve_spr(ref);
    RadialField theta(AxisKind::base, ref.grid.nb());
    for (std::size_t j = 0; j < ref.grid.nb(); ++j) theta[j] = 1.0 + ref.grid.base().fs(j);
    const WPResult a = wp_from_residual(ref, spr, ref.eta);
    const WPResult b = wp_from_residual(ref, spr, theta);
    CHECK(sup_diff(a.wp_base, b.wp_base) <= 1e-12);
}

TEST_CASE("model A: the SKE pipeline reproduces the SPR output") {
    const ReferenceGeometry ref = reference(2, 1, 0.0, 32);
    const FiberFamilySolution ske = solve_ske(ref);
    const SectionVolumeFamily fam =
        volume_family_from_sections(ref, default_sections(ref.consts, WeightKind::hSKE), &ske);
    const WPResult r = wp_from_residual(ref, ske, ref.eta, &fam);
    for (double v : r.wp_base.values) CHECK(v == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("section families with the wrong exponents are rejected") {
    const ReferenceGeometry ref = reference(2, 1, 0.0, 32);
    SectionFamilySpec bad = default_sections(ref.consts);
    bad.alpha = 3;
    CHECK_THROWS_AS(volume_family_from_sections(ref, bad), ModelInconsistencyError);
    CHECK_THROWS_AS(volume_family_from_sections(ref, default_sections(ref.consts, WeightKind::hSKE)), InputError);
}

TEST_CASE("a fiber family that is not a solution fails the pullback test") {
    const ReferenceGeometry ref = reference(2, 1, 0.2, 32);
    FiberFamilySolution spr = solve_spr(ref);
    for (std::size_t j = 0; j < ref.grid.nb(); ++j) {
        for (std::size_t i = 0; i < ref.grid.nf(); ++i) {
            spr.vertical_metric(i, j) *= 1.0 + 0.3 * ref.grid.fiber().x(i) * ref.grid.fiber().x(i);
        }
    }
    CHECK_THROWS_AS(wp_from_residual(ref, spr, ref.eta), PullbackStructureError);
}
