#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "fanolab/calculus.hpp"
#include "fanolab/errors.hpp"
#include "fanolab/grid.hpp"
#include "fanolab/newton.hpp"
#include "fanolab/poisson.hpp"
#include "fanolab/quadrature.hpp"

using namespace fanolab;

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
std::vector<double> sample(const Axis& axis, F f) {
    std::vector<double> v(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) v[i] = f(axis.x(i));
    return v;
}

template <class F>
double sup_error(const Axis& axis, const std::vector<double>& v, F exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < axis.size(); ++i) worst = std::max(worst, std::abs(v[i] - exact(axis.x(i))));
    return worst;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace

TEST_CASE("axis nodes include both poles") {
    const Axis a(16);
    CHECK(a.size() == 17);
    CHECK(a.x(0) == 0.0);
    CHECK(a.x(16) == 1.0);
    CHECK(a.fs(8) == doctest::Approx(0.25));
    CHECK_THROWS_AS(Axis(8), InputError);
    CHECK_THROWS_AS(Axis(17), InputError);
}

TEST_CASE("compensated sum keeps small terms") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-17);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-14).epsilon(1e-6));
}

TEST_CASE("quadrature rules") {
    const Axis a(16);
    // Simpson is exact on cubics.
    CHECK(simpson(sample(a, [](double x) { return x * x * x - 2 * x + 1; })) ==
          doctest::Approx(0.25 - 1.0 + 1.0).epsilon(1e-15));
    CHECK(trapezoid(sample(a, [](double) { return 3.0; })) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(finite_volume(sample(a, [](double) { return 1.0; })) == doctest::Approx(1.0).epsilon(1e-15));

    // finite_volume is second order on a smooth integrand: int exp(x) = e - 1.
    const double exact = std::numbers::e - 1.0;
    const double e1 = std::abs(finite_volume(sample(Axis(32), [](double x) { return std::exp(x); })) - exact);
    const double e2 = std::abs(finite_volume(sample(Axis(64), [](double x) { return std::exp(x); })) - exact);
    CHECK(order(e1, e2) > 1.8);
}

TEST_CASE("d_dx and ddbar_axis are second order up to the poles") {
    // u = sin(2x): (x(1-x) u')' = 2 (1-2x) cos 2x - 4 x(1-x) sin 2x.
    auto u = [](double x) { return std::sin(2 * x); };
    auto du = [](double x) { return 2 * std::cos(2 * x); };
    auto ddu = [](double x) { return 2 * (1 - 2 * x) * std::cos(2 * x) - 4 * x * (1 - x) * std::sin(2 * x); };
    double prev_d = 0, prev_dd = 0;
    for (int n : {32, 64, 128}) {
        const Axis a(n);
        const double ed = sup_error(a, d_dx(a, sample(a, u)), du);
        const double edd = sup_error(a, ddbar_axis(a, sample(a, u)), ddu);
        if (n > 32) {
            CHECK(order(prev_d, ed) > 1.8);
            CHECK(order(prev_dd, edd) > 1.8);
        }
        prev_d = ed;
        prev_dd = edd;
    }
}

TEST_CASE("ric_curve of a constant multiple of FS is 2") {
    const Axis a(16);
    const std::vector<double> ric = ric_curve(a, std::vector<double>(a.size(), 7.0));
    for (double r : ric) CHECK(r == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("flux laplacian rows sum to zero under the finite volume weights") {
    const Axis a(16);
    const Tridiagonal lap = flux_laplacian(a);
    // L applied to an arbitrary vector integrates to zero.
    const std::vector<double> v = sample(a, [](double x) { return std::exp(3 * x) + x * x; });
    const std::vector<double> lv = lap.apply(v);
    CHECK(std::abs(trapezoid(lv)) < 1e-12);
    // Constants are in the kernel.
    for (double r : lap.apply(std::vector<double>(a.size(), 2.5))) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("tridiagonal solve inverts apply") {
    Tridiagonal m;
    m.diag = {4, 4, 4, 4};
    m.lower = {0, 1, 1, 1};
    m.upper = {1, 1, 1, 0};
    const std::vector<double> x{1, -2, 3, 0.5};
    const std::vector<double> y = solve_tridiagonal(m, m.apply(x));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-14));
}

TEST_CASE("poisson solve recovers x(1-x) minus its mean at second order") {
    // rhs = (x(1-x) (1-2x))' = 6x^2 - 6x + 1, solution x(1-x) - 1/6.
    auto exact = [](double x) { return x * (1 - x) - 1.0 / 6.0; };
    double prev = 0;
    for (int n : {32, 64, 128}) {
        const Axis a(n);
        const std::vector<double> u =
            solve_poisson_1d(a, sample(a, [](double x) { return 6 * x * x - 6 * x + 1; }));
        const double err = sup_error(a, u, exact);
        CHECK(std::abs(simpson(u)) < 1e-14);
        if (n > 32) CHECK((err < 1e-13 || order(prev, err) > 1.8));
        prev = err;
    }
}

TEST_CASE("poisson solve with a smooth non-polynomial solution") {
    // u = cos(pi x): mean zero; rhs = (x(1-x)(-pi sin pi x))'.
    auto rhs = [](double x) {
        return -pi * (1 - 2 * x) * std::sin(pi * x) - pi * pi * x * (1 - x) * std::cos(pi * x);
    };
    double prev = 0;
    for (int n : {32, 64, 128}) {
        const Axis a(n);
        const double err = sup_error(a, solve_poisson_1d(a, sample(a, rhs)), [](double x) { return std::cos(pi * x); });
        if (n > 32) CHECK(order(prev, err) > 1.8);
        prev = err;
    }
}

TEST_CASE("poisson solve rejects an incompatible right side") {
    const Axis a(16);
    CHECK_THROWS_AS(solve_poisson_1d(a, std::vector<double>(a.size(), 1.0)), SolvabilityError);
    CHECK_NOTHROW(solve_poisson_1d(a, std::vector<double>(a.size(), 0.0)));
}

TEST_CASE("newton solves a small nonlinear system quadratically") {
    // x^2 = 2, x y = 1.
    auto residual = [](std::span<const double> z) {
        return std::vector<double>{z[0] * z[0] - 2.0, z[0] * z[1] - 1.0};
    };
    auto jacobian = [](std::span<const double> z) {
        Eigen::SparseMatrix<double> j(2, 2);
        j.insert(0, 0) = 2 * z[0];
        j.insert(1, 0) = z[1];
        j.insert(1, 1) = z[0];
        return j;
    };
    NewtonOptions opts;
    opts.tol = 1e-14;
    const NewtonResult r = newton_solve(residual, jacobian, {1.0, 1.0}, opts);
    CHECK(r.solution[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.solution[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.trace.size() < 10);
}

TEST_CASE("newton rejects an inconsistent jacobian") {
    auto residual = [](std::span<const double> z) { return std::vector<double>{z[0] * z[0] * z[0] - 1.0}; };
    auto wrong = [](std::span<const double>) {
        Eigen::SparseMatrix<double> j(1, 1);
        j.insert(0, 0) = 1.0;
        return j;
    };
    CHECK_THROWS_AS(newton_solve(residual, wrong, {2.0}), ContractViolation);
}

TEST_CASE("newton reports non-convergence with its trace") {
    // x^2 + 1 = 0 has no real root.
    auto residual = [](std::span<const double> z) { return std::vector<double>{z[0] * z[0] + 1.0}; };
    auto jacobian = [](std::span<const double> z) {
        Eigen::SparseMatrix<double> j(1, 1);
        j.insert(0, 0) = 2 * z[0];
        return j;
    };
    NewtonOptions opts;
    opts.max_iter = 10;
    try {
        newton_solve(residual, jacobian, {1.0}, opts);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(!e.trace.empty());
    }
}
