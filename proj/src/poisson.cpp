#include "fanolab/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fanolab/errors.hpp"
#include "fanolab/fields.hpp"
#include "fanolab/quadrature.hpp"

namespace fanolab {

std::vector<double> Tridiagonal::apply(std::span<const double> u) const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i] * u[i];
        if (i > 0) v += lower[i] * u[i - 1];
        if (i + 1 < n) v += upper[i] * u[i + 1];
        out[i] = v;
    }
    return out;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::span<const double> rhs) {
    const std::size_t n = m.size();
    std::vector<double> c(n), d(n);
    double denom = m.diag[0];
    if (denom == 0.0) throw InputError("solve_tridiagonal: zero pivot");
    c[0] = n > 1 ? m.upper[0] / denom : 0.0;
    d[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = m.diag[i] - m.lower[i] * c[i - 1];
        if (denom == 0.0) throw InputError("solve_tridiagonal: zero pivot");
        c[i] = i + 1 < n ? m.upper[i] / denom : 0.0;
        d[i] = (rhs[i] - m.lower[i] * d[i - 1]) / denom;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

Tridiagonal flux_laplacian(const Axis& axis) {
    const std::size_t n = axis.size() - 1;
    const double h = axis.h();
    const double inv_h2 = 1.0 / (h * h);
    auto g_half = [&](std::size_t i) {  // x(1-x) at x_{i+1/2}
        const double x = (static_cast<double>(i) + 0.5) * h;
        return x * (1.0 - x);
    };
    Tridiagonal m;
    m.lower.assign(n + 1, 0.0);
    m.diag.assign(n + 1, 0.0);
    m.upper.assign(n + 1, 0.0);
    m.upper[0] = 2.0 * g_half(0) * inv_h2;
    m.diag[0] = -m.upper[0];
    for (std::size_t i = 1; i < n; ++i) {
        m.lower[i] = g_half(i - 1) * inv_h2;
        m.upper[i] = g_half(i) * inv_h2;
        m.diag[i] = -(m.lower[i] + m.upper[i]);
    }
    m.lower[n] = 2.0 * g_half(n - 1) * inv_h2;
    m.diag[n] = -m.lower[n];
    return m;
}

std::vector<double> cell_average(std::span<const double> f) {
    std::vector<double> out(f.begin(), f.end());
    const std::size_t n = f.size() - 1;
    if (f.size() < 2) throw InputError("cell_average: need at least one interval");
    out[0] = 0.75 * f[0] + 0.25 * f[1];
    out[n] = 0.75 * f[n] + 0.25 * f[n - 1];
    return out;
}

std::vector<double> solve_poisson_1d(const Axis& axis, std::span<const double> rhs,
                                     double compat_rel_tol) {
    if (rhs.size() != axis.size()) throw InputError("solve_poisson_1d: size mismatch");
    require_finite(rhs, "solve_poisson_1d");

    const double defect = simpson(rhs);
    // Floor of 1 on the scale: right sides are differences of O(1) densities.
    const double tol = compat_rel_tol * std::max(sup_norm(rhs), 1.0);
    if (std::abs(defect) > tol) {
        std::ostringstream msg;
        msg << "solve_poisson_1d: right side integrates to " << defect
            << " (tolerance " << tol << ")";
        throw SolvabilityError(msg.str(), defect);
    }

    // Project onto the range of the discrete operator, whose left null
    // vector is the trapezoid weight vector; on averaged samples that is
    // the finite_volume rule.
    const std::vector<double> avg = cell_average(rhs);
    const double shift = finite_volume(rhs);
    const Tridiagonal full = flux_laplacian(axis);
    const std::size_t n = full.size() - 1;

    // Pin u_0 = 0 and drop row 0, which is implied by the projection.
    Tridiagonal pinned;
    pinned.lower.assign(full.lower.begin() + 1, full.lower.end());
    pinned.diag.assign(full.diag.begin() + 1, full.diag.end());
    pinned.upper.assign(full.upper.begin() + 1, full.upper.end());
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = avg[i + 1] - shift;

    const std::vector<double> inner = solve_tridiagonal(pinned, b);
    std::vector<double> u(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) u[i + 1] = inner[i];

    const double mean = simpson(u);
    for (double& v : u) v -= mean;
    return u;
}

}  // namespace fanolab
