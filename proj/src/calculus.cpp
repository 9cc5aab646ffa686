#include "fanolab/calculus.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fanolab/errors.hpp"

namespace fanolab {

namespace {

// End values by quadratic extrapolation of the centred interior values.
// This is a one-sided second-order stencil whose O(h^2) error continues the
// smooth interior error, so a second differentiation keeps second order.
// (The textbook 3-point one-sided stencil has a different error constant,
// and differentiating the resulting jump costs one order at the poles.)
void extrapolate_ends(std::vector<double>& v) {
    const std::size_t n = v.size() - 1;
    v[0] = 3.0 * v[1] - 3.0 * v[2] + v[3];
    v[n] = 3.0 * v[n - 1] - 3.0 * v[n - 2] + v[n - 3];
}

}  // namespace

std::vector<double> d_dx(const Axis& axis, std::span<const double> u) {
    const std::size_t n = axis.size() - 1;
    if (u.size() != axis.size()) throw InputError("d_dx: size mismatch");
    const double inv2h = 1.0 / (2.0 * axis.h());
    std::vector<double> out(u.size());
    for (std::size_t i = 1; i < n; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv2h;
    extrapolate_ends(out);
    return out;
}

std::vector<double> ddbar_axis(const Axis& axis, std::span<const double> u) {
    require_finite(u, "ddbar_axis");
    const std::size_t n = axis.size() - 1;
    const double inv_h2 = 1.0 / (axis.h() * axis.h());
    std::vector<double> du = d_dx(axis, u);
    std::vector<double> out(u.size());
    for (std::size_t i = 1; i < n; ++i) {
        const double x = axis.x(i);
        const double second = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
        out[i] = (1.0 - 2.0 * x) * du[i] + x * (1.0 - x) * second;
    }
    extrapolate_ends(out);
    return out;
}

Form11Field ddbar_invariant(const Grid& grid, const Field2D& psi) {
    require_finite(psi, "ddbar_invariant");
    if (psi.nf() != grid.nf() || psi.nb() != grid.nb()) {
        throw InputError("ddbar_invariant: field does not match grid");
    }
    const std::size_t nf = grid.nf();
    const std::size_t nb = grid.nb();
    Form11Field out(grid);

    for (std::size_t j = 0; j < nb; ++j) {
        const std::vector<double> col = ddbar_axis(grid.fiber(), psi.fiber(j));
        for (std::size_t i = 0; i < nf; ++i) out.ff(i, j) = col[i];
    }

    std::vector<double> line(nb);
    Field2D dpsi_df(grid);
    for (std::size_t j = 0; j < nb; ++j) {
        const std::vector<double> d = d_dx(grid.fiber(), psi.fiber(j));
        for (std::size_t i = 0; i < nf; ++i) dpsi_df(i, j) = d[i];
    }
    for (std::size_t i = 0; i < nf; ++i) {
        for (std::size_t j = 0; j < nb; ++j) line[j] = psi(i, j);
        const std::vector<double> row = ddbar_axis(grid.base(), line);
        for (std::size_t j = 0; j < nb; ++j) out.bb(i, j) = row[j];

        for (std::size_t j = 0; j < nb; ++j) line[j] = dpsi_df(i, j);
        const std::vector<double> mixed = d_dx(grid.base(), line);
        for (std::size_t j = 0; j < nb; ++j) out.fb(i, j) = mixed[j];
    }
    return out;
}

Form11Field ddbar_invariant(const Grid& grid, const ChartPotential& weight) {
    Form11Field out = ddbar_invariant(grid, weight.smooth);
    for (double& v : out.ff.data()) v += weight.fs_fiber;
    for (double& v : out.bb.data()) v += weight.fs_base;
    return out;
}

double BasePotential::value(const Axis& axis, std::size_t j) const {
    const double x = axis.x(j);
    double v = smooth[j];
    if (fs != 0.0) v += -fs * std::log1p(-x);
    if (log_s != 0.0) v += log_s * (std::log(x) - std::log1p(-x));
    return v;
}

RadialField ddbar_base(const Axis& axis, const BasePotential& weight) {
    RadialField out(AxisKind::base, ddbar_axis(axis, weight.smooth.values));
    for (double& v : out.values) v += weight.fs;
    return out;
}

VolumeDensity wedge_top(const Grid& grid, const Form11Field& form) {
    VolumeDensity out{Field2D(grid)};
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const double gb = grid.base().fs(j);
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const double gf = grid.fiber().fs(i);
            const double fb = form.fb(i, j);
            const double v = form.ff(i, j) * form.bb(i, j) - gf * gb * fb * fb;
            if (!std::isfinite(v)) {
                throw ModelRegularityError("wedge_top: non-finite density at node (" +
                                           std::to_string(i) + "," + std::to_string(j) + ")");
            }
            out.rho(i, j) = v;
        }
    }
    return out;
}

VolumeDensity wedge(const Grid& grid, const Form11Field& m, const Form11Field& n) {
    VolumeDensity out{Field2D(grid)};
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const double gb = grid.base().fs(j);
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const double gf = grid.fiber().fs(i);
            out.rho(i, j) = m.ff(i, j) * n.bb(i, j) + m.bb(i, j) * n.ff(i, j) -
                            2.0 * gf * gb * m.fb(i, j) * n.fb(i, j);
        }
    }
    return out;
}

Form11Field ric_volume(const Grid& grid, const VolumeDensity& volume) {
    Field2D log_rho(grid);
    for (std::size_t k = 0; k < log_rho.data().size(); ++k) {
        const double r = volume.rho.data()[k];
        if (!(r > 0.0)) throw InputError("ric_volume: density must be positive");
        log_rho.data()[k] = std::log(r);
    }
    return ric_log_volume(grid, log_rho);
}

Form11Field ric_log_volume(const Grid& grid, const Field2D& log_rho) {
    Form11Field out = ddbar_invariant(grid, log_rho);
    out *= -1.0;
    for (double& v : out.ff.data()) v += 2.0;
    for (double& v : out.bb.data()) v += 2.0;
    return out;
}

std::vector<double> ric_curve(const Axis& axis, std::span<const double> density) {
    std::vector<double> log_g(density.size());
    for (std::size_t i = 0; i < density.size(); ++i) {
        if (!(density[i] > 0.0)) throw InputError("ric_curve: density must be positive");
        log_g[i] = std::log(density[i]);
    }
    std::vector<double> out = ddbar_axis(axis, log_g);
    for (double& v : out) v = 2.0 - v;
    return out;
}

}  // namespace fanolab
