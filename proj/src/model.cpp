#include "fanolab/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <limits>
#include <numbers>
#include <numeric>

#include "fanolab/errors.hpp"
#include "fanolab/quadrature.hpp"

namespace fanolab {

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw InputError("not an exact rational: '" + std::string(whole) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(t, text));
    const std::int64_t num = parse_int(trim(t.substr(0, slash)), text);
    const std::int64_t den = parse_int(trim(t.substr(slash + 1)), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

std::string to_string(WarpShape shape) {
    switch (shape) {
        case WarpShape::none: return "none";
        case WarpShape::product: return "product";
        case WarpShape::skew: return "skew";
    }
    return "unknown";
}

WarpShape parse_warp_shape(std::string_view text) {
    const std::string_view t = trim(text);
    if (t == "none") return WarpShape::none;
    if (t == "product") return WarpShape::product;
    if (t == "skew") return WarpShape::skew;
    throw InputError("unknown warp shape '" + std::string(text) + "'");
}

DerivedConstants derive_constants(const ModelSpec& spec) {
    const Rational& a = spec.a;
    const Rational& c = spec.c;
    if (a <= Rational(0) || c <= Rational(0)) throw InputError("class coefficients a, c must be positive");
    if (a <= c) {
        throw ModelOrientationError("fiber collapse requires a > c (got a = " + to_string(a) +
                                    ", c = " + to_string(c) + ")");
    }

    DerivedConstants k;
    // Fiber coefficient of e^{-t}(a,c) - (1-e^{-t})(2,2) vanishes first.
    k.exp_minus_T = Rational(2) / (c + 2);
    const Rational one_minus = 1 - k.exp_minus_T;
    k.T = -std::log(to_double(k.exp_minus_T));
    k.lambda = k.exp_minus_T / one_minus;
    k.kappa = k.exp_minus_T * a - one_minus * 2;

    k.d_base = k.exp_minus_T * a + one_minus * (-2);
    k.d_fiber = k.exp_minus_T * c + one_minus * (-2);

    // Smallest k with k e^{-T} and k (1 - e^{-T}) integral.
    k.k = k.exp_minus_T.denominator();
    k.kprime = boost::rational_cast<std::int64_t>(one_minus * k.k);
    k.alpha = boost::rational_cast<std::int64_t>(k.exp_minus_T * k.k);
    k.beta = k.kprime;

    k.p = std::lcm(k.exp_minus_T.denominator(), one_minus.denominator());
    k.q = boost::rational_cast<std::int64_t>(k.exp_minus_T * k.p);
    k.r = boost::rational_cast<std::int64_t>(one_minus * k.p);
    const std::int64_t g = std::gcd(std::gcd(k.p, k.q), k.r);
    k.p /= g;
    k.q /= g;
    k.r /= g;

    if (k.d_fiber != Rational(0) || k.d_base != k.kappa || Rational(k.alpha, k.beta) != k.lambda ||
        k.lambda * c != Rational(2) || Rational(1) / one_minus != k.lambda + Rational(1)) {
        throw ModelInconsistencyError("derived constants violate their defining identities");
    }
    return k;
}

ClassPair kahler_class_at_time(double t, const ModelSpec& spec, const DerivedConstants& consts) {
    if (!(t >= 0.0 && t <= consts.T * (1.0 + 1e-15))) {
        throw InputError("kahler_class_at_time: t outside [0, T]");
    }
    const double e = std::exp(-t);
    const double eT = to_double(consts.exp_minus_T);
    const double w0 = (e - eT) / (1.0 - eT);
    const double w1 = (1.0 - e) / (1.0 - eT);
    return {w0 * to_double(spec.a) + w1 * to_double(consts.kappa), w0 * to_double(spec.c)};
}

std::pair<Rational, Rational> kahler_class_exact(const Rational& exp_minus_t,
                                                 const ModelSpec& spec,
                                                 const DerivedConstants& consts) {
    if (exp_minus_t > Rational(1) || exp_minus_t < consts.exp_minus_T) {
        throw InputError("kahler_class_exact: e^{-t} outside [e^{-T}, 1]");
    }
    const Rational one_minus = 1 - consts.exp_minus_T;
    const Rational w0 = (exp_minus_t - consts.exp_minus_T) / one_minus;
    const Rational w1 = (1 - exp_minus_t) / one_minus;
    return {w0 * spec.a + w1 * consts.kappa, w0 * spec.c};
}

namespace {

struct Poly {
    double p, dp, ddp;  // value, first and second derivative
};

Poly warp_factor(WarpShape shape, bool fiber_factor, double x) {
    if (shape == WarpShape::skew && fiber_factor) {
        return {x * x * (1.0 - x), 2.0 * x - 3.0 * x * x, 2.0 - 6.0 * x};
    }
    return {x * (1.0 - x), 1.0 - 2.0 * x, -2.0};
}

// (x(1-x) P')'
double fs_hessian(const Poly& q, double x) { return (1.0 - 2.0 * x) * q.dp + x * (1.0 - x) * q.ddp; }

}  // namespace

Field2D warp_potential(const Grid& grid, const ModelSpec& spec) {
    Field2D psi(grid);
    if (spec.warp_shape == WarpShape::none || spec.warp_amplitude == 0.0) return psi;
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const Poly qb = warp_factor(spec.warp_shape, false, grid.base().x(j));
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const Poly pf = warp_factor(spec.warp_shape, true, grid.fiber().x(i));
            psi(i, j) = spec.warp_amplitude * pf.p * qb.p;
        }
    }
    return psi;
}

Form11Field warp_form(const Grid& grid, const ModelSpec& spec) {
    Form11Field out(grid);
    if (spec.warp_shape == WarpShape::none || spec.warp_amplitude == 0.0) return out;
    const double eps = spec.warp_amplitude;
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        const double xb = grid.base().x(j);
        const Poly qb = warp_factor(spec.warp_shape, false, xb);
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const double xf = grid.fiber().x(i);
            const Poly pf = warp_factor(spec.warp_shape, true, xf);
            out.ff(i, j) = eps * fs_hessian(pf, xf) * qb.p;
            out.bb(i, j) = eps * pf.p * fs_hessian(qb, xb);
            out.fb(i, j) = eps * pf.dp * qb.dp;
        }
    }
    return out;
}

PositivityProbe positivity(const Grid& grid, const Form11Field& form) {
    PositivityProbe worst{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        for (std::size_t i = 0; i < grid.nf(); ++i) {
            const double s = std::sqrt(grid.fiber().fs(i) * grid.base().fs(j));
            const double p = form.ff(i, j);
            const double q = form.bb(i, j);
            const double off = s * form.fb(i, j);
            const double half_gap = 0.5 * (p - q);
            const double ev = 0.5 * (p + q) - std::sqrt(half_gap * half_gap + off * off);
            if (ev < worst.min_eigenvalue) {
                worst = {ev, grid.fiber().x(i), grid.base().x(j)};
            }
        }
    }
    return worst;
}

ReferenceGeometry build_reference(const ModelSpec& spec, const DerivedConstants& consts) {
    ReferenceGeometry ref;
    ref.spec = spec;
    ref.consts = consts;
    ref.grid = Grid(spec.n_fiber, spec.n_base);
    const Grid& grid = ref.grid;

    const double a = to_double(spec.a);
    const double c = to_double(spec.c);
    const double eT = to_double(consts.exp_minus_T);
    const double lambda = to_double(consts.lambda);
    const double kappa = to_double(consts.kappa);

    ref.omega0 = fs_base(grid, a) + fs_fiber(grid, c) + warp_form(grid, spec);
    const PositivityProbe probe = positivity(grid, ref.omega0);
    ref.positivity_margin = probe.min_eigenvalue;
    if (!(probe.min_eigenvalue > 0.0)) {
        throw PositivityError("omega_0 is not positive definite (warp too large)",
                              probe.min_eigenvalue, probe.x_f, probe.x_b);
    }

    ref.eta = RadialField(AxisKind::base, grid.nb(), kappa);
    ref.hL_weight = ChartPotential{c, a, warp_potential(grid, spec)};

    const Form11Field pulled_eta = pullback_form(grid, ref.eta);
    ref.chi = (1.0 / (1.0 - eT)) * (pulled_eta - eT * ref.omega0);

    // [chi] = -2 pi c_1(X) gives Ric Omega = -chi for Omega = C exp(-lambda psi_w).
    VolumeDensity shape{Field2D(grid)};
    for (std::size_t k = 0; k < shape.rho.data().size(); ++k) {
        shape.rho.data()[k] = std::exp(-lambda * ref.hL_weight.smooth.data()[k]);
    }
    const double target = integrate_total(grid, VolumeDensity{2.0 * wedge(grid, ref.omega0, pulled_eta).rho});
    ref.omega_scale = target / integrate_total(grid, shape);
    ref.Omega = VolumeDensity{ref.omega_scale * shape.rho};

    ref.V = 4.0 * std::numbers::pi * c;
    return ref;
}

ReferenceChecks verify_reference(const ReferenceGeometry& ref) {
    const Grid& grid = ref.grid;
    const double eT = to_double(ref.consts.exp_minus_T);
    ReferenceChecks out;
    out.hL_curvature_defect = sup_norm(ddbar_invariant(grid, ref.hL_weight) - ref.omega0);
    const Form11Field pulled_eta = pullback_form(grid, ref.eta);
    out.eta_decomposition_defect =
        sup_norm(pulled_eta - eT * ref.omega0 - (1.0 - eT) * ref.chi);
    out.ricci_omega_defect = sup_norm(ric_volume(grid, ref.Omega) + ref.chi);
    const double lhs = integrate_total(grid, ref.Omega);
    const double rhs = integrate_total(grid, VolumeDensity{2.0 * wedge(grid, ref.omega0, pulled_eta).rho});
    out.normalization_defect = std::abs(lhs - rhs) / std::abs(rhs);
    out.positivity_margin = positivity(grid, ref.omega0).min_eigenvalue;
    return out;
}

}  // namespace fanolab
