#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <boost/rational.hpp>

#include "fanolab/calculus.hpp"
#include "fanolab/fields.hpp"
#include "fanolab/grid.hpp"

namespace fanolab {

// Compare Rational only against Rational: mixed comparisons with int recurse
// under C++20 rewritten operators in some boost versions.
using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// Accepts "p/q" or an integer; anything else raises InputError.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

/// Smooth invariant warp potentials psi_w(x_f, x_b) = amplitude * P(x_f) Q(x_b).
enum class WarpShape {
    none,     // psi_w = 0
    product,  // P = Q = x(1-x)
    skew,     // P = x^2(1-x), Q = x(1-x); breaks the x_f -> 1-x_f symmetry
};

std::string to_string(WarpShape shape);
WarpShape parse_warp_shape(std::string_view text);

/// X = P^1 x P^1 -> B = P^1, projection to the second factor. The initial
/// class is [omega_0] = a [pi_B^* omega_FS] + c [pi_F^* omega_FS].
struct ModelSpec {
    Rational a{2};
    Rational c{1};
    double warp_amplitude = 0.0;
    WarpShape warp_shape = WarpShape::product;
    int n_fiber = 64;
    int n_base = 64;
};

/// Exact constants of the finite-time collapse of the fiber.
struct DerivedConstants {
    Rational exp_minus_T;  // e^{-T} = 2/(c+2)
    double T = 0.0;
    Rational lambda;  // e^{-T}/(1-e^{-T}) = 2/c
    Rational kappa;   // eta = kappa * omega_FS on B
    std::int64_t k = 0;
    std::int64_t kprime = 0;  // k (1 - e^{-T})
    std::int64_t alpha = 0;   // D_b^k = L_b^alpha (x) K_{X_b}^beta
    std::int64_t beta = 0;
    Rational d_base;   // class of D in the basis {pi_B^*, pi_F^*}
    Rational d_fiber;  // always 0
    std::int64_t p = 0, q = 0, r = 0;  // p D = q L + r K_X, minimal
};

DerivedConstants derive_constants(const ModelSpec& spec);

/// Class of the flow metric at time t in [0, T], in the basis
/// {pi_B^* omega_FS, pi_F^* omega_FS}.
struct ClassPair {
    double base = 0.0;
    double fiber = 0.0;
};

ClassPair kahler_class_at_time(double t, const ModelSpec& spec, const DerivedConstants& consts);

/// Exact variant parameterized by e^{-t}.
std::pair<Rational, Rational> kahler_class_exact(const Rational& exp_minus_t,
                                                 const ModelSpec& spec,
                                                 const DerivedConstants& consts);

/// Grid samples of the warp potential and its analytic i ddbar.
Field2D warp_potential(const Grid& grid, const ModelSpec& spec);
Form11Field warp_form(const Grid& grid, const ModelSpec& spec);

struct ReferenceGeometry {
    ModelSpec spec;
    DerivedConstants consts;
    Grid grid;

    Form11Field omega0;      // a FS_b + c FS_f + i ddbar psi_w (analytic)
    RadialField eta;         // FS-relative coefficient of eta on B (= kappa)
    ChartPotential hL_weight;  // Ric h_L = omega_0; additive constant fixed to 0
    Form11Field chi;         // (f^*eta - e^{-T} omega_0) / (1 - e^{-T})
    VolumeDensity Omega;     // Ric Omega = -chi, int Omega = int 2 omega_0 ^ f^*eta
    double omega_scale = 0.0;  // Omega = omega_scale * exp(-lambda psi_w)
    double V = 0.0;            // 2 int_{X_b} omega_{0,b} = 4 pi c
    double positivity_margin = 0.0;
};

/// Builds the reference objects. Throws PositivityError if omega_0 fails to
/// be positive definite at some node.
ReferenceGeometry build_reference(const ModelSpec& spec, const DerivedConstants& consts);

/// Forward checks of the reference objects.
struct ReferenceChecks {
    double hL_curvature_defect = 0.0;  // |i ddbar phi_L - omega_0|
    double eta_decomposition_defect = 0.0;  // |f^*eta - e^{-T} omega_0 - (1-e^{-T}) chi|
    double ricci_omega_defect = 0.0;        // |Ric Omega + chi|
    double normalization_defect = 0.0;      // relative
    double positivity_margin = 0.0;
};

ReferenceChecks verify_reference(const ReferenceGeometry& ref);

/// Smallest eigenvalue of the FS-normalized coefficient matrix, and where.
struct PositivityProbe {
    double min_eigenvalue = 0.0;
    double x_f = 0.0;
    double x_b = 0.0;
};

PositivityProbe positivity(const Grid& grid, const Form11Field& form);

}  // namespace fanolab
