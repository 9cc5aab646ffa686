#pragma once

#include <span>
#include <vector>

#include "fanolab/fields.hpp"

namespace fanolab {

// Differential calculus for torus-invariant objects in moment coordinates.
//
// With t = log|z|^2 one has d/dt = x(1-x) d/dx, and for an invariant
// function psi the log-frame coefficients of i ddbar psi are the t-Hessian.
// Divided by the x(1-x) factors (see Form11Field) this gives
//
//   ff = d/dx_f (x_f(1-x_f) d psi/dx_f),   fb = d^2 psi / dx_f dx_b,
//
// and symmetrically for bb. Centered second-order differences are used in
// the interior; at x = 0, 1 the one-sided second-order value is the quadratic
// extrapolation of the centred values (five-point stencil).

/// First derivative d/dx on one axis.
std::vector<double> d_dx(const Axis& axis, std::span<const double> u);

/// FS-relative coefficient of i ddbar u for an invariant function of one
/// moment coordinate: (x(1-x) u')'.
std::vector<double> ddbar_axis(const Axis& axis, std::span<const double> u);

/// i ddbar psi for an invariant potential on X.
Form11Field ddbar_invariant(const Grid& grid, const Field2D& psi);

/// Weight of a line bundle in the standard chart:
///   fs_fiber * log(1+|z_f|^2) + fs_base * log(1+|z_b|^2) + smooth.
/// The log terms are not functions on X, so they are carried symbolically.
struct ChartPotential {
    double fs_fiber = 0.0;
    double fs_base = 0.0;
    Field2D smooth;
};

Form11Field ddbar_invariant(const Grid& grid, const ChartPotential& weight);

/// A weight on the base chart:
///   fs * log(1+|z_b|^2) + log_s * log|z_b|^2 + smooth.
/// log|z_b|^2 is pluriharmonic on the punctured chart.
struct BasePotential {
    double fs = 0.0;
    double log_s = 0.0;
    RadialField smooth;

    /// Value at an interior node; -inf/+inf at poles where a log term blows up.
    double value(const Axis& axis, std::size_t j) const;
};

/// FS-relative coefficient of i ddbar of a base weight.
RadialField ddbar_base(const Axis& axis, const BasePotential& weight);

/// Top wedge M^2/2 of a (1,1)-form, as a density relative to FS_f ^ FS_b.
VolumeDensity wedge_top(const Grid& grid, const Form11Field& form);

/// Mixed wedge M ^ N relative to FS_f ^ FS_b.
VolumeDensity wedge(const Grid& grid, const Form11Field& m, const Form11Field& n);

/// Ric of a volume form: -i ddbar log of its coordinate density,
/// i.e. 2 FS_f + 2 FS_b - i ddbar log rho.
Form11Field ric_volume(const Grid& grid, const VolumeDensity& volume);

/// Same, from the logarithm of the density (for densities with exponential
/// factors, where forming rho first would lose accuracy).
Form11Field ric_log_volume(const Grid& grid, const Field2D& log_rho);

/// Ric of an area form on one P^1 given by its FS-relative density:
/// 2 - (x(1-x) (log g)')'.
std::vector<double> ric_curve(const Axis& axis, std::span<const double> density);

}  // namespace fanolab
