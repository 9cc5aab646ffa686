#pragma once

#include <span>

#include "fanolab/fields.hpp"

namespace fanolab {

/// Neumaier compensated accumulator. Summation order is the insertion
/// order, so results are reproducible bit for bit.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

/// Composite Simpson rule for int_0^1 f dx on uniform nodes (even intervals).
/// Integer weights 1,4,2,...,4,1 are accumulated first, so a constant
/// integrand integrates exactly.
double simpson(std::span<const double> f);

/// Composite trapezoid rule for int_0^1 f dx on uniform nodes.
double trapezoid(std::span<const double> f);

/// Trapezoid applied to the half-cell averaged samples (see cell_average in
/// poisson.hpp): weights 3/8, 9/8, 1, ..., 1, 9/8, 3/8 times h. Second order.
/// Row sums of the flux operator vanish under these weights, so integrated
/// discrete equations hold to rounding.
double finite_volume(std::span<const double> f);

/// Per base node b: 2*pi * int_0^1 rho(x_f, b) dx_f (Simpson in the fiber).
RadialField fiber_integral(const Grid& grid, const Field2D& rho);
RadialField fiber_integral(const Grid& grid, const VolumeDensity& volume);

/// 2*pi * int_0^1 g(x_b) w(x_b) dx_b where w is the FS-relative coefficient
/// of a base (1,1)-form (finite_volume in the base).
double integrate_base(const Grid& grid, const RadialField& g, const RadialField& weight);

/// (2*pi)^2 * double integral of the density (Simpson in the fiber,
/// finite_volume in the base).
double integrate_total(const Grid& grid, const VolumeDensity& volume);

/// Fiber mean int_0^1 f(x_f, b) dx_f for every base node (Simpson).
RadialField fiber_mean(const Grid& grid, const Field2D& f);

}  // namespace fanolab
