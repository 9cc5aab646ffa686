#pragma once

#include <span>
#include <vector>

#include "fanolab/grid.hpp"

namespace fanolab {

/// Tridiagonal matrix; lower[0] and upper[n-1] are unused.
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(std::span<const double> u) const;
};

/// Thomas algorithm (no pivoting); intended for diagonally dominant systems.
std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::span<const double> rhs);

/// Conservative vertex-centred discretization of u -> (x(1-x) u')', the
/// FS-relative coefficient of i ddbar u on one P^1. Half cells at the poles
/// carry the zero-flux condition, and trapezoid-weighted row sums vanish.
/// The matching right side at the pole rows is the half-cell average, see
/// cell_average; pairing the pole rows with point values is only first order.
Tridiagonal flux_laplacian(const Axis& axis);

/// Identity on interior nodes; at the poles (3 f_0 + f_1)/4 and
/// (3 f_n + f_{n-1})/4, the average of the linear interpolant over the half cell.
std::vector<double> cell_average(std::span<const double> f);

/// Solve (x(1-x) u')' = rhs with mean-zero gauge int_0^1 u dx = 0.
/// rhs must integrate to zero (Simpson) within
/// compat_rel_tol * max(1, max|rhs|); otherwise SolvabilityError carries the defect.
std::vector<double> solve_poisson_1d(const Axis& axis, std::span<const double> rhs,
                                     double compat_rel_tol = 1e-8);

}  // namespace fanolab
