#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "fanolab/errors.hpp"

namespace fanolab {

using ResidualFn = std::function<std::vector<double>(std::span<const double>)>;
using JacobianFn = std::function<Eigen::SparseMatrix<double>(std::span<const double>)>;

struct NewtonOptions {
    double tol = 1e-10;       // sup-norm of the residual
    int max_iter = 50;
    bool probe_jacobian = true;
    double probe_tol = 1e-4;  // relative agreement of J d with a central difference
    int max_backtracks = 30;
};

struct NewtonResult {
    std::vector<double> solution;
    std::vector<NewtonStep> trace;
};

/// Damped Newton iteration shared by the base Monge-Ampere solves and the
/// fiber Liouville equation. Before iterating, J(init) d is compared with a
/// central difference of the residual along a fixed direction d; a mismatch
/// raises ContractViolation. Steps are backtracked on the sup-norm of the
/// residual. Throws NonConvergence (with the trace) if max_iter is reached or
/// no descent step exists.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<double> init, const NewtonOptions& options = {});

/// Observed per-iteration contraction exponents log(r_{k+1}) / log(r_k) over
/// the tail of a trace, for inspecting quadratic convergence.
std::vector<double> convergence_exponents(const std::vector<NewtonStep>& trace);

}  // namespace fanolab
