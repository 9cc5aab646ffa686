#include "fanolab/newton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "fanolab/fields.hpp"

namespace fanolab {

namespace {

double sup(std::span<const double> v) { return sup_norm(v); }

void probe(const ResidualFn& residual, const Eigen::SparseMatrix<double>& jac,
           std::span<const double> x, double tol) {
    const std::size_t n = x.size();
    Eigen::VectorXd d(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        d[static_cast<Eigen::Index>(i)] = std::sin(0.7 * static_cast<double>(i) + 0.3);
    }
    const double eps = 1e-6 * (1.0 + sup(x));
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    for (std::size_t i = 0; i < n; ++i) {
        xp[i] += eps * d[static_cast<Eigen::Index>(i)];
        xm[i] -= eps * d[static_cast<Eigen::Index>(i)];
    }
    const std::vector<double> fp = residual(xp);
    const std::vector<double> fm = residual(xm);
    const Eigen::VectorXd jd = jac * d;
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fd = (fp[i] - fm[i]) / (2.0 * eps);
        const double an = jd[static_cast<Eigen::Index>(i)];
        diff = std::max(diff, std::abs(fd - an));
        scale = std::max({scale, std::abs(fd), std::abs(an)});
    }
    if (diff > tol * std::max(scale, 1e-300) && diff > 1e-9) {
        std::ostringstream msg;
        msg << "newton: Jacobian probe mismatch " << diff << " against scale " << scale;
        throw ContractViolation(msg.str());
    }
}

}  // namespace

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian,
                          std::vector<double> x, const NewtonOptions& options) {
    NewtonResult result;
    std::vector<double> f = residual(x);
    if (f.size() != x.size()) throw ContractViolation("newton: residual size differs from unknowns");
    require_finite(f, "newton residual at init");
    double fnorm = sup(f);
    result.trace.push_back({0, fnorm, 0.0, 1.0});

    if (options.probe_jacobian) probe(residual, jacobian(x), x, options.probe_tol);

    for (int iter = 1; fnorm > options.tol; ++iter) {
        if (iter > options.max_iter) {
            throw NonConvergence("newton: iteration limit reached", result.trace);
        }
        Eigen::SparseMatrix<double> jac = jacobian(x);
        jac.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) {
            throw NonConvergence("newton: singular Jacobian", result.trace);
        }
        Eigen::Map<const Eigen::VectorXd> fvec(f.data(), static_cast<Eigen::Index>(f.size()));
        const Eigen::VectorXd delta = lu.solve(-fvec);
        if (lu.info() != Eigen::Success || !delta.allFinite()) {
            throw NonConvergence("newton: linear solve failed", result.trace);
        }

        double alpha = 1.0;
        std::vector<double> trial(x.size());
        std::vector<double> ftrial;
        double trial_norm = 0.0;
        bool accepted = false;
        for (int bt = 0; bt <= options.max_backtracks; ++bt) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                trial[i] = x[i] + alpha * delta[static_cast<Eigen::Index>(i)];
            }
            ftrial = residual(trial);
            trial_norm = sup(ftrial);
            if (std::isfinite(trial_norm) && trial_norm <= (1.0 - 1e-4 * alpha) * fnorm) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            throw NonConvergence("newton: no descent along the Newton direction", result.trace);
        }
        x.swap(trial);
        f.swap(ftrial);
        fnorm = trial_norm;
        result.trace.push_back({iter, fnorm, alpha * delta.lpNorm<Eigen::Infinity>(), alpha});
    }
    result.solution = std::move(x);
    return result;
}

std::vector<double> convergence_exponents(const std::vector<NewtonStep>& trace) {
    std::vector<double> out;
    for (std::size_t k = 2; k < trace.size(); ++k) {
        const double r0 = trace[k - 2].residual_norm;
        const double r1 = trace[k - 1].residual_norm;
        const double r2 = trace[k].residual_norm;
        if (r0 <= 0.0 || r1 <= 0.0 || r2 <= 0.0 || r1 >= r0) continue;
        out.push_back(std::log(r2 / r1) / std::log(r1 / r0));
    }
    return out;
}

}  // namespace fanolab
