#pragma once

#include <vector>

#include "fanolab/fields.hpp"
#include "fanolab/model.hpp"
#include "fanolab/newton.hpp"

namespace fanolab {

enum class FiberKind {
    spr,  // Ric(omega_b) = lambda omega_{0,b}
    ske,  // Ric(omega_b) = lambda omega_b
};

const char* to_string(FiberKind kind);

/// A family of fiber metrics omega_{0,b} + i ddbar_fiber rho over the base grid.
struct FiberFamilySolution {
    FiberKind kind = FiberKind::spr;
    Field2D rho;              // fiber potential, mean zero on every fiber
    Field2D vertical_metric;  // FS-relative density of omega_b on each fiber
    double residual_sup = 0.0;   // forward fiber-equation residual
    double volume_defect = 0.0;  // max_b |vol(omega_b) - 2 pi c| / (2 pi c)
    std::vector<int> newton_iterations;  // per fiber (SKE only)
};

struct FiberOptions {
    double compat_rel_tol = 1e-8;
    NewtonOptions newton{};
    bool warm_start = true;  // SKE: initialize fiber b+1 from fiber b
};

/// Per fiber: solve the linear problem i ddbar v = 2 omega_FS - lambda omega_{0,b},
/// rescale e^v to the class volume, then recover rho by a second Poisson solve.
FiberFamilySolution solve_spr(const ReferenceGeometry& ref, const FiberOptions& options = {});

/// Per fiber: Newton on the Liouville form L(log g) + lambda g = 2 of the
/// Kahler-Einstein equation. The dilation family of solutions is fixed by
/// matching the first moment int (1 - 2x) g dx of omega_{0,b}; the
/// corresponding Lagrange multiplier vanishes at a true solution.
FiberFamilySolution solve_ske(const ReferenceGeometry& ref, const FiberOptions& options = {});

struct FiberReport {
    double residual_sup = 0.0;
    double volume_defect = 0.0;
    double positivity_margin = 0.0;      // min of the vertical density
    double vertical_consistency = 0.0;   // |omega_0,ff + (i ddbar rho)_ff - vertical|
    double hske_curvature_defect = 0.0;  // SKE: |(i ddbar (phi_L + rho))_ff - vertical|
    double exp_weight_l2 = 0.0;          // (int e^{-2 lambda rho} Omega)^{1/2}
    double base_derivative_sup = 0.0;    // max |d rho / d x_b|
};

FiberReport verify_fiber_family(const FiberFamilySolution& sol, const ReferenceGeometry& ref);

/// Forward fiber-equation residual Ric(omega_b) - target, FS-relative.
double fiber_equation_residual(const FiberFamilySolution& sol, const ReferenceGeometry& ref);

}  // namespace fanolab
