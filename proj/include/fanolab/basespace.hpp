#pragma once

#include <map>
#include <vector>

#include "fanolab/fiberwise.hpp"
#include "fanolab/model.hpp"
#include "fanolab/newton.hpp"
#include "fanolab/wpform.hpp"

namespace fanolab {

/// f_* of a volume form: its fiber integrals, as a density relative to
/// omega_FS on B.
RadialField pushforward(const Grid& grid, const VolumeDensity& volume);

/// Largest relative mismatch of int_B psi f_*Omega = int_X (f^*psi) Omega
/// over the test functions psi = 1, x_b, x_b^2, x_b^3.
double pushforward_adjoint_defect(const Grid& grid, const VolumeDensity& volume);

struct GprimeReport {
    FiberKind kind = FiberKind::spr;
    VolumeDensity volume;  // Omega (SPR) or Omega' = e^{-lambda rho_SKE} Omega (SKE)
    RadialField pushforward;
    RadialField gprime;
    double delta_lower = 0.0;
    std::map<double, double> lp_norms;  // p -> ||G'||_{L^p(B, eta)}
    double normalization_defect = 0.0;  // |int G' eta - int eta| / int eta
};

/// G' = f_*Omega / (V eta) for SPR, or f_*Omega' / (V eta) for SKE, where
/// `fiber` must then be the SKE family. Exponents p = 1, 1 + lp_epsilon, 2.
GprimeReport compute_gprime(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                            double lp_epsilon = 0.1);

struct DescentReport {
    Field2D g;                       // Omega / (2 omega_b ^ f^*eta)
    double vertical_constancy = 0.0;  // max over b of the oscillation along the fiber
    double pullback_defect = 0.0;     // max |G - f^*G'|
};

DescentReport check_g_descends(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                               const GprimeReport& gprime);

enum class BaseVariant {
    B,       // eta + i ddbar rho_B
    Bprime,  // eta / (1 - e^{-T}) + i ddbar rho_B'
};

const char* to_string(BaseVariant variant);

struct BaseMetricSolution {
    BaseVariant variant = BaseVariant::B;
    FiberKind kind = FiberKind::spr;
    double kappa_hat = 0.0;  // FS coefficient of the reference form on B
    RadialField rho;
    RadialField omega;  // kappa_hat + i ddbar rho, FS-relative (pointwise differences)
    std::vector<NewtonStep> trace;
    double positivity_margin = 0.0;     // min of omega
    double discrete_residual = 0.0;     // residual of the solved discrete system
    double pointwise_residual = 0.0;    // |omega - G' e^rho kappa_hat| with pointwise differences
    double integrated_defect = 0.0;     // |int G' e^rho kappa_hat - int kappa_hat| relative
    double min_zeroth_order = 0.0;      // smallest G' e^rho kappa_hat seen by any Jacobian
};

/// (kappa_hat + i ddbar rho) = G' e^rho kappa_hat on B, semilinear for
/// m = 1, by damped Newton from rho = init.
BaseMetricSolution solve_base_ma(const Grid& grid, const RadialField& gprime, BaseVariant variant,
                                 FiberKind kind, const DerivedConstants& consts,
                                 const NewtonOptions& options = {}, double init = 0.0);

/// Newton from 0, +0.5 and -0.5; largest pairwise sup difference of rho.
double base_uniqueness_spread(const Grid& grid, const RadialField& gprime, BaseVariant variant,
                              FiberKind kind, const DerivedConstants& consts,
                              const NewtonOptions& options = {});

struct BaseResidual {
    RadialField profile;
    double sup = 0.0;
    double relative = 0.0;  // sup / max |omega| (twisted KE) or sup / max |(lambda+1) eta|
};

/// Ric w + w + lambda eta - omega_WP (B), or Ric w + w - omega_WP (Bprime).
BaseResidual twisted_ke_residual(const Grid& grid, const BaseMetricSolution& sol,
                                 const WPResult& wp, const DerivedConstants& consts);

/// -Ric(f_*Omega) + omega_WP - eta / (1 - e^{-T}).
BaseResidual wpl_fs_residual(const Grid& grid, const RadialField& pushforward_density,
                             const WPResult& wp, const DerivedConstants& consts);

struct VolumeIdentityReport {
    int which = 0;
    Form11Field residual;
    double residual_sup = 0.0;
    // Oscillation norms of rho_fiber - f^*rho_base, rho_fiber and f^*rho_base
    // (each minus its mean); an identity without the exponential factor holds
    // iff the corresponding gap vanishes.
    double gap_joint = 0.0;
    double gap_fiber = 0.0;
    double gap_base = 0.0;
};

/// The four identities relating f^*omega_B (or f^*omega_B') to Ric of
/// Omega_{omega_fiber, omega_base} = 2 omega_fiber ^ f^*omega_base:
///   1: SPR with B, factor e^{lambda (f^*rho_B - rho_SPR)}
///   2: SPR with Bprime, factor e^{-lambda rho_SPR}, left side scaled by 1 - e^{-T}
///   3: SKE with B, factor e^{lambda f^*rho_B}
///   4: SKE with Bprime, no factor, left side scaled by 1 - e^{-T}
VolumeIdentityReport volume_identity_residual(int which, const ReferenceGeometry& ref,
                                              const FiberFamilySolution& fiber,
                                              const BaseMetricSolution& base);

}  // namespace fanolab
