#pragma once

#include <cstdint>
#include <optional>

#include "fanolab/calculus.hpp"
#include "fanolab/fiberwise.hpp"
#include "fanolab/model.hpp"

namespace fanolab {

enum class WeightKind {
    hL,    // |s|^2 measured with h_L
    hSKE,  // h_L e^{-rho_SKE}
};

const char* to_string(WeightKind kind);

/// Family of relative sections Psi_b = F(b) s_b^alpha (x) (dz)^beta on the
/// standard chart. F must be holomorphic and nowhere zero on the fiber, so
/// it only depends on b; the invariant choices are F = scale * z_b^base_power.
struct SectionFamilySpec {
    double scale = 1.0;
    int base_power = 0;
    std::int64_t alpha = 0;
    std::int64_t beta = 0;
    WeightKind weight_kind = WeightKind::hL;
};

/// The canonical family F = 1 for the given model.
SectionFamilySpec default_sections(const DerivedConstants& consts,
                                   WeightKind kind = WeightKind::hL);

/// The volume forms Omega_{Psi_b} on every fiber. The factor that is
/// constant along fibers is kept as a base weight, since it is singular at
/// one pole of the base chart:
///
///   density(i, j) = exp(base_weight.value(j)) * fiber_density(i, j),
///
/// both relative to omega_FS on the fiber.
struct SectionVolumeFamily {
    SectionFamilySpec spec;
    Field2D fiber_density;
    BasePotential base_weight;
};

/// Omega_{Psi_b} = |F|^{2/beta} |s_b|^{2 alpha/beta} dz ^ dzbar. The weight
/// of h_L is phi_L (or phi_L + rho_SKE for hSKE, which requires `ske`).
/// Throws ModelInconsistencyError if the exponents leave a pole on the
/// fiber (alpha c != 2 beta).
SectionVolumeFamily volume_family_from_sections(const ReferenceGeometry& ref,
                                                const SectionFamilySpec& spec,
                                                const FiberFamilySolution* ske = nullptr);

/// max |Ric(Omega_{Psi_b}) - lambda omega_{0,b}| over the grid, FS-relative
/// (lambda omega_{SKE,b} when the family was built with hSKE).
double section_family_ricci_defect(const ReferenceGeometry& ref, const SectionVolumeFamily& family,
                                   const FiberFamilySolution* ske = nullptr);

enum class WPRoute { sections, residual };

const char* to_string(WPRoute route);

struct WPResult {
    WPRoute route = WPRoute::sections;
    RadialField wp_base;  // omega_WP = wp_base * omega_FS on B
    BasePotential log_norm;  // weight of h_WP (sections route only)
    double verticality_defect = 0.0;  // residual route only
    BasePotential log_mu;  // log of fiber_integral(Omega_Psi) / fiber_integral(omega_b), if known
    bool has_mu = false;
    double min_coefficient = 0.0;  // sign of omega_WP is reported, not asserted
};

/// omega_WP = -i ddbar log int_{X_b} Omega_{Psi_b}.
WPResult wp_from_sections(const Grid& grid, const SectionVolumeFamily& family);

/// Forward check that wp_base equals -i ddbar of log_norm, recomputed with
/// an independent stencil away from the two end nodes at each pole.
double wp_curvature_defect(const Grid& grid, const WPResult& wp);

struct ResidualRouteOptions {
    double verticality_tol = 1e-2;
};

/// R = lambda omega_0 (SPR) or lambda omega_SKE (SKE) + f^*Ric theta
///     - Ric(omega_b ^ f^*theta),
/// which must be the pullback of omega_WP. theta is the FS-relative
/// coefficient of a Kahler form on B. Throws PullbackStructureError when the
/// defect |R_ff| + |R_fb| + oscillation of R_bb along fibers exceeds the tolerance.
WPResult wp_from_residual(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                          const RadialField& theta, const SectionVolumeFamily* family = nullptr,
                          const ResidualRouteOptions& options = {});

/// The form R itself, exposed for diagnostics.
Form11Field fibration_residual_form(const ReferenceGeometry& ref, const FiberFamilySolution& fiber,
                                    const RadialField& theta);

}  // namespace fanolab
