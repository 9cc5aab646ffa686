#pragma once

#include "fanolab/model.hpp"
#include "fanolab/wpform.hpp"

namespace fanolab {

/// base [pi_B^* omega_FS] + fiber [pi_F^* omega_FS] in H^{1,1}(P^1 x P^1).
/// Classes pulled back from B have fiber = 0.
struct CohomClass {
    Rational base{0};
    Rational fiber{0};

    CohomClass operator+(const CohomClass& o) const { return {base + o.base, fiber + o.fiber}; }
    CohomClass operator-(const CohomClass& o) const { return {base - o.base, fiber - o.fiber}; }
    friend CohomClass operator*(const Rational& s, const CohomClass& c) {
        return {s * c.base, s * c.fiber};
    }
    bool operator==(const CohomClass& o) const { return base == o.base && fiber == o.fiber; }

    /// Integral over a fiber of f: pi_F^* omega_FS gives 2 pi, pi_B^* gives 0.
    /// Returned as the coefficient of pi.
    Rational fiber_pairing_over_pi() const { return Rational(2) * fiber; }
    /// Integral over a section {z_f = const}: the dual statement.
    Rational base_pairing_over_pi() const { return Rational(2) * base; }
};

/// 2 pi c_1(X) = (2, 2).
CohomClass two_pi_c1_total();
/// [omega_0] = (a, c).
CohomClass initial_class(const ModelSpec& spec);
/// [f^*eta] = (kappa, 0).
CohomClass pulled_eta_class(const DerivedConstants& consts);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double defect = 0.0;           // |lhs - rhs|
    double relative_defect = 0.0;  // defect / |rhs|
};

/// -2 pi c_1(B) + [omega_WP] = [eta] / (1 - e^{-T}), integrated over B:
/// int_B omega_WP against 4 pi + (lambda + 1) 2 pi kappa.
IdentityCheck check_base_identity(const Grid& grid, const WPResult& wp, const DerivedConstants& consts);

struct TotalIdentityCheck {
    // Fiber pairing, exact: 4 pi against lambda 2 pi c (both as multiples of pi).
    Rational fiber_lhs_over_pi{0};
    Rational fiber_rhs_over_pi{0};
    bool fiber_exact = false;
    // Base pairing: 4 pi against lambda 2 pi a + 4 pi - int_B omega_WP.
    IdentityCheck base;
};

/// 2 pi c_1(X) = lambda [omega_0] + 2 pi f^*c_1(B) - [f^*omega_WP].
TotalIdentityCheck check_total_identity(const Grid& grid, const WPResult& wp,
                                        const ModelSpec& spec, const DerivedConstants& consts);

/// int_B omega_WP = 2 pi int_0^1 wp_base dx_b.
double integrate_wp(const Grid& grid, const WPResult& wp);

}  // namespace fanolab
