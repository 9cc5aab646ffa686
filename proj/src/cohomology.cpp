#include "fanolab/cohomology.hpp"

#include <cmath>
#include <numbers>

#include "fanolab/quadrature.hpp"

namespace fanolab {

CohomClass two_pi_c1_total() { return {Rational(2), Rational(2)}; }

CohomClass initial_class(const ModelSpec& spec) { return {spec.a, spec.c}; }

CohomClass pulled_eta_class(const DerivedConstants& consts) { return {consts.kappa, Rational(0)}; }

double integrate_wp(const Grid& grid, const WPResult& wp) {
    return integrate_base(grid, RadialField(AxisKind::base, grid.nb(), 1.0), wp.wp_base);
}

namespace {

IdentityCheck compare(double lhs, double rhs) {
    IdentityCheck out;
    out.lhs = lhs;
    out.rhs = rhs;
    out.defect = std::abs(lhs - rhs);
    out.relative_defect = out.defect / std::abs(rhs);
    return out;
}

}  // namespace

IdentityCheck check_base_identity(const Grid& grid, const WPResult& wp,
                                  const DerivedConstants& consts) {
    const double pi = std::numbers::pi;
    // Over B = P^1: int 2 pi c_1(B) = 4 pi, int eta = 2 pi kappa.
    const double rhs = 4.0 * pi + to_double((consts.lambda + Rational(1)) * consts.kappa) * 2.0 * pi;
    return compare(integrate_wp(grid, wp), rhs);
}

TotalIdentityCheck check_total_identity(const Grid& grid, const WPResult& wp,
                                        const ModelSpec& spec, const DerivedConstants& consts) {
    const double pi = std::numbers::pi;
    TotalIdentityCheck out;
    const CohomClass lhs = two_pi_c1_total();
    // Classes pulled back from B pair to zero with a fiber.
    const CohomClass rhs_known = consts.lambda * initial_class(spec);
    out.fiber_lhs_over_pi = lhs.fiber_pairing_over_pi();
    out.fiber_rhs_over_pi = rhs_known.fiber_pairing_over_pi();
    out.fiber_exact = out.fiber_lhs_over_pi == out.fiber_rhs_over_pi;

    const double base_lhs = to_double(lhs.base_pairing_over_pi()) * pi;
    const double base_rhs = to_double(rhs_known.base_pairing_over_pi()) * pi + 4.0 * pi -
                            integrate_wp(grid, wp);
    out.base = compare(base_lhs, base_rhs);
    return out;
}

}  // namespace fanolab
