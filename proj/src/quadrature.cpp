#include "fanolab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "fanolab/errors.hpp"

namespace fanolab {

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        correction_ += (sum_ - t) + x;
    } else {
        correction_ += (x - t) + sum_;
    }
    sum_ = t;
}

double simpson(std::span<const double> f) {
    const std::size_t n = f.size() - 1;
    if (f.size() < 3 || n % 2 != 0) throw InputError("simpson: need an even interval count");
    CompensatedSum acc;
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc.add(w * f[i]);
    }
    return acc.value() / (3.0 * static_cast<double>(n));
}

double trapezoid(std::span<const double> f) {
    const std::size_t n = f.size() - 1;
    if (f.size() < 2) throw InputError("trapezoid: need at least one interval");
    CompensatedSum acc;
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : 2.0;
        acc.add(w * f[i]);
    }
    return acc.value() / (2.0 * static_cast<double>(n));
}

double finite_volume(std::span<const double> f) {
    const std::size_t n = f.size() - 1;
    if (f.size() < 5) throw InputError("finite_volume: need at least four intervals");
    CompensatedSum acc;
    for (std::size_t i = 0; i <= n; ++i) {
        double w = 8.0;
        if (i == 0 || i == n) w = 3.0;
        if (i == 1 || i + 1 == n) w = 9.0;
        acc.add(w * f[i]);
    }
    return acc.value() / (8.0 * static_cast<double>(n));
}

RadialField fiber_mean(const Grid& grid, const Field2D& f) {
    RadialField out(AxisKind::base, grid.nb());
    for (std::size_t j = 0; j < grid.nb(); ++j) out[j] = simpson(f.fiber(j));
    return out;
}

RadialField fiber_integral(const Grid& grid, const Field2D& rho) {
    require_finite(rho, "fiber_integral");
    RadialField out = fiber_mean(grid, rho);
    for (double& v : out.values) v *= 2.0 * std::numbers::pi;
    return out;
}

RadialField fiber_integral(const Grid& grid, const VolumeDensity& volume) {
    return fiber_integral(grid, volume.rho);
}

double integrate_base(const Grid& grid, const RadialField& g, const RadialField& weight) {
    if (g.size() != grid.nb() || weight.size() != grid.nb()) {
        throw InputError("integrate_base: size mismatch");
    }
    std::vector<double> prod(grid.nb());
    for (std::size_t j = 0; j < grid.nb(); ++j) prod[j] = g[j] * weight[j];
    require_finite(prod, "integrate_base");
    return 2.0 * std::numbers::pi * finite_volume(prod);
}

double integrate_total(const Grid& grid, const VolumeDensity& volume) {
    require_finite(volume.rho, "integrate_total");
    const RadialField per_fiber = fiber_mean(grid, volume.rho);
    return 4.0 * std::numbers::pi * std::numbers::pi * finite_volume(per_fiber.values);
}

}  // namespace fanolab
