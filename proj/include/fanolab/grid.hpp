#pragma once

#include <cstddef>
#include <vector>

namespace fanolab {

enum class AxisKind { fiber, base };

const char* to_string(AxisKind axis);

/// Uniform partition of the moment interval [0,1] of one P^1 factor.
/// The moment coordinate is x = |z|^2 / (1 + |z|^2); the Fubini-Study
/// measure is 2*pi*dx in this coordinate.
class Axis {
public:
    Axis() = default;
    explicit Axis(int intervals);

    int intervals() const { return intervals_; }
    std::size_t size() const { return static_cast<std::size_t>(intervals_) + 1; }
    double h() const { return h_; }
    double x(std::size_t i) const { return x_[i]; }
    const std::vector<double>& nodes() const { return x_; }

    /// x(1-x), the log-frame coefficient of omega_FS.
    double fs(std::size_t i) const { return x_[i] * (1.0 - x_[i]); }

private:
    int intervals_ = 0;
    double h_ = 0.0;
    std::vector<double> x_;
};

/// Tensor grid on the moment square of X = P^1 x P^1; the first factor is
/// the fiber, the second the base.
class Grid {
public:
    Grid() = default;
    Grid(int fiber_intervals, int base_intervals);

    const Axis& fiber() const { return fiber_; }
    const Axis& base() const { return base_; }
    const Axis& axis(AxisKind kind) const { return kind == AxisKind::fiber ? fiber_ : base_; }
    std::size_t nf() const { return fiber_.size(); }
    std::size_t nb() const { return base_.size(); }

    bool operator==(const Grid& other) const {
        return fiber_.intervals() == other.fiber_.intervals() &&
               base_.intervals() == other.base_.intervals();
    }

private:
    Axis fiber_;
    Axis base_;
};

}  // namespace fanolab
