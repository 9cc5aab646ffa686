#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fanolab/grid.hpp"

namespace fanolab {

/// Scalar profile on one axis (fiber or base).
struct RadialField {
    AxisKind axis = AxisKind::base;
    std::vector<double> values;

    RadialField() = default;
    RadialField(AxisKind a, std::size_t n, double fill = 0.0) : axis(a), values(n, fill) {}
    RadialField(AxisKind a, std::vector<double> v) : axis(a), values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Scalar field over the grid, indexed (fiber node, base node). Each fiber
/// (fixed base node) is stored contiguously.
class Field2D {
public:
    Field2D() = default;
    Field2D(std::size_t nf, std::size_t nb, double fill = 0.0)
        : nf_(nf), nb_(nb), values_(nf * nb, fill) {}
    explicit Field2D(const Grid& grid, double fill = 0.0) : Field2D(grid.nf(), grid.nb(), fill) {}

    std::size_t nf() const { return nf_; }
    std::size_t nb() const { return nb_; }

    double& operator()(std::size_t i, std::size_t j) { return values_[j * nf_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[j * nf_ + i]; }

    std::span<double> fiber(std::size_t j) { return {values_.data() + j * nf_, nf_}; }
    std::span<const double> fiber(std::size_t j) const { return {values_.data() + j * nf_, nf_}; }

    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    bool same_shape(const Field2D& other) const { return nf_ == other.nf_ && nb_ == other.nb_; }

    Field2D& operator+=(const Field2D& other);
    Field2D& operator-=(const Field2D& other);
    Field2D& operator*=(double s);

private:
    std::size_t nf_ = 0;
    std::size_t nb_ = 0;
    std::vector<double> values_;
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double s, Field2D a);

/// Torus-invariant real (1,1)-form on X. In the log frame {i dw_j ^ dw̄_k},
/// w_j = log z_j, the coefficients of a smooth invariant form vanish like
/// x(1-x) along the corresponding axis. We store them divided by those
/// factors, so every entry is the smooth extension up to the poles:
///
///   m_ff = x_f(1-x_f) * ff,  m_bb = x_b(1-x_b) * bb,
///   m_fb = x_f(1-x_f) x_b(1-x_b) * fb.
///
/// In these units omega_FS on either factor has coefficient 1.
struct Form11Field {
    Field2D ff;
    Field2D bb;
    Field2D fb;

    Form11Field() = default;
    explicit Form11Field(const Grid& grid) : ff(grid), bb(grid), fb(grid) {}

    double log_frame_ff(const Grid& g, std::size_t i, std::size_t j) const {
        return g.fiber().fs(i) * ff(i, j);
    }
    double log_frame_bb(const Grid& g, std::size_t i, std::size_t j) const {
        return g.base().fs(j) * bb(i, j);
    }
    double log_frame_fb(const Grid& g, std::size_t i, std::size_t j) const {
        return g.fiber().fs(i) * g.base().fs(j) * fb(i, j);
    }

    Form11Field& operator+=(const Form11Field& o);
    Form11Field& operator-=(const Form11Field& o);
    Form11Field& operator*=(double s);
};

Form11Field operator+(Form11Field a, const Form11Field& b);
Form11Field operator-(Form11Field a, const Form11Field& b);
Form11Field operator*(double s, Form11Field a);

/// Top-degree form on X as a density relative to omega_FS,f ^ omega_FS,b.
struct VolumeDensity {
    Field2D rho;
};

/// Componentwise sup norm (max over the three stored coefficients).
double sup_norm(const Form11Field& form);
double sup_norm(const Field2D& field);
double sup_norm(std::span<const double> values);

/// Reject non-finite entries with a diagnostic naming `what`.
void require_finite(const Field2D& field, std::string_view what);
void require_finite(std::span<const double> values, std::string_view what);

/// Constant multiples of the Fubini-Study forms of each factor.
Form11Field fs_fiber(const Grid& grid, double coefficient = 1.0);
Form11Field fs_base(const Grid& grid, double coefficient = 1.0);

/// f^* of a base (1,1)-form given by its FS-relative coefficient.
Form11Field pullback_form(const Grid& grid, const RadialField& base_coefficient);

/// f^* of a base function.
Field2D pullback(const Grid& grid, const RadialField& base_function);

}  // namespace fanolab
