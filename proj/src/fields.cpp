#include "fanolab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fanolab/errors.hpp"

namespace fanolab {

namespace {

void check_shape(const Field2D& a, const Field2D& b) {
    if (!a.same_shape(b)) throw InputError("field shape mismatch");
}

}  // namespace

Field2D& Field2D::operator+=(const Field2D& other) {
    check_shape(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field2D& Field2D::operator-=(const Field2D& other) {
    check_shape(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field2D& Field2D::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
Field2D operator*(double s, Field2D a) { return a *= s; }

Form11Field& Form11Field::operator+=(const Form11Field& o) {
    ff += o.ff;
    bb += o.bb;
    fb += o.fb;
    return *this;
}

Form11Field& Form11Field::operator-=(const Form11Field& o) {
    ff -= o.ff;
    bb -= o.bb;
    fb -= o.fb;
    return *this;
}

Form11Field& Form11Field::operator*=(double s) {
    ff *= s;
    bb *= s;
    fb *= s;
    return *this;
}

Form11Field operator+(Form11Field a, const Form11Field& b) { return a += b; }
Form11Field operator-(Form11Field a, const Form11Field& b) { return a -= b; }
Form11Field operator*(double s, Form11Field a) { return a *= s; }

double sup_norm(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(const Field2D& field) { return sup_norm(field.data()); }

double sup_norm(const Form11Field& form) {
    return std::max({sup_norm(form.ff), sup_norm(form.bb), sup_norm(form.fb)});
}

void require_finite(std::span<const double> values, std::string_view what) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            throw InputError(std::string(what) + ": non-finite value at flat index " +
                             std::to_string(k));
        }
    }
}

void require_finite(const Field2D& field, std::string_view what) {
    require_finite(field.data(), what);
}

Form11Field fs_fiber(const Grid& grid, double coefficient) {
    Form11Field out(grid);
    out.ff = Field2D(grid, coefficient);
    return out;
}

Form11Field fs_base(const Grid& grid, double coefficient) {
    Form11Field out(grid);
    out.bb = Field2D(grid, coefficient);
    return out;
}

Form11Field pullback_form(const Grid& grid, const RadialField& base_coefficient) {
    Form11Field out(grid);
    out.bb = pullback(grid, base_coefficient);
    return out;
}

Field2D pullback(const Grid& grid, const RadialField& base_function) {
    if (base_function.size() != grid.nb()) throw InputError("pullback: base field size mismatch");
    Field2D out(grid);
    for (std::size_t j = 0; j < grid.nb(); ++j) {
        for (std::size_t i = 0; i < grid.nf(); ++i) out(i, j) = base_function[j];
    }
    return out;
}

}  // namespace fanolab
