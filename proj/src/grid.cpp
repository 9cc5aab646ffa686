#include "fanolab/grid.hpp"

#include <string>

#include "fanolab/errors.hpp"

namespace fanolab {

const char* to_string(AxisKind axis) { return axis == AxisKind::fiber ? "fiber" : "base"; }

Axis::Axis(int intervals) : intervals_(intervals) {
    // Simpson's rule on the fiber needs an even interval count.
    if (intervals < 16 || intervals % 2 != 0) {
        throw InputError("grid axis needs an even interval count >= 16, got " +
                         std::to_string(intervals));
    }
    h_ = 1.0 / intervals;
    x_.resize(size());
    for (int i = 0; i <= intervals; ++i) {
        x_[static_cast<std::size_t>(i)] = static_cast<double>(i) / intervals;
    }
}

Grid::Grid(int fiber_intervals, int base_intervals)
    : fiber_(fiber_intervals), base_(base_intervals) {}

}  // namespace fanolab
