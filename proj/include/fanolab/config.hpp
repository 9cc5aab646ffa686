#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fanolab/model.hpp"

namespace fanolab {

enum class PipelineKind { spr, ske, both };

std::string to_string(PipelineKind kind);
PipelineKind parse_pipeline(std::string_view text);

/// Names of the checks a run can request, in execution order.
const std::vector<std::string>& all_check_names();

struct Tolerances {
    double newton_tol = 1e-10;     // Newton stopping rule and solver-level checks
    double residual_tol = 1e-3;    // discretization residuals at the finest grid
    double quadrature_tol = 1e-8;  // integrated identities and enforced constraints
    double order_min = 1.8;        // observed order across grid doubling
    double order_floor = 1e-9;     // below this the residual is rounding and has no order
};

struct PipelineConfig {
    ModelSpec model;  // n_fiber / n_base are taken from `grids`
    PipelineKind pipeline = PipelineKind::both;
    std::vector<std::pair<int, int>> grids{{64, 64}};
    Tolerances tol;
    double lp_epsilon = 0.1;
    std::set<std::string> checks;  // empty means all
    std::string out_dir = "out";

    bool wants(const std::string& check) const { return checks.empty() || checks.count(check) > 0; }
};

/// "NxM" -> (N, M). Raises ConfigError on anything else.
std::pair<int, int> parse_grid(std::string_view text);

/// INI-style "key = value" text; ';' starts a comment. Unknown keys are
/// rejected so that typos do not silently fall back to defaults.
PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config(const std::string& path);

/// Canonical "key = value" lines of the effective configuration, in a
/// fixed order. This is what the provenance hash covers.
std::string canonical_text(const PipelineConfig& config);

/// Hex SHA-256 of a string.
std::string sha256_hex(const std::string& data);

/// Rejects empty grid lists, non-positive tolerances and unknown checks.
void validate(const PipelineConfig& config);

}  // namespace fanolab
