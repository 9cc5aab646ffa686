#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fanolab/config.hpp"
#include "fanolab/model.hpp"

namespace fanolab {

/// How a metric is judged.
enum class MetricKind {
    residual,    // discretization error: <= residual_tol at the finest grid, and converging
    quadrature,  // enforced or integrated identity: <= quadrature_tol on every grid
    solver,      // solver-level quantity: <= 10 * newton_tol on every grid
    exact,       // exact rational identity: value 0 means it holds
    positive,    // must be > 0 on every grid
    info,        // reported only
};

const char* to_string(MetricKind kind);

struct Metric {
    std::string name;
    MetricKind kind = MetricKind::info;
    std::vector<double> values;                // one per grid
    std::vector<std::optional<double>> orders;  // one per consecutive pair of grids
    bool pass = true;
};

struct CheckRecord {
    std::string name;
    std::string pipeline;  // "spr" or "ske"
    std::vector<Metric> metrics;
    bool pass = true;
};

struct StageError {
    std::string stage;
    std::string kind;
    std::string message;
};

/// Base profiles on one grid, for plotting.
struct Profile {
    std::string pipeline;
    int n_fiber = 0;
    int n_base = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[column][node]
};

struct Report {
    PipelineConfig config;
    std::string config_hash;
    std::string code_version;
    std::optional<DerivedConstants> constants;
    std::vector<CheckRecord> checks;
    std::vector<Profile> profiles;
    std::optional<StageError> error;
    bool pass = false;
    double wall_seconds = 0.0;  // not written to files, which must be deterministic
};

/// Observed order between two grids: log(r_coarse / r_fine) / log(h_coarse / h_fine),
/// with h = 1 / sqrt(n_fiber n_base). Empty when either value is not positive.
std::optional<double> observed_order(double coarse, double fine, std::pair<int, int> grid_coarse,
                                     std::pair<int, int> grid_fine);

/// derive_constants -> build_reference -> fiber solves -> both wp routes ->
/// G' -> base Monge-Ampere (both variants) -> residual and identity checks,
/// on every grid of the configuration. Module errors are captured in
/// `error` with the failing stage; the report then has pass = false.
Report run_pipeline(const PipelineConfig& config);

/// Pass/fail of every metric from its values, under the given tolerances.
void judge(Report& report);

}  // namespace fanolab
