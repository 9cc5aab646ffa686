// Command-line front end: run, constants, refine, check.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fanolab/config.hpp"
#include "fanolab/errors.hpp"
#include "fanolab/pipeline.hpp"
#include "fanolab/report.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> grids;
    std::string out;
    std::optional<double> tol;
    std::string pipeline;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key = value configuration file");
    cmd->add_option("--grid", f.grids, "grid NxM (interval counts); repeat for a refinement list")
        ->take_all();
    cmd->add_option("--out", f.out, "output directory for report.json and CSV profiles");
    cmd->add_option("--tol", f.tol, "residual tolerance at the finest grid");
    cmd->add_option("--pipeline", f.pipeline, "spr, ske or both")
        ->check(CLI::IsMember({"spr", "ske", "both"}));
}

fanolab::PipelineConfig effective_config(const CommonFlags& f) {
    fanolab::PipelineConfig cfg;
    if (!f.config_path.empty()) cfg = fanolab::load_config(f.config_path);
    if (!f.grids.empty()) {
        cfg.grids.clear();
        for (const auto& g : f.grids) cfg.grids.push_back(fanolab::parse_grid(g));
    }
    if (!f.out.empty()) cfg.out_dir = f.out;
    if (f.tol) cfg.tol.residual_tol = *f.tol;
    if (!f.pipeline.empty()) cfg.pipeline = fanolab::parse_pipeline(f.pipeline);
    fanolab::validate(cfg);
    return cfg;
}

int execute(const fanolab::PipelineConfig& cfg) {
    const fanolab::Report report = fanolab::run_pipeline(cfg);
    std::cout << fanolab::summary_text(report);
    for (const auto& path : fanolab::emit_report(report, cfg.out_dir)) {
        std::cout << "wrote " << path << "\n";
    }
    std::cout << "wall time " << report.wall_seconds << " s\n";
    if (report.error) return 2;
    return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical lab for Fano fibrations P^1 x P^1 -> P^1"};
    app.require_subcommand(1);

    CommonFlags run_flags, refine_flags, check_flags, constants_flags;
    auto* run = app.add_subcommand("run", "full pipeline on the configured grids");
    add_common(run, run_flags);
    auto* refine = app.add_subcommand("refine", "convergence study (default grids 64, 128, 256)");
    add_common(refine, refine_flags);
    auto* check = app.add_subcommand("check", "a single named check");
    add_common(check, check_flags);
    std::string check_name;
    check->add_option("name", check_name, "check name")
        ->required()
        ->check(CLI::IsMember(fanolab::all_check_names()));
    auto* constants = app.add_subcommand("constants", "print the exact derived constants");
    constants->add_option("--config", constants_flags.config_path, "key = value configuration file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*constants) {
            fanolab::PipelineConfig cfg;
            if (!constants_flags.config_path.empty()) cfg = fanolab::load_config(constants_flags.config_path);
            std::cout << fanolab::constants_json_text(fanolab::derive_constants(cfg.model));
            return 0;
        }
        if (*run) return execute(effective_config(run_flags));
        if (*refine) {
            fanolab::PipelineConfig cfg = effective_config(refine_flags);
            if (refine_flags.grids.empty()) cfg.grids = {{64, 64}, {128, 128}, {256, 256}};
            return execute(cfg);
        }
        if (*check) {
            fanolab::PipelineConfig cfg = effective_config(check_flags);
            cfg.checks = {check_name};
            return execute(cfg);
        }
    } catch (const fanolab::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    }
    return 0;
}
