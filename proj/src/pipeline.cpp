#include "fanolab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>

#include "fanolab/basespace.hpp"
#include "fanolab/cohomology.hpp"
#include "fanolab/errors.hpp"
#include "fanolab/fiberwise.hpp"
#include "fanolab/wpform.hpp"

#ifndef FANOLAB_VERSION
#define FANOLAB_VERSION "unknown"
#endif

namespace fanolab {

const char* to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::residual: return "residual";
        case MetricKind::quadrature: return "quadrature";
        case MetricKind::solver: return "solver";
        case MetricKind::exact: return "exact";
        case MetricKind::positive: return "positive";
        case MetricKind::info: return "info";
    }
    return "unknown";
}

std::optional<double> observed_order(double coarse, double fine, std::pair<int, int> grid_coarse,
                                     std::pair<int, int> grid_fine) {
    if (!(coarse > 0.0) || !(fine > 0.0) || !std::isfinite(coarse) || !std::isfinite(fine)) {
        return std::nullopt;
    }
    const double hc = 1.0 / std::sqrt(double(grid_coarse.first) * double(grid_coarse.second));
    const double hf = 1.0 / std::sqrt(double(grid_fine.first) * double(grid_fine.second));
    if (hc == hf) return std::nullopt;
    return std::log(coarse / fine) / std::log(hc / hf);
}

namespace {

class Recorder {
public:
    Recorder(std::vector<CheckRecord>& checks, std::size_t n_grids)
        : checks_(checks), n_grids_(n_grids) {}

    void set_grid(std::size_t g) { grid_ = g; }

    void put(const std::string& check, const std::string& pipeline, const std::string& metric,
             MetricKind kind, double value) {
        CheckRecord& rec = record(check, pipeline);
        auto it = std::find_if(rec.metrics.begin(), rec.metrics.end(),
                               [&](const Metric& m) { return m.name == metric; });
        if (it == rec.metrics.end()) {
            Metric m;
            m.name = metric;
            m.kind = kind;
            m.values.assign(n_grids_, std::numeric_limits<double>::quiet_NaN());
            rec.metrics.push_back(std::move(m));
            it = rec.metrics.end() - 1;
        }
        it->values[grid_] = value;
    }

private:
    CheckRecord& record(const std::string& check, const std::string& pipeline) {
        for (auto& r : checks_) {
            if (r.name == check && r.pipeline == pipeline) return r;
        }
        checks_.push_back(CheckRecord{check, pipeline, {}, true});
        return checks_.back();
    }

    std::vector<CheckRecord>& checks_;
    std::size_t n_grids_;
    std::size_t grid_ = 0;
};

double sup_diff(const RadialField& a, const RadialField& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

// Runs one grid. `stage` is kept up to date so that a failure can be located.
void run_grid(const PipelineConfig& cfg, const DerivedConstants& k, std::size_t g, Recorder& rec,
              std::vector<Profile>& profiles, std::string& stage) {
    ModelSpec spec = cfg.model;
    spec.n_fiber = cfg.grids[g].first;
    spec.n_base = cfg.grids[g].second;

    stage = "build_reference";
    const ReferenceGeometry ref = build_reference(spec, k);
    const Grid& grid = ref.grid;

    NewtonOptions newton;
    newton.tol = cfg.tol.newton_tol;
    FiberOptions fiber_opts;
    fiber_opts.newton = newton;

    std::vector<FiberKind> kinds;
    if (cfg.pipeline != PipelineKind::ske) kinds.push_back(FiberKind::spr);
    if (cfg.pipeline != PipelineKind::spr) kinds.push_back(FiberKind::ske);

    const bool need_base = cfg.wants("base_ma") || cfg.wants("twisted_ke") ||
                           cfg.wants("volume_identities");
    const bool need_gprime = need_base || cfg.wants("gprime") || cfg.wants("wpl_fs");

    RadialField theta_alt(AxisKind::base, grid.nb());
    for (std::size_t j = 0; j < grid.nb(); ++j) theta_alt[j] = 1.0 + grid.base().fs(j);

    for (FiberKind kind : kinds) {
        const std::string p = to_string(kind);
        const bool ske = kind == FiberKind::ske;

        stage = "fiber_" + p;
        const FiberFamilySolution fiber = ske ? solve_ske(ref, fiber_opts) : solve_spr(ref, fiber_opts);

        stage = "sections_" + p;
        const SectionVolumeFamily family = volume_family_from_sections(
            ref, default_sections(k, ske ? WeightKind::hSKE : WeightKind::hL), ske ? &fiber : nullptr);

        if (cfg.wants("fiber")) {
            stage = "check_fiber_" + p;
            const ReferenceChecks rc = verify_reference(ref);
            const FiberReport fr = verify_fiber_family(fiber, ref);
            rec.put("fiber", p, "reference_hL_curvature", MetricKind::residual, rc.hL_curvature_defect);
            rec.put("fiber", p, "reference_ricci_omega", MetricKind::residual, rc.ricci_omega_defect);
            rec.put("fiber", p, "reference_normalization", MetricKind::quadrature, rc.normalization_defect);
            rec.put("fiber", p, "reference_positivity", MetricKind::positive, rc.positivity_margin);
            rec.put("fiber", p, "fiber_equation_residual", MetricKind::residual, fr.residual_sup);
            rec.put("fiber", p, "fiber_volume_defect", MetricKind::quadrature, fr.volume_defect);
            rec.put("fiber", p, "vertical_consistency", MetricKind::residual, fr.vertical_consistency);
            if (ske) {
                rec.put("fiber", p, "hske_curvature_defect", MetricKind::residual, fr.hske_curvature_defect);
            }
            rec.put("fiber", p, "vertical_positivity", MetricKind::positive, fr.positivity_margin);
            rec.put("fiber", p, "exp_weight_l2", MetricKind::info, fr.exp_weight_l2);
            rec.put("fiber", p, "base_derivative_sup", MetricKind::info, fr.base_derivative_sup);
            rec.put("fiber", p, "section_family_ricci_defect", MetricKind::residual,
                    section_family_ricci_defect(ref, family, ske ? &fiber : nullptr));
        }

        stage = "wp_" + p;
        const WPResult wp_s = wp_from_sections(grid, family);
        const WPResult wp_r = wp_from_residual(ref, fiber, ref.eta, &family);

        if (cfg.wants("wp_routes")) {
            stage = "check_wp_routes_" + p;
            const WPResult wp_alt = wp_from_residual(ref, fiber, theta_alt);
            rec.put("wp_routes", p, "route_difference", MetricKind::residual, sup_diff(wp_s.wp_base, wp_r.wp_base));
            rec.put("wp_routes", p, "verticality_defect", MetricKind::residual, wp_r.verticality_defect);
            rec.put("wp_routes", p, "curvature_identity_defect", MetricKind::residual,
                    wp_curvature_defect(grid, wp_s));
            rec.put("wp_routes", p, "theta_swap_difference", MetricKind::residual,
                    sup_diff(wp_r.wp_base, wp_alt.wp_base));
            rec.put("wp_routes", p, "wp_min_coefficient", MetricKind::info, wp_s.min_coefficient);
            rec.put("wp_routes", p, "wp_max_coefficient", MetricKind::info,
                    *std::max_element(wp_s.wp_base.values.begin(), wp_s.wp_base.values.end()));
        }

        if (!need_gprime) continue;
        stage = "gprime_" + p;
        const GprimeReport gp = compute_gprime(ref, fiber, cfg.lp_epsilon);

        if (cfg.wants("gprime")) {
            stage = "check_gprime_" + p;
            const DescentReport dr = check_g_descends(ref, fiber, gp);
            // Omega' is not normalized, so the normalization of G' only holds for SPR.
            rec.put("gprime", p, "normalization_defect", ske ? MetricKind::info : MetricKind::quadrature,
                    gp.normalization_defect);
            rec.put("gprime", p, "pushforward_adjoint_defect", MetricKind::quadrature,
                    pushforward_adjoint_defect(grid, gp.volume));
            rec.put("gprime", p, "delta_lower", MetricKind::positive, gp.delta_lower);
            for (const auto& [pp, norm] : gp.lp_norms) {
                char name[32];
                std::snprintf(name, sizeof name, "lp_norm_p%.2f", pp);
                rec.put("gprime", p, name, MetricKind::info, norm);
            }
            rec.put("gprime", p, "vertical_constancy", MetricKind::residual, dr.vertical_constancy);
            rec.put("gprime", p, "pullback_defect", MetricKind::residual, dr.pullback_defect);
        }

        Profile prof;
        prof.pipeline = p;
        prof.n_fiber = spec.n_fiber;
        prof.n_base = spec.n_base;
        prof.columns = {"x_b", "gprime", "wp_sections", "wp_residual"};
        prof.data = {grid.base().nodes(), gp.gprime.values, wp_s.wp_base.values, wp_r.wp_base.values};

        if (cfg.wants("wpl_fs") && !ske) {
            stage = "check_wpl_fs_" + p;
            const BaseResidual ws = wpl_fs_residual(grid, gp.pushforward, wp_s, k);
            const BaseResidual wr = wpl_fs_residual(grid, gp.pushforward, wp_r, k);
            rec.put("wpl_fs", p, "residual_sections_route", MetricKind::residual, ws.relative);
            rec.put("wpl_fs", p, "residual_residual_route", MetricKind::residual, wr.relative);
            prof.columns.push_back("wpl_fs_residual");
            prof.data.push_back(wr.profile.values);
        }

        if (need_base) {
            for (BaseVariant variant : {BaseVariant::B, BaseVariant::Bprime}) {
                const std::string v = to_string(variant);
                stage = "base_ma_" + p + "_" + v;
                const BaseMetricSolution base = solve_base_ma(grid, gp.gprime, variant, kind, k, newton);
                prof.columns.push_back("rho_" + v);
                prof.data.push_back(base.rho.values);
                prof.columns.push_back("omega_" + v);
                prof.data.push_back(base.omega.values);

                if (cfg.wants("base_ma")) {
                    stage = "check_base_ma_" + p + "_" + v;
                    rec.put("base_ma", p, v + "_discrete_residual", MetricKind::solver, base.discrete_residual);
                    rec.put("base_ma", p, v + "_pointwise_residual", MetricKind::residual, base.pointwise_residual);
                    rec.put("base_ma", p, v + "_integrated_defect", MetricKind::quadrature, base.integrated_defect);
                    rec.put("base_ma", p, v + "_positivity_margin", MetricKind::positive, base.positivity_margin);
                    rec.put("base_ma", p, v + "_min_zeroth_order", MetricKind::positive, base.min_zeroth_order);
                    rec.put("base_ma", p, v + "_newton_iterations", MetricKind::info,
                            static_cast<double>(base.trace.size() - 1));
                    rec.put("base_ma", p, v + "_uniqueness_spread", MetricKind::solver,
                            base_uniqueness_spread(grid, gp.gprime, variant, kind, k, newton));
                }
                if (cfg.wants("twisted_ke")) {
                    stage = "check_twisted_ke_" + p + "_" + v;
                    const BaseResidual ts = twisted_ke_residual(grid, base, wp_s, k);
                    const BaseResidual tr = twisted_ke_residual(grid, base, wp_r, k);
                    rec.put("twisted_ke", p, v + "_residual_sections_route", MetricKind::residual, ts.relative);
                    rec.put("twisted_ke", p, v + "_residual_residual_route", MetricKind::residual, tr.relative);
                    rec.put("twisted_ke", p, v + "_route_consistency", MetricKind::residual,
                            sup_diff(ts.profile, tr.profile));
                    prof.columns.push_back("twisted_ke_" + v);
                    prof.data.push_back(ts.profile.values);
                }
                if (cfg.wants("volume_identities")) {
                    const int which = (ske ? 3 : 1) + (variant == BaseVariant::B ? 0 : 1);
                    const std::string w = "identity_" + std::to_string(which);
                    stage = "check_volume_" + w;
                    const VolumeIdentityReport vr = volume_identity_residual(which, ref, fiber, base);
                    rec.put("volume_identities", p, w + "_residual", MetricKind::residual, vr.residual_sup);
                    rec.put("volume_identities", p, w + "_gap_joint", MetricKind::info, vr.gap_joint);
                    rec.put("volume_identities", p, w + "_gap_fiber", MetricKind::info, vr.gap_fiber);
                    rec.put("volume_identities", p, w + "_gap_base", MetricKind::info, vr.gap_base);
                }
            }
        }
        profiles.push_back(std::move(prof));

        if (cfg.wants("cohomology")) {
            stage = "check_cohomology_" + p;
            const IdentityCheck bs = check_base_identity(grid, wp_s, k);
            const IdentityCheck br = check_base_identity(grid, wp_r, k);
            const TotalIdentityCheck ts = check_total_identity(grid, wp_s, cfg.model, k);
            rec.put("cohomology", p, "base_identity_sections_route", MetricKind::residual, bs.relative_defect);
            rec.put("cohomology", p, "base_identity_residual_route", MetricKind::residual, br.relative_defect);
            rec.put("cohomology", p, "total_identity_base_pairing", MetricKind::residual,
                    ts.base.relative_defect);
            rec.put("cohomology", p, "total_identity_fiber_pairing", MetricKind::exact,
                    ts.fiber_exact ? 0.0 : 1.0);
            rec.put("cohomology", p, "wp_class_route_difference", MetricKind::quadrature,
                    std::abs(integrate_wp(grid, wp_s) - integrate_wp(grid, wp_r)) /
                        std::abs(integrate_wp(grid, wp_s)));
            const auto at_T = kahler_class_exact(k.exp_minus_T, cfg.model, k);
            const CohomClass eta_class = pulled_eta_class(k);
            rec.put("cohomology", p, "class_at_T_is_eta", MetricKind::exact,
                    (at_T.first == eta_class.base && at_T.second == eta_class.fiber) ? 0.0 : 1.0);
        }
    }
}

}  // namespace

void judge(Report& report) {
    const Tolerances& t = report.config.tol;
    const auto& grids = report.config.grids;
    bool all = !report.error.has_value();
    for (CheckRecord& rec : report.checks) {
        rec.pass = true;
        for (Metric& m : rec.metrics) {
            m.orders.clear();
            for (std::size_t g = 0; g + 1 < m.values.size(); ++g) {
                m.orders.push_back(observed_order(m.values[g], m.values[g + 1], grids[g], grids[g + 1]));
            }
            bool ok = true;
            auto every = [&](auto pred) {
                for (double v : m.values) ok = ok && pred(v);
            };
            switch (m.kind) {
                case MetricKind::residual: {
                    const double finest = m.values.back();
                    ok = finest <= t.residual_tol;
                    for (std::size_t g = 0; g + 1 < m.values.size(); ++g) {
                        const bool at_floor = m.values[g + 1] <= t.order_floor;
                        const bool converging = m.orders[g].has_value() && *m.orders[g] >= t.order_min;
                        ok = ok && (at_floor || converging);
                    }
                    break;
                }
                case MetricKind::quadrature: every([&](double v) { return v <= t.quadrature_tol; }); break;
                case MetricKind::solver: every([&](double v) { return v <= 10.0 * t.newton_tol; }); break;
                case MetricKind::exact: every([](double v) { return v == 0.0; }); break;
                case MetricKind::positive: every([](double v) { return v > 0.0; }); break;
                case MetricKind::info: every([](double v) { return !std::isnan(v); }); break;
            }
            m.pass = ok;
            rec.pass = rec.pass && ok;
        }
        all = all && rec.pass;
    }
    report.pass = all;
}

Report run_pipeline(const PipelineConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.config = config;
    report.config_hash = sha256_hex(canonical_text(config));
    report.code_version = FANOLAB_VERSION;

    std::string stage = "validate_config";
    try {
        validate(config);
        stage = "derive_constants";
        report.constants = derive_constants(config.model);
        Recorder rec(report.checks, config.grids.size());
        for (std::size_t g = 0; g < config.grids.size(); ++g) {
            rec.set_grid(g);
            run_grid(config, *report.constants, g, rec, report.profiles, stage);
        }
    } catch (const Error& e) {
        report.error = StageError{stage, e.kind(), e.what()};
    } catch (const std::exception& e) {
        report.error = StageError{stage, "std::exception", e.what()};
    }
    judge(report);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace fanolab
