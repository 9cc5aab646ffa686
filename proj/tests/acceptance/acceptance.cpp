// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fanolab/basespace.hpp"
#include "fanolab/cohomology.hpp"
#include "fanolab/errors.hpp"
#include "fanolab/pipeline.hpp"
#include "fanolab/report.hpp"

using namespace fanolab;

namespace {

const std::vector<std::pair<int, int>> refinement{{64, 64}, {128, 128}, {256, 256}};

PipelineConfig config(double eps, WarpShape shape = WarpShape::product, int a = 2, int c = 1) {
    PipelineConfig cfg;
    cfg.model.a = Rational(a);
    cfg.model.c = Rational(c);
    cfg.model.warp_amplitude = eps;
    cfg.model.warp_shape = shape;
    cfg.grids = refinement;
    return cfg;
}

// Collects failure messages for one criterion.
struct Verdict {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const Metric& metric(const Report& r, const std::string& check, const std::string& pipeline,
                     const std::string& name) {
    for (const auto& c : r.checks) {
        if (c.name != check || c.pipeline != pipeline) continue;
        for (const auto& m : c.metrics) {
            if (m.name == name) return m;
        }
    }
    throw Error("metric not found: " + check + "/" + pipeline + "/" + name);
}

// Finest value <= tol (if tol > 0), and every observed order >= order_min
// unless the finer residual is already at the rounding floor.
void converges(Verdict& v, const Report& r, const std::string& check, const std::string& pipeline,
               const std::string& name, double tol) {
    const Metric& m = metric(r, check, pipeline, name);
    const Tolerances& t = r.config.tol;
    std::string orders;
    bool ok = tol <= 0.0 || m.values.back() <= tol;
    for (std::size_t g = 0; g < m.orders.size(); ++g) {
        const bool floor = m.values[g + 1] <= t.order_floor;
        const bool order = m.orders[g] && *m.orders[g] >= t.order_min;
        ok = ok && (floor || order);
        orders += (g ? "," : "") + (m.orders[g] ? sci(*m.orders[g]) : std::string("-"));
    }
    const std::string label = check + "/" + pipeline + "/" + name;
    v.require(ok, label + " finest " + sci(m.values.back()) + " orders " + orders);
    v.note(label + " " + sci(m.values.back()) + " [" + orders + "]");
}

void at_most(Verdict& v, const Report& r, const std::string& check, const std::string& pipeline,
             const std::string& name, double tol) {
    const Metric& m = metric(r, check, pipeline, name);
    double worst = 0.0;
    for (double x : m.values) worst = std::max(worst, std::isnan(x) ? INFINITY : std::abs(x));
    v.require(worst <= tol, check + "/" + pipeline + "/" + name + " = " + sci(worst) + " > " + sci(tol));
}

int failures = 0;

void report_line(int n, const std::string& title, const std::function<void(Verdict&)>& body) {
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = v.failures.empty();
    failures += ok ? 0 : 1;
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, title.c_str());
    for (const auto& f : v.failures) std::printf("       failed: %s\n", f.c_str());
    for (const auto& s : v.notes) std::printf("       %s\n", s.c_str());
    std::fflush(stdout);
}

double sup_diff(const RadialField& a, const RadialField& b) {
    double w = 0;
    for (std::size_t j = 0; j < a.size(); ++j) w = std::max(w, std::abs(a[j] - b[j]));
    return w;
}

ReferenceGeometry reference(double eps, int n, WarpShape shape) {
    ModelSpec s;
    s.warp_amplitude = eps;
    s.warp_shape = shape;
    s.n_fiber = n;
    s.n_base = n;
    return build_reference(s, derive_constants(s));
}

const std::vector<std::string> pipelines{"spr", "ske"};

}  // namespace

int main() {
    const Report model_a = run_pipeline(config(0.0));
    const Report model_b = run_pipeline(config(0.2));
    const Report model_b_skew = run_pipeline(config(0.2, WarpShape::skew));
    const std::vector<const Report*> warped{&model_b, &model_b_skew};
    auto label = [](const Report* r) { return to_string(r->config.model.warp_shape); };

    report_line(1, "derived constants are exact rationals", [](Verdict& v) {
        ModelSpec s;
        DerivedConstants k = derive_constants(s);
        v.require(k.exp_minus_T == Rational(2, 3) && k.lambda == Rational(2) && k.kappa == Rational(2, 3) &&
                      k.k == 3 && k.kprime == 1 && k.alpha == 2 && k.beta == 1,
                  "(2,1) constants");
        s.a = Rational(3);
        s.c = Rational(2);
        k = derive_constants(s);
        v.require(k.exp_minus_T == Rational(1, 2) && k.lambda == Rational(1) && k.kappa == Rational(1, 2) &&
                      k.k == 2 && k.kprime == 1 && k.alpha == 1 && k.beta == 1,
                  "(3,2) constants");
        s.a = Rational(1);
        s.c = Rational(1);
        bool threw = false;
        try {
            derive_constants(s);
        } catch (const ModelOrientationError&) {
            threw = true;
        }
        v.require(threw, "(1,1) must raise ModelOrientationError");
    });

    report_line(2, "closed-form omega_WP on model A, route agreement on model B", [&](Verdict& v) {
        for (auto [a, c] : {std::pair{2, 1}, {3, 2}}) {
            ModelSpec s;
            s.a = Rational(a);
            s.c = Rational(c);
            s.n_fiber = s.n_base = 256;
            const DerivedConstants k = derive_constants(s);
            const ReferenceGeometry ref = build_reference(s, k);
            const double expected = to_double(k.lambda * s.a);
            const FiberFamilySolution spr = solve_spr(ref);
            const FiberFamilySolution ske = solve_ske(ref);
            const SectionVolumeFamily fam = volume_family_from_sections(ref, default_sections(k));
            const SectionVolumeFamily fam_ske =
                volume_family_from_sections(ref, default_sections(k, WeightKind::hSKE), &ske);
            double worst = 0.0;
            for (const WPResult& wp : {wp_from_sections(ref.grid, fam), wp_from_residual(ref, spr, ref.eta),
                                       wp_from_sections(ref.grid, fam_ske), wp_from_residual(ref, ske, ref.eta)}) {
                for (double x : wp.wp_base.values) worst = std::max(worst, std::abs(x - expected) / expected);
            }
            v.require(worst <= 1e-6, "(" + std::to_string(a) + "," + std::to_string(c) + ") relative error " + sci(worst));
            v.note("model A (" + std::to_string(a) + "," + std::to_string(c) + ") N=256: sup rel error " + sci(worst));
        }
        for (const Report* r : warped) {
            v.note("model B " + label(r) + ":");
            converges(v, *r, "wp_routes", "spr", "route_difference", 0.0);
        }
    });

    report_line(3, "twisted Kahler-Einstein residuals", [&](Verdict& v) {
        for (const auto& p : pipelines) {
            for (const std::string base : {"B", "Bprime"}) {
                for (const std::string route : {"sections", "residual"}) {
                    const std::string name = base + "_residual_" + route + "_route";
                    at_most(v, model_a, "twisted_ke", p, name, 1e-8);
                    for (const Report* r : warped) converges(v, *r, "twisted_ke", p, name, 1e-3);
                }
            }
        }
    });

    report_line(4, "push-forward residual -Ric f_*Omega + omega_WP = (lambda+1) eta", [&](Verdict& v) {
        for (const std::string route : {"sections", "residual"}) {
            const std::string name = "residual_" + route + "_route";
            at_most(v, model_a, "wpl_fs", "spr", name, 1e-8);
            for (const Report* r : warped) converges(v, *r, "wpl_fs", "spr", name, 1e-3);
        }
    });

    report_line(5, "G = f^*G' (vertical constancy and pullback defect)", [&](Verdict& v) {
        for (const auto& p : pipelines) {
            for (const std::string name : {"vertical_constancy", "pullback_defect"}) {
                at_most(v, model_a, "gprime", p, name, 1e-10);
                for (const Report* r : warped) converges(v, *r, "gprime", p, name, 0.0);
            }
        }
    });

    report_line(6, "cohomology identities", [&](Verdict& v) {
        for (const auto& p : pipelines) {
            for (const std::string name :
                 {"base_identity_sections_route", "base_identity_residual_route", "total_identity_base_pairing"}) {
                at_most(v, model_a, "cohomology", p, name, 1e-8);
                for (const Report* r : warped) {
                    const Metric& m = metric(*r, "cohomology", p, name);
                    v.require(m.values.back() <= 1e-3, label(r) + " " + p + "/" + name + " = " + sci(m.values.back()));
                    v.note(label(r) + " " + p + "/" + name + " N=256: " + sci(m.values.back()));
                }
            }
            for (const Report* r : {&model_a, &model_b, &model_b_skew}) {
                at_most(v, *r, "cohomology", p, "total_identity_fiber_pairing", 0.0);
                at_most(v, *r, "cohomology", p, "class_at_T_is_eta", 0.0);
            }
        }
        ModelSpec s;
        const DerivedConstants k = derive_constants(s);
        v.require(k.lambda * s.c == Rational(2), "lambda c = 2");
    });

    report_line(7, "volume-form identities 1-4", [&](Verdict& v) {
        for (int which = 1; which <= 4; ++which) {
            const std::string p = which <= 2 ? "spr" : "ske";
            const std::string w = "identity_" + std::to_string(which);
            at_most(v, model_a, "volume_identities", p, w + "_residual", 1e-8);
            for (const std::string gap : {"_gap_joint", "_gap_fiber", "_gap_base"}) {
                at_most(v, model_a, "volume_identities", p, w + gap, 0.0);
            }
            for (const Report* r : warped) converges(v, *r, "volume_identities", p, w + "_residual", 0.0);
        }
    });

    report_line(8, "semi Kahler-Einstein pipeline", [&](Verdict& v) {
        // Model A: rho_SKE = 0 and every SKE profile equals its SPR twin.
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < model_a.profiles.size(); i += 2) {
            const Profile& spr = model_a.profiles[i];
            const Profile& ske = model_a.profiles[i + 1];
            v.require(spr.pipeline == "spr" && ske.pipeline == "ske" && spr.columns.size() >= ske.columns.size(),
                      "profile layout");
            for (std::size_t c = 0; c < ske.columns.size(); ++c) {
                for (std::size_t c2 = 0; c2 < spr.columns.size(); ++c2) {
                    if (spr.columns[c2] != ske.columns[c]) continue;
                    for (std::size_t j = 0; j < ske.data[c].size(); ++j) {
                        worst = std::max(worst, std::abs(ske.data[c][j] - spr.data[c2][j]));
                    }
                }
            }
        }
        v.require(worst <= 1e-10, "model A SKE vs SPR profiles differ by " + sci(worst));
        v.note("model A max |SKE - SPR| over profiles: " + sci(worst));
        const ReferenceGeometry ref = reference(0.0, 64, WarpShape::product);
        v.require(sup_norm(solve_ske(ref).rho) <= 1e-12, "model A rho_SKE = 0");
        for (const Report* r : warped) {
            v.note("model B " + label(r) + ":");
            converges(v, *r, "fiber", "ske", "fiber_equation_residual", 1e-3);
            converges(v, *r, "fiber", "ske", "hske_curvature_defect", 1e-3);
            converges(v, *r, "wp_routes", "ske", "route_difference", 0.0);
            for (const std::string name : {"B_residual_sections_route", "Bprime_residual_sections_route"}) {
                converges(v, *r, "twisted_ke", "ske", name, 1e-3);
            }
        }
    });

    report_line(9, "gauge and invariance suite, Newton uniqueness", [&](Verdict& v) {
        // The bar is applied at N = 64. On finer grids a constant shift of a
        // logarithm is only reproduced to rounding, and second differences
        // amplify that by ~ 1/h^2; those values are reported with the floor.
        for (int n : {64, 128, 256}) {
            const ReferenceGeometry ref = reference(0.2, n, WarpShape::skew);
            const DerivedConstants& k = ref.consts;
            const FiberFamilySolution spr = solve_spr(ref);
            const SectionFamilySpec spec = default_sections(k);
            const WPResult wp0 = wp_from_sections(ref.grid, volume_family_from_sections(ref, spec));

            SectionFamilySpec scaled = spec;
            scaled.scale = 5.0;
            scaled.base_power = 2;
            const double d_sections =
                sup_diff(wp0.wp_base, wp_from_sections(ref.grid, volume_family_from_sections(ref, scaled)).wp_base);

            ReferenceGeometry shifted_ref = ref;
            for (double& x : shifted_ref.hL_weight.smooth.data()) x += 1.25;
            const double d_hl = sup_diff(
                wp0.wp_base, wp_from_sections(ref.grid, volume_family_from_sections(shifted_ref, spec)).wp_base);

            FiberFamilySolution shifted = spr;
            for (std::size_t j = 0; j < ref.grid.nb(); ++j) {
                for (std::size_t i = 0; i < ref.grid.nf(); ++i) shifted.rho(i, j) += std::cos(2.0 * ref.grid.base().x(j));
            }
            const GprimeReport gp = compute_gprime(ref, spr);
            const double d_rho = std::max(
                sup_diff(wp_from_residual(ref, spr, ref.eta).wp_base, wp_from_residual(ref, shifted, ref.eta).wp_base),
                sup_norm(check_g_descends(ref, spr, gp).g -
                         check_g_descends(ref, shifted, compute_gprime(ref, shifted)).g));

            RadialField scaled_push = gp.pushforward;
            for (double& x : scaled_push.values) x *= 3.5;
            const double d_omega = sup_diff(wpl_fs_residual(ref.grid, gp.pushforward, wp0, k).profile,
                                            wpl_fs_residual(ref.grid, scaled_push, wp0, k).profile);

            RadialField theta(AxisKind::base, ref.grid.nb());
            for (std::size_t j = 0; j < ref.grid.nb(); ++j) theta[j] = 1.0 + ref.grid.base().fs(j);
            const double d_theta =
                sup_diff(wp_from_residual(ref, spr, ref.eta).wp_base, wp_from_residual(ref, spr, theta).wp_base);

            // eps |log density| max(x(1-x)) 4 / h^2 with |log density| ~ 4.
            const double h = ref.grid.base().h();
            const double floor = 2.2e-16 * 4.0 * 0.25 * 4.0 / (h * h);
            std::string line = "N=" + std::to_string(n) + ":";
            for (auto [name, d] : {std::pair{"sections", d_sections}, {"h_L shift", d_hl},
                                   {"rho_SPR shift", d_rho}, {"Omega rescale", d_omega}, {"theta swap", d_theta}}) {
                if (n == 64) v.require(d <= 1e-12, std::string(name) + " changed output by " + sci(d));
                else v.require(d <= floor, std::string(name) + " above the rounding floor at N=" + std::to_string(n));
                line += std::string(" ") + name + " " + sci(d) + ";";
            }
            v.note(line + (n == 64 ? " bar 1e-12" : " rounding floor " + sci(floor)));
        }
        const double solver_tol = 10.0 * NewtonOptions{}.tol;
        for (const Report* r : warped) {
            for (const auto& p : pipelines) {
                for (const std::string base : {"B", "Bprime"}) {
                    at_most(v, *r, "base_ma", p, base + "_uniqueness_spread", solver_tol);
                }
            }
        }
        v.note("uniqueness spread <= " + sci(solver_tol) + " on every grid, both warps, both pipelines");
    });

    report_line(10, "byte-identical reports for repeated runs", [&](Verdict& v) {
        namespace fs = std::filesystem;
        const fs::path root = fs::temp_directory_path() / "fanolab_acceptance";
        fs::remove_all(root);
        const PipelineConfig cfg = config(0.2, WarpShape::skew);
        const auto first = emit_report(run_pipeline(cfg), (root / "a").string());
        const auto second = emit_report(run_pipeline(cfg), (root / "b").string());
        v.require(first.size() == second.size(), "different file sets");
        auto slurp = [](const std::string& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            return s.str();
        };
        for (std::size_t i = 0; i < first.size() && i < second.size(); ++i) {
            v.require(slurp(first[i]) == slurp(second[i]), "differs: " + fs::path(first[i]).filename().string());
        }
        v.note(std::to_string(first.size()) + " files compared");
        fs::remove_all(root);
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
