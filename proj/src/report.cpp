#include "fanolab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "fanolab/errors.hpp"

namespace fanolab {

using json = nlohmann::ordered_json;

std::string decimal(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string fraction(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string grid_label(const std::pair<int, int>& g) {
    return std::to_string(g.first) + "x" + std::to_string(g.second);
}

json constants_json(const DerivedConstants& k) {
    json j;
    j["exp_minus_T"] = fraction(k.exp_minus_T);
    j["T"] = decimal(k.T);
    j["lambda"] = fraction(k.lambda);
    j["kappa"] = fraction(k.kappa);
    j["k"] = fraction(Rational(k.k));
    j["kprime"] = fraction(Rational(k.kprime));
    j["alpha"] = fraction(Rational(k.alpha));
    j["beta"] = fraction(Rational(k.beta));
    j["d_base"] = fraction(k.d_base);
    j["d_fiber"] = fraction(k.d_fiber);
    j["pqr"] = {fraction(Rational(k.p)), fraction(Rational(k.q)), fraction(Rational(k.r))};
    return j;
}

json order_json(const std::optional<double>& o) {
    return o ? json(decimal(*o)) : json(nullptr);
}

// Governing order of a check between two grids: the smallest order among its
// residual metrics that are still above the rounding floor.
std::optional<double> check_order(const CheckRecord& rec, std::size_t pair, double floor) {
    std::optional<double> worst;
    for (const Metric& m : rec.metrics) {
        if (m.kind != MetricKind::residual || pair >= m.orders.size()) continue;
        if (!(m.values[pair + 1] > floor)) continue;
        if (!m.orders[pair]) continue;
        if (!worst || *m.orders[pair] < *worst) worst = m.orders[pair];
    }
    return worst;
}

}  // namespace

std::string report_json(const Report& report) {
    const PipelineConfig& cfg = report.config;
    json root;
    root["schema"] = "fanolab-report/1";

    json prov;
    prov["code_version"] = report.code_version;
    prov["config_hash"] = report.config_hash;
    prov["config"] = canonical_text(cfg);
    root["provenance"] = prov;

    json model;
    model["a"] = fraction(cfg.model.a);
    model["c"] = fraction(cfg.model.c);
    model["warp_amplitude"] = decimal(cfg.model.warp_amplitude);
    model["warp_shape"] = to_string(cfg.model.warp_shape);
    root["model"] = model;
    root["pipeline"] = to_string(cfg.pipeline);

    json grids = json::array();
    for (const auto& g : cfg.grids) grids.push_back(grid_label(g));
    root["grids"] = grids;

    json tol;
    tol["newton_tol"] = decimal(cfg.tol.newton_tol);
    tol["residual_tol"] = decimal(cfg.tol.residual_tol);
    tol["quadrature_tol"] = decimal(cfg.tol.quadrature_tol);
    tol["order_min"] = decimal(cfg.tol.order_min);
    tol["order_floor"] = decimal(cfg.tol.order_floor);
    root["tolerances"] = tol;

    root["constants"] = report.constants ? constants_json(*report.constants) : json(nullptr);

    json checks = json::array();
    for (const CheckRecord& rec : report.checks) {
        json c;
        c["name"] = rec.name;
        c["pipeline"] = rec.pipeline;
        c["pass"] = rec.pass;
        json metrics = json::array();
        for (const Metric& m : rec.metrics) {
            json mj;
            mj["name"] = m.name;
            mj["kind"] = to_string(m.kind);
            json values = json::array();
            for (double v : m.values) values.push_back(decimal(v));
            mj["values"] = values;
            json orders = json::array();
            for (const auto& o : m.orders) orders.push_back(order_json(o));
            mj["orders"] = orders;
            mj["pass"] = m.pass;
            metrics.push_back(mj);
        }
        c["metrics"] = metrics;
        checks.push_back(c);
    }
    root["checks"] = checks;

    if (cfg.grids.size() > 1) {
        json table = json::array();
        for (const CheckRecord& rec : report.checks) {
            json row;
            row["check"] = rec.name;
            row["pipeline"] = rec.pipeline;
            json orders = json::array();
            for (std::size_t g = 0; g + 1 < cfg.grids.size(); ++g) {
                orders.push_back(order_json(check_order(rec, g, cfg.tol.order_floor)));
            }
            row["orders"] = orders;
            table.push_back(row);
        }
        root["convergence_orders"] = table;
    }

    json profiles = json::array();
    for (const Profile& p : report.profiles) profiles.push_back(profile_file_name(p));
    root["profiles"] = profiles;

    if (report.error) {
        json e;
        e["stage"] = report.error->stage;
        e["kind"] = report.error->kind;
        e["message"] = report.error->message;
        root["error"] = e;
    } else {
        root["error"] = nullptr;
    }
    root["pass"] = report.pass;
    return root.dump(2) + "\n";
}

std::string constants_json_text(const DerivedConstants& consts) {
    return constants_json(consts).dump(2) + "\n";
}

std::string profile_file_name(const Profile& profile) {
    return "profile_" + profile.pipeline + "_" + std::to_string(profile.n_fiber) + "x" +
           std::to_string(profile.n_base) + ".csv";
}

std::string profile_csv(const Profile& profile) {
    std::ostringstream out;
    for (std::size_t c = 0; c < profile.columns.size(); ++c) {
        out << (c ? "," : "") << profile.columns[c];
    }
    out << "\n";
    const std::size_t rows = profile.data.empty() ? 0 : profile.data.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < profile.data.size(); ++c) {
            out << (c ? "," : "") << decimal(profile.data[c][r]);
        }
        out << "\n";
    }
    return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing", path.string());
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'", path.string());
}

}  // namespace

std::vector<std::string> emit_report(const Report& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + out_dir + "': " + ec.message(), out_dir);

    std::vector<std::string> written;
    const fs::path json_path = dir / "report.json";
    write_file(json_path, report_json(report));
    written.push_back(json_path.string());
    for (const Profile& p : report.profiles) {
        const fs::path path = dir / profile_file_name(p);
        write_file(path, profile_csv(p));
        written.push_back(path.string());
    }
    return written;
}

std::string summary_text(const Report& report) {
    std::ostringstream out;
    char line[256];
    for (const CheckRecord& rec : report.checks) {
        std::snprintf(line, sizeof line, "%-4s %-18s %-4s\n", rec.pass ? "PASS" : "FAIL",
                      rec.name.c_str(), rec.pipeline.c_str());
        out << line;
        for (const Metric& m : rec.metrics) {
            std::snprintf(line, sizeof line, "       %-4s %-36s %-10s %12.4e", m.pass ? "ok" : "FAIL",
                          m.name.c_str(), to_string(m.kind), m.values.empty() ? 0.0 : m.values.back());
            out << line;
            if (m.kind == MetricKind::residual && !m.orders.empty() && m.orders.back()) {
                std::snprintf(line, sizeof line, "  order %.2f", *m.orders.back());
                out << line;
            }
            out << "\n";
        }
    }
    if (report.error) {
        out << "ERROR at stage " << report.error->stage << ": " << report.error->kind << ": "
            << report.error->message << "\n";
    }
    out << (report.pass ? "overall: PASS" : "overall: FAIL") << "\n";
    return out.str();
}

}  // namespace fanolab
