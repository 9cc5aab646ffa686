#include "fanolab/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "fanolab/errors.hpp"

namespace fanolab {

std::string to_string(PipelineKind kind) {
    switch (kind) {
        case PipelineKind::spr: return "spr";
        case PipelineKind::ske: return "ske";
        case PipelineKind::both: return "both";
    }
    return "unknown";
}

PipelineKind parse_pipeline(std::string_view text) {
    if (text == "spr") return PipelineKind::spr;
    if (text == "ske") return PipelineKind::ske;
    if (text == "both") return PipelineKind::both;
    throw ConfigError("pipeline must be spr, ske or both (got '" + std::string(text) + "')");
}

const std::vector<std::string>& all_check_names() {
    static const std::vector<std::string> names{"fiber",  "wp_routes",  "gprime",
                                                "base_ma", "twisted_ke", "wpl_fs",
                                                "volume_identities", "cohomology"};
    return names;
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ConfigError("config key '" + key + "': not a number: '" + text + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(","));
    std::vector<std::string> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

}  // namespace

std::pair<int, int> parse_grid(std::string_view text) {
    const std::string t = boost::trim_copy(std::string(text));
    const auto x = t.find_first_of("xX");
    auto parse_int = [&](std::string_view s) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw ConfigError("grid must look like 64x64 (got '" + t + "')");
        }
        return v;
    };
    if (x == std::string::npos) throw ConfigError("grid must look like 64x64 (got '" + t + "')");
    return {parse_int(std::string_view(t).substr(0, x)), parse_int(std::string_view(t).substr(x + 1))};
}

PipelineConfig parse_config_text(const std::string& text) {
    boost::property_tree::ptree tree;
    try {
        std::istringstream in(text);
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    PipelineConfig cfg;
    bool have_grids = false;
    std::optional<int> n_fiber, n_base;
    for (const auto& [key, node] : tree) {
        if (!node.empty()) throw ConfigError("config: sections are not supported ('" + key + "')");
        const std::string value = boost::trim_copy(node.data());
        try {
            if (key == "a") {
                cfg.model.a = parse_rational(value);
            } else if (key == "c") {
                cfg.model.c = parse_rational(value);
            } else if (key == "warp_amplitude") {
                cfg.model.warp_amplitude = parse_double(key, value);
            } else if (key == "warp_shape") {
                cfg.model.warp_shape = parse_warp_shape(value);
            } else if (key == "pipeline") {
                cfg.pipeline = parse_pipeline(value);
            } else if (key == "grids") {
                cfg.grids.clear();
                for (const auto& g : split_list(value)) cfg.grids.push_back(parse_grid(g));
                have_grids = true;
            } else if (key == "n_fiber" || key == "n_base") {
                const double v = parse_double(key, value);
                if (v != static_cast<int>(v)) throw ConfigError("config key '" + key + "': not an integer");
                (key == "n_fiber" ? n_fiber : n_base) = static_cast<int>(v);
            } else if (key == "newton_tol") {
                cfg.tol.newton_tol = parse_double(key, value);
            } else if (key == "residual_tol") {
                cfg.tol.residual_tol = parse_double(key, value);
            } else if (key == "quadrature_tol") {
                cfg.tol.quadrature_tol = parse_double(key, value);
            } else if (key == "order_min") {
                cfg.tol.order_min = parse_double(key, value);
            } else if (key == "order_floor") {
                cfg.tol.order_floor = parse_double(key, value);
            } else if (key == "lp_epsilon") {
                cfg.lp_epsilon = parse_double(key, value);
            } else if (key == "checks") {
                cfg.checks.clear();
                for (const auto& c : split_list(value)) {
                    if (c != "all") cfg.checks.insert(c);
                }
            } else if (key == "out_dir") {
                cfg.out_dir = value;
            } else {
                throw ConfigError("config: unknown key '" + key + "'");
            }
        } catch (const InputError& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
    // n_fiber / n_base describe a single grid; grids is the refinement list.
    if (n_fiber || n_base) {
        if (have_grids) throw ConfigError("config: give either grids or n_fiber / n_base, not both");
        cfg.grids = {{n_fiber.value_or(64), n_base.value_or(64)}};
    }
    validate(cfg);
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate(const PipelineConfig& config) {
    if (config.grids.empty()) throw ConfigError("config: at least one grid is required");
    for (const auto& [nf, nb] : config.grids) {
        if (nf < 16 || nb < 16 || nf % 2 != 0 || nb % 2 != 0) {
            throw ConfigError("config: grid " + std::to_string(nf) + "x" + std::to_string(nb) +
                              " must have even interval counts >= 16");
        }
    }
    const Tolerances& t = config.tol;
    for (double v : {t.newton_tol, t.residual_tol, t.quadrature_tol, t.order_min, t.order_floor,
                     config.lp_epsilon}) {
        if (!(v > 0.0)) throw ConfigError("config: tolerances and lp_epsilon must be positive");
    }
    for (const auto& c : config.checks) {
        bool known = false;
        for (const auto& n : all_check_names()) known = known || n == c;
        if (!known) throw ConfigError("config: unknown check '" + c + "'");
    }
}

std::string canonical_text(const PipelineConfig& config) {
    std::ostringstream out;
    out << "a = " << to_string(config.model.a) << "\n";
    out << "c = " << to_string(config.model.c) << "\n";
    out << "warp_amplitude = " << format_double(config.model.warp_amplitude) << "\n";
    out << "warp_shape = " << to_string(config.model.warp_shape) << "\n";
    out << "pipeline = " << to_string(config.pipeline) << "\n";
    out << "grids = ";
    for (std::size_t i = 0; i < config.grids.size(); ++i) {
        out << (i ? ", " : "") << config.grids[i].first << "x" << config.grids[i].second;
    }
    out << "\n";
    out << "newton_tol = " << format_double(config.tol.newton_tol) << "\n";
    out << "residual_tol = " << format_double(config.tol.residual_tol) << "\n";
    out << "quadrature_tol = " << format_double(config.tol.quadrature_tol) << "\n";
    out << "order_min = " << format_double(config.tol.order_min) << "\n";
    out << "order_floor = " << format_double(config.tol.order_floor) << "\n";
    out << "lp_epsilon = " << format_double(config.lp_epsilon) << "\n";
    out << "checks = ";
    if (config.checks.empty()) {
        out << "all";
    } else {
        bool first = true;
        for (const auto& n : all_check_names()) {
            if (config.checks.count(n) == 0) continue;
            out << (first ? "" : ", ") << n;
            first = false;
        }
    }
    out << "\n";
    return out.str();
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

}  // namespace fanolab
