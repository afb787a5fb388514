#pragma once
//
// JSON study configuration. Unknown keys are rejected so that a misspelled
// option cannot silently fall back to its default.
//

#include "../errors.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace parasep::experiment {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct MuRange {
    double start = 1.0;
    double stop = 3.0;
    double step = 0.005;

    /// start + i * step for i = 0..round((stop - start) / step).
    std::vector<double> values() const {
        const double span = (stop - start) / step;
        const auto count = static_cast<std::size_t>(std::llround(span));
        if (std::abs(span - static_cast<double>(count)) > 1e-9 * std::max(1.0, span))
            throw ConfigError("mu_trial: (stop - start) is not a multiple of step");
        std::vector<double> out(count + 1);
        for (std::size_t i = 0; i <= count; ++i)
            out[i] = start + static_cast<double>(i) * step;
        out.back() = stop;
        return out;
    }
};

struct DzRule {
    enum class Kind { offset, absolute, dmax };
    Kind kind = Kind::offset;
    std::size_t value = 1;

    std::size_t resolve(std::size_t dg, std::size_t d_max) const {
        switch (kind) {
        case Kind::offset: return dg + value;
        case Kind::absolute: return value;
        case Kind::dmax: return d_max;
        }
        return d_max;
    }
};

struct Fem1DSettings {
    double a = -3.0;
    double b = 3.0;
    double h_x = 0.015;
    std::string kernel = "exp(mu*x)";
};

struct KernelSettings {
    std::size_t points = 200;
    double radius = 1.0;
    std::size_t r_grid = 2000;
    std::array<double, 3> source{0.0, 0.0, 0.5};
};

struct RbmSettings {
    std::size_t dg = 16;
    std::size_t n_max = 10;
    double tol = 0.0;
    double gram_tol = 1e-12;
    std::size_t train_stride = 1;
    std::size_t eval_stride = 1;
    std::vector<double> train;  // explicit train set; overrides train_stride
};

struct ExperimentConfig {
    std::string name = "study";
    std::string problem = "fem1d";
    Fem1DSettings fem1d;
    KernelSettings kernel;
    MuRange mu_trial;
    std::vector<std::size_t> dg{3, 6, 9, 12, 14, 16};
    DzRule dz;
    double eim_g_tol = 1e-12;  // relative to the first selected residual
    double eim_z_tol = 1e-12;
    std::size_t validation_stride = 10;
    std::filesystem::path output_dir = "out";
    std::string payload = "matrix";
    bool save_models = false;
    bool compare_dmax = false;
    bool oracle = false;
    RbmSettings rbm;
    std::size_t inject_extra_calls = 0;

    std::vector<double> validation_mu() const {
        const auto all = mu_trial.values();
        std::vector<double> out;
        for (std::size_t i = 0; i < all.size(); i += validation_stride)
            out.push_back(all[i]);
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json dz_json = {{"rule", dz.kind == DzRule::Kind::offset     ? "offset"
                                           : dz.kind == DzRule::Kind::absolute ? "absolute"
                                                                               : "dmax"}};
        if (dz.kind != DzRule::Kind::dmax)
            dz_json["value"] = dz.value;
        return {{"name", name},
                {"problem", problem},
                {"fem1d", {{"a", fem1d.a}, {"b", fem1d.b}, {"h_x", fem1d.h_x}, {"kernel", fem1d.kernel}}},
                {"kernel",
                 {{"points", kernel.points}, {"radius", kernel.radius}, {"r_grid", kernel.r_grid}, {"source", kernel.source}}},
                {"mu_trial", {{"start", mu_trial.start}, {"stop", mu_trial.stop}, {"step", mu_trial.step}}},
                {"dg", dg},
                {"dz", dz_json},
                {"eim_g_tol", eim_g_tol},
                {"eim_z_tol", eim_z_tol},
                {"validation_stride", validation_stride},
                {"output_dir", output_dir.string()},
                {"payload", payload},
                {"save_models", save_models},
                {"compare_dmax", compare_dmax},
                {"oracle", oracle},
                {"rbm",
                 {{"dg", rbm.dg},
                  {"n_max", rbm.n_max},
                  {"tol", rbm.tol},
                  {"gram_tol", rbm.gram_tol},
                  {"train_stride", rbm.train_stride},
                  {"eval_stride", rbm.eval_stride},
                  {"train", rbm.train}}},
                {"inject_extra_calls", inject_extra_calls}};
    }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!known.contains(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

inline void require_positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(what + " must be positive");
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    using detail::read;
    detail::reject_unknown(j,
                           {"name", "problem", "fem1d", "kernel", "mu_trial", "dg", "dz", "eim_g_tol", "eim_z_tol",
                            "validation_stride", "output_dir", "payload", "save_models", "compare_dmax", "oracle", "rbm",
                            "inject_extra_calls", "description"},
                           "config");
    ExperimentConfig c;
    read(j, "name", c.name, "config");
    read(j, "problem", c.problem, "config");
    if (c.problem != "fem1d" && c.problem != "kernel")
        throw ConfigError("config.problem must be 'fem1d' or 'kernel'");
    if (j.contains("fem1d")) {
        const auto& f = j.at("fem1d");
        detail::reject_unknown(f, {"a", "b", "h_x", "kernel"}, "fem1d");
        read(f, "a", c.fem1d.a, "fem1d");
        read(f, "b", c.fem1d.b, "fem1d");
        read(f, "h_x", c.fem1d.h_x, "fem1d");
        read(f, "kernel", c.fem1d.kernel, "fem1d");
    }
    if (j.contains("kernel")) {
        const auto& k = j.at("kernel");
        detail::reject_unknown(k, {"points", "radius", "r_grid", "source"}, "kernel");
        read(k, "points", c.kernel.points, "kernel");
        read(k, "radius", c.kernel.radius, "kernel");
        read(k, "r_grid", c.kernel.r_grid, "kernel");
        read(k, "source", c.kernel.source, "kernel");
    }
    if (j.contains("mu_trial")) {
        const auto& m = j.at("mu_trial");
        detail::reject_unknown(m, {"start", "stop", "step"}, "mu_trial");
        read(m, "start", c.mu_trial.start, "mu_trial");
        read(m, "stop", c.mu_trial.stop, "mu_trial");
        read(m, "step", c.mu_trial.step, "mu_trial");
    }
    read(j, "dg", c.dg, "config");
    if (j.contains("dz")) {
        const auto& d = j.at("dz");
        detail::reject_unknown(d, {"rule", "value"}, "dz");
        std::string rule = "offset";
        read(d, "rule", rule, "dz");
        if (rule == "offset")
            c.dz.kind = DzRule::Kind::offset;
        else if (rule == "absolute")
            c.dz.kind = DzRule::Kind::absolute;
        else if (rule == "dmax")
            c.dz.kind = DzRule::Kind::dmax;
        else
            throw ConfigError("dz.rule must be 'offset', 'absolute' or 'dmax'");
        read(d, "value", c.dz.value, "dz");
    }
    read(j, "eim_g_tol", c.eim_g_tol, "config");
    read(j, "eim_z_tol", c.eim_z_tol, "config");
    read(j, "validation_stride", c.validation_stride, "config");
    std::string out = c.output_dir.string();
    read(j, "output_dir", out, "config");
    c.output_dir = out;
    read(j, "payload", c.payload, "config");
    read(j, "save_models", c.save_models, "config");
    read(j, "compare_dmax", c.compare_dmax, "config");
    read(j, "oracle", c.oracle, "config");
    if (j.contains("rbm")) {
        const auto& r = j.at("rbm");
        detail::reject_unknown(r, {"dg", "n_max", "tol", "gram_tol", "train_stride", "eval_stride", "train"}, "rbm");
        read(r, "dg", c.rbm.dg, "rbm");
        read(r, "n_max", c.rbm.n_max, "rbm");
        read(r, "tol", c.rbm.tol, "rbm");
        read(r, "gram_tol", c.rbm.gram_tol, "rbm");
        read(r, "train_stride", c.rbm.train_stride, "rbm");
        read(r, "eval_stride", c.rbm.eval_stride, "rbm");
        read(r, "train", c.rbm.train, "rbm");
    }
    read(j, "inject_extra_calls", c.inject_extra_calls, "config");

    detail::require_positive(c.mu_trial.step, "mu_trial.step");
    if (!(c.mu_trial.stop >= c.mu_trial.start))
        throw ConfigError("mu_trial.stop must not be below mu_trial.start");
    detail::require_positive(c.fem1d.h_x, "fem1d.h_x");
    detail::require_positive(c.kernel.radius, "kernel.radius");
    if (c.kernel.points < 2 || c.kernel.r_grid == 0)
        throw ConfigError("kernel.points must be >= 2 and kernel.r_grid >= 1");
    if (c.dg.empty())
        throw ConfigError("dg list is empty");
    for (auto d : c.dg)
        if (d == 0)
            throw ConfigError("dg entries must be positive");
    if (c.dz.kind == DzRule::Kind::absolute && c.dz.value == 0)
        throw ConfigError("dz.value must be positive for the absolute rule");
    if (c.validation_stride == 0 || c.rbm.train_stride == 0 || c.rbm.eval_stride == 0)
        throw ConfigError("strides must be positive");
    if (!(c.eim_g_tol >= 0.0) || !(c.eim_z_tol >= 0.0) || !(c.rbm.tol >= 0.0))
        throw ConfigError("tolerances must be nonnegative");
    if (c.payload != "matrix" && c.payload != "functional")
        throw ConfigError("payload must be 'matrix' or 'functional'");
    if (c.rbm.n_max == 0 || c.rbm.dg == 0)
        throw ConfigError("rbm.n_max and rbm.dg must be positive");
    (void)c.mu_trial.values();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config '" + path.string() + "'");
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
    return parse_config(j);
}

/// Creates `dir` and checks that a file can be written into it.
inline void ensure_writable(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto probe = dir / ".parasep-write-check";
    std::ofstream os(probe);
    if (ec || !os)
        throw ConfigError("output directory '" + dir.string() + "' is not writable");
    os.close();
    std::filesystem::remove(probe, ec);
}

}  // namespace parasep::experiment
