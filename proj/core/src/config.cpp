#include "csv.hpp"

#include <lpball/config.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace lpball {

namespace {

double to_double(const std::string &key, const std::string &text) {
    double value = 0.0;
    if (!detail::parse_double(text, value))
        throw InvalidArgument(key + ": expected a number, got '" + text + "'");
    return value;
}

Index to_index(const std::string &key, const std::string &text) {
    const double value = to_double(key, text);
    if (value != std::floor(value) || std::abs(value) > 9.0e15)
        throw InvalidArgument(key + ": expected an integer, got '" + text + "'");
    return static_cast<Index>(value);
}

std::uint64_t to_seed(const std::string &key, const std::string &text) {
    const std::string t(detail::trim(text));
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidArgument(key + ": expected a nonnegative integer, got '" + text + "'");
    try {
        return std::stoull(t);
    } catch (const std::exception &) {
        throw InvalidArgument(key + ": value out of range '" + text + "'");
    }
}

std::vector<MethodSpec> to_methods(const std::string &text) {
    std::vector<MethodSpec> out;
    for (auto field : detail::split(text, ','))
        if (!field.empty()) out.push_back(MethodSpec::parse(std::string(field)));
    if (out.empty()) throw InvalidArgument("p_list: empty list");
    return out;
}

using Setter = std::function<void(RunConfig &, const std::string &, const std::string &)>;

const std::vector<std::pair<std::string, Setter>> &setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"p", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.p = to_double(k, v); }},
        {"r", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.r = to_double(k, v); }},
        {"c", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.c = to_double(k, v); }},
        {"beta_factor", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.beta_factor = to_double(k, v); }},
        {"tol", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.tol = to_double(k, v); }},
        {"boundary_tol", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.boundary_tol = to_double(k, v); }},
        {"max_iter", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.max_iter = to_index(k, v); }},
        {"seed", [](RunConfig &c, const std::string &k, const std::string &v) { c.solver.seed = to_seed(k, v); }},
        {"threads", [](RunConfig &c, const std::string &k, const std::string &v) {
             const Index t = to_index(k, v);
             if (t < 0) throw InvalidArgument("threads must be nonnegative");
             c.threads = static_cast<unsigned>(t);
         }},
        {"n", [](RunConfig &c, const std::string &k, const std::string &v) { c.recovery.n = to_index(k, v); }},
        {"d", [](RunConfig &c, const std::string &k, const std::string &v) { c.recovery.d = to_index(k, v); }},
        {"m", [](RunConfig &c, const std::string &k, const std::string &v) { c.recovery.m_grid = parse_index_list(k, v); }},
        {"noise_std", [](RunConfig &c, const std::string &k, const std::string &v) { c.recovery.noise_std = to_double(k, v); }},
        {"trials", [](RunConfig &c, const std::string &k, const std::string &v) { c.recovery.trials = to_index(k, v); }},
        {"success_threshold", [](RunConfig &c, const std::string &k, const std::string &v) { c.recovery.success_threshold = to_double(k, v); }},
        {"p_list", [](RunConfig &c, const std::string &, const std::string &v) {
             c.recovery.methods = to_methods(v);
             c.logistic.methods = c.recovery.methods;
         }},
        {"r_grid", [](RunConfig &c, const std::string &k, const std::string &v) { c.logistic.r_grid = parse_double_list(k, v); }},
        {"test_frac", [](RunConfig &c, const std::string &k, const std::string &v) { c.logistic.test_frac = to_double(k, v); }},
    };
    return table;
}

} // namespace

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.recovery.m_grid.clear();
    for (Index m = 50; m <= 1000; m += 50) cfg.recovery.m_grid.push_back(m);
    cfg.recovery.methods = {MethodSpec::lp(0.3), MethodSpec::lp(0.5), MethodSpec::lp(0.7),
                            MethodSpec::l0(), MethodSpec::l1()};
    cfg.logistic.methods = {MethodSpec::lp(0.5), MethodSpec::l1()};
    cfg.logistic.r_grid.clear();
    for (int r = 2; r <= 35; ++r) cfg.logistic.r_grid.push_back(r);
    return cfg;
}

const std::vector<std::string> &known_config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto &[key, setter] : setters()) out.push_back(key);
        return out;
    }();
    return keys;
}

std::vector<double> parse_double_list(const std::string &key, const std::string &text) {
    std::vector<double> out;
    for (auto field : detail::split(text, ',')) {
        if (field.empty()) continue;
        // a:b expands to the integers a, a+1, ..., b
        const auto colon = field.find(':');
        if (colon != std::string_view::npos) {
            const Index lo = to_index(key, std::string(field.substr(0, colon)));
            const Index hi = to_index(key, std::string(field.substr(colon + 1)));
            if (hi < lo) throw InvalidArgument(key + ": empty range '" + std::string(field) + "'");
            for (Index v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
        } else {
            out.push_back(to_double(key, std::string(field)));
        }
    }
    if (out.empty()) throw InvalidArgument(key + ": empty list");
    return out;
}

std::vector<Index> parse_index_list(const std::string &key, const std::string &text) {
    std::vector<Index> out;
    for (double v : parse_double_list(key, text)) {
        if (v != std::floor(v)) throw InvalidArgument(key + ": expected integers");
        out.push_back(static_cast<Index>(v));
    }
    return out;
}

std::map<std::string, std::string> parse_key_values(const std::string &text,
                                                    const std::string &source) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string_view body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw InvalidArgument(source + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
        const std::string key(detail::trim(body.substr(0, eq)));
        const std::string value(detail::trim(body.substr(eq + 1)));
        if (key.empty())
            throw InvalidArgument(source + ":" + std::to_string(line_no) + ": missing key");
        out[key] = value;
    }
    return out;
}

void apply_settings(RunConfig &cfg, const std::map<std::string, std::string> &settings) {
    std::vector<std::string> unknown;
    for (const auto &[key, value] : settings) {
        const auto &table = setters();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const auto &entry) { return entry.first == key; });
        if (it == table.end()) unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::string message = "unknown config key(s):";
        for (const auto &key : unknown) message += " " + key;
        throw InvalidArgument(message);
    }
    for (const auto &[key, value] : settings) {
        for (const auto &[name, setter] : setters())
            if (name == key) setter(cfg, key, value);
    }
    cfg.recovery.solver = cfg.solver;
    cfg.recovery.seed = cfg.solver.seed;
    cfg.logistic.solver = cfg.solver;
    cfg.logistic.seed = cfg.solver.seed;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    RunConfig cfg = default_run_config();
    apply_settings(cfg, parse_key_values(buffer.str(), path.string()));
    cfg.solver.validate();
    return cfg;
}

} // namespace lpball
