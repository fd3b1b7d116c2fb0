#pragma once

#include <lpball/experiments.hpp>
#include <lpball/solver.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lpball {

// Everything a flat `key = value` config file can set.
struct RunConfig {
    SolverConfig solver;
    RecoverySpec recovery;
    LogisticSweepSpec logistic;
    unsigned threads = 0;
};

RunConfig default_run_config();

// Parses `key = value` lines; `#` starts a comment. Unknown keys are
// collected and reported together.
std::map<std::string, std::string> parse_key_values(const std::string &text,
                                                    const std::string &source = "config");

// Applies key/value pairs on top of cfg. Throws InvalidArgument listing
// unknown keys, or naming the key whose value does not parse.
void apply_settings(RunConfig &cfg, const std::map<std::string, std::string> &settings);

// Reads the file, applies it over the defaults and validates the solver
// settings.
RunConfig load_config(const std::filesystem::path &path);

// Keys accepted by apply_settings.
const std::vector<std::string> &known_config_keys();

std::vector<double> parse_double_list(const std::string &key, const std::string &text);
std::vector<Index> parse_index_list(const std::string &key, const std::string &text);

} // namespace lpball
