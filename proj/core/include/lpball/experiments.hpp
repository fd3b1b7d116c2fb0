#pragma once

#include <lpball/objectives.hpp>
#include <lpball/solver.hpp>
#include <lpball/types.hpp>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace lpball {

// Entry of a method list: an lp-ball IR1B run at p in (0,1), or one of
// the baselines (L0 = IHT, L1 = GPM).
struct MethodSpec {
    enum class Kind { Lp, L0, L1 };
    Kind kind = Kind::Lp;
    double p = 0.5;

    static MethodSpec lp(double p) { return {Kind::Lp, p}; }
    static MethodSpec l0() { return {Kind::L0, 0.0}; }
    static MethodSpec l1() { return {Kind::L1, 1.0}; }

    // "IR1B", "IHT" or "GPM".
    std::string tag() const;
    // Value written in the p column: p, 0 for L0, 1 for L1.
    double p_value() const;

    // Parses "0.5", "L0", "L1" (also "1" as L1, "0" as L0).
    static MethodSpec parse(const std::string &text);
};

struct RecoverySpec {
    Index n = 1024;
    Index d = 25;
    std::vector<Index> m_grid;
    double noise_std = 1e-2;
    std::vector<MethodSpec> methods;
    Index trials = 50;
    double success_threshold = 1e-3;
    std::uint64_t seed = 0;
    // Solver settings; r is overridden by d for every recovery run.
    SolverConfig solver;

    void validate() const;
};

struct SweepRow {
    std::string method;
    double p = 0.0;
    double param = 0.0;  // m for recovery sweeps, r for logistic sweeps
    std::string metric;  // "success_rate" or "test_accuracy"
    double value = 0.0;
    Index trials = 0;
    std::uint64_t seed = 0;
    double mean_iterations = 0.0;
    double mean_wall_seconds = 0.0;
    Index failed_trials = 0; // trials whose solve threw
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct RecoveryInstance {
    Matrix A;
    Vector y;
    Vector x_true;
};

RecoveryInstance gen_recovery_instance(Index n, Index m, Index d, double noise_std,
                                       std::mt19937_64 &rng);

// ||x_star - x_true|| / ||x_true|| < threshold.
bool recovery_success(const Vector &x_star, const Vector &x_true, double threshold);

// Worker count used when none is given: LPBALL_THREADS, else the
// hardware concurrency.
unsigned default_thread_count();

SweepResult recovery_sweep(const RecoverySpec &spec, unsigned threads = 0);

// Reads a numeric CSV with the label in the last column ({0,1} or
// {-1,+1}), maps labels to -1/+1 and standardizes each feature column.
LogisticData load_csv_dataset(const std::filesystem::path &path);

// The bundled 569 x 30 breast cancer dataset; throws if the shape is off.
LogisticData load_bundled_dataset();
std::filesystem::path bundled_dataset_path();

// ceil(m * test_frac) rows go to the test set.
std::pair<LogisticData, LogisticData> train_test_split(const LogisticData &data, double test_frac,
                                                       std::mt19937_64 &rng);

double predict_accuracy(const Vector &theta, const LogisticData &test);

struct LogisticSweepSpec {
    std::vector<double> r_grid;
    std::vector<MethodSpec> methods; // Lp entries and L1
    double test_frac = 0.4;
    std::uint64_t seed = 0;          // split seed
    SolverConfig solver;

    void validate() const;
};

// Splits once with spec.seed, then solves from theta0 = 0 for every
// (method, r) pair and records the test accuracy.
SweepResult logistic_sweep(const LogisticData &data, const LogisticSweepSpec &spec,
                           unsigned threads = 0);

enum class ResultFormat { Csv, Json };

ResultFormat parse_result_format(const std::string &text);

struct PersistOptions {
    // Also write mean_iterations and mean_wall_seconds rows. Wall times make
    // the output run-dependent.
    bool include_stats = false;
};

// Columns method,p,param,metric,value,trials,seed; numbers at 17
// significant digits; LF line endings.
void persist_results(const SweepResult &result, const std::filesystem::path &path,
                     ResultFormat format, const PersistOptions &options = {});

// Reads back a file written by persist_results (metric rows only).
SweepResult load_results(const std::filesystem::path &path, ResultFormat format);

// Counter-based seed derivation for parallel determinism.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

} // namespace lpball
