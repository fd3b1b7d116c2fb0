#include "parallel.hpp"

#include <lpball/experiments.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace lpball {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void require(bool ok, const std::string &message) {
    if (!ok) throw InvalidArgument(message);
}

unsigned resolve_threads(unsigned threads) { return threads == 0 ? default_thread_count() : threads; }

BaselineConfig baseline_from(const SolverConfig &cfg) {
    BaselineConfig out;
    out.beta_factor = cfg.beta_factor;
    out.tol = cfg.tol;
    out.max_iter = cfg.max_iter;
    out.record_trace = false;
    return out;
}

struct TrialOutcome {
    bool success = false;
    bool failed = false;
    double iterations = 0.0;
    double seconds = 0.0;
};

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

std::string MethodSpec::tag() const {
    switch (kind) {
    case Kind::L0: return "IHT";
    case Kind::L1: return "GPM";
    default: return "IR1B";
    }
}

double MethodSpec::p_value() const {
    switch (kind) {
    case Kind::L0: return 0.0;
    case Kind::L1: return 1.0;
    default: return p;
    }
}

MethodSpec MethodSpec::parse(const std::string &text) {
    if (text == "L0" || text == "l0" || text == "IHT" || text == "0") return l0();
    if (text == "L1" || text == "l1" || text == "GPM" || text == "1") return l1();
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception &) {
        throw InvalidArgument("method '" + text + "' is neither a p value nor L0/L1");
    }
    if (used != text.size())
        throw InvalidArgument("method '" + text + "' is neither a p value nor L0/L1");
    if (value == 1.0) return l1();
    require(value > 0.0 && value < 1.0, "p must lie in (0,1)");
    return lp(value);
}

void RecoverySpec::validate() const {
    require(n >= 1, "n must be at least 1");
    require(d >= 1 && d <= n, "d must lie in [1, n]");
    require(!m_grid.empty(), "m grid must not be empty");
    for (Index m : m_grid) require(m >= 1, "every m must be at least 1");
    require(noise_std >= 0.0, "noise_std must be nonnegative");
    require(!methods.empty(), "method list must not be empty");
    require(trials >= 1, "trials must be at least 1");
    require(success_threshold > 0.0, "success_threshold must be positive");
    SolverConfig probe = solver;
    probe.r = static_cast<double>(d);
    probe.validate();
}

RecoveryInstance gen_recovery_instance(Index n, Index m, Index d, double noise_std,
                                       std::mt19937_64 &rng) {
    require(n >= 1 && m >= 1, "n and m must be at least 1");
    require(d >= 0 && d <= n, "d must not exceed n");
    require(noise_std >= 0.0, "noise_std must be nonnegative");

    RecoveryInstance inst;
    inst.x_true = Vector::Zero(n);
    std::vector<Index> positions(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) positions[static_cast<std::size_t>(i)] = i;
    // Partial Fisher-Yates for the support.
    for (Index j = 0; j < d; ++j) {
        std::uniform_int_distribution<Index> pick(j, n - 1);
        std::swap(positions[static_cast<std::size_t>(j)],
                  positions[static_cast<std::size_t>(pick(rng))]);
    }
    std::bernoulli_distribution coin(0.5);
    for (Index j = 0; j < d; ++j)
        inst.x_true[positions[static_cast<std::size_t>(j)]] = coin(rng) ? 1.0 : -1.0;

    std::normal_distribution<double> gauss(0.0, 1.0);
    inst.A.resize(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i) inst.A(i, j) = gauss(rng);
    inst.y = inst.A * inst.x_true;
    if (noise_std > 0.0)
        for (Index i = 0; i < m; ++i) inst.y[i] += noise_std * gauss(rng);
    return inst;
}

bool recovery_success(const Vector &x_star, const Vector &x_true, double threshold) {
    require(x_star.size() == x_true.size(), "recovery_success: dimension mismatch");
    const double scale = x_true.norm();
    require(scale > 0.0, "recovery_success: x_true must be nonzero");
    return (x_star - x_true).norm() / scale < threshold;
}

unsigned default_thread_count() {
    if (const char *env = std::getenv("LPBALL_THREADS")) {
        char *end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

SweepResult recovery_sweep(const RecoverySpec &spec, unsigned threads) {
    spec.validate();
    const std::size_t n_m = spec.m_grid.size();
    const std::size_t n_methods = spec.methods.size();
    const std::size_t n_trials = static_cast<std::size_t>(spec.trials);

    // outcomes[(mi * trials + t) * methods + k]
    std::vector<TrialOutcome> outcomes(n_m * n_trials * n_methods);

    SolverConfig ir1b_cfg = spec.solver;
    ir1b_cfg.r = static_cast<double>(spec.d);
    ir1b_cfg.record_trace = false;
    const BaselineConfig base_cfg = baseline_from(spec.solver);

    detail::parallel_for(n_m * n_trials, resolve_threads(threads), [&](std::size_t item) {
        const std::size_t mi = item / n_trials;
        const std::size_t t = item % n_trials;
        const Index m = spec.m_grid[mi];

        // The instance depends on (m, trial) only, so every method sees the
        // same data.
        std::mt19937_64 instance_rng(derive_seed(spec.seed, 1, static_cast<std::uint64_t>(m), t));
        RecoveryInstance inst =
            gen_recovery_instance(spec.n, m, spec.d, spec.noise_std, instance_rng);
        const Vector x_true = inst.x_true;
        const LeastSquaresObjective obj(LeastSquaresData{std::move(inst.A), std::move(inst.y)});

        for (std::size_t k = 0; k < n_methods; ++k) {
            const MethodSpec &method = spec.methods[k];
            TrialOutcome &out = outcomes[item * n_methods + k];
            const auto start = std::chrono::steady_clock::now();
            try {
                SolveReport report;
                if (method.kind == MethodSpec::Kind::Lp) {
                    SolverConfig cfg = ir1b_cfg;
                    cfg.p = method.p;
                    std::mt19937_64 init_rng(
                        derive_seed(spec.seed, 2 + k, static_cast<std::uint64_t>(m), t));
                    report = ir1b_solve(obj, cfg, default_init_recovery(spec.n, spec.d, cfg.p, init_rng));
                } else if (method.kind == MethodSpec::Kind::L0) {
                    report = iht_solve(obj, spec.d, base_cfg, Vector::Zero(spec.n));
                } else {
                    report = gpm_solve(obj, static_cast<double>(spec.d), base_cfg,
                                       Vector::Zero(spec.n));
                }
                out.success = recovery_success(report.x_final, x_true, spec.success_threshold);
                out.iterations = static_cast<double>(report.iterations);
            } catch (const std::exception &) {
                out.failed = true;
            }
            out.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });

    SweepResult result;
    for (std::size_t k = 0; k < n_methods; ++k) {
        for (std::size_t mi = 0; mi < n_m; ++mi) {
            SweepRow row;
            row.method = spec.methods[k].tag();
            row.p = spec.methods[k].p_value();
            row.param = static_cast<double>(spec.m_grid[mi]);
            row.metric = "success_rate";
            row.trials = spec.trials;
            row.seed = spec.seed;
            Index successes = 0, solved = 0;
            double iterations = 0.0, seconds = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t) {
                const TrialOutcome &o = outcomes[(mi * n_trials + t) * n_methods + k];
                successes += o.success ? 1 : 0;
                seconds += o.seconds;
                if (o.failed) {
                    ++row.failed_trials;
                } else {
                    ++solved;
                    iterations += o.iterations;
                }
            }
            row.value = static_cast<double>(successes) / static_cast<double>(spec.trials);
            row.mean_iterations = solved > 0 ? iterations / static_cast<double>(solved) : 0.0;
            row.mean_wall_seconds = seconds / static_cast<double>(spec.trials);
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

std::pair<LogisticData, LogisticData> train_test_split(const LogisticData &data, double test_frac,
                                                       std::mt19937_64 &rng) {
    require(test_frac > 0.0 && test_frac < 1.0, "test_frac must lie in (0,1)");
    require(data.X.rows() == data.labels.size(), "train_test_split: dimension mismatch");
    const Index m = data.samples();
    const Index n_test = static_cast<Index>(std::ceil(static_cast<double>(m) * test_frac - 1e-12));
    require(n_test >= 1 && n_test < m, "train_test_split: split of " + std::to_string(m) +
                                           " rows leaves an empty train or test set");

    std::vector<Index> order(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);

    auto gather = [&](std::size_t begin, std::size_t end) {
        LogisticData part;
        part.X.resize(static_cast<Index>(end - begin), data.features());
        part.labels.resize(static_cast<Index>(end - begin));
        for (std::size_t j = begin; j < end; ++j) {
            const auto row = static_cast<Index>(j - begin);
            part.X.row(row) = data.X.row(order[j]);
            part.labels[row] = data.labels[order[j]];
        }
        return part;
    };
    LogisticData test = gather(0, static_cast<std::size_t>(n_test));
    LogisticData train = gather(static_cast<std::size_t>(n_test), static_cast<std::size_t>(m));
    return {std::move(train), std::move(test)};
}

double predict_accuracy(const Vector &theta, const LogisticData &test) {
    require(test.samples() > 0, "predict_accuracy: empty test set");
    require(theta.size() == test.features(), "predict_accuracy: dimension mismatch");
    const Vector scores = test.X * theta;
    Index correct = 0;
    for (Index i = 0; i < scores.size(); ++i) {
        // sigmoid(score) >= 0.5  <=>  score >= 0
        const double predicted = scores[i] >= 0.0 ? 1.0 : -1.0;
        if (predicted == test.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.samples());
}

void LogisticSweepSpec::validate() const {
    require(!r_grid.empty(), "r grid must not be empty");
    for (double r : r_grid) require(r > 0.0, "every r must be positive");
    require(!methods.empty(), "method list must not be empty");
    for (const MethodSpec &m : methods)
        require(m.kind != MethodSpec::Kind::L0, "logistic sweep supports p in (0,1) and L1 only");
    require(test_frac > 0.0 && test_frac < 1.0, "test_frac must lie in (0,1)");
    SolverConfig probe = solver;
    probe.r = 1.0;
    probe.validate();
}

SweepResult logistic_sweep(const LogisticData &data, const LogisticSweepSpec &spec,
                           unsigned threads) {
    spec.validate();
    std::mt19937_64 split_rng(spec.seed);
    auto [train, test] = train_test_split(data, spec.test_frac, split_rng);
    const LogisticObjective obj(std::move(train));
    const Vector theta0 = Vector::Zero(obj.dimension());

    const std::size_t n_r = spec.r_grid.size();
    const std::size_t n_methods = spec.methods.size();
    std::vector<SweepRow> rows(n_r * n_methods);

    detail::parallel_for(rows.size(), resolve_threads(threads), [&](std::size_t item) {
        const std::size_t k = item / n_r;
        const std::size_t ri = item % n_r;
        const MethodSpec &method = spec.methods[k];
        const double r = spec.r_grid[ri];

        SweepRow &row = rows[item];
        row.method = method.tag();
        row.p = method.p_value();
        row.param = r;
        row.metric = "test_accuracy";
        row.trials = 1;
        row.seed = spec.seed;

        const auto start = std::chrono::steady_clock::now();
        try {
            SolveReport report;
            if (method.kind == MethodSpec::Kind::Lp) {
                SolverConfig cfg = spec.solver;
                cfg.p = method.p;
                cfg.r = r;
                cfg.record_trace = false;
                report = ir1b_solve(obj, cfg, theta0);
            } else {
                report = gpm_solve(obj, r, baseline_from(spec.solver), theta0);
            }
            row.value = predict_accuracy(report.x_final, test);
            row.mean_iterations = static_cast<double>(report.iterations);
        } catch (const std::exception &) {
            row.failed_trials = 1;
        }
        row.mean_wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    return SweepResult{std::move(rows)};
}

} // namespace lpball
