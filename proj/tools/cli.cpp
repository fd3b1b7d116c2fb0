#include "cli.hpp"

#include <lpball/config.hpp>
#include <lpball/experiments.hpp>
#include <lpball/io.hpp>
#include <lpball/optimality.hpp>
#include <lpball/projection.hpp>
#include <lpball/solver.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace lpball::cli {

namespace {

std::string num(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", v);
    return buffer;
}

std::string full(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

// Flags shared by every subcommand. Values stay as strings until they are
// merged into the key/value settings so that the config-file parser does
// all conversion and validation.
struct CommonFlags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::map<std::string, std::string> values;
    std::string out_path;
    std::string format = "csv";
};

void add_setting_flag(CLI::App *app, CommonFlags &flags, const std::string &flag,
                      const std::string &key, const std::string &help) {
    app->add_option_function<std::string>(
        flag, [&flags, key](const std::string &v) { flags.values[key] = v; }, help);
}

void add_common(CLI::App *app, CommonFlags &flags) {
    app->add_option("--config", flags.config_path, "Flat key = value config file");
    app->add_option("--set", flags.overrides, "Override a config key (key=value)");
    add_setting_flag(app, flags, "--r", "r", "Ball radius");
    add_setting_flag(app, flags, "--c", "c", "Perturbation factor in (0,1)");
    add_setting_flag(app, flags, "--beta-factor", "beta_factor", "beta = factor * L, factor > 1");
    add_setting_flag(app, flags, "--tol", "tol", "Displacement stopping tolerance");
    add_setting_flag(app, flags, "--boundary-tol", "boundary_tol", "Boundary detection tolerance");
    add_setting_flag(app, flags, "--max-iter", "max_iter", "Iteration cap");
    add_setting_flag(app, flags, "--seed", "seed", "Master random seed");
    add_setting_flag(app, flags, "--threads", "threads", "Worker threads (default: LPBALL_THREADS or all cores)");
    app->add_option("--out", flags.out_path, "Output file");
    app->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

// defaults < config file < --set overrides < explicit flags
RunConfig resolve(const CommonFlags &flags) {
    RunConfig cfg = default_run_config();
    if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
    std::map<std::string, std::string> overrides;
    for (const std::string &entry : flags.overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("--set expects key=value, got '" + entry + "'");
        overrides[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    apply_settings(cfg, overrides);
    apply_settings(cfg, flags.values);
    if (cfg.threads == 0) cfg.threads = default_thread_count();
    return cfg;
}

std::unique_ptr<SmoothObjective> make_objective(const std::string &kind, const std::string &matrix,
                                                const std::string &rhs, const std::string &data) {
    if (kind == "ls") {
        if (matrix.empty() || rhs.empty())
            throw InvalidArgument("least squares needs --matrix and --rhs");
        return std::make_unique<LeastSquaresObjective>(
            LeastSquaresData{read_matrix_csv(matrix), read_vector_csv(rhs)});
    }
    if (kind == "logistic") {
        LogisticData d = data.empty() ? load_bundled_dataset() : load_csv_dataset(data);
        return std::make_unique<LogisticObjective>(std::move(d));
    }
    throw InvalidArgument("objective must be ls or logistic");
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
}

struct SolveArgs {
    std::string objective = "ls", matrix, rhs, data, x0, method = "ir1b", p;
    long long sparsity = 0;
};

int do_solve(const SolveArgs &a, CommonFlags &flags, std::ostream &out) {
    if (!a.p.empty()) flags.values["p"] = a.p;
    RunConfig cfg = resolve(flags);
    cfg.solver.validate();
    const auto obj = make_objective(a.objective, a.matrix, a.rhs, a.data);
    const Vector x0 = a.x0.empty() ? Vector::Zero(obj->dimension()) : read_vector_csv(a.x0);

    SolveReport report;
    std::optional<StationarityReport> cert;
    BaselineConfig base{cfg.solver.beta_factor, cfg.solver.tol, cfg.solver.max_iter, false};
    if (a.method == "ir1b") {
        report = ir1b_solve(*obj, cfg.solver, x0);
        cert = stationarity_report(report.x_final, *obj, cfg.solver.p, cfg.solver.r,
                                   cfg.solver.boundary_tol);
    } else if (a.method == "iht") {
        if (a.sparsity < 1) throw InvalidArgument("iht needs --sparsity >= 1");
        report = iht_solve(*obj, a.sparsity, base, x0);
    } else if (a.method == "gpm") {
        report = gpm_solve(*obj, cfg.solver.r, base, x0);
    } else {
        throw InvalidArgument("method must be ir1b, iht or gpm");
    }

    out << "status=" << to_string(report.status) << " iterations=" << report.iterations
        << " objective=" << num(report.final_objective);
    if (cert)
        out << " residual=" << num(cert->residual) << " lambda=" << num(cert->lambda)
            << " case=" << to_string(cert->point_case);
    out << '\n';

    if (!flags.out_path.empty()) {
        if (flags.format == "json") {
            nlohmann::ordered_json j;
            j["method"] = a.method;
            j["status"] = std::string(to_string(report.status));
            j["iterations"] = report.iterations;
            j["objective"] = report.final_objective;
            if (cert) {
                j["case"] = std::string(to_string(cert->point_case));
                j["lambda"] = cert->lambda;
                j["residual"] = cert->residual;
            }
            j["x"] = std::vector<double>(report.x_final.begin(), report.x_final.end());
            write_text(flags.out_path, j.dump(2) + "\n");
        } else {
            write_vector_csv(report.x_final, flags.out_path);
        }
    }
    return kExitOk;
}

struct ProjectArgs {
    std::string point, weights, fixed_zero;
    double radius = 0.0;
};

int do_project(const ProjectArgs &a, CommonFlags &flags, std::ostream &out) {
    resolve(flags);
    const Vector v = read_vector_csv(a.point);
    WeightedL1Ball ball;
    ball.weights = a.weights.empty() ? Vector::Ones(v.size()) : read_vector_csv(a.weights);
    ball.radius = a.radius;
    if (!a.fixed_zero.empty())
        for (Index i : parse_index_list("fixed-zero", a.fixed_zero)) ball.fixed_zero.push_back(i);
    const ProjectionResult result = project_weighted_l1_detailed(v, ball);
    out << "theta=" << num(result.theta) << " weighted_norm=" << num(ball.weighted_norm(result.x))
        << " radius=" << num(ball.radius) << '\n';
    if (!flags.out_path.empty()) write_vector_csv(result.x, flags.out_path);
    return kExitOk;
}

struct RecoverArgs {
    std::string n, d, m, p, trials, noise, threshold;
    bool stats = false;
};

int do_recover(const RecoverArgs &a, CommonFlags &flags, std::ostream &out) {
    if (!a.n.empty()) flags.values["n"] = a.n;
    if (!a.d.empty()) flags.values["d"] = a.d;
    if (!a.m.empty()) flags.values["m"] = a.m;
    if (!a.p.empty()) flags.values["p_list"] = a.p;
    if (!a.trials.empty()) flags.values["trials"] = a.trials;
    if (!a.noise.empty()) flags.values["noise_std"] = a.noise;
    if (!a.threshold.empty()) flags.values["success_threshold"] = a.threshold;
    RunConfig cfg = resolve(flags);
    const SweepResult result = recovery_sweep(cfg.recovery, cfg.threads);
    for (const SweepRow &row : result.rows)
        out << row.method << " p=" << num(row.p) << " m=" << num(row.param)
            << " success_rate=" << num(row.value) << " mean_iterations=" << num(row.mean_iterations)
            << '\n';
    if (!flags.out_path.empty())
        persist_results(result, flags.out_path, parse_result_format(flags.format),
                        PersistOptions{a.stats});
    return kExitOk;
}

struct LogisticArgs {
    std::string data, r_grid, p, test_frac;
    bool stats = false;
};

int do_logistic(const LogisticArgs &a, CommonFlags &flags, std::ostream &out) {
    if (!a.r_grid.empty()) flags.values["r_grid"] = a.r_grid;
    if (!a.p.empty()) flags.values["p_list"] = a.p;
    if (!a.test_frac.empty()) flags.values["test_frac"] = a.test_frac;
    RunConfig cfg = resolve(flags);
    const LogisticData data = a.data.empty() ? load_bundled_dataset() : load_csv_dataset(a.data);
    const SweepResult result = logistic_sweep(data, cfg.logistic, cfg.threads);
    for (const SweepRow &row : result.rows)
        out << row.method << " p=" << num(row.p) << " r=" << num(row.param)
            << " test_accuracy=" << num(row.value) << '\n';
    if (!flags.out_path.empty())
        persist_results(result, flags.out_path, parse_result_format(flags.format),
                        PersistOptions{a.stats});
    return kExitOk;
}

struct CertifyArgs {
    std::string objective = "ls", matrix, rhs, data, x, p;
};

int do_certify(const CertifyArgs &a, CommonFlags &flags, std::ostream &out) {
    if (!a.p.empty()) flags.values["p"] = a.p;
    RunConfig cfg = resolve(flags);
    cfg.solver.validate();
    const auto obj = make_objective(a.objective, a.matrix, a.rhs, a.data);
    const Vector x = read_vector_csv(a.x);
    const StationarityReport rep =
        stationarity_report(x, *obj, cfg.solver.p, cfg.solver.r, cfg.solver.boundary_tol);
    out << "case=" << to_string(rep.point_case) << " lambda=" << num(rep.lambda)
        << " residual=" << num(rep.residual) << " feasibility_gap=" << num(rep.feasibility_gap)
        << '\n';
    if (!flags.out_path.empty()) {
        if (flags.format == "json") {
            nlohmann::ordered_json j;
            j["case"] = std::string(to_string(rep.point_case));
            j["lambda"] = rep.lambda;
            j["residual"] = rep.residual;
            j["feasibility_gap"] = rep.feasibility_gap;
            write_text(flags.out_path, j.dump(2) + "\n");
        } else {
            write_text(flags.out_path, "case,lambda,residual,feasibility_gap\n" +
                                           std::string(to_string(rep.point_case)) + "," +
                                           full(rep.lambda) + "," + full(rep.residual) + "," +
                                           full(rep.feasibility_gap) + "\n");
        }
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Sparse optimization over nonconvex lp balls"};
    app.name("lpball");
    app.require_subcommand(1);

    CommonFlags flags;

    SolveArgs solve_args;
    auto *solve = app.add_subcommand("solve", "Minimize an objective over the lp ball");
    add_common(solve, flags);
    solve->add_option("--objective", solve_args.objective, "ls or logistic")
        ->check(CLI::IsMember({"ls", "logistic"}));
    solve->add_option("--matrix", solve_args.matrix, "Sensing matrix CSV (ls)");
    solve->add_option("--rhs", solve_args.rhs, "Measurement vector CSV (ls)");
    solve->add_option("--data", solve_args.data, "Labelled dataset CSV (logistic; default bundled)");
    solve->add_option("--x0", solve_args.x0, "Starting point CSV (default zero)");
    solve->add_option("--method", solve_args.method, "ir1b, iht or gpm")
        ->check(CLI::IsMember({"ir1b", "iht", "gpm"}));
    solve->add_option("--sparsity", solve_args.sparsity, "IHT sparsity level");
    solve->add_option("--p", solve_args.p, "p in (0,1)");

    ProjectArgs project_args;
    auto *project = app.add_subcommand("project", "Project a point onto a weighted l1 ball");
    add_common(project, flags);
    project->add_option("--point", project_args.point, "Point CSV")->required();
    project->add_option("--weights", project_args.weights, "Weights CSV (default ones)");
    project->add_option("--radius", project_args.radius, "Ball radius")->required();
    project->add_option("--fixed-zero", project_args.fixed_zero, "Comma-separated pinned indices");

    RecoverArgs recover_args;
    auto *recover = app.add_subcommand("recover-sweep", "Sparse recovery phase-transition sweep");
    add_common(recover, flags);
    recover->add_option("--n", recover_args.n, "Ambient dimension");
    recover->add_option("--d", recover_args.d, "Sparsity of the true signal");
    recover->add_option("--m", recover_args.m, "Measurement counts, e.g. 32,48,64 or 50:60");
    recover->add_option("--p", recover_args.p, "Methods: p values, L0 (IHT), L1 (GPM)");
    recover->add_option("--trials", recover_args.trials, "Trials per (method, m)");
    recover->add_option("--noise", recover_args.noise, "Measurement noise standard deviation");
    recover->add_option("--threshold", recover_args.threshold, "Relative error success threshold");
    recover->add_flag("--stats", recover_args.stats, "Also write iteration and timing rows");

    LogisticArgs logistic_args;
    auto *logistic = app.add_subcommand("logistic-sweep", "Logistic regression radius sweep");
    add_common(logistic, flags);
    logistic->add_option("--data", logistic_args.data, "Dataset CSV (default bundled)");
    logistic->add_option("--r-grid", logistic_args.r_grid, "Radii, e.g. 2:35 or 2,5,10");
    logistic->add_option("--p", logistic_args.p, "Methods: p values and L1");
    logistic->add_option("--test-frac", logistic_args.test_frac, "Test fraction");
    logistic->add_flag("--stats", logistic_args.stats, "Also write iteration and timing rows");

    CertifyArgs certify_args;
    auto *certify = app.add_subcommand("certify", "First-order stationarity report for a point");
    add_common(certify, flags);
    certify->add_option("--objective", certify_args.objective, "ls or logistic")
        ->check(CLI::IsMember({"ls", "logistic"}));
    certify->add_option("--matrix", certify_args.matrix, "Sensing matrix CSV (ls)");
    certify->add_option("--rhs", certify_args.rhs, "Measurement vector CSV (ls)");
    certify->add_option("--data", certify_args.data, "Labelled dataset CSV (logistic)");
    certify->add_option("--x", certify_args.x, "Candidate point CSV")->required();
    certify->add_option("--p", certify_args.p, "p in (0,1)");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("lpball");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (solve->parsed()) return do_solve(solve_args, flags, out);
        if (project->parsed()) return do_project(project_args, flags, out);
        if (recover->parsed()) return do_recover(recover_args, flags, out);
        if (logistic->parsed()) return do_logistic(logistic_args, flags, out);
        if (certify->parsed()) return do_certify(certify_args, flags, out);
    } catch (const InvalidArgument &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}

} // namespace lpball::cli
