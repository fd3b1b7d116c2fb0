#include <lpball/optimality.hpp>
#include <lpball/solver.hpp>

#include <cmath>
#include <string>

namespace lpball {

namespace {

void require(bool ok, const std::string &message) {
    if (!ok) throw InvalidArgument(message);
}

void snap_to_zero(Vector &x) {
    for (Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) <= kZeroThreshold) x[i] = 0.0;
}

void check_finite(double value, const char *what) {
    if (!std::isfinite(value)) throw SolverError(std::string("non-finite ") + what);
}

void check_finite(const Vector &v, const char *what) {
    if (!v.allFinite()) throw SolverError(std::string("non-finite ") + what);
}

double step_beta(const SmoothObjective &obj, double beta_factor) {
    const double lipschitz = obj.lipschitz();
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz))
        throw SolverError("objective reports a non-positive Lipschitz constant");
    return beta_factor * lipschitz;
}

void check_start(const SmoothObjective &obj, const Vector &x0) {
    if (x0.size() != obj.dimension())
        throw InvalidArgument("starting point has " + std::to_string(x0.size()) +
                              " entries, objective expects " + std::to_string(obj.dimension()));
}

// Shared loop for the projected-gradient baselines.
template <class Project, class Measure>
SolveReport projected_gradient(const SmoothObjective &obj, const BaselineConfig &cfg,
                               const Vector &x0, Project project, Measure measure) {
    cfg.validate();
    check_start(obj, x0);
    SolveReport report;
    report.beta = step_beta(obj, cfg.beta_factor);

    Vector x = x0;
    Vector g, g_next;
    double f = obj.value_and_gradient(x, g);
    check_finite(f, "objective at the starting point");
    report.initial_objective = f;

    for (Index k = 0; k < cfg.max_iter; ++k) {
        check_finite(g, "gradient");
        Vector next = project(Vector(x - g / report.beta));
        const double displacement = (next - x).norm();
        const double f_next = obj.value_and_gradient(next, g_next);
        check_finite(f_next, "objective");
        if (cfg.record_trace) {
            TraceEntry entry;
            entry.objective = f_next;
            entry.displacement = displacement;
            entry.lp_norm = measure(next);
            report.trace.push_back(entry);
        }
        x = std::move(next);
        g.swap(g_next);
        f = f_next;
        report.iterations = k + 1;
        if (displacement <= cfg.tol) {
            report.status = SolveStatus::Converged;
            break;
        }
    }
    report.x_final = std::move(x);
    report.final_objective = f;
    return report;
}

} // namespace

void SolverConfig::validate() const {
    require(p > 0.0 && p < 1.0, "p must lie in (0,1)");
    require(r > 0.0 && std::isfinite(r), "r must be positive");
    require(c > 0.0 && c < 1.0, "c must lie in (0,1)");
    require(beta_factor > 1.0 && std::isfinite(beta_factor), "beta_factor must exceed 1");
    require(tol > 0.0, "tol must be positive");
    require(boundary_tol > 0.0, "boundary_tol must be positive");
    require(max_iter >= 1, "max_iter must be at least 1");
}

void BaselineConfig::validate() const {
    require(beta_factor > 1.0 && std::isfinite(beta_factor), "beta_factor must exceed 1");
    require(tol > 0.0, "tol must be positive");
    require(max_iter >= 1, "max_iter must be at least 1");
}

std::string_view to_string(Branch branch) {
    return branch == Branch::Boundary ? "boundary" : "interior";
}

std::string_view to_string(SolveStatus status) {
    return status == SolveStatus::Converged ? "converged" : "max_iter_reached";
}

double lp_norm_p(const Vector &x, double p) {
    require(p > 0.0 && p < 1.0, "p must lie in (0,1)");
    double sum = 0.0;
    for (Index i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) sum += std::pow(std::abs(x[i]), p);
    return sum;
}

std::vector<Index> support_set(const Vector &x) {
    std::vector<Index> out;
    for (Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > kZeroThreshold) out.push_back(i);
    return out;
}

std::vector<Index> zero_set(const Vector &x) {
    std::vector<Index> out;
    for (Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) <= kZeroThreshold) out.push_back(i);
    return out;
}

namespace {

// Quantities of x^k reused by every piece of the subproblem construction.
struct IterateState {
    double norm = 0.0;          // ||x||_p^p
    std::vector<Index> zeros;   // A(x)
};

IterateState iterate_state(const Vector &x, double p) {
    return IterateState{lp_norm_p(x, p), zero_set(x)};
}

Branch classify(const IterateState &s, const SolverConfig &cfg) {
    if (s.norm > cfg.r + cfg.boundary_tol)
        throw InvalidArgument("iterate is infeasible: ||x||_p^p = " + std::to_string(s.norm) +
                              " exceeds r = " + std::to_string(cfg.r));
    return std::abs(cfg.r - s.norm) <= cfg.boundary_tol ? Branch::Boundary : Branch::Interior;
}

double epsilon_of(const IterateState &s, const SolverConfig &cfg) {
    const double residual = cfg.r - s.norm;
    if (residual < -cfg.boundary_tol)
        throw InvalidArgument("epsilon_k: negative constraint residual " +
                              std::to_string(residual));
    if (residual <= 0.0) return 0.0;
    const double zeros = static_cast<double>(s.zeros.size());
    return cfg.c * std::pow(residual / (zeros + 1.0), 1.0 / cfg.p);
}

double radius_of(const IterateState &s, double eps, const SolverConfig &cfg) {
    const double zeros = static_cast<double>(s.zeros.size());
    const double rk = (cfg.r + (cfg.p - 1.0) * s.norm - zeros * std::pow(eps, cfg.p)) / cfg.p;
    const double lower = (1.0 - std::pow(cfg.c, cfg.p)) / cfg.p * (cfg.r - s.norm);
    if (!(rk > lower) || !(rk > 0.0))
        throw SolverError("radius_k: subproblem radius " + std::to_string(rk) +
                          " does not exceed its lower bound " + std::to_string(lower));
    return rk;
}

Subproblem make_subproblem(const Vector &x_k, const Vector &grad, double beta,
                           const SolverConfig &cfg, const IterateState &state) {
    Subproblem sub;
    sub.branch = classify(state, cfg);
    sub.step_point = x_k - grad / beta;

    const Index n = x_k.size();
    sub.ball.weights = Vector::Ones(n);
    for (Index i = 0; i < n; ++i)
        if (std::abs(x_k[i]) > kZeroThreshold)
            sub.ball.weights[i] = std::pow(std::abs(x_k[i]), cfg.p - 1.0);

    if (sub.branch == Branch::Boundary) {
        // Linearize on the support, keep zeros at zero.
        sub.ball.radius = cfg.r;
        sub.ball.fixed_zero = state.zeros;
        return sub;
    }

    // Interior: zeros get the finite weight epsilon^{p-1}. If that weight
    // overflows the coordinate is pinned instead.
    sub.epsilon = epsilon_of(state, cfg);
    sub.ball.radius = radius_of(state, sub.epsilon, cfg);
    const double zero_weight = std::pow(sub.epsilon, cfg.p - 1.0);
    for (Index i : state.zeros) {
        if (std::isfinite(zero_weight))
            sub.ball.weights[i] = zero_weight;
        else
            sub.ball.fixed_zero.push_back(i);
    }
    return sub;
}

} // namespace

Branch classify_iterate(const Vector &x, const SolverConfig &cfg) {
    return classify(iterate_state(x, cfg.p), cfg);
}

double epsilon_k(const Vector &x, const SolverConfig &cfg) {
    return epsilon_of(iterate_state(x, cfg.p), cfg);
}

double radius_k(const Vector &x, double eps, const SolverConfig &cfg) {
    return radius_of(iterate_state(x, cfg.p), eps, cfg);
}

Subproblem build_subproblem(const Vector &x_k, const Vector &grad, double beta,
                            const SolverConfig &cfg) {
    if (grad.size() != x_k.size()) throw InvalidArgument("build_subproblem: dimension mismatch");
    if (!(beta > 0.0)) throw InvalidArgument("build_subproblem: beta must be positive");
    return make_subproblem(x_k, grad, beta, cfg, iterate_state(x_k, cfg.p));
}

SolveReport ir1b_solve(const SmoothObjective &obj, const SolverConfig &cfg, const Vector &x0) {
    cfg.validate();
    check_start(obj, x0);

    Vector x = x0;
    snap_to_zero(x);
    IterateState state = iterate_state(x, cfg.p);
    classify(state, cfg); // rejects infeasible starts

    SolveReport report;
    report.beta = step_beta(obj, cfg.beta_factor);
    Vector g;
    double f = obj.value_and_gradient(x, g);
    check_finite(f, "objective at the starting point");
    report.initial_objective = f;

    Vector g_next;
    for (Index k = 0; k < cfg.max_iter; ++k) {
        check_finite(g, "gradient");
        const Subproblem sub = make_subproblem(x, g, report.beta, cfg, state);
        ProjectionResult proj = project_weighted_l1_detailed(sub.step_point, sub.ball);
        Vector next = std::move(proj.x);
        snap_to_zero(next);

        const double lambda = multiplier_estimate(x, next, g, report.beta, sub.ball, cfg.p);
        const double displacement = (next - x).norm();
        const double f_next = obj.value_and_gradient(next, g_next);
        check_finite(f_next, "objective");
        IterateState next_state = iterate_state(next, cfg.p);

        if (cfg.record_trace) {
            TraceEntry entry;
            entry.objective = f_next;
            entry.displacement = displacement;
            entry.lp_norm = next_state.norm;
            entry.branch = sub.branch;
            entry.epsilon = sub.epsilon;
            entry.lambda = lambda;
            entry.pinned = static_cast<Index>(proj.pinned.size());
            report.trace.push_back(entry);
        }

        x = std::move(next);
        g.swap(g_next);
        state = std::move(next_state);
        f = f_next;
        report.lambda_final = lambda;
        report.iterations = k + 1;
        if (displacement <= cfg.tol) {
            report.status = SolveStatus::Converged;
            break;
        }
    }
    report.x_final = std::move(x);
    report.final_objective = f;
    return report;
}

SolveReport iht_solve(const SmoothObjective &obj, Index sparsity, const BaselineConfig &cfg,
                      const Vector &x0) {
    require(sparsity >= 1 && sparsity <= obj.dimension(),
            "sparsity must lie in [1, " + std::to_string(obj.dimension()) + "]");
    return projected_gradient(
        obj, cfg, x0, [&](const Vector &v) { return hard_threshold(v, sparsity); },
        [](const Vector &x) { return static_cast<double>((x.array() != 0.0).count()); });
}

SolveReport gpm_solve(const SmoothObjective &obj, double radius, const BaselineConfig &cfg,
                      const Vector &x0) {
    require(radius > 0.0, "radius must be positive");
    return projected_gradient(
        obj, cfg, x0, [&](const Vector &v) { return project_l1(v, radius); },
        [](const Vector &x) { return x.lpNorm<1>(); });
}

Vector default_init_recovery(Index n, Index d, double p, std::mt19937_64 &rng) {
    require(n >= 1, "n must be at least 1");
    require(d >= 1, "d must be at least 1");
    require(p > 0.0 && p < 1.0, "p must lie in (0,1)");
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Vector nu(n);
    double total = 0.0;
    while (total <= 0.0) {
        for (Index i = 0; i < n; ++i) nu[i] = uniform(rng);
        total = nu.sum();
    }
    Vector x0(n);
    for (Index i = 0; i < n; ++i)
        x0[i] = 0.9 * std::pow(static_cast<double>(d) * nu[i] / total, 1.0 / p);
    return x0;
}

} // namespace lpball
