#pragma once

#include <lpball/objectives.hpp>
#include <lpball/projection.hpp>
#include <lpball/types.hpp>

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lpball {

struct SolverConfig {
    double p = 0.5;
    double r = 1.0;
    double c = 0.95;
    double beta_factor = 1.1;
    double tol = 1e-5;
    double boundary_tol = 1e-8;
    Index max_iter = 100000;
    std::uint64_t seed = 0;
    bool record_trace = true;

    // Throws InvalidArgument naming the first violated constraint.
    void validate() const;
};

// Settings shared by the IHT and GPM baselines.
struct BaselineConfig {
    double beta_factor = 1.1;
    double tol = 1e-5;
    Index max_iter = 100000;
    bool record_trace = true;

    void validate() const;
};

enum class Branch { Boundary, Interior };
enum class SolveStatus { Converged, MaxIterReached };

std::string_view to_string(Branch branch);
std::string_view to_string(SolveStatus status);

// One record per outer iteration k, describing the step x^k -> x^{k+1}.
struct TraceEntry {
    double objective = 0.0;    // f(x^{k+1})
    double displacement = 0.0; // ||x^{k+1} - x^k||_2
    double lp_norm = 0.0;      // ||x^{k+1}||_p^p
    Branch branch = Branch::Interior;
    double epsilon = 0.0;      // epsilon^k, interior branch only
    double lambda = 0.0;       // multiplier estimate lambda^{k+1}
    Index pinned = 0;          // coordinates zeroed by the weight overflow guard
};

struct SolveReport {
    Vector x_final;
    double lambda_final = 0.0;
    SolveStatus status = SolveStatus::MaxIterReached;
    Index iterations = 0;
    double initial_objective = 0.0;
    double final_objective = 0.0;
    double beta = 0.0;
    std::vector<TraceEntry> trace;
};

// sum_i |x_i|^p.
double lp_norm_p(const Vector &x, double p);

// Indices with |x_i| > kZeroThreshold, and their complement.
std::vector<Index> support_set(const Vector &x);
std::vector<Index> zero_set(const Vector &x);

Branch classify_iterate(const Vector &x, const SolverConfig &cfg);

// c ((r - ||x||_p^p) / (|A(x)| + 1))^(1/p); zero on the boundary.
double epsilon_k(const Vector &x, const SolverConfig &cfg);

// (1/p)(r + (p - 1)||x||_p^p - |A(x)| eps^p). Throws SolverError if the
// result does not exceed ((1 - c^p)/p)(r - ||x||_p^p).
double radius_k(const Vector &x, double eps, const SolverConfig &cfg);

struct Subproblem {
    WeightedL1Ball ball;
    Vector step_point; // x^k - grad / beta
    Branch branch = Branch::Interior;
    double epsilon = 0.0;
};

// Builds the weighted l1 ball approximating the lp ball at x_k. Minimizing
// the proximal linearization of f over that ball is the projection of
// step_point onto it.
Subproblem build_subproblem(const Vector &x_k, const Vector &grad, double beta,
                            const SolverConfig &cfg);

// Iteratively reweighted l1-ball method for min f(x) s.t. ||x||_p^p <= r.
SolveReport ir1b_solve(const SmoothObjective &obj, const SolverConfig &cfg, const Vector &x0);

// Iterative hard thresholding onto {x : ||x||_0 <= sparsity}.
SolveReport iht_solve(const SmoothObjective &obj, Index sparsity, const BaselineConfig &cfg,
                      const Vector &x0);

// Gradient projection onto the l1 ball of the given radius.
SolveReport gpm_solve(const SmoothObjective &obj, double radius, const BaselineConfig &cfg,
                      const Vector &x0);

// x0_i = 0.9 (d nu_i / ||nu||_1)^(1/p) with nu uniform on [0,1)^n, so that
// ||x0||_p^p = 0.9^p d.
Vector default_init_recovery(Index n, Index d, double p, std::mt19937_64 &rng);

} // namespace lpball
