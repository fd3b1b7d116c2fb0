#pragma once

#include <lpball/objectives.hpp>
#include <lpball/projection.hpp>
#include <lpball/solver.hpp>
#include <lpball/types.hpp>

namespace lpball {

struct StationarityReport {
    Branch point_case = Branch::Interior;
    double lambda = 0.0;
    double residual = 0.0;
    double feasibility_gap = 0.0; // ||x||_p^p - r
};

// Closed-form multiplier of the weighted l1-ball constraint at the
// subproblem solution x_next, expressed in the lp-ball scaling (the ball
// constraint is multiplied by p). Zero when the constraint is inactive.
double multiplier_estimate(const Vector &x_prev, const Vector &x_next, const Vector &grad_prev,
                           double beta, const WeightedL1Ball &ball, double p);

// max(| ||x||_p^p - r |, max_{i in I(x)} |g_i x_i + lambda p |x_i|^p| / max(1, |x_i|)).
double boundary_kkt_residual(const Vector &x, double lambda, const Vector &grad, double p,
                             double r);

// ||grad||_inf; x must lie strictly inside the ball.
double interior_kkt_residual(const Vector &x, const Vector &grad, double p, double r);

// Membership of eta in the Frechet normal cone of the lp ball at x_bar,
// up to tol.
bool normal_cone_check(const Vector &x_bar, const Vector &eta, double p, double r, double tol,
                       double boundary_tol = 1e-8);

StationarityReport stationarity_report(const Vector &x, const SmoothObjective &obj, double p,
                                       double r, double boundary_tol = 1e-8);

} // namespace lpball
