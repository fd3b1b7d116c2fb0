#pragma once

#include <lpball/types.hpp>

#include <vector>

namespace lpball {

// Feasible region {x : sum_i w_i |x_i| <= radius, x_i = 0 for i in fixed_zero}.
struct WeightedL1Ball {
    Vector weights;
    double radius = 1.0;
    std::vector<Index> fixed_zero;

    // Throws InvalidArgument if the ball invariants do not hold.
    void validate() const;

    // sum_i w_i |x_i| over the coordinates not in fixed_zero.
    double weighted_norm(const Vector &x) const;
};

// Result of a weighted projection together with the threshold that
// produced it (x_i = sgn(v_i) max(|v_i| - theta w_i, 0)).
struct ProjectionResult {
    Vector x;
    double theta = 0.0;
    // Coordinates zeroed by the weight overflow guard, in addition to
    // ball.fixed_zero.
    std::vector<Index> pinned;
};

// Weights at or above this multiple of the smallest free weight are
// treated as pinning their coordinate to zero.
inline constexpr double kWeightOverflowRatio = 1e12;

// Exact Euclidean projection onto a weighted l1 ball by sorting the
// breakpoints |v_i| / w_i. O(n log n).
ProjectionResult project_weighted_l1_detailed(const Vector &v, const WeightedL1Ball &ball);
Vector project_weighted_l1(const Vector &v, const WeightedL1Ball &ball);

// Projection onto the unweighted l1 ball of the given radius.
Vector project_l1(const Vector &v, double radius);

// Keeps the k largest-magnitude entries. Ties go to the lower index.
Vector hard_threshold(const Vector &v, Index k);

// Same projection as project_weighted_l1 found by bisection on theta until
// |g(theta)| <= tol * radius. Slow; meant as a cross-check.
Vector bisection_oracle_project(const Vector &v, const WeightedL1Ball &ball, double tol);

} // namespace lpball
