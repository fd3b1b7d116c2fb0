#include <lpball/projection.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lpball {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Coordinates that take part in the projection after applying fixed_zero
// and the overflow guard.
struct FreeSet {
    std::vector<char> free;
    std::vector<Index> pinned;
};

FreeSet free_coordinates(const WeightedL1Ball &ball) {
    const Index n = ball.weights.size();
    FreeSet out;
    out.free.assign(static_cast<std::size_t>(n), 1);
    for (Index i : ball.fixed_zero) out.free[static_cast<std::size_t>(i)] = 0;

    double w_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i)
        if (out.free[static_cast<std::size_t>(i)]) w_min = std::min(w_min, ball.weights[i]);
    if (!std::isfinite(w_min)) return out;

    const double cap = kWeightOverflowRatio * w_min;
    for (Index i = 0; i < n; ++i) {
        if (out.free[static_cast<std::size_t>(i)] && ball.weights[i] >= cap) {
            out.free[static_cast<std::size_t>(i)] = 0;
            out.pinned.push_back(i);
        }
    }
    return out;
}

void check_input(const Vector &v, const WeightedL1Ball &ball) {
    if (v.size() != ball.weights.size())
        throw InvalidArgument("projection: dimension mismatch (point has " +
                              std::to_string(v.size()) + " entries, weights have " +
                              std::to_string(ball.weights.size()) + ")");
    ball.validate();
}

Vector soft_threshold(const Vector &v, const Vector &w, const std::vector<char> &free,
                      double theta) {
    Vector x = Vector::Zero(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        if (!free[static_cast<std::size_t>(i)]) continue;
        x[i] = sign(v[i]) * std::max(std::abs(v[i]) - theta * w[i], 0.0);
    }
    return x;
}

} // namespace

void WeightedL1Ball::validate() const {
    const Index n = weights.size();
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw InvalidArgument("weighted l1 ball: radius must be positive and finite");
    std::vector<char> fixed(static_cast<std::size_t>(n), 0);
    for (Index i : fixed_zero) {
        if (i < 0 || i >= n)
            throw InvalidArgument("weighted l1 ball: fixed_zero index " + std::to_string(i) +
                                  " out of range");
        fixed[static_cast<std::size_t>(i)] = 1;
    }
    for (Index i = 0; i < n; ++i) {
        if (fixed[static_cast<std::size_t>(i)]) continue;
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw InvalidArgument("weighted l1 ball: weight " + std::to_string(i) +
                                  " must be positive and finite");
    }
}

double WeightedL1Ball::weighted_norm(const Vector &x) const {
    std::vector<char> fixed(static_cast<std::size_t>(weights.size()), 0);
    for (Index i : fixed_zero) fixed[static_cast<std::size_t>(i)] = 1;
    double sum = 0.0;
    for (Index i = 0; i < weights.size(); ++i)
        if (!fixed[static_cast<std::size_t>(i)]) sum += weights[i] * std::abs(x[i]);
    return sum;
}

ProjectionResult project_weighted_l1_detailed(const Vector &v, const WeightedL1Ball &ball) {
    check_input(v, ball);
    const Vector &w = ball.weights;
    const double radius = ball.radius;

    FreeSet fs = free_coordinates(ball);
    ProjectionResult result;
    result.pinned = fs.pinned;

    double inside = 0.0;
    std::vector<Index> candidates;
    for (Index i = 0; i < v.size(); ++i) {
        if (!fs.free[static_cast<std::size_t>(i)] || v[i] == 0.0) continue;
        inside += w[i] * std::abs(v[i]);
        candidates.push_back(i);
    }
    if (candidates.empty() || inside <= radius) {
        result.x = soft_threshold(v, w, fs.free, 0.0);
        return result;
    }

    // Breakpoints |v_i| / w_i in decreasing order; theta lies between two
    // consecutive breakpoints and solves sum_{active} w_i (|v_i| - theta w_i) = R.
    std::vector<double> bp(static_cast<std::size_t>(v.size()), 0.0);
    for (Index i : candidates) bp[static_cast<std::size_t>(i)] = std::abs(v[i]) / w[i];
    std::sort(candidates.begin(), candidates.end(), [&](Index a, Index b) {
        return bp[static_cast<std::size_t>(a)] > bp[static_cast<std::size_t>(b)];
    });

    double s1 = 0.0, s2 = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const Index i = candidates[k];
        s1 += w[i] * std::abs(v[i]);
        s2 += w[i] * w[i];
        theta = (s1 - radius) / s2;
        if (k + 1 == candidates.size() ||
            theta >= bp[static_cast<std::size_t>(candidates[k + 1])])
            break;
    }
    theta = std::max(theta, 0.0);

    Vector x = soft_threshold(v, w, fs.free, theta);
    // Rounding can leave the weighted norm a few ulps above R; a Newton
    // step on the (locally linear) active set removes it.
    for (int pass = 0; pass < 4; ++pass) {
        double sum = 0.0, active_s2 = 0.0;
        for (Index i : candidates) {
            sum += w[i] * std::abs(x[i]);
            if (x[i] != 0.0) active_s2 += w[i] * w[i];
        }
        if (sum <= radius || active_s2 == 0.0) break;
        theta += (sum - radius) / active_s2;
        x = soft_threshold(v, w, fs.free, theta);
    }
    result.x = std::move(x);
    result.theta = theta;
    return result;
}

Vector project_weighted_l1(const Vector &v, const WeightedL1Ball &ball) {
    return project_weighted_l1_detailed(v, ball).x;
}

Vector project_l1(const Vector &v, double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("project_l1: radius must be positive");
    return project_weighted_l1(v, WeightedL1Ball{Vector::Ones(v.size()), radius, {}});
}

Vector hard_threshold(const Vector &v, Index k) {
    if (k < 1 || k > v.size())
        throw InvalidArgument("hard_threshold: k must lie in [1, " + std::to_string(v.size()) +
                              "], got " + std::to_string(k));
    std::vector<Index> order(static_cast<std::size_t>(v.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return std::abs(v[a]) > std::abs(v[b]); });
    Vector x = Vector::Zero(v.size());
    for (Index j = 0; j < k; ++j) x[order[static_cast<std::size_t>(j)]] = v[order[static_cast<std::size_t>(j)]];
    return x;
}

Vector bisection_oracle_project(const Vector &v, const WeightedL1Ball &ball, double tol) {
    check_input(v, ball);
    if (!(tol > 0.0)) throw InvalidArgument("bisection_oracle_project: tol must be positive");
    const Vector &w = ball.weights;
    FreeSet fs = free_coordinates(ball);

    auto excess = [&](double theta) {
        double g = -ball.radius;
        for (Index i = 0; i < v.size(); ++i)
            if (fs.free[static_cast<std::size_t>(i)])
                g += w[i] * std::max(std::abs(v[i]) - theta * w[i], 0.0);
        return g;
    };

    if (excess(0.0) <= 0.0) return soft_threshold(v, w, fs.free, 0.0);

    double lo = 0.0, hi = 0.0;
    for (Index i = 0; i < v.size(); ++i)
        if (fs.free[static_cast<std::size_t>(i)]) hi = std::max(hi, std::abs(v[i]) / w[i]);

    double theta = 0.5 * (lo + hi);
    for (int it = 0; it < 4000; ++it) {
        theta = 0.5 * (lo + hi);
        const double g = excess(theta);
        if (std::abs(g) <= tol * ball.radius) break;
        if (g > 0.0)
            lo = theta;
        else
            hi = theta;
        if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
    }
    return soft_threshold(v, w, fs.free, theta);
}

} // namespace lpball
