#include <lpball/optimality.hpp>

#include <algorithm>
#include <cmath>

namespace lpball {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0,1)");
}

// Least-squares multiplier for the scaled product-form conditions
// g_i x_i + lambda p |x_i|^p = 0 on the support, clipped to lambda >= 0.
double fit_boundary_multiplier(const Vector &x, const Vector &grad, double p) {
    double ab = 0.0, bb = 0.0;
    for (Index i : support_set(x)) {
        const double scale = std::max(1.0, std::abs(x[i]));
        const double a = grad[i] * x[i] / scale;
        const double b = p * std::pow(std::abs(x[i]), p) / scale;
        ab += a * b;
        bb += b * b;
    }
    if (bb == 0.0) return 0.0;
    return std::max(0.0, -ab / bb);
}

} // namespace

double multiplier_estimate(const Vector &x_prev, const Vector &x_next, const Vector &grad_prev,
                           double beta, const WeightedL1Ball &ball, double p) {
    const Index n = x_next.size();
    if (x_prev.size() != n || grad_prev.size() != n || ball.weights.size() != n)
        throw InvalidArgument("multiplier_estimate: dimension mismatch");
    check_p(p);

    const double weighted = ball.weighted_norm(x_next);
    if (weighted < ball.radius * (1.0 - 1e-9)) return 0.0;
    const double denominator = p * weighted;
    if (denominator < 1e-300) return 0.0;

    double numerator = 0.0;
    for (Index i = 0; i < n; ++i)
        numerator -= x_next[i] * grad_prev[i] + beta * x_next[i] * (x_next[i] - x_prev[i]);
    return std::max(0.0, numerator / denominator);
}

double boundary_kkt_residual(const Vector &x, double lambda, const Vector &grad, double p,
                             double r) {
    if (grad.size() != x.size()) throw InvalidArgument("boundary_kkt_residual: dimension mismatch");
    if (lambda < 0.0) throw InvalidArgument("boundary_kkt_residual: lambda must be nonnegative");
    double residual = std::abs(lp_norm_p(x, p) - r);
    for (Index i : support_set(x)) {
        const double term = grad[i] * x[i] + lambda * p * std::pow(std::abs(x[i]), p);
        residual = std::max(residual, std::abs(term) / std::max(1.0, std::abs(x[i])));
    }
    return residual;
}

double interior_kkt_residual(const Vector &x, const Vector &grad, double p, double r) {
    if (grad.size() != x.size()) throw InvalidArgument("interior_kkt_residual: dimension mismatch");
    if (!(lp_norm_p(x, p) < r)) throw InvalidArgument("interior_kkt_residual: x is not interior");
    return grad.size() == 0 ? 0.0 : grad.lpNorm<Eigen::Infinity>();
}

bool normal_cone_check(const Vector &x_bar, const Vector &eta, double p, double r, double tol,
                       double boundary_tol) {
    if (eta.size() != x_bar.size()) throw InvalidArgument("normal_cone_check: dimension mismatch");
    const double norm = lp_norm_p(x_bar, p);
    if (norm > r + boundary_tol) throw InvalidArgument("normal_cone_check: x_bar is infeasible");

    if (std::abs(norm - r) > boundary_tol)
        return eta.size() == 0 || eta.lpNorm<Eigen::Infinity>() <= tol;

    // Boundary: eta restricted to the support must be a nonnegative multiple
    // of the lp-norm gradient p |x_i|^{p-1} sgn(x_i); zero coordinates are free.
    const std::vector<Index> support = support_set(x_bar);
    double dot = 0.0, nn = 0.0;
    for (Index i : support) {
        const double normal = p * std::pow(std::abs(x_bar[i]), p - 1.0) * sign(x_bar[i]);
        dot += eta[i] * normal;
        nn += normal * normal;
    }
    const double mu = nn > 0.0 ? std::max(0.0, dot / nn) : 0.0;
    for (Index i : support) {
        const double normal = p * std::pow(std::abs(x_bar[i]), p - 1.0) * sign(x_bar[i]);
        if (std::abs(eta[i] - mu * normal) > tol) return false;
    }
    return true;
}

StationarityReport stationarity_report(const Vector &x, const SmoothObjective &obj, double p,
                                       double r, double boundary_tol) {
    check_p(p);
    if (x.size() != obj.dimension()) throw InvalidArgument("stationarity_report: dimension mismatch");
    if (!(boundary_tol > 0.0)) throw InvalidArgument("boundary_tol must be positive");

    SolverConfig cfg;
    cfg.p = p;
    cfg.r = r;
    cfg.boundary_tol = boundary_tol;

    StationarityReport report;
    report.point_case = classify_iterate(x, cfg);
    report.feasibility_gap = lp_norm_p(x, p) - r;
    const Vector grad = obj.gradient(x);

    if (report.point_case == Branch::Boundary) {
        report.lambda = fit_boundary_multiplier(x, grad, p);
        report.residual = boundary_kkt_residual(x, report.lambda, grad, p, r);
    } else {
        report.lambda = 0.0;
        report.residual = interior_kkt_residual(x, grad, p, r);
    }
    return report;
}

} // namespace lpball
