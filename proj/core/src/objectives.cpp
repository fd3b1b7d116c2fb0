#include <lpball/objectives.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace lpball {

PowerIterationResult power_iteration_lambda_max(const std::function<Vector(const Vector &)> &apply,
                                                Index n, double tol, Index max_iter) {
    if (n <= 0) throw InvalidArgument("power_iteration_lambda_max: dimension must be positive");
    if (!(tol > 0.0)) throw InvalidArgument("power_iteration_lambda_max: tol must be positive");
    if (max_iter < 1) throw InvalidArgument("power_iteration_lambda_max: max_iter must be at least 1");

    PowerIterationResult out;
    Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    double previous = 0.0;
    for (Index it = 1; it <= max_iter; ++it) {
        Vector mv = apply(v);
        const double rayleigh = v.dot(mv);
        const double norm = mv.norm();
        out.iterations = it;
        out.lambda_max = rayleigh;
        if (norm == 0.0) {
            // v lies in the null space; M may still be nonzero elsewhere but the
            // all-ones start cannot see it.
            out.converged = true;
            return out;
        }
        if (it > 1 && std::abs(rayleigh - previous) <= tol * std::abs(rayleigh)) {
            out.converged = true;
            return out;
        }
        previous = rayleigh;
        v = mv / norm;
    }
    return out;
}

namespace {

double estimate_lipschitz(const Matrix &M, double scale) {
    const auto result = power_iteration_lambda_max(
        [&](const Vector &v) -> Vector { return M.transpose() * (M * v); }, M.cols());
    return scale * result.lambda_max;
}

} // namespace

double log1p_exp_neg(double z) {
    // log(1 + e^{-z}) = max(-z, 0) + log1p(e^{-|z|})
    return std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

LeastSquaresObjective::LeastSquaresObjective(LeastSquaresData data) : data_(std::move(data)) {
    if (data_.A.rows() != data_.y.size())
        throw InvalidArgument("least squares: A has " + std::to_string(data_.A.rows()) +
                              " rows but y has " + std::to_string(data_.y.size()) + " entries");
    if (data_.A.cols() == 0) throw InvalidArgument("least squares: A has no columns");
    lipschitz_ = estimate_lipschitz(data_.A, 1.0);
}

double LeastSquaresObjective::value(const Vector &x) const {
    if (x.size() != dimension()) throw InvalidArgument("least squares: dimension mismatch");
    return 0.5 * (data_.A * x - data_.y).squaredNorm();
}

Vector LeastSquaresObjective::gradient(const Vector &x) const {
    if (x.size() != dimension()) throw InvalidArgument("least squares: dimension mismatch");
    return data_.A.transpose() * (data_.A * x - data_.y);
}

double LeastSquaresObjective::value_and_gradient(const Vector &x, Vector &grad) const {
    if (x.size() != dimension()) throw InvalidArgument("least squares: dimension mismatch");
    const Vector residual = data_.A * x - data_.y;
    grad.noalias() = data_.A.transpose() * residual;
    return 0.5 * residual.squaredNorm();
}

LogisticObjective::LogisticObjective(LogisticData data) : data_(std::move(data)) {
    if (data_.X.rows() != data_.labels.size())
        throw InvalidArgument("logistic: X has " + std::to_string(data_.X.rows()) +
                              " rows but there are " + std::to_string(data_.labels.size()) +
                              " labels");
    if (data_.X.cols() == 0) throw InvalidArgument("logistic: X has no columns");
    for (Index i = 0; i < data_.labels.size(); ++i) {
        const double s = data_.labels[i];
        if (s != 1.0 && s != -1.0)
            throw InvalidArgument("logistic: label " + std::to_string(i) +
                                  " is not -1 or +1");
    }
    lipschitz_ = estimate_lipschitz(data_.X, 0.25);
}

double LogisticObjective::value(const Vector &theta) const {
    if (theta.size() != dimension()) throw InvalidArgument("logistic: dimension mismatch");
    const Vector margins = (data_.X * theta).cwiseProduct(data_.labels);
    double sum = 0.0;
    for (Index i = 0; i < margins.size(); ++i) sum += log1p_exp_neg(margins[i]);
    return sum;
}

Vector LogisticObjective::gradient(const Vector &theta) const {
    Vector grad;
    value_and_gradient(theta, grad);
    return grad;
}

double LogisticObjective::value_and_gradient(const Vector &theta, Vector &grad) const {
    if (theta.size() != dimension()) throw InvalidArgument("logistic: dimension mismatch");
    const Vector margins = (data_.X * theta).cwiseProduct(data_.labels);
    // d/dz log(1 + e^{-z}) = -sigmoid(-z)
    Vector weights(margins.size());
    double sum = 0.0;
    for (Index i = 0; i < margins.size(); ++i) {
        const double z = margins[i];
        const double e = std::exp(-std::abs(z));
        sum += std::max(-z, 0.0) + std::log1p(e);
        const double sig_neg = z >= 0.0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
        weights[i] = -data_.labels[i] * sig_neg;
    }
    grad.noalias() = data_.X.transpose() * weights;
    return sum;
}

LeastSquaresObjective least_squares_objective(LeastSquaresData data) {
    return LeastSquaresObjective(std::move(data));
}

LogisticObjective logistic_objective(LogisticData data) {
    return LogisticObjective(std::move(data));
}

} // namespace lpball
