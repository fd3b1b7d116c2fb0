#pragma once

#include <lpball/types.hpp>

#include <functional>

namespace lpball {

// Smooth function with a known bound on the Lipschitz constant of its
// gradient. Implementations are immutable once constructed.
class SmoothObjective {
public:
    virtual ~SmoothObjective() = default;

    virtual Index dimension() const = 0;
    virtual double value(const Vector &x) const = 0;
    virtual Vector gradient(const Vector &x) const = 0;
    virtual double lipschitz() const = 0;

    // Returns f(x) and writes the gradient into grad; overridden where the
    // two share work.
    virtual double value_and_gradient(const Vector &x, Vector &grad) const {
        grad = gradient(x);
        return value(x);
    }
};

struct LeastSquaresData {
    Matrix A;
    Vector y;
};

// Rows of X are samples. Labels are stored as -1 / +1.
struct LogisticData {
    Matrix X;
    Vector labels;

    Index samples() const { return X.rows(); }
    Index features() const { return X.cols(); }
};

struct PowerIterationResult {
    double lambda_max = 0.0;
    Index iterations = 0;
    bool converged = false;
};

inline constexpr double kPowerIterationTol = 1e-8;
inline constexpr Index kPowerIterationMaxIter = 5000;

// Largest eigenvalue of a symmetric positive semidefinite operator.
// Starts from the normalized all-ones vector and stops once the Rayleigh
// quotient changes by less than tol relative; converged=false flags an
// estimate returned after max_iter.
PowerIterationResult power_iteration_lambda_max(const std::function<Vector(const Vector &)> &apply,
                                                Index n, double tol = kPowerIterationTol,
                                                Index max_iter = kPowerIterationMaxIter);

// f(x) = 1/2 ||A x - y||^2, L = lambda_max(A^T A).
class LeastSquaresObjective final : public SmoothObjective {
public:
    explicit LeastSquaresObjective(LeastSquaresData data);

    Index dimension() const override { return data_.A.cols(); }
    double value(const Vector &x) const override;
    Vector gradient(const Vector &x) const override;
    double lipschitz() const override { return lipschitz_; }
    double value_and_gradient(const Vector &x, Vector &grad) const override;

    const LeastSquaresData &data() const { return data_; }

private:
    LeastSquaresData data_;
    double lipschitz_;
};

// f(theta) = sum_i log(1 + exp(-s_i theta^T x_i)), L = 0.25 lambda_max(X^T X).
// No intercept term.
class LogisticObjective final : public SmoothObjective {
public:
    explicit LogisticObjective(LogisticData data);

    Index dimension() const override { return data_.X.cols(); }
    double value(const Vector &theta) const override;
    Vector gradient(const Vector &theta) const override;
    double lipschitz() const override { return lipschitz_; }
    double value_and_gradient(const Vector &theta, Vector &grad) const override;

    const LogisticData &data() const { return data_; }

private:
    LogisticData data_;
    double lipschitz_;
};

LeastSquaresObjective least_squares_objective(LeastSquaresData data);
LogisticObjective logistic_objective(LogisticData data);

// log(1 + exp(-z)) without overflow.
double log1p_exp_neg(double z);

} // namespace lpball
