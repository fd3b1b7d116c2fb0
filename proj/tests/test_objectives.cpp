#include <lpball/objectives.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace lpball {
namespace {

double relative_error(const Vector &a, const Vector &b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

LogisticData random_logistic(Index m, Index n, std::mt19937_64 &rng) {
    LogisticData data{testing::gaussian_matrix(m, n, rng), Vector(m)};
    std::bernoulli_distribution coin(0.5);
    for (Index i = 0; i < m; ++i) data.labels[i] = coin(rng) ? 1.0 : -1.0;
    return data;
}

TEST(LeastSquares, IdentityExample) {
    const auto obj = least_squares_objective({Matrix::Identity(2, 2), Vector::Zero(2)});
    const Vector x = Vector::Ones(2);
    EXPECT_DOUBLE_EQ(obj.value(x), 1.0);
    EXPECT_EQ(obj.gradient(x), x);
    EXPECT_NEAR(obj.lipschitz(), 1.0, 1e-12);
    EXPECT_EQ(obj.dimension(), 2);
}

TEST(LeastSquares, DiagonalLipschitz) {
    Matrix A(2, 2);
    A << 2, 0, 0, 1;
    const auto obj = least_squares_objective({A, Vector::Zero(2)});
    EXPECT_NEAR(obj.lipschitz(), 4.0, 1e-7);
}

TEST(LeastSquares, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(21);
    const auto obj = least_squares_objective(
        {testing::gaussian_matrix(20, 50, rng), testing::gaussian_vector(20, rng)});
    for (int trial = 0; trial < 10; ++trial) {
        const Vector x = testing::gaussian_vector(50, rng);
        const Vector fd =
            testing::finite_difference_gradient([&](const Vector &z) { return obj.value(z); }, x);
        EXPECT_LE(relative_error(obj.gradient(x), fd), 1e-6);
    }
}

TEST(LeastSquares, FusedEvaluationMatches) {
    std::mt19937_64 rng(22);
    const auto obj = least_squares_objective(
        {testing::gaussian_matrix(15, 8, rng), testing::gaussian_vector(15, rng)});
    const Vector x = testing::gaussian_vector(8, rng);
    Vector g;
    EXPECT_NEAR(obj.value_and_gradient(x, g), obj.value(x), 1e-12);
    EXPECT_LE((g - obj.gradient(x)).norm(), 1e-12);
}

TEST(LeastSquares, RejectsMismatchedData) {
    EXPECT_THROW(least_squares_objective({Matrix::Identity(3, 2), Vector::Zero(2)}),
                 InvalidArgument);
    EXPECT_THROW(least_squares_objective({Matrix(0, 0), Vector(0)}), InvalidArgument);
    const auto obj = least_squares_objective({Matrix::Identity(2, 2), Vector::Zero(2)});
    EXPECT_THROW(obj.value(Vector::Zero(3)), InvalidArgument);
    EXPECT_THROW(obj.gradient(Vector::Zero(1)), InvalidArgument);
}

TEST(Logistic, ValueAndGradientAtZero) {
    std::mt19937_64 rng(23);
    const LogisticData data = random_logistic(12, 4, rng);
    const auto obj = logistic_objective(data);
    const Vector zero = Vector::Zero(4);
    EXPECT_NEAR(obj.value(zero), 12.0 * std::log(2.0), 1e-12);
    const Vector expected = -0.5 * data.X.transpose() * data.labels;
    EXPECT_LE((obj.gradient(zero) - expected).norm(), 1e-12);
}

TEST(Logistic, SingleSample) {
    Matrix X(1, 1);
    X << 1.0;
    const auto obj = logistic_objective({X, Vector::Ones(1)});
    for (double t : {-30.0, -1.0, 0.0, 2.0, 40.0}) {
        Vector theta(1);
        theta << t;
        EXPECT_NEAR(obj.value(theta), std::log1p(std::exp(-t)), 1e-14 * std::max(1.0, -t));
    }
}

TEST(Logistic, StableForLargeMargins) {
    Matrix X(2, 1);
    X << 1.0, -1.0;
    Vector labels(2);
    labels << 1.0, 1.0;
    const auto obj = logistic_objective({X, labels});
    Vector theta(1);
    theta << 1000.0;
    // One term vanishes, the other is ~1000.
    EXPECT_NEAR(obj.value(theta), 1000.0, 1e-9);
    const Vector g = obj.gradient(theta);
    EXPECT_TRUE(std::isfinite(g[0]));
    EXPECT_NEAR(g[0], 1.0, 1e-12);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(24);
    const auto obj = logistic_objective(random_logistic(30, 10, rng));
    for (int trial = 0; trial < 10; ++trial) {
        const Vector theta = testing::gaussian_vector(10, rng);
        const Vector fd = testing::finite_difference_gradient(
            [&](const Vector &z) { return obj.value(z); }, theta);
        EXPECT_LE(relative_error(obj.gradient(theta), fd), 1e-6);
    }
}

TEST(Logistic, LipschitzIsQuarterOfGramSpectrum) {
    std::mt19937_64 rng(25);
    const LogisticData data = random_logistic(25, 6, rng);
    const auto obj = logistic_objective(data);
    const auto eig = testing::jacobi_eigenvalues(data.X.transpose() * data.X);
    EXPECT_NEAR(obj.lipschitz(), 0.25 * eig.back(), 1e-6 * eig.back());
}

TEST(Logistic, RejectsBadLabels) {
    Matrix X = Matrix::Ones(3, 2);
    Vector labels(3);
    labels << 1, 0, -1;
    EXPECT_THROW(logistic_objective({X, labels}), InvalidArgument);
    EXPECT_THROW(logistic_objective({X, Vector::Ones(2)}), InvalidArgument);
}

TEST(Log1pExpNeg, MatchesDirectFormulaInSafeRange) {
    for (double z = -20.0; z <= 20.0; z += 0.5)
        EXPECT_NEAR(log1p_exp_neg(z), std::log1p(std::exp(-z)), 1e-13 * std::max(1.0, -z));
    EXPECT_NEAR(log1p_exp_neg(-800.0), 800.0, 1e-9);
    EXPECT_GE(log1p_exp_neg(800.0), 0.0);
}

// Descent-lemma inequality with L from lipschitz().
TEST(Objectives, QuadraticUpperBound) {
    std::mt19937_64 rng(26);
    const auto ls = least_squares_objective(
        {testing::gaussian_matrix(15, 10, rng), testing::gaussian_vector(15, rng)});
    const auto lr = logistic_objective(random_logistic(40, 10, rng));
    for (const SmoothObjective *obj : {static_cast<const SmoothObjective *>(&ls),
                                       static_cast<const SmoothObjective *>(&lr)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Vector x = testing::gaussian_vector(10, rng);
            const Vector d = testing::random_unit(10, rng);
            for (double h : {1e-2, 1e-3}) {
                const double gap =
                    std::abs(obj->value(x + h * d) - obj->value(x) - h * obj->gradient(x).dot(d));
                EXPECT_LE(gap, 0.5 * obj->lipschitz() * h * h * (1 + 1e-6) + 1e-12);
            }
        }
    }
}

TEST(PowerIteration, DiagonalAndIdentity) {
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 3.0;
    D(1, 1) = 1.0;
    auto res = power_iteration_lambda_max([&](const Vector &v) { return Vector(D * v); }, 2);
    EXPECT_NEAR(res.lambda_max, 3.0, 1e-8);
    EXPECT_TRUE(res.converged);

    res = power_iteration_lambda_max([](const Vector &v) { return v; }, 5);
    EXPECT_NEAR(res.lambda_max, 1.0, 1e-12);
}

TEST(PowerIteration, MatchesJacobiOracle) {
    std::mt19937_64 rng(27);
    for (Index n : {2, 5, 10, 30, 50}) {
        const Matrix A = testing::gaussian_matrix(n + 7, n, rng);
        const Matrix M = A.transpose() * A;
        const auto eig = testing::jacobi_eigenvalues(M);
        const auto res =
            power_iteration_lambda_max([&](const Vector &v) { return Vector(M * v); }, n);
        EXPECT_NEAR(res.lambda_max, eig.back(), 1e-6 * eig.back()) << "n=" << n;
    }
}

TEST(PowerIteration, FlagsNonConvergence) {
    std::mt19937_64 rng(28);
    const Matrix A = testing::gaussian_matrix(40, 30, rng);
    const Matrix M = A.transpose() * A;
    const auto res =
        power_iteration_lambda_max([&](const Vector &v) { return Vector(M * v); }, 30, 1e-15, 2);
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.iterations, 2);
    EXPECT_GT(res.lambda_max, 0.0);
}

TEST(PowerIteration, RejectsBadArguments) {
    const auto id = [](const Vector &v) { return v; };
    EXPECT_THROW(power_iteration_lambda_max(id, 0), InvalidArgument);
    EXPECT_THROW(power_iteration_lambda_max(id, 3, 0.0), InvalidArgument);
    EXPECT_THROW(power_iteration_lambda_max(id, 3, 1e-8, 0), InvalidArgument);
}

} // namespace
} // namespace lpball
