#pragma once

// Seeded family of least-squares and logistic instances shared by the
// solver property tests and the acceptance suite.

#include <lpball/objectives.hpp>
#include <lpball/solver.hpp>

#include "oracles.hpp"

#include <memory>
#include <random>
#include <string>
#include <vector>

namespace lpball::testing {

struct SuiteInstance {
    std::string name;
    std::unique_ptr<SmoothObjective> objective;
    SolverConfig cfg;
    Vector x0;
};

// count instances alternating least squares / logistic, n <= 256.
inline std::vector<SuiteInstance> make_suite(int count, std::uint64_t seed, double tol) {
    std::vector<SuiteInstance> suite;
    std::mt19937_64 rng(seed);
    const double ps[] = {0.3, 0.5, 0.7};
    const Index ls_dims[] = {32, 64, 128, 256};
    const Index lr_dims[] = {10, 20, 40};
    for (int k = 0; k < count; ++k) {
        SuiteInstance inst;
        inst.cfg.p = ps[k % 3];
        inst.cfg.tol = tol;
        if (k % 2 == 0) {
            const Index n = ls_dims[(k / 2) % 4];
            const Index m = n / 2;
            const Index d = std::max<Index>(2, n / 16);
            Vector x_true = Vector::Zero(n);
            for (Index j = 0; j < d; ++j) x_true[(j * 7 + k) % n] = (j % 2 == 0) ? 1.0 : -1.0;
            Matrix A = gaussian_matrix(m, n, rng);
            Vector y = A * x_true + 1e-2 * gaussian_vector(m, rng);
            inst.objective = std::make_unique<LeastSquaresObjective>(LeastSquaresData{A, y});
            inst.cfg.r = static_cast<double>(d);
            inst.x0 = default_init_recovery(n, d, inst.cfg.p, rng);
            inst.name = "ls_n" + std::to_string(n) + "_p" + std::to_string(inst.cfg.p);
        } else {
            const Index n = lr_dims[(k / 2) % 3];
            const Index m = 120;
            Matrix X = gaussian_matrix(m, n, rng);
            Vector w = gaussian_vector(n, rng);
            Vector labels(m);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (Index i = 0; i < m; ++i) {
                const double prob = 1.0 / (1.0 + std::exp(-X.row(i).dot(w)));
                labels[i] = u(rng) < prob ? 1.0 : -1.0;
            }
            inst.objective =
                std::make_unique<LogisticObjective>(LogisticData{std::move(X), std::move(labels)});
            inst.cfg.r = 1.0 + static_cast<double>(k % 5);
            inst.x0 = Vector::Zero(n);
            inst.name = "logistic_n" + std::to_string(n) + "_p" + std::to_string(inst.cfg.p);
        }
        suite.push_back(std::move(inst));
    }
    return suite;
}

} // namespace lpball::testing
