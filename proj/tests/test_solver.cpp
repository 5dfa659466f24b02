#include <catch2/catch_amalgamated.hpp>

#include "adenet/solver.hpp"
#include "test_util.hpp"

using namespace adenet;

TEST_CASE("coordinate_update soft-threshold cases") {
    REQUIRE(coordinate_update(5.0, 1.0, 0.0) == 5.0);
    REQUIRE(coordinate_update(1.0, 2.0, 1.0) == 0.0);
    REQUIRE(coordinate_update(-3.0, 2.0, 1.0) == -1.0);
    REQUIRE_THROWS_AS(coordinate_update(1.0, 0.0, 1.0), DegenerateError);
    REQUIRE_THROWS_AS(coordinate_update(1.0, -1.0, 1.0), DegenerateError);
}

TEST_CASE("coordinate_update minimizes the scalar criterion") {
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const double z = 3.0 * rng.normal();
        const double denom = 0.1 + std::abs(rng.normal());
        const double thr = std::abs(rng.normal());
        const double b = coordinate_update(z, denom, thr);
        const auto crit = [&](double t) {
            return -2.0 * z * t + denom * t * t + 2.0 * thr * std::abs(t);
        };
        const double fb = crit(b);
        for (double step : {1e-4, 1e-2, 0.5}) {
            REQUIRE(fb <= crit(b + step) + 1e-12);
            REQUIRE(fb <= crit(b - step) + 1e-12);
        }
    }
}

TEST_CASE("zero response gives the zero fit") {
    Rng rng(9);
    Dataset data = testutil::random_dataset(10, 4, rng);
    data.y.setZero();
    const FitResult fit = weighted_enet_fit(data, Penalty::unit(0.5, 0.3));
    REQUIRE(fit.beta.isZero(0.0));
    REQUIRE(fit.active_set.empty());
    REQUIRE(fit.converged);
}

TEST_CASE("orthonormal-in-scale design reduces to the lasso for any lambda2") {
    Rng rng(31);
    Dataset data = testutil::orthonormal_in_scale_dataset(24, 5, rng);
    const double n = static_cast<double>(data.n());
    const Eigen::VectorXd xty = data.X.transpose() * data.y;
    const double lambda1 = 0.8 * xty.cwiseAbs().maxCoeff();

    Eigen::VectorXd expected(5);
    for (int j = 0; j < 5; ++j) expected[j] = soft_threshold(xty[j], lambda1 / 2.0) / n;

    Eigen::VectorXd first;
    for (double lambda2 : {0.0, 1.0, 100.0}) {
        const FitResult fit = weighted_enet_fit(data, Penalty::unit(lambda1, lambda2));
        REQUIRE(testutil::max_abs_diff(fit.beta, expected) <= 1e-10);
        if (lambda2 == 0.0) first = fit.beta;
        else REQUIRE(testutil::max_abs_diff(fit.beta, first) <= 1e-10);
    }
}

TEST_CASE("rescaling applies the (1 + lambda2/n) prefactor elementwise") {
    Rng rng(13);
    Dataset data = testutil::random_dataset(15, 4, rng);
    const Penalty penalty = Penalty::unit(0.4, 2.5);
    const FitResult fit = weighted_enet_fit(data, penalty);
    const double pref = 1.0 + 2.5 / 15.0;
    REQUIRE(testutil::max_abs_diff(fit.beta, pref * fit.beta_raw) <= 1e-14);

    SolverConfig raw;
    raw.rescale = false;
    const FitResult unscaled = weighted_enet_fit(data, penalty, raw);
    REQUIRE(testutil::max_abs_diff(unscaled.beta, unscaled.beta_raw) == 0.0);
}

TEST_CASE("objective is nonincreasing across sweeps") {
    Rng rng(17);
    Dataset data = testutil::random_dataset(30, 8, rng);
    // correlate columns to force several sweeps
    for (int j = 1; j < 8; ++j) data.X.col(j) = 0.9 * data.X.col(j - 1) + 0.1 * data.X.col(j);
    data = center(std::move(data));
    SolverConfig config;
    config.track_objective = true;
    const FitResult fit = weighted_enet_fit(data, Penalty::unit(0.7, 0.1), config);
    REQUIRE(fit.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
        REQUIRE(fit.objective_trace[i] <=
                fit.objective_trace[i - 1] +
                    1e-12 * std::max(1.0, std::abs(fit.objective_trace[i - 1])));
}

TEST_CASE("kkt_check on the analytic orthonormal solution") {
    Rng rng(23);
    Dataset data = testutil::orthonormal_in_scale_dataset(20, 4, rng);
    const double n = static_cast<double>(data.n());
    const Eigen::VectorXd xty = data.X.transpose() * data.y;
    const Penalty penalty = Penalty::unit(0.6 * xty.cwiseAbs().maxCoeff(), 3.0);

    Eigen::VectorXd beta(4);
    for (int j = 0; j < 4; ++j)
        beta[j] = soft_threshold(xty[j], penalty.lambda1 / 2.0) / (n + penalty.lambda2);
    REQUIRE(kkt_check(data, penalty, beta) <= 1e-10);

    // perturbing an active coordinate must register as suboptimal
    int active = -1;
    for (int j = 0; j < 4; ++j)
        if (beta[j] != 0.0) active = j;
    REQUIRE(active >= 0);
    Eigen::VectorXd bad = beta;
    bad[active] += 0.1;
    REQUIRE(kkt_check(data, penalty, bad) > 1e-3);
}

TEST_CASE("converged fits pass the scaled KKT check") {
    Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        Dataset data = testutil::random_dataset(20, 10, rng);
        Eigen::VectorXd w = Eigen::VectorXd::Ones(10);
        for (int j = 0; j < 10; ++j) w[j] = 0.25 + rng.uniform01();
        const Penalty penalty{1.3, 0.7, w};
        const FitResult fit = weighted_enet_fit(data, penalty);
        REQUIRE(fit.converged);
        REQUIRE(fit.kkt_residual / fit.kkt_scale <= 1e-6);
        REQUIRE(kkt_check(data, penalty, fit.beta_raw) ==
                Catch::Approx(fit.kkt_residual).margin(1e-12));
    }
}

TEST_CASE("infinite weights freeze coordinates at exactly zero") {
    Rng rng(37);
    Dataset data = testutil::random_dataset(25, 6, rng);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(6);
    w[1] = kInf;
    w[4] = kInf;
    const FitResult fit = weighted_enet_fit(data, Penalty{0.2, 0.5, w});
    REQUIRE(fit.beta[1] == 0.0);
    REQUIRE(fit.beta[4] == 0.0);
    REQUIRE(fit.converged);
    // at least one unfrozen coordinate should survive a weak penalty
    REQUIRE_FALSE(fit.active_set.empty());
}

TEST_CASE("weight infinity with lambda1 = 0 does not freeze") {
    Rng rng(41);
    Dataset data = testutil::random_dataset(25, 3, rng);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(3, kInf);
    const FitResult fit = weighted_enet_fit(data, Penalty{0.0, 1.0, w});
    REQUIRE_FALSE(fit.beta.isZero(0.0));
}

TEST_CASE("non-convergence reports converged=false without throwing") {
    Rng rng(43);
    Dataset data = testutil::random_dataset(40, 10, rng);
    for (int j = 1; j < 10; ++j) data.X.col(j) = data.X.col(0) + 0.01 * data.X.col(j);
    data = center(std::move(data));
    SolverConfig config;
    config.max_sweeps = 2;
    const FitResult fit = weighted_enet_fit(data, Penalty::unit(0.01, 0.0), config);
    REQUIRE_FALSE(fit.converged);
}

TEST_CASE("zero-norm column without penalty is degenerate") {
    Rng rng(47);
    Dataset data = testutil::random_dataset(12, 3, rng);
    data.X.col(2).setZero();
    data = center(std::move(data));
    REQUIRE_THROWS_AS(weighted_enet_fit(data, Penalty::unit(0.0, 0.0)), DegenerateError);
    // lambda2 > 0 pins it at zero instead
    const FitResult fit = weighted_enet_fit(data, Penalty::unit(0.0, 1.0));
    REQUIRE(fit.beta[2] == 0.0);
}

// ---------------------------------------------------------------------------
// SCAD
// ---------------------------------------------------------------------------

namespace {

// independent check: minimize the univariate SCAD criterion by fine grid
double scad_univariate_grid(double u, double v, double lam, double a) {
    const double lo = -std::abs(u) - a * lam - 1.0, hi = std::abs(u) + a * lam + 1.0;
    double best_t = 0.0, best = 0.5 * v * u * u;
    const int steps = 400000;
    for (int i = 0; i <= steps; ++i) {
        const double t = lo + (hi - lo) * i / steps;
        const double val =
            0.5 * v * (t - u) * (t - u) + adenet::scad_penalty(std::abs(t), lam, a);
        if (val < best) {
            best = val;
            best_t = t;
        }
    }
    return best_t;
}

}  // namespace

TEST_CASE("scad univariate rule matches grid search") {
    Rng rng(53);
    for (int rep = 0; rep < 40; ++rep) {
        const double u = 4.0 * rng.normal();
        const double v = 0.3 + 1.5 * rng.uniform01();
        const double lam = 0.2 + rng.uniform01();
        const double exact = scad_univariate(u, v, lam, 3.7);
        const double grid = scad_univariate_grid(u, v, lam, 3.7);
        REQUIRE(exact == Catch::Approx(grid).margin(2e-4));
    }
}

TEST_CASE("scad with lambda 0 is ordinary least squares") {
    Rng rng(59);
    Dataset data = testutil::random_dataset(30, 5, rng);
    const FitResult fit = scad_fit(data, 0.0);
    const Eigen::VectorXd ols =
        (data.X.transpose() * data.X).ldlt().solve(data.X.transpose() * data.y);
    REQUIRE(testutil::max_abs_diff(fit.beta, ols) <= 1e-7);
}

TEST_CASE("scad orthonormal thresholding") {
    Rng rng(61);
    Dataset data = testutil::orthonormal_in_scale_dataset(30, 4, rng);
    const double n = static_cast<double>(data.n());
    const Eigen::VectorXd z = (data.X.transpose() * data.y) / n;

    SECTION("small signals die at |x^T y|/n <= lambda/2") {
        const double lambda = 2.0 * z.cwiseAbs().maxCoeff() * 1.01;
        const FitResult fit = scad_fit(data, lambda);
        REQUIRE(fit.beta.isZero(0.0));
    }
    SECTION("large signals are unbiased beyond a*lambda") {
        const double lambda = z.cwiseAbs().minCoeff() / (3.7 * 1.05);
        const FitResult fit = scad_fit(data, lambda);
        for (int j = 0; j < 4; ++j)
            if (std::abs(z[j]) > 3.7 * lambda)
                REQUIRE(fit.beta[j] == Catch::Approx(z[j]).margin(1e-8));
    }
}

TEST_CASE("scad objective is nonincreasing across sweeps") {
    Rng rng(67);
    Dataset data = testutil::random_dataset(40, 8, rng);
    for (int j = 1; j < 8; ++j) data.X.col(j) = 0.8 * data.X.col(j - 1) + 0.2 * data.X.col(j);
    data = center(std::move(data));
    SolverConfig config;
    config.track_objective = true;
    const FitResult fit = scad_fit(data, 0.4, config);
    REQUIRE(fit.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
        REQUIRE(fit.objective_trace[i] <=
                fit.objective_trace[i - 1] +
                    1e-12 * std::max(1.0, std::abs(fit.objective_trace[i - 1])));
}
