#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "adenet/rng.hpp"
#include "adenet/screening.hpp"
#include "adenet/tuning.hpp"
#include "adenet/types.hpp"

namespace adenet {

// One draw of a stationary AR(1) row with unit marginal variance:
// x_1 = z_1, x_j = rho x_{j-1} + sqrt(1-rho^2) z_j, giving
// Cov(x_j, x_k) = rho^|j-k|.
inline Eigen::VectorXd gen_ar1_row(Eigen::Index p, double rho, Rng& rng) {
    Eigen::VectorXd x(p);
    if (p == 0) return x;
    x[0] = rng.normal();
    const double c = std::sqrt(1.0 - rho * rho);
    for (Eigen::Index j = 1; j < p; ++j) x[j] = rho * x[j - 1] + c * rng.normal();
    return x;
}

namespace detail {

inline Scenario block_scenario(int n, int p, double rho, double sigma, double nu,
                               double gamma, std::uint64_t seed, int replications) {
    if (p <= 0) throw std::domain_error("scenario requires p > 0; increase n");
    Scenario s;
    s.n = n;
    s.p = p;
    s.rho = rho;
    s.sigma = sigma;
    s.nu = nu;
    s.gamma = gamma;
    s.seed = seed;
    s.replications = replications;
    const int q = p / 9;
    s.beta_star = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < 3 * q; ++j) {
        s.beta_star[j] = 3.0;
        s.support.push_back(j);
    }
    validate(s);
    return s;
}

}  // namespace detail

// p = floor(4 sqrt(n)) - 5, beta* = (3 1_q, 3 1_q, 3 1_q, 0), q = floor(p/9),
// sigma = 6, AR(1) design; growth rate nu = 1/2, hence gamma = 3.
inline Scenario example1_scenario(int n, double rho, std::uint64_t seed,
                                  int replications = 100) {
    const int p = static_cast<int>(std::floor(4.0 * std::sqrt(n))) - 5;
    return detail::block_scenario(n, p, rho, 6.0, 0.5, 3.0, seed, replications);
}

// Same design with p = floor(4 n^(2/3)) - 5; nu = 2/3, gamma = 5.
inline Scenario example2_scenario(int n, double rho, std::uint64_t seed,
                                  int replications = 100) {
    const int p = static_cast<int>(std::floor(4.0 * std::pow(n, 2.0 / 3.0))) - 5;
    return detail::block_scenario(n, p, rho, 6.0, 2.0 / 3.0, 5.0, seed, replications);
}

// Signal magnitudes for the screening design: 8 components of the form
// (-1)^u (a_n + |z|), a_n = 4 log(n)/sqrt(n), u ~ Ber(0.4), z ~ N(0,1).
inline Eigen::VectorXd draw_sis_beta(int n, int p, Rng& rng) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    const double a_n = 4.0 * std::log(static_cast<double>(n)) / std::sqrt(n);
    for (int j = 0; j < 8; ++j) {
        const double sign = rng.uniform01() < 0.4 ? -1.0 : 1.0;
        beta[j] = sign * (a_n + std::abs(rng.normal()));
    }
    return beta;
}

// Ultra-high-dimensional screening design: iid N(0,1) predictors,
// sigma = 1.5, |support| = 8 with magnitudes redrawn each replication.
// The screening size d_n = floor(5.5 n^(2/3)) grows like n^(2/3), so the
// scenario carries nu = 2/3 (gamma = 5).
inline Scenario sis_scenario(int n, int p, std::uint64_t seed,
                             int replications = 100) {
    if (p < 8) throw std::domain_error("sis_scenario requires p >= 8");
    Scenario s;
    s.n = n;
    s.p = p;
    s.rho = 0.0;
    s.sigma = 1.5;
    s.nu = 2.0 / 3.0;
    s.gamma = choose_gamma(s.nu);
    s.seed = seed;
    s.replications = replications;
    s.redraw_beta = true;
    s.d_n = default_screen_size(n);
    Rng rng = Rng::from_stream(seed, 0, 2);
    s.beta_star = draw_sis_beta(n, p, rng);
    for (int j = 0; j < 8; ++j) s.support.push_back(j);
    validate(s);
    return s;
}

struct ReplicationData {
    Dataset data;               // centered
    Eigen::VectorXd beta_star;  // the truth used for this replication
};

// Streams: 0 = design rows, 1 = noise, 2 = beta draw (redraw_beta only).
inline ReplicationData gen_replication(const Scenario& s, int replication) {
    ReplicationData out;
    out.beta_star = s.beta_star;
    if (s.redraw_beta) {
        Rng rb = Rng::from_stream(s.seed, static_cast<std::uint64_t>(replication), 2);
        out.beta_star = draw_sis_beta(s.n, s.p, rb);
    }
    Rng rx = Rng::from_stream(s.seed, static_cast<std::uint64_t>(replication), 0);
    Rng re = Rng::from_stream(s.seed, static_cast<std::uint64_t>(replication), 1);
    Dataset raw;
    raw.X.resize(s.n, s.p);
    for (int i = 0; i < s.n; ++i) raw.X.row(i) = gen_ar1_row(s.p, s.rho, rx).transpose();
    raw.y.resize(s.n);
    for (int i = 0; i < s.n; ++i)
        raw.y[i] = raw.X.row(i).dot(out.beta_star) + s.sigma * re.normal();
    out.data = center(std::move(raw));
    return out;
}

struct Metrics {
    double mse = 0.0;  // (b - b*)^T Sigma (b - b*) under the population design law
    int c = 0;         // true zeros estimated as zero
    int ic = 0;        // true nonzeros estimated as zero
};

// Sigma is the AR(1) population covariance rho^|j-k| (identity when rho = 0).
// The quadratic form is computed in O(p) via the backward geometric sums.
inline Metrics metrics(const Eigen::VectorXd& beta_hat, const Scenario& s) {
    if (beta_hat.size() != s.beta_star.size())
        throw ValidationError("metrics: beta length mismatch");
    const Eigen::VectorXd d = beta_hat - s.beta_star;
    const Eigen::Index p = d.size();
    Metrics out;
    double cross = 0.0, tail = 0.0;
    for (Eigen::Index j = p - 1; j >= 0; --j) {
        cross += d[j] * tail;
        tail = s.rho * (d[j] + tail);
    }
    out.mse = d.squaredNorm() + 2.0 * cross;

    std::vector<char> in_support(p, 0);
    for (int j : s.support) in_support[j] = 1;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (beta_hat[j] == 0.0) {
            if (in_support[j]) ++out.ic;
            else ++out.c;
        }
    }
    return out;
}

enum class StudyMethod { truth, lasso, enet, alasso, aenet, scad, sis_aenet, sis_scad };

inline const char* study_method_name(StudyMethod m) {
    switch (m) {
        case StudyMethod::truth: return "Truth";
        case StudyMethod::lasso: return "Lasso";
        case StudyMethod::enet: return "Enet";
        case StudyMethod::alasso: return "ALasso";
        case StudyMethod::aenet: return "AEnet";
        case StudyMethod::scad: return "SCAD";
        case StudyMethod::sis_aenet: return "SIS+AEnet";
        case StudyMethod::sis_scad: return "SIS+SCAD";
    }
    return "?";
}

struct MetricsRow {
    std::string method;
    double mse_mean = 0.0;
    double mse_se = 0.0;
    double c_mean = 0.0;
    double ic_mean = 0.0;
    double exact_support_rate = 0.0;
    double max_scaled_kkt = 0.0;  // bookkeeping, not part of the table proper
    int nonconverged = 0;
};

struct MetricsTable {
    int n = 0, p = 0, support_size = 0;
    double rho = 0.0;
    std::vector<MetricsRow> rows;  // input method order
};

inline int env_thread_cap() {
    if (const char* env = std::getenv("ADENET_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs every method on the same data for each replication and aggregates
// MSE / C / IC. Replication r is seeded as (scenario.seed, r), so results
// are independent of the parallel schedule; aggregation walks r in order.
inline MetricsTable run_study(const Scenario& scenario,
                              const std::vector<StudyMethod>& methods,
                              const std::optional<Grid>& grid = std::nullopt,
                              const AdaptiveConfig* adaptive = nullptr,
                              const SolverConfig& solver_config = {},
                              int threads = 0) {
    validate(scenario);
    if (scenario.replications < 2)
        throw ValidationError("run_study requires replications >= 2");
    const int reps = scenario.replications;
    const AdaptiveConfig acfg =
        adaptive ? *adaptive : AdaptiveConfig{scenario.gamma, ZeroMode::ridge_offset};

    struct Cell {
        Metrics m;
        bool exact = false;
        double max_scaled_kkt = 0.0;
        int nonconverged = 0;
    };
    std::vector<std::vector<Cell>> cells(methods.size(), std::vector<Cell>(reps));
    std::vector<std::string> failures(reps);

    const auto run_one = [&](int r) {
        const ReplicationData rep = gen_replication(scenario, r);
        Scenario truth = scenario;
        truth.beta_star = rep.beta_star;
        truth.support = nonzero_indices(rep.beta_star);
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            Cell& cell = cells[mi][r];
            Eigen::VectorXd beta_hat;
            switch (methods[mi]) {
                case StudyMethod::truth:
                    beta_hat = rep.beta_star;
                    break;
                case StudyMethod::sis_aenet: {
                    SisFitResult fr = sis_aenet(rep.data, scenario.d_n, grid, acfg,
                                                solver_config);
                    beta_hat = fr.fit.beta;
                    cell.max_scaled_kkt = fr.tuned.max_scaled_kkt;
                    cell.nonconverged = fr.tuned.nonconverged;
                    break;
                }
                case StudyMethod::sis_scad: {
                    SisFitResult fr = sis_scad(rep.data, scenario.d_n, grid,
                                               solver_config);
                    beta_hat = fr.fit.beta;
                    cell.max_scaled_kkt = fr.tuned.max_scaled_kkt;
                    cell.nonconverged = fr.tuned.nonconverged;
                    break;
                }
                default: {
                    Method m = Method::lasso;
                    if (methods[mi] == StudyMethod::enet) m = Method::enet;
                    if (methods[mi] == StudyMethod::alasso) m = Method::alasso;
                    if (methods[mi] == StudyMethod::aenet) m = Method::aenet;
                    if (methods[mi] == StudyMethod::scad) m = Method::scad;
                    TuneResult tr = tune(rep.data, m,
                                         grid ? *grid : default_grid(rep.data), acfg,
                                         solver_config);
                    beta_hat = tr.fit.beta;
                    cell.max_scaled_kkt = tr.max_scaled_kkt;
                    cell.nonconverged = tr.nonconverged;
                    break;
                }
            }
            cell.m = metrics(beta_hat, truth);
            cell.exact = nonzero_indices(beta_hat) == truth.support;
        }
    };

    int nthreads = threads >= 1 ? threads : env_thread_cap();
    nthreads = std::min(nthreads, reps);
    if (nthreads <= 1) {
        for (int r = 0; r < reps; ++r) {
            try {
                run_one(r);
            } catch (const std::exception& e) {
                throw std::runtime_error("replication " + std::to_string(r) +
                                         " (seed base " + std::to_string(scenario.seed) +
                                         ") failed: " + e.what());
            }
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                while (true) {
                    const int r = next.fetch_add(1);
                    if (r >= reps) return;
                    try {
                        run_one(r);
                    } catch (const std::exception& e) {
                        failures[r] = e.what();
                    }
                }
            });
        for (auto& th : pool) th.join();
        for (int r = 0; r < reps; ++r)
            if (!failures[r].empty())
                throw std::runtime_error("replication " + std::to_string(r) +
                                         " (seed base " + std::to_string(scenario.seed) +
                                         ") failed: " + failures[r]);
    }

    MetricsTable table;
    table.n = scenario.n;
    table.p = scenario.p;
    table.support_size = static_cast<int>(scenario.support.size());
    table.rho = scenario.rho;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        MetricsRow row;
        row.method = study_method_name(methods[mi]);
        double sum = 0.0, sumsq = 0.0;
        for (int r = 0; r < reps; ++r) {
            const Cell& cell = cells[mi][r];
            sum += cell.m.mse;
            sumsq += cell.m.mse * cell.m.mse;
            row.c_mean += cell.m.c;
            row.ic_mean += cell.m.ic;
            row.exact_support_rate += cell.exact ? 1.0 : 0.0;
            row.max_scaled_kkt = std::max(row.max_scaled_kkt, cell.max_scaled_kkt);
            row.nonconverged += cell.nonconverged;
        }
        row.mse_mean = sum / reps;
        const double var =
            std::max(0.0, (sumsq - sum * sum / reps) / (reps - 1));
        row.mse_se = std::sqrt(var / reps);
        row.c_mean /= reps;
        row.ic_mean /= reps;
        row.exact_support_rate /= reps;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace adenet
