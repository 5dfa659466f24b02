#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "adenet/types.hpp"

namespace adenet {

struct SolverConfig {
    double tol = 1e-8;        // max |coefficient change| per sweep
    int max_sweeps = 10000;
    bool rescale = true;      // apply the (1 + lambda2/n) prefactor
    bool standardized = false; // unit-norm columns: prefactor (1 + lambda2)
    bool track_objective = false;
};

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// Exact minimizer of the single-coordinate problem
//   -2 z b + denom b^2 + 2 threshold |b|
// i.e. the coordinate restriction of the penalized criterion with
// z = x_j^T r_{-j}, denom = x_j^T x_j + lambda2, threshold = lambda1 w_j / 2.
inline double coordinate_update(double z, double denom, double threshold) {
    if (!(denom > 0.0))
        throw DegenerateError("coordinate_update: denom must be > 0");
    if (!(threshold >= 0.0))
        throw ValidationError("coordinate_update: threshold must be >= 0");
    return soft_threshold(z, threshold) / denom;
}

// ||y - X b||^2 + lambda2 ||b||^2 + lambda1 sum_j w_j |b_j|.
// Coordinates with infinite weight contribute 0 when b_j = 0.
inline double enet_objective(const Dataset& data, const Penalty& penalty,
                             const Eigen::VectorXd& beta_raw) {
    double obj = (data.y - data.X * beta_raw).squaredNorm() +
                 penalty.lambda2 * beta_raw.squaredNorm();
    if (penalty.lambda1 > 0.0) {
        for (Eigen::Index j = 0; j < beta_raw.size(); ++j) {
            const double b = beta_raw[j];
            if (b != 0.0) obj += penalty.lambda1 * penalty.weight(j) * std::abs(b);
        }
    }
    return obj;
}

namespace detail {

// Max KKT violation given the residual r = y - X beta_raw.
inline double kkt_residual_from_residual(const Dataset& data, const Penalty& penalty,
                                         const Eigen::VectorXd& beta_raw,
                                         const Eigen::VectorXd& r) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const double g = -2.0 * data.X.col(j).dot(r);
        const double w = penalty.weight(j);
        const double l1w = penalty.lambda1 > 0.0 ? penalty.lambda1 * w : 0.0;
        double viol;
        if (beta_raw[j] == 0.0) {
            viol = std::isinf(l1w) ? 0.0 : std::max(0.0, std::abs(g) - l1w);
        } else {
            const double s = beta_raw[j] > 0.0 ? 1.0 : -1.0;
            viol = std::abs(g + 2.0 * penalty.lambda2 * beta_raw[j] + l1w * s);
        }
        worst = std::max(worst, viol);
    }
    return worst;
}

inline double prefactor(const SolverConfig& config, double lambda2, Eigen::Index n) {
    if (!config.rescale) return 1.0;
    return config.standardized ? 1.0 + lambda2
                               : 1.0 + lambda2 / static_cast<double>(n);
}

inline FitResult package_result(const Dataset& data, const Penalty& penalty,
                                const SolverConfig& config, Eigen::VectorXd beta_raw,
                                int sweeps, bool converged,
                                std::vector<double> trace) {
    FitResult out;
    const Eigen::VectorXd r = data.y - data.X * beta_raw;
    out.kkt_residual = kkt_residual_from_residual(data, penalty, beta_raw, r);
    out.kkt_scale = std::max(1.0, (data.X.transpose() * data.y).cwiseAbs().maxCoeff());
    out.objective = enet_objective(data, penalty, beta_raw);
    out.beta = prefactor(config, penalty.lambda2, data.n()) * beta_raw;
    out.beta_raw = std::move(beta_raw);
    out.active_set = nonzero_indices(out.beta);
    out.iterations = sweeps;
    out.converged = converged;
    out.objective_trace = std::move(trace);
    return out;
}

}  // namespace detail

// Cyclic coordinate descent for
//   min_b ||y - X b||^2 + lambda2 ||b||^2 + lambda1 sum_j w_j |b_j|
// on centered data. Full sweeps alternate with sweeps restricted to the
// current active set; convergence requires the per-sweep max coefficient
// change to drop below tol AND the scaled KKT residual to pass tol*100.
// warm_start, when given, seeds beta_raw (used for descending-lambda paths).
inline FitResult weighted_enet_fit(const Dataset& data, const Penalty& penalty,
                                   const SolverConfig& config = {},
                                   const Eigen::VectorXd* warm_start = nullptr) {
    validate(data);
    validate(penalty, data.p());
    if (!data.centered)
        throw ValidationError("weighted_enet_fit requires centered data");
    if (!(config.tol > 0.0) || config.max_sweeps < 1)
        throw ValidationError("invalid solver config");

    const Eigen::Index n = data.n(), p = data.p();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    if (warm_start) {
        if (warm_start->size() != p)
            throw ValidationError("warm start length != p");
        beta = *warm_start;
    }

    Eigen::VectorXd colsq(p), thr(p), denom(p);
    std::vector<char> frozen(p, 0);
    for (Eigen::Index j = 0; j < p; ++j) {
        colsq[j] = data.X.col(j).squaredNorm();
        const double w = penalty.weight(j);
        frozen[j] = (penalty.lambda1 > 0.0 && std::isinf(w)) ? 1 : 0;
        thr[j] = (penalty.lambda1 > 0.0 && !frozen[j])
                     ? 0.5 * penalty.lambda1 * w
                     : 0.0;
        denom[j] = colsq[j] + penalty.lambda2;
        if (frozen[j]) beta[j] = 0.0;
        if (!frozen[j] && denom[j] <= 0.0 && thr[j] <= 0.0)
            throw DegenerateError("zero-norm column with no penalty on coordinate " +
                                  std::to_string(j));
    }

    Eigen::VectorXd r = data.y - data.X * beta;
    const double kkt_scale =
        std::max(1.0, (data.X.transpose() * data.y).cwiseAbs().maxCoeff());

    std::vector<double> trace;
    const auto sweep = [&](bool active_only) {
        double maxchange = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (frozen[j]) continue;
            if (active_only && beta[j] == 0.0) continue;
            if (denom[j] <= 0.0) continue;  // zero column, l1 keeps it at 0
            const double z = data.X.col(j).dot(r) + colsq[j] * beta[j];
            const double bnew = soft_threshold(z, thr[j]) / denom[j];
            const double d = bnew - beta[j];
            if (d != 0.0) {
                r -= data.X.col(j) * d;
                beta[j] = bnew;
                maxchange = std::max(maxchange, std::abs(d));
            }
        }
        if (config.track_objective)
            trace.push_back(enet_objective(data, penalty, beta));
        return maxchange;
    };

    int sweeps = 0;
    bool converged = false;
    while (sweeps < config.max_sweeps) {
        const double full_change = sweep(false);
        ++sweeps;
        if (full_change < config.tol) {
            // refresh the residual to drop incremental-update drift before
            // judging optimality
            r = data.y - data.X * beta;
            const double kkt =
                detail::kkt_residual_from_residual(data, penalty, beta, r);
            if (kkt / kkt_scale <= 100.0 * config.tol) {
                converged = true;
                break;
            }
            continue;
        }
        while (sweeps < config.max_sweeps) {
            const double change = sweep(true);
            ++sweeps;
            if (change < config.tol) break;
        }
    }

    return detail::package_result(data, penalty, config, std::move(beta), sweeps,
                                  converged, std::move(trace));
}

// Max first-order optimality violation of beta_raw for the weighted
// elastic-net criterion: zero coordinates must satisfy
// |-2 x_j^T (y - X b)| <= lambda1 w_j, active ones the exact stationarity
// equation. 0 means exact optimality.
inline double kkt_check(const Dataset& data, const Penalty& penalty,
                        const Eigen::VectorXd& beta_raw) {
    validate(data);
    validate(penalty, data.p());
    if (beta_raw.size() != data.p())
        throw ValidationError("kkt_check: beta length != p");
    if (!beta_raw.allFinite())
        throw ValidationError("kkt_check: beta must be finite");
    const Eigen::VectorXd r = data.y - data.X * beta_raw;
    return detail::kkt_residual_from_residual(data, penalty, beta_raw, r);
}

// ---------------------------------------------------------------------------
// SCAD comparator
// ---------------------------------------------------------------------------

// Fan-Li SCAD penalty value at t >= 0 with threshold lam and shape a.
inline double scad_penalty(double t, double lam, double a) {
    if (t <= lam) return lam * t;
    if (t <= a * lam) return (2.0 * a * lam * t - t * t - lam * lam) / (2.0 * (a - 1.0));
    return 0.5 * (a + 1.0) * lam * lam;
}

inline double scad_penalty_deriv(double t, double lam, double a) {
    if (t <= lam) return lam;
    if (t <= a * lam) return (a * lam - t) / (a - 1.0);
    return 0.0;
}

// Exact global minimizer of 0.5 v (b - u)^2 + scad_penalty(|b|, lam, a).
// Evaluates the stationary point of each of the three pieces (clamped to
// its interval) plus 0 and picks the best; robust for any v > 0, including
// the nonconvex middle piece.
inline double scad_univariate(double u, double v, double lam, double a) {
    if (lam <= 0.0) return u;
    const double au = std::abs(u);
    const double s = u < 0.0 ? -1.0 : 1.0;
    double best_t = 0.0;
    double best_val = 0.5 * v * au * au;  // b = 0
    const auto consider = [&](double t) {
        if (!(t >= 0.0) || !std::isfinite(t)) return;
        const double val = 0.5 * v * (t - au) * (t - au) + scad_penalty(t, lam, a);
        if (val < best_val) {
            best_val = val;
            best_t = t;
        }
    };
    consider(std::clamp(au - lam / v, 0.0, lam));           // piece 1
    const double curv = v * (a - 1.0) - 1.0;                 // piece 2
    if (curv > 0.0)
        consider(std::clamp((v * au * (a - 1.0) - a * lam) / curv, lam, a * lam));
    consider(lam);
    consider(a * lam);
    consider(std::max(au, a * lam));                         // piece 3
    return s * best_t;
}

// ||y - X b||^2 + 2 n sum_j scad_penalty(|b_j|, lambda/2, a). The lambda/2
// threshold makes the orthonormal-design kill rule |x_j^T y| / n <= lambda/2,
// the same per-observation scale the elastic-net grid uses after dividing
// by n.
inline double scad_objective(const Dataset& data, double lambda,
                             const Eigen::VectorXd& beta, double a = 3.7) {
    double obj = (data.y - data.X * beta).squaredNorm();
    const double lam = 0.5 * lambda;
    const double two_n = 2.0 * static_cast<double>(data.n());
    for (Eigen::Index j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) obj += two_n * scad_penalty(std::abs(beta[j]), lam, a);
    return obj;
}

namespace detail {

inline double scad_stationarity_residual(const Dataset& data, double lambda,
                                         const Eigen::VectorXd& beta,
                                         const Eigen::VectorXd& r, double a) {
    const double lam = 0.5 * lambda;
    const double two_n = 2.0 * static_cast<double>(data.n());
    double worst = 0.0;
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const double g = -2.0 * data.X.col(j).dot(r);
        double viol;
        if (beta[j] == 0.0) {
            viol = std::max(0.0, std::abs(g) - two_n * lam);
        } else {
            const double s = beta[j] > 0.0 ? 1.0 : -1.0;
            viol = std::abs(g + two_n * scad_penalty_deriv(std::abs(beta[j]), lam, a) * s);
        }
        worst = std::max(worst, viol);
    }
    return worst;
}

}  // namespace detail

// Cyclic coordinate descent for the SCAD-penalized criterion with shape
// a = 3.7. Each coordinate step is the exact univariate global minimizer,
// so the objective is nonincreasing; the result is a stationary point
// (the problem is nonconvex, a local optimum is acceptable).
inline FitResult scad_fit(const Dataset& data, double lambda,
                          const SolverConfig& config = {},
                          const Eigen::VectorXd* warm_start = nullptr) {
    validate(data);
    if (!data.centered) throw ValidationError("scad_fit requires centered data");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ValidationError("scad_fit: lambda must be finite and >= 0");

    constexpr double a = 3.7;
    const Eigen::Index n = data.n(), p = data.p();
    const double lam = 0.5 * lambda;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    if (warm_start) beta = *warm_start;

    Eigen::VectorXd colsq(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        colsq[j] = data.X.col(j).squaredNorm();
        if (colsq[j] <= 0.0 && lambda <= 0.0)
            throw DegenerateError("zero-norm column with no penalty on coordinate " +
                                  std::to_string(j));
    }

    Eigen::VectorXd r = data.y - data.X * beta;
    const double kkt_scale =
        std::max(1.0, (data.X.transpose() * data.y).cwiseAbs().maxCoeff());

    std::vector<double> trace;
    const auto sweep = [&](bool active_only) {
        double maxchange = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (active_only && beta[j] == 0.0) continue;
            if (colsq[j] <= 0.0) continue;
            const double z = data.X.col(j).dot(r) + colsq[j] * beta[j];
            const double bnew = scad_univariate(z / colsq[j], colsq[j] / n, lam, a);
            const double d = bnew - beta[j];
            if (d != 0.0) {
                r -= data.X.col(j) * d;
                beta[j] = bnew;
                maxchange = std::max(maxchange, std::abs(d));
            }
        }
        if (config.track_objective)
            trace.push_back(scad_objective(data, lambda, beta, a));
        return maxchange;
    };

    int sweeps = 0;
    bool converged = false;
    while (sweeps < config.max_sweeps) {
        const double full_change = sweep(false);
        ++sweeps;
        if (full_change < config.tol) {
            r = data.y - data.X * beta;
            const double res =
                detail::scad_stationarity_residual(data, lambda, beta, r, a);
            if (res / kkt_scale <= 100.0 * config.tol) {
                converged = true;
                break;
            }
            continue;
        }
        while (sweeps < config.max_sweeps) {
            const double change = sweep(true);
            ++sweeps;
            if (change < config.tol) break;
        }
    }

    FitResult out;
    r = data.y - data.X * beta;
    out.kkt_residual = detail::scad_stationarity_residual(data, lambda, beta, r, a);
    out.kkt_scale = kkt_scale;
    out.objective = scad_objective(data, lambda, beta, a);
    out.beta = beta;  // no prefactor for SCAD
    out.beta_raw = std::move(beta);
    out.active_set = nonzero_indices(out.beta);
    out.iterations = sweeps;
    out.converged = converged;
    out.objective_trace = std::move(trace);
    return out;
}

}  // namespace adenet
