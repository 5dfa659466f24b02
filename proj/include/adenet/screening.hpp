#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "adenet/tuning.hpp"
#include "adenet/types.hpp"

namespace adenet {

struct ScreenResult {
    std::vector<int> kept;          // ascending indices of the d_n top scores
    Eigen::VectorXd scores;         // |x_j^T y| / ||x_j||, all p columns
    std::vector<int> zero_norm_columns;  // scored 0, flagged for the caller
};

// d_n = floor(5.5 n^(2/3)), the ladder the SIS table design uses.
inline int default_screen_size(int n) {
    return static_cast<int>(std::floor(5.5 * std::pow(static_cast<double>(n), 2.0 / 3.0)));
}

// Ranks columns by marginal association |x_j^T y| / ||x_j|| and keeps the
// top d_n (ties broken by lower index). The norm divisor makes the ranking
// insensitive to per-column scaling, so columns need not be standardized.
inline ScreenResult sis_screen(const Dataset& data, int d_n) {
    validate(data);
    if (!data.centered) throw ValidationError("sis_screen requires centered data");
    if (d_n < 1) throw ValidationError("sis_screen: d_n must be >= 1");

    const Eigen::Index p = data.p();
    ScreenResult out;
    out.scores.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double nrm = data.X.col(j).norm();
        if (nrm == 0.0) {
            out.scores[j] = 0.0;
            out.zero_norm_columns.push_back(static_cast<int>(j));
        } else {
            out.scores[j] = std::abs(data.X.col(j).dot(data.y)) / nrm;
        }
    }

    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    const int keep = std::min<int>(d_n, static_cast<int>(p));
    std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                      [&](int a, int b) {
                          if (out.scores[a] != out.scores[b])
                              return out.scores[a] > out.scores[b];
                          return a < b;
                      });
    out.kept.assign(order.begin(), order.begin() + keep);
    std::sort(out.kept.begin(), out.kept.end());
    return out;
}

namespace detail {

inline Dataset restrict_columns(const Dataset& data, const std::vector<int>& kept) {
    Dataset out;
    out.y = data.y;
    out.X.resize(data.n(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) out.X.col(i) = data.X.col(kept[i]);
    out.centered = data.centered;
    return out;
}

inline FitResult scatter_back(FitResult fit, const std::vector<int>& kept,
                              Eigen::Index p) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd beta_raw = Eigen::VectorXd::Zero(p);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        beta[kept[i]] = fit.beta[static_cast<Eigen::Index>(i)];
        beta_raw[kept[i]] = fit.beta_raw[static_cast<Eigen::Index>(i)];
    }
    fit.beta = std::move(beta);
    fit.beta_raw = std::move(beta_raw);
    fit.active_set = nonzero_indices(fit.beta);
    return fit;
}

}  // namespace detail

struct SisFitResult {
    FitResult fit;        // length-p coefficients, exact zeros off the kept set
    ScreenResult screen;
    TuneResult tuned;     // chosen lambdas on the restricted problem
};

// Screen to d_n columns, BIC-tune the adaptive elastic-net there, scatter
// the coefficients back to length p. When no AdaptiveConfig is supplied the
// weight exponent comes from choose_gamma at the plug-in rate
// log(d_n)/log(n); a caller with a known design rate should pass its own.
inline SisFitResult sis_aenet(const Dataset& data, int d_n,
                              const std::optional<Grid>& grid = std::nullopt,
                              const std::optional<AdaptiveConfig>& adaptive = std::nullopt,
                              const SolverConfig& solver_config = {}) {
    SisFitResult out;
    out.screen = sis_screen(data, d_n);
    const Dataset sub = detail::restrict_columns(data, out.screen.kept);
    AdaptiveConfig cfg =
        adaptive ? *adaptive
                 : AdaptiveConfig{choose_gamma(nu_hat(data.n(), out.screen.kept.size())),
                                  ZeroMode::ridge_offset};
    out.tuned = tune(sub, Method::aenet, grid ? *grid : default_grid(sub), cfg,
                     solver_config);
    out.fit = detail::scatter_back(out.tuned.fit, out.screen.kept, data.p());
    return out;
}

// Same pipeline with the SCAD comparator in place of the adaptive
// elastic-net.
inline SisFitResult sis_scad(const Dataset& data, int d_n,
                             const std::optional<Grid>& grid = std::nullopt,
                             const SolverConfig& solver_config = {}) {
    SisFitResult out;
    out.screen = sis_screen(data, d_n);
    const Dataset sub = detail::restrict_columns(data, out.screen.kept);
    out.tuned = tune(sub, Method::scad, grid ? *grid : default_grid(sub), {},
                     solver_config);
    out.fit = detail::scatter_back(out.tuned.fit, out.screen.kept, data.p());
    return out;
}

}  // namespace adenet
