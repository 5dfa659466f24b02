#pragma once

#include <cmath>
#include <stdexcept>

#include "adenet/solver.hpp"
#include "adenet/types.hpp"

namespace adenet {

// How to weight coordinates the first stage estimated as (near) zero:
// ridge_offset keeps every coordinate eligible via w_j = (|b_j| + 1/n)^-gamma,
// hard_exclude pins first-stage zeros at 0 via w_j = +inf.
enum class ZeroMode { ridge_offset, hard_exclude };

struct AdaptiveConfig {
    double gamma = 1.0;
    ZeroMode zero_mode = ZeroMode::ridge_offset;
};

// gamma = ceil(2 nu / (1 - nu)) + 1; strictly exceeds 2 nu / (1 - nu), the
// smallest admissible exponent for the dimension growth rate nu.
inline double choose_gamma(double nu) {
    if (!(nu >= 0.0) || !(nu < 1.0))
        throw std::domain_error("choose_gamma: nu must be in [0,1)");
    return std::ceil(2.0 * nu / (1.0 - nu)) + 1.0;
}

// Plug-in growth rate for real data with no known design law.
inline double nu_hat(Eigen::Index n, Eigen::Index p) {
    return std::log(static_cast<double>(p)) / std::log(static_cast<double>(n));
}

// w_j from a first-stage estimate: |b_j|^-gamma with the configured
// zero handling. Monotone: larger |b_j| never gets a larger weight.
inline Eigen::VectorXd adaptive_weights(const Eigen::VectorXd& beta_enet,
                                        const AdaptiveConfig& config,
                                        Eigen::Index n) {
    if (!beta_enet.allFinite())
        throw ValidationError("adaptive_weights: beta must be finite");
    if (n < 1) throw ValidationError("adaptive_weights: n must be >= 1");
    if (!(config.gamma > 0.0))
        throw ValidationError("adaptive_weights: gamma must be > 0");
    Eigen::VectorXd w(beta_enet.size());
    for (Eigen::Index j = 0; j < beta_enet.size(); ++j) {
        const double b = std::abs(beta_enet[j]);
        if (config.zero_mode == ZeroMode::ridge_offset) {
            w[j] = std::pow(b + 1.0 / static_cast<double>(n), -config.gamma);
        } else {
            w[j] = b == 0.0 ? kInf : std::pow(b, -config.gamma);
        }
    }
    return w;
}

// Two-stage fit: a plain elastic-net with (lambda1_enet, lambda2) and unit
// weights, then the weighted problem with (lambda1_star, the same lambda2)
// and weights built from the stage-1 estimate. Both stages carry the
// configured prefactor.
inline FitResult adaptive_enet_fit(const Dataset& data, double lambda2,
                                   double lambda1_enet, double lambda1_star,
                                   const AdaptiveConfig& config,
                                   const SolverConfig& solver_config = {}) {
    const FitResult stage1 =
        weighted_enet_fit(data, Penalty::unit(lambda1_enet, lambda2), solver_config);
    const Eigen::VectorXd w = adaptive_weights(stage1.beta, config, data.n());
    return weighted_enet_fit(data, Penalty{lambda1_star, lambda2, w}, solver_config);
}

}  // namespace adenet
