#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "adenet/solver.hpp"
#include "adenet/types.hpp"

namespace adenet {
namespace detail {

// Gram-form KKT violation: g = 2 (G b - c) is the smooth-part gradient.
inline double gram_kkt_residual(const Eigen::MatrixXd& G, const Eigen::VectorXd& c,
                                double lambda1, const Penalty& penalty,
                                const Eigen::VectorXd& beta) {
    const Eigen::VectorXd g = 2.0 * (G * beta - c);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const double l1w = lambda1 > 0.0 ? lambda1 * penalty.weight(j) : 0.0;
        double viol;
        if (beta[j] == 0.0) {
            viol = std::isinf(l1w) ? 0.0 : std::max(0.0, std::abs(g[j]) - l1w);
        } else {
            viol = std::abs(g[j] + l1w * (beta[j] > 0.0 ? 1.0 : -1.0));
        }
        worst = std::max(worst, viol);
    }
    return worst;
}

// Exhaustive search over (active set, sign pattern) candidates, smallest
// active sets first. For each candidate solves the stationarity system
//   2 G_AA b_A = 2 c_A - lambda1 (w o s)_A
// and accepts on sign consistency plus the inactive-coordinate bound.
// Convexity makes the first accepted candidate a global argmin.
inline bool enumerate_weighted_lasso(const Eigen::MatrixXd& G, const Eigen::VectorXd& c,
                                     double lambda1, const Penalty& penalty,
                                     Eigen::VectorXd& beta_out, long& candidates) {
    const int p = static_cast<int>(c.size());
    std::vector<int> eligible;
    for (int j = 0; j < p; ++j)
        if (!(lambda1 > 0.0 && std::isinf(penalty.weight(j)))) eligible.push_back(j);
    const int m = static_cast<int>(eligible.size());

    const double gscale = std::max(1.0, c.cwiseAbs().maxCoeff());
    const double slack = 1e-9 * gscale;

    std::vector<int> comb;
    Eigen::VectorXd beta(p);

    const auto try_subset = [&](const std::vector<int>& subset) -> bool {
        const int k = static_cast<int>(subset.size());
        Eigen::MatrixXd Gaa(k, k);
        Eigen::VectorXd ca(k), wa(k);
        for (int i = 0; i < k; ++i) {
            ca[i] = c[subset[i]];
            wa[i] = lambda1 > 0.0 ? lambda1 * penalty.weight(subset[i]) : 0.0;
            for (int l = 0; l < k; ++l) Gaa(i, l) = G(subset[i], subset[l]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu;
        if (k > 0) {
            lu.compute(Gaa);
            if (!lu.isInvertible()) return false;
        }
        for (unsigned signs = 0; signs < (1u << k); ++signs) {
            ++candidates;
            Eigen::VectorXd rhs(k);
            for (int i = 0; i < k; ++i) {
                const double s = (signs >> i) & 1u ? -1.0 : 1.0;
                rhs[i] = ca[i] - 0.5 * wa[i] * s;
            }
            Eigen::VectorXd ba = k > 0 ? lu.solve(rhs).eval() : Eigen::VectorXd();
            bool ok = true;
            for (int i = 0; i < k && ok; ++i) {
                const double s = (signs >> i) & 1u ? -1.0 : 1.0;
                if (wa[i] > 0.0 && s * ba[i] < -slack / gscale) ok = false;
            }
            if (!ok) continue;
            beta.setZero();
            for (int i = 0; i < k; ++i) beta[subset[i]] = ba[i];
            for (int j = 0; j < p && ok; ++j) {
                if (beta[j] != 0.0) continue;
                const double l1w = lambda1 > 0.0 ? lambda1 * penalty.weight(j) : 0.0;
                if (std::isinf(l1w)) continue;
                double gj = 2.0 * (G.row(j).dot(beta) - c[j]);
                if (std::abs(gj) > l1w + slack) ok = false;
            }
            if (ok) {
                beta_out = beta;
                return true;
            }
        }
        return false;
    };

    // subsets of eligible coordinates in order of increasing size
    for (int k = 0; k <= m; ++k) {
        comb.assign(k, 0);
        for (int i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            std::vector<int> subset(k);
            for (int i = 0; i < k; ++i) subset[i] = eligible[comb[i]];
            if (try_subset(subset)) return true;
            int i = k - 1;
            while (i >= 0 && comb[i] == m - k + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int l = i + 1; l < k; ++l) comb[l] = comb[l - 1] + 1;
        }
    }
    return false;
}

// FISTA on the Gram form, used when p is too large to enumerate.
inline Eigen::VectorXd fista_weighted_lasso(const Eigen::MatrixXd& G,
                                            const Eigen::VectorXd& c, double lambda1,
                                            const Penalty& penalty, long& iters) {
    const Eigen::Index p = c.size();
    // Lipschitz constant of the smooth part: 2 lambda_max(G), by power iteration
    Eigen::VectorXd v = Eigen::VectorXd::Ones(p).normalized();
    double lmax = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Eigen::VectorXd gv = G * v;
        const double nrm = gv.norm();
        if (nrm == 0.0) break;
        const double est = v.dot(gv);
        v = gv / nrm;
        if (std::abs(est - lmax) <= 1e-12 * std::max(1.0, std::abs(est)) && it > 4) {
            lmax = est;
            break;
        }
        lmax = est;
    }
    const double L = std::max(2.0 * lmax, 1e-12);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p), yk = beta, beta_prev = beta;
    double tk = 1.0;
    const double gscale = std::max(1.0, c.cwiseAbs().maxCoeff());
    for (iters = 0; iters < 200000; ++iters) {
        const Eigen::VectorXd grad = 2.0 * (G * yk - c);
        beta_prev = beta;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double l1w = lambda1 > 0.0 ? lambda1 * penalty.weight(j) : 0.0;
            if (std::isinf(l1w)) {
                beta[j] = 0.0;
                continue;
            }
            beta[j] = soft_threshold(yk[j] - grad[j] / L, l1w / L);
        }
        const double tnext = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        yk = beta + ((tk - 1.0) / tnext) * (beta - beta_prev);
        tk = tnext;
        if (iters % 16 == 15 &&
            gram_kkt_residual(G, c, lambda1, penalty, beta) <= 1e-9 * gscale)
            break;
    }
    return beta;
}

}  // namespace detail

// Independent check on weighted_enet_fit: the l2 term is absorbed by
// appending sqrt(lambda2) I_p rows to X and p zeros to y, which reduces the
// problem to a weighted lasso with Gram X^T X + lambda2 I. Solved by
// exhaustive active-set enumeration for p <= 12, proximal gradient above.
inline FitResult augmented_oracle_fit(const Dataset& data, const Penalty& penalty,
                                      const SolverConfig& config = {}) {
    validate(data);
    validate(penalty, data.p());
    if (!data.centered)
        throw ValidationError("augmented_oracle_fit requires centered data");

    const Eigen::Index p = data.p();
    Eigen::MatrixXd G = data.X.transpose() * data.X;
    G.diagonal().array() += penalty.lambda2;
    const Eigen::VectorXd c = data.X.transpose() * data.y;

    for (Eigen::Index j = 0; j < p; ++j) {
        const bool frozen = penalty.lambda1 > 0.0 && std::isinf(penalty.weight(j));
        const double l1w = penalty.lambda1 > 0.0 ? penalty.lambda1 * penalty.weight(j) : 0.0;
        if (!frozen && G(j, j) <= 0.0 && l1w <= 0.0)
            throw DegenerateError("zero-norm column with no penalty on coordinate " +
                                  std::to_string(j));
    }

    Eigen::VectorXd beta_raw(p);
    long work = 0;
    if (p <= 12) {
        if (!detail::enumerate_weighted_lasso(G, c, penalty.lambda1, penalty, beta_raw,
                                              work))
            throw DegenerateError("active-set enumeration found no KKT point");
    } else {
        beta_raw = detail::fista_weighted_lasso(G, c, penalty.lambda1, penalty, work);
    }

    FitResult out;
    const Eigen::VectorXd r = data.y - data.X * beta_raw;
    out.kkt_residual = detail::kkt_residual_from_residual(data, penalty, beta_raw, r);
    out.kkt_scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    out.objective = enet_objective(data, penalty, beta_raw);
    out.beta = detail::prefactor(config, penalty.lambda2, data.n()) * beta_raw;
    out.beta_raw = std::move(beta_raw);
    out.active_set = nonzero_indices(out.beta);
    out.iterations = static_cast<int>(std::min<long>(work, 1000000000L));
    out.converged = true;
    return out;
}

}  // namespace adenet
