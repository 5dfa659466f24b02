#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "adenet/rng.hpp"
#include "adenet/types.hpp"

namespace adenet {
namespace detail {

// Largest eigenvalue of a symmetric PSD matrix by power iteration with a
// deterministic start vector. Returns 0 for the zero matrix.
inline double power_iteration_lmax(const Eigen::MatrixXd& S, double tol,
                                   int max_iters) {
    const Eigen::Index p = S.rows();
    Rng rng(0xA11CEu);
    Eigen::VectorXd v(p);
    for (Eigen::Index j = 0; j < p; ++j) v[j] = 1.0 + 0.01 * rng.normal();
    v.normalize();
    double est = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd sv = S * v;
        const double nrm = sv.norm();
        if (nrm == 0.0) return 0.0;
        const double next = v.dot(sv);
        v = sv / nrm;
        if (it > 2 && std::abs(next - est) <= tol * std::max(1.0, std::abs(next)))
            return next;
        est = next;
    }
    return est;
}

}  // namespace detail

// Extreme eigenvalues (b, B) of (1/n) X^T X: B by power iteration on the
// scaled Gram matrix, b via power iteration on B I - S. A rank-deficient
// Gram (p > n) reports b = 0 directly.
inline std::pair<double, double> eigen_bounds(const Eigen::MatrixXd& X,
                                              Eigen::Index n) {
    if (!X.allFinite()) throw ValidationError("eigen_bounds: non-finite X");
    if (n < 1) throw ValidationError("eigen_bounds: n must be >= 1");
    const Eigen::Index p = X.cols();
    const Eigen::MatrixXd S = (X.transpose() * X) / static_cast<double>(n);
    const double B = detail::power_iteration_lmax(S, 1e-8, 200000);
    if (p > n) return {0.0, B};
    Eigen::MatrixXd M = -S;
    M.diagonal().array() += B;
    const double spread = detail::power_iteration_lmax(M, 1e-8, 200000);
    return {std::max(0.0, B - spread), B};
}

struct ConditionsReport {
    double b = 0.0;              // lambda_min of (1/n) X^T X
    double B = 0.0;              // lambda_max of (1/n) X^T X
    double nu_hat = 0.0;         // log(p)/log(n)
    bool a1_holds = false;       // b > 0
    double eta = 0.0;            // min_{j in support} |beta*_j|, NaN if unknown
    double row_energy = 0.0;     // max_i sum_j x_ij^2 / n, should vanish with n
};

inline ConditionsReport conditions_report(const Dataset& data,
                                          const Eigen::VectorXd* beta_star = nullptr,
                                          const std::vector<int>* support = nullptr) {
    validate(data);
    ConditionsReport rep;
    const auto [b, B] = eigen_bounds(data.X, data.n());
    rep.b = b;
    rep.B = B;
    rep.a1_holds = b > 0.0;
    rep.nu_hat = std::log(static_cast<double>(data.p())) /
                 std::log(static_cast<double>(data.n()));
    rep.row_energy =
        data.X.rowwise().squaredNorm().maxCoeff() / static_cast<double>(data.n());
    rep.eta = std::numeric_limits<double>::quiet_NaN();
    if (beta_star && support && !support->empty()) {
        rep.eta = kInf;
        for (int j : *support) rep.eta = std::min(rep.eta, std::abs((*beta_star)[j]));
    }
    return rep;
}

// Regularization rate ratios that should vanish (or diverge, for the last
// one) as n grows; reported as raw numbers with no pass/fail cut.
struct RateRatios {
    double lambda2_over_n = 0.0;       // -> 0
    double lambda1_over_sqrt_n = 0.0;  // -> 0
    double lambda1s_over_sqrt_n = 0.0; // -> 0
    double lambda1s_growth = 0.0;      // lambda1*/sqrt(n) n^(((1-nu)(1+gamma)-1)/2) -> inf
};

inline RateRatios rate_ratios(Eigen::Index n, double nu, double gamma, double lambda1,
                              double lambda2, double lambda1_star) {
    RateRatios r;
    const double nd = static_cast<double>(n);
    r.lambda2_over_n = lambda2 / nd;
    r.lambda1_over_sqrt_n = lambda1 / std::sqrt(nd);
    r.lambda1s_over_sqrt_n = lambda1_star / std::sqrt(nd);
    r.lambda1s_growth = r.lambda1s_over_sqrt_n *
                        std::pow(nd, 0.5 * ((1.0 - nu) * (1.0 + gamma) - 1.0));
    return r;
}

// Nonasymptotic mean-squared-error bound for the weighted elastic-net argmin:
//   4 (lambda2^2 ||b*||^2 + B p n sigma^2 + lambda1^2 sum_j w_j^2) / (b n + lambda2)^2.
// With unit weights pass weights_sq_sum = p.
inline double risk_bound(double lambda1, double lambda2, double weights_sq_sum,
                         double beta_star_norm_sq, double b, double B,
                         Eigen::Index p, Eigen::Index n, double sigma) {
    const double denom = b * static_cast<double>(n) + lambda2;
    if (!(denom > 0.0))
        throw std::domain_error("risk_bound: b n + lambda2 must be positive");
    const double num = lambda2 * lambda2 * beta_star_norm_sq +
                       B * static_cast<double>(p) * static_cast<double>(n) * sigma * sigma +
                       lambda1 * lambda1 * weights_sq_sum;
    return 4.0 * num / (denom * denom);
}

struct NormalityStat {
    double z = 0.0;
    bool support_covered = true;  // fit support includes the true support
};

// z_n = alpha^T (I + lambda2 Sigma_A^{-1}) / (1 + lambda2/n) Sigma_A^{1/2}
//       (beta_hat_A - beta*_A),  Sigma_A = X_A^T X_A over the true support.
// Approximately N(0, sigma^2) when the estimator has the oracle property.
// The square root is the symmetric PSD root from an eigendecomposition.
inline NormalityStat normality_stat(const Dataset& data, const FitResult& fit,
                                    const Scenario& scenario,
                                    const Eigen::VectorXd& alpha, double lambda2) {
    const auto& support = scenario.support;
    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    if (k == 0) throw ValidationError("normality_stat: empty support");
    if (alpha.size() != k) throw ValidationError("normality_stat: alpha length != |A|");
    if (std::abs(alpha.norm() - 1.0) > 1e-8)
        throw ValidationError("normality_stat: alpha must have unit norm");
    if (fit.beta.size() != data.p())
        throw ValidationError("normality_stat: fit dimension mismatch");

    Eigen::MatrixXd Xa(data.n(), k);
    Eigen::VectorXd d(k);
    NormalityStat out;
    for (Eigen::Index i = 0; i < k; ++i) {
        Xa.col(i) = data.X.col(support[i]);
        d[i] = fit.beta[support[i]] - scenario.beta_star[support[i]];
        if (fit.beta[support[i]] == 0.0) out.support_covered = false;
    }
    const Eigen::MatrixXd sigma_a = Xa.transpose() * Xa;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_a);
    const Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() <= 1e-12 * std::max(1.0, ev.maxCoeff()))
        throw std::domain_error("normality_stat: singular support Gram matrix");

    const Eigen::VectorXd half = ev.cwiseSqrt();
    const Eigen::VectorXd scale =
        (Eigen::VectorXd::Ones(k) + lambda2 * ev.cwiseInverse()).cwiseProduct(half);
    // (I + l2 S^-1) S^(1/2) d via the shared eigenbasis
    const Eigen::VectorXd t = es.eigenvectors() *
                              scale.cwiseProduct(es.eigenvectors().transpose() * d);
    out.z = alpha.dot(t) / (1.0 + lambda2 / static_cast<double>(data.n()));
    return out;
}

}  // namespace adenet
