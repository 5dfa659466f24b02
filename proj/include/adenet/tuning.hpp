#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "adenet/adaptive.hpp"
#include "adenet/solver.hpp"
#include "adenet/types.hpp"

namespace adenet {

enum class Method { lasso, enet, alasso, aenet, scad };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::lasso: return "Lasso";
        case Method::enet: return "Enet";
        case Method::alasso: return "ALasso";
        case Method::aenet: return "AEnet";
        case Method::scad: return "SCAD";
    }
    return "?";
}

struct Grid {
    std::vector<double> lambda1_values;  // strictly descending, positive
    std::vector<double> lambda2_values;  // nonnegative
};

inline void validate(const Grid& grid) {
    if (grid.lambda1_values.empty() || grid.lambda2_values.empty())
        throw ValidationError("grid must be nonempty");
    for (std::size_t i = 0; i < grid.lambda1_values.size(); ++i) {
        if (!(grid.lambda1_values[i] > 0.0))
            throw ValidationError("lambda1 grid values must be positive");
        if (i > 0 && !(grid.lambda1_values[i] < grid.lambda1_values[i - 1]))
            throw ValidationError("lambda1 grid must be strictly descending");
    }
    for (double l2 : grid.lambda2_values)
        if (!(l2 >= 0.0)) throw ValidationError("lambda2 grid values must be >= 0");
}

inline std::vector<double> log_spaced_descending(double top, double bottom, int count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = top;
        return v;
    }
    const double step = std::log(bottom / top) / (count - 1);
    for (int i = 0; i < count; ++i) v[i] = top * std::exp(step * i);
    return v;
}

// 50 log-spaced lambda1 values from 2 ||X^T y||_inf (the smallest value that
// zeroes every unit-weight coordinate) down four decades; lambda2 over a
// fixed ladder including 0.
inline Grid default_grid(const Dataset& data, int count = 50) {
    const double top =
        std::max(2.0 * (data.X.transpose() * data.y).cwiseAbs().maxCoeff(), 1e-10);
    Grid grid;
    grid.lambda1_values = log_spaced_descending(top, top * 1e-4, count);
    grid.lambda2_values = {0.0, 0.01, 0.1, 1.0, 10.0, 100.0};
    return grid;
}

// n log(RSS/n) + |active| log(n) with RSS from the final (rescaled) beta.
// A perfect fit (RSS = 0) returns -inf as a degenerate sentinel.
inline double bic_score(const Dataset& data, const FitResult& fit) {
    if (fit.beta.size() != data.p())
        throw ValidationError("bic_score: beta length != p");
    const double n = static_cast<double>(data.n());
    const double rss = (data.y - data.X * fit.beta).squaredNorm();
    if (rss <= 0.0) return -kInf;
    return n * std::log(rss / n) +
           static_cast<double>(fit.active_set.size()) * std::log(n);
}

struct TuneResult {
    FitResult fit;
    Method method = Method::lasso;
    double lambda1 = std::numeric_limits<double>::quiet_NaN();       // stage 1
    double lambda2 = std::numeric_limits<double>::quiet_NaN();
    double lambda1_star = std::numeric_limits<double>::quiet_NaN();  // stage 2
    double bic = std::numeric_limits<double>::quiet_NaN();
    double max_scaled_kkt = 0.0;  // worst scaled KKT residual over the scan
    int nonconverged = 0;         // grid fits that hit the sweep cap
};

namespace detail {

struct GridScan {
    FitResult best_fit;
    double best_bic = kInf;
    double best_l1 = -kInf;
    double best_l2 = -kInf;
    double max_scaled_kkt = 0.0;
    int nonconverged = 0;
    bool any = false;

    void offer(double bic, double l1, double l2, FitResult&& fit) {
        if (fit.converged)
            max_scaled_kkt = std::max(max_scaled_kkt, fit.kkt_residual / fit.kkt_scale);
        else
            ++nonconverged;
        const bool better =
            !any || bic < best_bic ||
            (bic == best_bic && (l1 > best_l1 || (l1 == best_l1 && l2 > best_l2)));
        if (better) {
            best_bic = bic;
            best_l1 = l1;
            best_l2 = l2;
            best_fit = std::move(fit);
            any = true;
        }
    }
};

// Scans lambda1 descending at fixed lambda2/weights with warm starts.
template <typename FitFn>
inline void scan_lambda1(const std::vector<double>& lambda1_values, double lambda2,
                         const Dataset& data, FitFn&& fit_at, GridScan& scan) {
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(data.p());
    for (double l1 : lambda1_values) {
        FitResult fit = fit_at(l1, warm);
        warm = fit.beta_raw;
        const double bic = bic_score(data, fit);
        scan.offer(bic, l1, lambda2, std::move(fit));
    }
}

// Smallest lambda1_star that zeroes every coordinate under these weights,
// then the same log-spaced ratio pattern as the stage-1 grid. The adaptive
// weights move the relevant scale by orders of magnitude, so reusing the
// stage-1 values verbatim would scan the wrong range.
inline std::vector<double> stage2_lambda1_grid(const Dataset& data,
                                               const Eigen::VectorXd& weights,
                                               const std::vector<double>& pattern) {
    const Eigen::VectorXd xty = data.X.transpose() * data.y;
    double top = 0.0;
    for (Eigen::Index j = 0; j < weights.size(); ++j)
        if (!std::isinf(weights[j]) && weights[j] > 0.0)
            top = std::max(top, 2.0 * std::abs(xty[j]) / weights[j]);
    if (top <= 0.0) top = 1.0;
    std::vector<double> out;
    out.reserve(pattern.size());
    for (double v : pattern) out.push_back(top * (v / pattern.front()));
    return out;
}

}  // namespace detail

// Exhaustive BIC selection over the grid. Ties break toward larger lambda1,
// then larger lambda2. alasso/aenet tune stage 1 first (lambda2 forced to 0
// for alasso), then scan lambda1_star holding lambda2 and the weights fixed.
inline TuneResult tune(const Dataset& data, Method method, const Grid& grid,
                       const AdaptiveConfig& adaptive_config = {},
                       const SolverConfig& solver_config = {}) {
    validate(grid);
    TuneResult out;
    out.method = method;

    const auto enet_scan = [&](const std::vector<double>& lambda2_values) {
        detail::GridScan scan;
        for (double l2 : lambda2_values) {
            detail::scan_lambda1(
                grid.lambda1_values, l2, data,
                [&](double l1, const Eigen::VectorXd& warm) {
                    return weighted_enet_fit(data, Penalty::unit(l1, l2),
                                             solver_config, &warm);
                },
                scan);
        }
        return scan;
    };

    switch (method) {
        case Method::lasso:
        case Method::enet: {
            detail::GridScan scan = enet_scan(
                method == Method::lasso ? std::vector<double>{0.0} : grid.lambda2_values);
            out.fit = std::move(scan.best_fit);
            out.lambda1 = scan.best_l1;
            out.lambda2 = scan.best_l2;
            out.bic = scan.best_bic;
            out.max_scaled_kkt = scan.max_scaled_kkt;
            out.nonconverged = scan.nonconverged;
            return out;
        }
        case Method::scad: {
            detail::GridScan scan;
            const double n = static_cast<double>(data.n());
            detail::scan_lambda1(
                grid.lambda1_values, 0.0, data,
                [&](double l1, const Eigen::VectorXd& warm) {
                    return scad_fit(data, l1 / n, solver_config, &warm);
                },
                scan);
            out.fit = std::move(scan.best_fit);
            out.lambda1 = scan.best_l1 / n;  // the SCAD lambda actually used
            out.lambda2 = 0.0;
            out.bic = scan.best_bic;
            out.max_scaled_kkt = scan.max_scaled_kkt;
            out.nonconverged = scan.nonconverged;
            return out;
        }
        case Method::alasso:
        case Method::aenet: {
            detail::GridScan stage1 = enet_scan(
                method == Method::alasso ? std::vector<double>{0.0} : grid.lambda2_values);
            const double l2 = stage1.best_l2;
            const Eigen::VectorXd w =
                adaptive_weights(stage1.best_fit.beta, adaptive_config, data.n());

            detail::GridScan stage2;
            const std::vector<double> l1s_grid =
                detail::stage2_lambda1_grid(data, w, grid.lambda1_values);
            detail::scan_lambda1(
                l1s_grid, l2, data,
                [&](double l1s, const Eigen::VectorXd& warm) {
                    return weighted_enet_fit(data, Penalty{l1s, l2, w}, solver_config,
                                             &warm);
                },
                stage2);

            out.fit = std::move(stage2.best_fit);
            out.lambda1 = stage1.best_l1;
            out.lambda2 = l2;
            out.lambda1_star = stage2.best_l1;
            out.bic = stage2.best_bic;
            out.max_scaled_kkt = std::max(stage1.max_scaled_kkt, stage2.max_scaled_kkt);
            out.nonconverged = stage1.nonconverged + stage2.nonconverged;
            return out;
        }
    }
    throw ValidationError("unknown method");
}

}  // namespace adenet
