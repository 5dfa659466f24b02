#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace adenet {

// Thrown on contract violations of the input data (non-finite entries,
// dimension mismatches, uncentered data where centered is required).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a problem instance has no well-defined solution path
// (e.g. a zero-norm column with no penalty to pin its coefficient).
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Centered regression data. y length n, X is n x p dense; column j is
// predictor j. Treat as immutable after construction.
struct Dataset {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    bool centered = false;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }
};

inline void validate(const Dataset& data) {
    if (data.n() < 2 || data.p() < 1)
        throw ValidationError("dataset requires n >= 2 and p >= 1");
    if (data.y.size() != data.n())
        throw ValidationError("y length does not match rows of X");
    if (!data.y.allFinite() || !data.X.allFinite())
        throw ValidationError("dataset contains non-finite entries");
    if (data.centered) {
        const double ybar = std::abs(data.y.mean());
        const double xbar = data.X.colwise().mean().cwiseAbs().maxCoeff();
        if (ybar > 1e-10 || xbar > 1e-10)
            throw ValidationError("dataset flagged centered but means exceed 1e-10");
    }
}

// Subtracts column means of X and the mean of y. Two passes so residual
// means land within 1e-12 even for poorly scaled inputs; idempotent.
inline Dataset center(Dataset data) {
    Dataset check = data;
    check.centered = false;
    validate(check);
    for (int pass = 0; pass < 2; ++pass) {
        data.y.array() -= data.y.mean();
        Eigen::RowVectorXd mu = data.X.colwise().mean();
        data.X.rowwise() -= mu;
    }
    data.centered = true;
    return data;
}

struct StandardizedDataset {
    Dataset data;                 // columns rescaled to unit L2 norm
    Eigen::VectorXd column_norms; // original ||x_j||, for mapping back
};

// Rescales every column to L2-norm one (zero-norm columns are left as is
// with a recorded norm of 0). Pairs with SolverConfig::standardized.
inline StandardizedDataset standardize(Dataset data) {
    validate(data);
    StandardizedDataset out;
    out.column_norms.resize(data.p());
    for (Eigen::Index j = 0; j < data.p(); ++j) {
        const double nrm = data.X.col(j).norm();
        out.column_norms[j] = nrm;
        if (nrm > 0) data.X.col(j) /= nrm;
    }
    out.data = std::move(data);
    return out;
}

// (lambda1, lambda2) plus per-coefficient l1 weights. An empty weights
// vector means unit weights. A weight of +inf together with lambda1 > 0
// forces that coefficient to exactly 0.
struct Penalty {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    Eigen::VectorXd weights;

    static Penalty unit(double lambda1, double lambda2) {
        return Penalty{lambda1, lambda2, Eigen::VectorXd()};
    }

    double weight(Eigen::Index j) const {
        return weights.size() > 0 ? weights[j] : 1.0;
    }
};

inline void validate(const Penalty& penalty, Eigen::Index p) {
    if (!(penalty.lambda1 >= 0.0) || !(penalty.lambda2 >= 0.0) ||
        std::isinf(penalty.lambda1) || std::isinf(penalty.lambda2))
        throw ValidationError("lambda1 and lambda2 must be finite and >= 0");
    if (penalty.weights.size() > 0) {
        if (penalty.weights.size() != p)
            throw ValidationError("weights length does not match p");
        for (Eigen::Index j = 0; j < p; ++j) {
            const double w = penalty.weights[j];
            if (std::isnan(w) || w < 0.0)
                throw ValidationError("weights must be >= 0 and not NaN");
        }
    }
}

// Output of any fit. beta is the final estimator (prefactor applied when
// the solver was configured to rescale), beta_raw the argmin.
struct FitResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd beta_raw;
    std::vector<int> active_set;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double kkt_residual = 0.0;          // max violation, unscaled
    double kkt_scale = 1.0;             // max(1, ||X^T y||_inf)
    std::vector<double> objective_trace; // per sweep, if tracking enabled
};

inline std::vector<int> nonzero_indices(const Eigen::VectorXd& v) {
    std::vector<int> idx;
    for (Eigen::Index j = 0; j < v.size(); ++j)
        if (v[j] != 0.0) idx.push_back(static_cast<int>(j));
    return idx;
}

// Full generative description of one simulation design.
struct Scenario {
    int n = 0;
    int p = 0;
    double rho = 0.0;      // AR(1) correlation of the design, 0 => iid
    double sigma = 1.0;    // noise standard deviation
    Eigen::VectorXd beta_star;
    std::vector<int> support;
    double gamma = 1.0;    // adaptive weight exponent
    double nu = 0.0;       // dimension growth rate, p = O(n^nu)
    std::uint64_t seed = 0;
    int replications = 100;
    bool redraw_beta = false; // redraw beta_star each replication
    int d_n = 0;              // screening size for SIS pipelines, 0 = none
};

inline void validate(const Scenario& s) {
    if (s.n < 2 || s.p < 1) throw ValidationError("scenario requires n >= 2, p >= 1");
    if (!(s.rho >= 0.0 && s.rho < 1.0)) throw ValidationError("rho must be in [0,1)");
    if (!(s.sigma > 0.0)) throw ValidationError("sigma must be > 0");
    if (s.beta_star.size() != s.p) throw ValidationError("beta_star length != p");
    if (nonzero_indices(s.beta_star) != s.support)
        throw ValidationError("support inconsistent with beta_star");
    if (static_cast<int>(s.support.size()) > s.p)
        throw ValidationError("support larger than p");
    if (!(s.nu >= 0.0 && s.nu < 1.0)) throw ValidationError("nu must be in [0,1)");
    if (!(s.gamma > 2.0 * s.nu / (1.0 - s.nu)))
        throw ValidationError("gamma must exceed 2*nu/(1-nu)");
}

}  // namespace adenet
