#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "adenet/rng.hpp"
#include "adenet/types.hpp"

namespace testutil {

// Random centered dataset with N(0,1)-ish entries.
inline adenet::Dataset random_dataset(int n, int p, adenet::Rng& rng) {
    adenet::Dataset data;
    data.X.resize(n, p);
    data.y.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) data.X(i, j) = rng.normal();
        data.y[i] = rng.normal();
    }
    return adenet::center(std::move(data));
}

// Centered design with X^T X = n I exactly (up to fp): Gram-Schmidt on
// centered Gaussian columns, then scaled to column norm sqrt(n).
inline adenet::Dataset orthonormal_in_scale_dataset(int n, int p, adenet::Rng& rng) {
    Eigen::MatrixXd M(n, p + 1);
    M.col(0).setOnes();  // orthogonalizing against 1 centers the columns
    for (int j = 1; j <= p; ++j)
        for (int i = 0; i < n; ++i) M(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p + 1);
    adenet::Dataset data;
    data.X = Q.rightCols(p) * std::sqrt(static_cast<double>(n));
    data.y.resize(n);
    for (int i = 0; i < n; ++i) data.y[i] = rng.normal();
    return adenet::center(std::move(data));
}

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
