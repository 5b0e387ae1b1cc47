#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>

namespace extcoop {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical rank with threshold max(rows, cols) * eps * sigma_max.
inline Eigen::Index numerical_rank(const Matrix& a) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                       std::numeric_limits<double>::epsilon() * sv(0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > tol) ++rank;
    return rank;
}

/// Orthonormal basis (as columns) of the null space of a^T, i.e. the left null space of a.
inline Matrix left_null_space(const Matrix& a) {
    const Eigen::Index rows = a.rows();
    if (a.cols() == 0) return Matrix::Identity(rows, rows);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
    const Eigen::Index rank = numerical_rank(a);
    return svd.matrixU().rightCols(rows - rank);
}

}  // namespace extcoop
