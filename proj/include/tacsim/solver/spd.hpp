#pragma once

#include "tacsim/common.hpp"

namespace tacsim {

// Eigen-projection of a symmetric matrix: negative eigenvalues clamped to 0,
// small diagonal regularization added (Projective Newton building block).
template <typename Derived>
Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> spd_project(
    const Eigen::MatrixBase<Derived>& m, double reg = 1e-12) {
    using Mat = Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
    Eigen::SelfAdjointEigenSolver<Mat> eig(m);
    auto vals = eig.eigenvalues();
    if (vals.minCoeff() >= 0) {
        Mat out = m;
        out.diagonal().array() += reg;
        return out;
    }
    Mat out = eig.eigenvectors() * vals.cwiseMax(0.0).asDiagonal() * eig.eigenvectors().transpose();
    out.diagonal().array() += reg;
    return out;
}

}  // namespace tacsim
