#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace pipgscp {

using Index = Eigen::Index;

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline constexpr int kStateDim = 6;
inline constexpr int kControlDim = 3;

}  // namespace pipgscp
