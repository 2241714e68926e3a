#pragma once

#include <Eigen/Dense>

namespace xcsbm {

/// Node-major dense matrix: row i holds the features (or activations) of node i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace xcsbm
