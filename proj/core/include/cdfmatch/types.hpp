#pragma once

#include <Eigen/Core>

namespace cdfmatch {

/// Row-major so that a sample (one row) is contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace cdfmatch
