#pragma once

#include <Eigen/Dense>

namespace saddlekit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace saddlekit
