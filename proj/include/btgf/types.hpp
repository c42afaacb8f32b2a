#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace btgf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

using Labels = std::vector<int>;

}  // namespace btgf
