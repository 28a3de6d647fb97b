#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sasvi {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;  // column-major

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Default discard margin shared by every screening decision and by the
// sure-removal parameters, so both always agree.
inline constexpr double kDefaultMargin = 1e-6;

}  // namespace sasvi
