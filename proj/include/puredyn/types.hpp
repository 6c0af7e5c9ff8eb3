#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace puredyn {

using cplx = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

}  // namespace puredyn
