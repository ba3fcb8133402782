#pragma once

#include <random>

#include "tuckerkit/tensor.hpp"

namespace tuckerkit {

// Column-major standard Gaussian matrix. Complex matrices draw every real
// part first, then every imaginary part.
template <TensorScalar T>
Matrix<T> gaussian_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal;
  Matrix<double> re(rows, cols);
  for (Eigen::Index i = 0; i < re.size(); ++i) re.data()[i] = normal(rng);
  if constexpr (std::same_as<T, double>) {
    return re;
  } else {
    Matrix<double> im(rows, cols);
    for (Eigen::Index i = 0; i < im.size(); ++i) im.data()[i] = normal(rng);
    Matrix<cplx> z(rows, cols);
    z.real() = re;
    z.imag() = im;
    return z;
  }
}

}  // namespace tuckerkit
