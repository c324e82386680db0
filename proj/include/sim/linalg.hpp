#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace sim {

// Row-major matrices for model parameters and token sequences; biases are
// stored as 1 x n matrices so parameter traversal is uniform.
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Column-major matrices for surface data: a V x T series keeps each frame
// contiguous in memory.
template <class S>
using CMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using MatF = Mat<float>;
using MatD = Mat<double>;

template <class S>
inline S gelu(S x) {
  return S(0.5) * x * (S(1) + S(std::erf(double(x) * M_SQRT1_2)));
}

template <class S>
inline S gelu_grad(S x) {
  double xd = double(x);
  double cdf = 0.5 * (1.0 + std::erf(xd * M_SQRT1_2));
  double pdf = std::exp(-0.5 * xd * xd) / std::sqrt(2.0 * M_PI);
  return S(cdf + xd * pdf);
}

// Row-wise softmax with row-max subtraction.
template <class S>
inline Mat<S> softmax_rows(const Mat<S>& z) {
  Mat<S> p(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    S m = z.row(i).maxCoeff();
    p.row(i) = (z.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

// Backward through row-wise softmax: given probabilities p and upstream dp,
// returns the gradient w.r.t. the logits.
template <class S>
inline Mat<S> softmax_rows_backward(const Mat<S>& p, const Mat<S>& dp) {
  Mat<S> dz(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    S dot = p.row(i).cwiseProduct(dp.row(i)).sum();
    dz.row(i) = (p.row(i).array() * (dp.row(i).array() - dot)).matrix();
  }
  return dz;
}

// Z-score over all entries; a (near-)constant input maps to all zeros.
template <class S, int Opt>
inline void zscore_inplace(Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Opt>& m) {
  S mean = m.mean();
  S var = (m.array() - mean).square().mean();
  S sd = std::sqrt(double(var));
  if (sd < S(1e-8)) sd = S(1);
  m = ((m.array() - mean) / sd).matrix();
}

}  // namespace sim
