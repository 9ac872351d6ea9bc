#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdrk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error type thrown for contract violations across the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace linalg {

inline bool is_strictly_lower(const Matrix& m, double tol = 0.0) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > tol) return false;
  return true;
}

/// Inverse of I + L for strictly lower triangular L, by forward substitution.
inline Matrix unit_lower_inverse(const Matrix& strictly_lower) {
  const auto n = strictly_lower.rows();
  Matrix inv = Matrix::Identity(n, n);
  // Column j of the inverse solves (I + L) x = e_j.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double acc = 0.0;
      for (Eigen::Index k = j; k < i; ++k) acc += strictly_lower(i, k) * inv(k, j);
      inv(i, j) = -acc;
    }
  }
  return inv;
}

inline double min_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.minCoeff();
}

inline double min_entry(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.minCoeff();
}

inline bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) return false;
  return true;
}

}  // namespace linalg
}  // namespace mdrk
