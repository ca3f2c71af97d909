#ifndef QUATOPT_RANDOM_HPP
#define QUATOPT_RANDOM_HPP

#include <random>

#include "quatopt/quaternion_matrix.hpp"

namespace quatopt {

using Rng = std::mt19937_64;

inline Quaterniond random_quaternion(Rng& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng), g(rng), g(rng)};
}

inline QuaternionVectord random_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> g;
  QuaternionVectord v(n);
  for (Eigen::Index i = 0; i < n; ++i) v.set(i, {g(rng), g(rng), g(rng), g(rng)});
  return v;
}

inline QuaternionVectord random_unit_vector(Eigen::Index n, Rng& rng) {
  QuaternionVectord v = random_vector(n, rng);
  double m = norm(v);
  while (m < 1e-12) {
    v = random_vector(n, rng);
    m = norm(v);
  }
  return v *= 1.0 / m;
}

inline QuaternionMatrixd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g;
  QuaternionMatrixd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m.set(i, j, {g(rng), g(rng), g(rng), g(rng)});
  return m;
}

inline HermitianMatrixd random_hermitian(Eigen::Index n, Rng& rng) {
  return HermitianMatrixd(hermitian_part(random_matrix(n, n, rng)));
}

// PSD matrix of the given rank, X = sum of rank outer products.
inline HermitianMatrixd random_psd(Eigen::Index n, Eigen::Index rank, Rng& rng) {
  QuaternionMatrixd x(n, n);
  for (Eigen::Index t = 0; t < rank; ++t) {
    const QuaternionVectord u = random_vector(n, rng);
    x += outer(u, u);
  }
  return HermitianMatrixd(hermitian_part(x));
}

// Unitary quaternion matrix from Gram-Schmidt on random columns
// (right scalar multiplication).
inline QuaternionMatrixd random_unitary(Eigen::Index n, Rng& rng) {
  std::vector<QuaternionVectord> cols;
  cols.reserve(n);
  while (static_cast<Eigen::Index>(cols.size()) < n) {
    QuaternionVectord v = random_vector(n, rng);
    for (const auto& u : cols) v -= u * dot(u, v);
    const double m = norm(v);
    if (m < 1e-8) continue;
    cols.push_back(v *= 1.0 / m);
  }
  QuaternionMatrixd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) p.set(i, j, cols[j](i));
  return p;
}

}  // namespace quatopt

#endif
