#include "quatopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "quatopt/errors.hpp"

namespace quatopt {

RealEmbedding real_embed(const QuaternionMatrixd& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  RealEmbedding e;
  e.quaternion_rows = rows;
  e.quaternion_cols = cols;
  e.matrix.setZero(4 * rows, 4 * cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double a = m.a(i, j), b = m.b(i, j), c = m.c(i, j), d = m.d(i, j);
      e.matrix.block<4, 4>(4 * i, 4 * j) << a, -b, -c, -d,
                                            b,  a, -d,  c,
                                            c,  d,  a, -b,
                                            d, -c,  b,  a;
    }
  }
  return e;
}

Eigen::VectorXd real_column(const QuaternionVectord& v) {
  const Eigen::Index n = v.size();
  Eigen::VectorXd z(4 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    z(4 * i + 0) = v.a(i);
    z(4 * i + 1) = v.b(i);
    z(4 * i + 2) = v.c(i);
    z(4 * i + 3) = v.d(i);
  }
  return z;
}

QuaternionVectord from_real_column(const Eigen::VectorXd& z) {
  if (z.size() % 4 != 0) throw DimensionError("real column length must be divisible by 4");
  const Eigen::Index n = z.size() / 4;
  QuaternionVectord v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v.set(i, {z(4 * i + 0), z(4 * i + 1), z(4 * i + 2), z(4 * i + 3)});
  }
  return v;
}

void jacobi_eigensolver(const Eigen::MatrixXd& s, Eigen::VectorXd& eigenvalues,
                        Eigen::MatrixXd& eigenvectors, double rel_off_tol, int max_sweeps) {
  const Eigen::Index m = s.rows();
  if (s.cols() != m) throw DimensionError("jacobi_eigensolver requires a square matrix");
  Eigen::MatrixXd a = s;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(m, m);
  const double norm_f = s.norm();
  const double off_target = rel_off_tol * norm_f;

  auto off_norm = [&a, m]() {
    double sum = 0.0;
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = p + 1; q < m; ++q) sum += a(p, q) * a(p, q);
    return std::sqrt(2.0 * sum);
  };

  bool converged = norm_f == 0.0 || off_norm() <= off_target;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        const double tau = sn / (1.0 + c);
        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index r = 0; r < m; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - sn * (vrq + tau * vrp);
          v(r, q) = vrq + sn * (vrp - tau * vrq);
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = a(p, r) = arp - sn * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + sn * (arp - tau * arq);
        }
      }
    }
    converged = off_norm() <= off_target;
  }
  if (!converged) throw NumericalError("Jacobi eigensolver did not converge");

  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(),
            [&a](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  eigenvalues.resize(m);
  eigenvectors.resize(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    eigenvalues(k) = a(order[k], order[k]);
    eigenvectors.col(k) = v.col(order[k]);
  }
}

namespace {

// Reads real eigenvector columns of one equal-eigenvalue group back as
// quaternion vectors. The group's real eigenspace is the right-H-module
// span of `count` quaternion vectors; a pivoted Gram-Schmidt over all
// candidate columns extracts an orthonormal module basis.
std::vector<QuaternionVectord> extract_group(const Eigen::MatrixXd& vectors,
                                             Eigen::Index first_col, Eigen::Index num_cols,
                                             Eigen::Index count) {
  std::vector<QuaternionVectord> candidates;
  candidates.reserve(num_cols);
  for (Eigen::Index c = 0; c < num_cols; ++c) {
    candidates.push_back(from_real_column(vectors.col(first_col + c)));
  }
  std::vector<QuaternionVectord> accepted;
  accepted.reserve(count);
  std::vector<bool> used(candidates.size(), false);
  for (Eigen::Index t = 0; t < count; ++t) {
    double best_norm = -1.0;
    int best = -1;
    QuaternionVectord best_vec;
    for (std::size_t s = 0; s < candidates.size(); ++s) {
      if (used[s]) continue;
      QuaternionVectord w = candidates[s];
      for (const auto& u : accepted) w -= u * dot(u, w);
      const double nw = norm(w);
      if (nw > best_norm) {
        best_norm = nw;
        best = static_cast<int>(s);
        best_vec = std::move(w);
      }
    }
    if (best < 0 || best_norm < 1e-6) {
      throw NumericalError("degenerate eigenspace: could not extract a quaternion basis");
    }
    used[best] = true;
    // second orthogonalization pass tightens the basis
    for (const auto& u : accepted) best_vec -= u * dot(u, best_vec);
    accepted.push_back(best_vec *= 1.0 / norm(best_vec));
  }
  return accepted;
}

}  // namespace

EigenDecomposition eig_hermitian(const HermitianMatrixd& x) {
  const Eigen::Index n = x.n();
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  if (n == 0) return out;

  const RealEmbedding emb = real_embed(x.matrix());
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
  jacobi_eigensolver(emb.matrix, evals, evecs);

  // Every quaternion eigenvalue shows up 4 times in the embedding. Group the
  // sorted values into consecutive blocks of 4 and check the spread; a large
  // spread means the real eigensolve failed, not that the structure is absent.
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lo = evals(4 * k + 3), hi = evals(4 * k);
    const double mid = 0.5 * (lo + hi);
    if (hi - lo > 1e-8 * (1.0 + std::abs(mid))) {
      throw NumericalError("embedded eigenvalues do not cluster in groups of 4 (spread " +
                           std::to_string(hi - lo) + ")");
    }
    out.eigenvalues(k) = 0.25 * (evals(4 * k) + evals(4 * k + 1) + evals(4 * k + 2) + evals(4 * k + 3));
  }

  // Merge clusters that share an eigenvalue and extract one quaternion
  // eigenvector per cluster within each merged group.
  out.eigenvectors.reserve(n);
  Eigen::Index k = 0;
  while (k < n) {
    Eigen::Index g = k + 1;
    while (g < n && std::abs(out.eigenvalues(g) - out.eigenvalues(k)) <=
                        1e-10 * (1.0 + std::abs(out.eigenvalues(k)))) {
      ++g;
    }
    auto group = extract_group(evecs, 4 * k, 4 * (g - k), g - k);
    for (auto& v : group) out.eigenvectors.push_back(std::move(v));
    k = g;
  }
  return out;
}

int numerical_rank(const Eigen::VectorXd& eigenvalues, double rel_tol) {
  if (eigenvalues.size() == 0) return 0;
  const double lead = std::max(eigenvalues(0), 1e-300);
  int r = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) > rel_tol * lead) ++r;
  }
  return r;
}

std::vector<QuaternionVectord> psd_factorize(const HermitianMatrixd& x, double rel_tol) {
  EigenDecomposition eig = eig_hermitian(x);
  if (eig.eigenvalues.size() == 0) return {};
  const double lambda_max = std::max(eig.eigenvalues(0), 0.0);
  const double neg_tol = rel_tol * (1.0 + lambda_max);
  const double lambda_min = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lambda_min < -neg_tol) {
    throw NotPsdError("matrix is not PSD: min eigenvalue " + std::to_string(lambda_min));
  }
  const int r = numerical_rank(eig.eigenvalues, rel_tol);
  std::vector<QuaternionVectord> factors;
  factors.reserve(r);
  for (int i = 0; i < r; ++i) {
    const double lambda = std::max(eig.eigenvalues(i), 0.0);
    factors.push_back(eig.eigenvectors[i] * std::sqrt(lambda));
  }
  return factors;
}

}  // namespace quatopt
