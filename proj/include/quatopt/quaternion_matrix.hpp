#ifndef QUATOPT_QUATERNION_MATRIX_HPP
#define QUATOPT_QUATERNION_MATRIX_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

#include "quatopt/quaternion.hpp"

namespace quatopt {

// Dense quaternion matrix stored as four real component matrices,
// M = a + b*i + c*j + d*k. All arithmetic reduces to Eigen expressions on
// the components; products use the Hamilton multiplication table blockwise.
// Scalar multiplication by quaternions is one-sided: right and left
// multiplication are distinct operations.
template <typename Scalar>
class QuaternionMatrix {
 public:
  using Real = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Real a, b, c, d;

  QuaternionMatrix() : QuaternionMatrix(0, 0) {}
  QuaternionMatrix(Eigen::Index rows, Eigen::Index cols)
      : a(Real::Zero(rows, cols)),
        b(Real::Zero(rows, cols)),
        c(Real::Zero(rows, cols)),
        d(Real::Zero(rows, cols)) {}
  QuaternionMatrix(Real a_, Real b_, Real c_, Real d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    if (b.rows() != a.rows() || c.rows() != a.rows() || d.rows() != a.rows() ||
        b.cols() != a.cols() || c.cols() != a.cols() || d.cols() != a.cols()) {
      throw DimensionError("quaternion matrix components differ in shape");
    }
  }

  static QuaternionMatrix Zero(Eigen::Index rows, Eigen::Index cols) {
    return QuaternionMatrix(rows, cols);
  }
  static QuaternionMatrix Identity(Eigen::Index n) {
    QuaternionMatrix m(n, n);
    m.a = Real::Identity(n, n);
    return m;
  }

  Eigen::Index rows() const { return a.rows(); }
  Eigen::Index cols() const { return a.cols(); }

  Quaternion<Scalar> operator()(Eigen::Index i, Eigen::Index j) const {
    return {a(i, j), b(i, j), c(i, j), d(i, j)};
  }
  void set(Eigen::Index i, Eigen::Index j, const Quaternion<Scalar>& q) {
    a(i, j) = q.a; b(i, j) = q.b; c(i, j) = q.c; d(i, j) = q.d;
  }

  QuaternionMatrix operator-() const { return {-a, -b, -c, -d}; }

  QuaternionMatrix& operator+=(const QuaternionMatrix& o) {
    a += o.a; b += o.b; c += o.c; d += o.d;
    return *this;
  }
  QuaternionMatrix& operator-=(const QuaternionMatrix& o) {
    a -= o.a; b -= o.b; c -= o.c; d -= o.d;
    return *this;
  }
  QuaternionMatrix& operator*=(Scalar s) {
    a *= s; b *= s; c *= s; d *= s;
    return *this;
  }
};

// Dense quaternion column vector; same componentwise layout as the matrix.
template <typename Scalar>
class QuaternionVector {
 public:
  using Real = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Real a, b, c, d;

  QuaternionVector() : QuaternionVector(0) {}
  explicit QuaternionVector(Eigen::Index n)
      : a(Real::Zero(n)), b(Real::Zero(n)), c(Real::Zero(n)), d(Real::Zero(n)) {}
  QuaternionVector(Real a_, Real b_, Real c_, Real d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    if (b.size() != a.size() || c.size() != a.size() || d.size() != a.size()) {
      throw DimensionError("quaternion vector components differ in length");
    }
  }

  static QuaternionVector Zero(Eigen::Index n) { return QuaternionVector(n); }
  static QuaternionVector Unit(Eigen::Index n, Eigen::Index i) {
    QuaternionVector v(n);
    v.a(i) = Scalar(1);
    return v;
  }

  Eigen::Index size() const { return a.size(); }

  Quaternion<Scalar> operator()(Eigen::Index i) const {
    return {a(i), b(i), c(i), d(i)};
  }
  void set(Eigen::Index i, const Quaternion<Scalar>& q) {
    a(i) = q.a; b(i) = q.b; c(i) = q.c; d(i) = q.d;
  }

  QuaternionVector operator-() const { return {-a, -b, -c, -d}; }

  QuaternionVector& operator+=(const QuaternionVector& o) {
    a += o.a; b += o.b; c += o.c; d += o.d;
    return *this;
  }
  QuaternionVector& operator-=(const QuaternionVector& o) {
    a -= o.a; b -= o.b; c -= o.c; d -= o.d;
    return *this;
  }
  QuaternionVector& operator*=(Scalar s) {
    a *= s; b *= s; c *= s; d *= s;
    return *this;
  }
};

template <typename S>
QuaternionMatrix<S> operator+(QuaternionMatrix<S> x, const QuaternionMatrix<S>& y) {
  return x += y;
}
template <typename S>
QuaternionMatrix<S> operator-(QuaternionMatrix<S> x, const QuaternionMatrix<S>& y) {
  return x -= y;
}
template <typename S>
QuaternionMatrix<S> operator*(QuaternionMatrix<S> x, S s) { return x *= s; }
template <typename S>
QuaternionMatrix<S> operator*(S s, QuaternionMatrix<S> x) { return x *= s; }

template <typename S>
QuaternionVector<S> operator+(QuaternionVector<S> x, const QuaternionVector<S>& y) {
  return x += y;
}
template <typename S>
QuaternionVector<S> operator-(QuaternionVector<S> x, const QuaternionVector<S>& y) {
  return x -= y;
}
template <typename S>
QuaternionVector<S> operator*(QuaternionVector<S> x, S s) { return x *= s; }
template <typename S>
QuaternionVector<S> operator*(S s, QuaternionVector<S> x) { return x *= s; }

template <typename S>
QuaternionMatrix<S> conj(const QuaternionMatrix<S>& m) {
  return {m.a, -m.b, -m.c, -m.d};
}

template <typename S>
QuaternionMatrix<S> adjoint(const QuaternionMatrix<S>& m) {
  return {m.a.transpose(), (-m.b).transpose(), (-m.c).transpose(), (-m.d).transpose()};
}

// Hamilton product expanded over the four components; Eigen does the
// real matrix products.
template <typename S>
QuaternionMatrix<S> operator*(const QuaternionMatrix<S>& x, const QuaternionMatrix<S>& y) {
  if (x.cols() != y.rows()) throw DimensionError("quaternion matrix product shape mismatch");
  return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
          x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
          x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
          x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

template <typename S>
QuaternionVector<S> operator*(const QuaternionMatrix<S>& x, const QuaternionVector<S>& y) {
  if (x.cols() != y.size()) throw DimensionError("matrix-vector product shape mismatch");
  return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
          x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
          x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
          x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

// Right scalar multiplication M*q, entrywise m_ij * q.
template <typename S>
QuaternionMatrix<S> operator*(const QuaternionMatrix<S>& x, const Quaternion<S>& q) {
  return {x.a * q.a - x.b * q.b - x.c * q.c - x.d * q.d,
          x.a * q.b + x.b * q.a + x.c * q.d - x.d * q.c,
          x.a * q.c - x.b * q.d + x.c * q.a + x.d * q.b,
          x.a * q.d + x.b * q.c - x.c * q.b + x.d * q.a};
}

template <typename S>
QuaternionVector<S> operator*(const QuaternionVector<S>& x, const Quaternion<S>& q) {
  return {x.a * q.a - x.b * q.b - x.c * q.c - x.d * q.d,
          x.a * q.b + x.b * q.a + x.c * q.d - x.d * q.c,
          x.a * q.c - x.b * q.d + x.c * q.a + x.d * q.b,
          x.a * q.d + x.b * q.c - x.c * q.b + x.d * q.a};
}

// x^H y.
template <typename S>
Quaternion<S> dot(const QuaternionVector<S>& x, const QuaternionVector<S>& y) {
  if (x.size() != y.size()) throw DimensionError("dot length mismatch");
  return {x.a.dot(y.a) + x.b.dot(y.b) + x.c.dot(y.c) + x.d.dot(y.d),
          x.a.dot(y.b) - x.b.dot(y.a) - x.c.dot(y.d) + x.d.dot(y.c),
          x.a.dot(y.c) + x.b.dot(y.d) - x.c.dot(y.a) - x.d.dot(y.b),
          x.a.dot(y.d) - x.b.dot(y.c) + x.c.dot(y.b) - x.d.dot(y.a)};
}

// Rank-one matrix x y^H, entry (i,j) = x_i * conj(y_j).
template <typename S>
QuaternionMatrix<S> outer(const QuaternionVector<S>& x, const QuaternionVector<S>& y) {
  return {x.a * y.a.transpose() + x.b * y.b.transpose() + x.c * y.c.transpose() + x.d * y.d.transpose(),
          -x.a * y.b.transpose() + x.b * y.a.transpose() - x.c * y.d.transpose() + x.d * y.c.transpose(),
          -x.a * y.c.transpose() + x.b * y.d.transpose() + x.c * y.a.transpose() - x.d * y.b.transpose(),
          -x.a * y.d.transpose() - x.b * y.c.transpose() + x.c * y.b.transpose() + x.d * y.a.transpose()};
}

template <typename S>
S squared_norm(const QuaternionVector<S>& x) {
  return x.a.squaredNorm() + x.b.squaredNorm() + x.c.squaredNorm() + x.d.squaredNorm();
}

template <typename S>
S norm(const QuaternionVector<S>& x) { return std::sqrt(squared_norm(x)); }

template <typename S>
S frobenius_norm(const QuaternionMatrix<S>& m) {
  return std::sqrt(m.a.squaredNorm() + m.b.squaredNorm() + m.c.squaredNorm() + m.d.squaredNorm());
}

// Largest entry modulus.
template <typename S>
S max_abs(const QuaternionMatrix<S>& m) {
  if (m.rows() == 0 || m.cols() == 0) return S(0);
  const auto sq = (m.a.array().square() + m.b.array().square() +
                   m.c.array().square() + m.d.array().square()).maxCoeff();
  return std::sqrt(sq);
}

// Re(tr A^H B) = tr(Aa'Ba + Ab'Bb + Ac'Bc + Ad'Bd); real bilinear.
template <typename S>
S inner_product(const QuaternionMatrix<S>& x, const QuaternionMatrix<S>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("inner_product shape mismatch");
  }
  return x.a.cwiseProduct(y.a).sum() + x.b.cwiseProduct(y.b).sum() +
         x.c.cwiseProduct(y.c).sum() + x.d.cwiseProduct(y.d).sum();
}

template <typename S>
bool is_hermitian(const QuaternionMatrix<S>& x, S tol) {
  if (x.rows() != x.cols()) throw DimensionError("is_hermitian requires a square matrix");
  const QuaternionMatrix<S> diff = x - adjoint(x);
  return max_abs(diff) <= tol;
}

// Exact Hermitian part (A + A^H)/2.
template <typename S>
QuaternionMatrix<S> hermitian_part(const QuaternionMatrix<S>& x) {
  QuaternionMatrix<S> h = x + adjoint(x);
  return h *= S(0.5);
}

// Square quaternion matrix with X = X^H, validated at construction:
// component a symmetric, components b, c, d skew-symmetric.
template <typename Scalar>
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(QuaternionMatrix<Scalar> m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("Hermitian matrix must be square");
    const Scalar tol = Scalar(1e-12) * (Scalar(1) + max_abs(m_));
    if (!is_hermitian(m_, tol)) throw DomainError("matrix is not Hermitian within tolerance");
  }

  Eigen::Index n() const { return m_.rows(); }
  const QuaternionMatrix<Scalar>& matrix() const { return m_; }
  Quaternion<Scalar> operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  static HermitianMatrix Identity(Eigen::Index n) {
    return HermitianMatrix(QuaternionMatrix<Scalar>::Identity(n));
  }
  static HermitianMatrix Zero(Eigen::Index n) {
    return HermitianMatrix(QuaternionMatrix<Scalar>::Zero(n, n));
  }

 private:
  QuaternionMatrix<Scalar> m_;
};

// x^H M y as a quaternion.
template <typename S>
Quaternion<S> bilinear_form(const QuaternionVector<S>& x, const QuaternionMatrix<S>& m,
                            const QuaternionVector<S>& y) {
  return dot(x, m * y);
}

// x^H X x for Hermitian X; the imaginary part vanishes analytically, so only
// the real part is returned.
template <typename S>
S quad_form(const HermitianMatrix<S>& x, const QuaternionVector<S>& v) {
  return real(dot(v, x.matrix() * v));
}

using QuaternionMatrixd = QuaternionMatrix<double>;
using QuaternionVectord = QuaternionVector<double>;
using HermitianMatrixd = HermitianMatrix<double>;

}  // namespace quatopt

#endif
