#ifndef QUATOPT_QUATERNION_HPP
#define QUATOPT_QUATERNION_HPP

#include <cmath>
#include <ostream>
#include <type_traits>

#include "quatopt/errors.hpp"

namespace quatopt {

// Quaternion q = a + b*i + c*j + d*k over a real scalar type.
// Multiplication follows i^2 = j^2 = k^2 = ijk = -1, ij = -ji = k,
// and is noncommutative: use the operator order that you mean.
template <typename Scalar>
struct Quaternion {
  static_assert(std::is_floating_point_v<Scalar>);

  Scalar a{0}, b{0}, c{0}, d{0};

  constexpr Quaternion() = default;
  constexpr Quaternion(Scalar a_, Scalar b_ = 0, Scalar c_ = 0, Scalar d_ = 0)
      : a(a_), b(b_), c(c_), d(d_) {}

  static constexpr Quaternion unit_i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion unit_j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion unit_k() { return {0, 0, 0, 1}; }

  constexpr Quaternion operator-() const { return {-a, -b, -c, -d}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    a += o.a; b += o.b; c += o.c; d += o.d;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    a -= o.a; b -= o.b; c -= o.c; d -= o.d;
    return *this;
  }
  constexpr Quaternion& operator*=(Scalar s) {
    a *= s; b *= s; c *= s; d *= s;
    return *this;
  }

  constexpr bool operator==(const Quaternion&) const = default;
};

template <typename S>
constexpr Quaternion<S> operator+(Quaternion<S> p, const Quaternion<S>& q) {
  return p += q;
}

template <typename S>
constexpr Quaternion<S> operator-(Quaternion<S> p, const Quaternion<S>& q) {
  return p -= q;
}

// Hamilton product.
template <typename S>
constexpr Quaternion<S> operator*(const Quaternion<S>& p, const Quaternion<S>& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

template <typename S>
constexpr Quaternion<S> operator*(Quaternion<S> q, S s) { return q *= s; }

template <typename S>
constexpr Quaternion<S> operator*(S s, Quaternion<S> q) { return q *= s; }

template <typename S>
constexpr Quaternion<S> conj(const Quaternion<S>& q) {
  return {q.a, -q.b, -q.c, -q.d};
}

template <typename S>
constexpr S real(const Quaternion<S>& q) { return q.a; }

template <typename S>
constexpr Quaternion<S> imag(const Quaternion<S>& q) { return {0, q.b, q.c, q.d}; }

template <typename S>
constexpr S squared_modulus(const Quaternion<S>& q) {
  return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d;
}

template <typename S>
S modulus(const Quaternion<S>& q) { return std::sqrt(squared_modulus(q)); }

template <typename S>
Quaternion<S> inverse(const Quaternion<S>& q) {
  const S m2 = squared_modulus(q);
  if (m2 == S(0)) throw DomainError("inverse of zero quaternion");
  return conj(q) * (S(1) / m2);
}

// Polar-like form q = modulus * (cos_theta + axis * sin_theta) with a unit
// pure-imaginary axis. For zero or purely real q the axis defaults to i and
// sin_theta to 0, which makes the representation total and deterministic.
template <typename Scalar>
struct TriangleRep {
  Scalar modulus{0};
  Scalar cos_theta{1};
  Scalar sin_theta{0};
  Quaternion<Scalar> axis{0, 1, 0, 0};
};

template <typename S>
TriangleRep<S> triangle_rep(const Quaternion<S>& q) {
  TriangleRep<S> t;
  t.modulus = modulus(q);
  const S im = std::sqrt(q.b * q.b + q.c * q.c + q.d * q.d);
  if (t.modulus == S(0)) return t;
  t.cos_theta = q.a / t.modulus;
  t.sin_theta = im / t.modulus;
  if (im > S(0)) {
    t.axis = Quaternion<S>{0, q.b / im, q.c / im, q.d / im};
  }
  return t;
}

template <typename S>
Quaternion<S> reconstruct(const TriangleRep<S>& t) {
  Quaternion<S> u{t.cos_theta, 0, 0, 0};
  u += t.axis * t.sin_theta;
  return u * t.modulus;
}

template <typename S>
std::ostream& operator<<(std::ostream& os, const Quaternion<S>& q) {
  return os << "(" << q.a << " + " << q.b << "i + " << q.c << "j + " << q.d << "k)";
}

using Quaterniond = Quaternion<double>;
using TriangleRepd = TriangleRep<double>;

}  // namespace quatopt

#endif
