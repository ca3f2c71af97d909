#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quatopt/quaternion.hpp"
#include "quatopt/quaternion_matrix.hpp"
#include "quatopt/random.hpp"

using namespace quatopt;

namespace {
const Quaterniond qi = Quaterniond::unit_i();
const Quaterniond qj = Quaterniond::unit_j();
const Quaterniond qk = Quaterniond::unit_k();
const Quaterniond one{1, 0, 0, 0};

bool close(const Quaterniond& p, const Quaterniond& q, double tol = 1e-12) {
  return modulus(p - q) <= tol;
}
}  // namespace

TEST_CASE("multiplication table is exact") {
  CHECK(qi * qi == -one);
  CHECK(qj * qj == -one);
  CHECK(qk * qk == -one);
  CHECK(qi * qj * qk == -one);
  CHECK(qi * qj == qk);
  CHECK(qj * qi == -qk);
  CHECK(qj * qk == qi);
  CHECK(qk * qj == -qi);
  CHECK(qk * qi == qj);
  CHECK(qi * qk == -qj);
}

TEST_CASE("identity element and frozen product") {
  const Quaterniond q{2, 3, 0, 0};
  CHECK(q * one == q);
  CHECK(one * q == q);
  // (1+i)(1+j) expanded by the table
  CHECK(Quaterniond{1, 1, 0, 0} * Quaterniond{1, 0, 1, 0} == Quaterniond{1, 1, 1, 1});
}

TEST_CASE("conjugation") {
  CHECK(conj(Quaterniond{1, 2, 3, 4}) == Quaterniond{1, -2, -3, -4});
  CHECK(conj(Quaterniond{5, 0, 0, 0}) == Quaterniond{5, 0, 0, 0});
  // antihomomorphism: conj(ij) = conj(j) conj(i) = ji = -k
  CHECK(conj(qi * qj) == -qk);
  CHECK(conj(qi * qj) == conj(qj) * conj(qi));
}

TEST_CASE("inverse") {
  CHECK(close(inverse(one), one));
  CHECK(close(inverse(qi), -qi));
  CHECK(close(inverse(Quaterniond{1, 1, 1, 1}), Quaterniond{0.25, -0.25, -0.25, -0.25}));
  CHECK_THROWS_AS(inverse(Quaterniond{0, 0, 0, 0}), DomainError);
}

TEST_CASE("triangle representation on fixed points") {
  {
    const TriangleRepd t = triangle_rep(one);
    CHECK(t.modulus == doctest::Approx(1.0));
    CHECK(t.cos_theta == doctest::Approx(1.0));
    CHECK(t.sin_theta == doctest::Approx(0.0));
    CHECK(t.axis == qi);  // pure-real convention
  }
  {
    const TriangleRepd t = triangle_rep(Quaterniond{1, 1, 1, 1});
    CHECK(t.modulus == doctest::Approx(2.0));
    CHECK(t.cos_theta == doctest::Approx(0.5));
    CHECK(t.sin_theta == doctest::Approx(std::sqrt(3.0) / 2.0));
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(close(t.axis, Quaterniond{0, s, s, s}));
  }
  {
    const TriangleRepd t = triangle_rep(Quaterniond{0, 0, 0, 0});
    CHECK(t.modulus == 0.0);
    CHECK(t.sin_theta == 0.0);
    CHECK(t.axis == qi);
  }
  {
    const TriangleRepd t = triangle_rep(Quaterniond{0, 3, 0, 0});
    CHECK(t.modulus == doctest::Approx(3.0));
    CHECK(t.cos_theta == doctest::Approx(0.0));
    CHECK(t.sin_theta == doctest::Approx(1.0));
    CHECK(close(t.axis, qi));
  }
}

TEST_CASE("algebra properties on random quaternions") {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const Quaterniond p = random_quaternion(rng);
    const Quaterniond q = random_quaternion(rng);
    // normed algebra
    CHECK(modulus(p * q) ==
          doctest::Approx(modulus(p) * modulus(q)).epsilon(1e-12));
    // conjugate antihomomorphism
    CHECK(close(conj(p * q), conj(q) * conj(p), 1e-12 * (1.0 + modulus(p) * modulus(q))));
    // inverse identity
    if (modulus(q) > 1e-8) {
      CHECK(close(q * inverse(q), one, 1e-12));
      CHECK(close(inverse(q) * q, one, 1e-12));
    }
    // triangle round-trip
    CHECK(close(reconstruct(triangle_rep(q)), q, 1e-12 * (1.0 + modulus(q))));
    // q qbar = |q|^2 (real)
    const Quaterniond qq = q * conj(q);
    CHECK(qq.a == doctest::Approx(squared_modulus(q)).epsilon(1e-12));
    CHECK(std::abs(qq.b) + std::abs(qq.c) + std::abs(qq.d) <= 1e-12 * (1.0 + qq.a));
  }
}

TEST_CASE("matrix inner product on fixed cases") {
  const auto eye3 = QuaternionMatrixd::Identity(3);
  CHECK(inner_product(eye3, eye3) == doctest::Approx(3.0));

  QuaternionMatrixd a(2, 2), b(2, 2);
  a.set(0, 0, qi);
  b.set(0, 0, qi);
  CHECK(inner_product(a, a) == doctest::Approx(1.0));  // Re(conj(i) i) = 1
  b.set(0, 0, qj);
  CHECK(inner_product(a, b) == doctest::Approx(0.0));  // Re(conj(i) j) = 0
  CHECK_THROWS_AS(inner_product(a, QuaternionMatrixd(2, 3)), DimensionError);
}

TEST_CASE("inner product equals the component trace formula") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const QuaternionMatrixd a = random_matrix(4, 4, rng);
    const QuaternionMatrixd b = random_matrix(4, 4, rng);
    const double via_components = (a.a.transpose() * b.a + a.b.transpose() * b.b +
                                   a.c.transpose() * b.c + a.d.transpose() * b.d).trace();
    CHECK(inner_product(a, b) == doctest::Approx(via_components).epsilon(1e-12));
  }
}

TEST_CASE("hermitian test on fixed matrices") {
  QuaternionMatrixd diag(2, 2);
  diag.set(0, 0, {3, 0, 0, 0});
  diag.set(1, 1, {-1, 0, 0, 0});
  CHECK(is_hermitian(diag, 1e-14));

  QuaternionMatrixd offj(2, 2);
  offj.set(0, 1, qj);
  offj.set(1, 0, -qj);
  CHECK(is_hermitian(offj, 1e-14));

  QuaternionMatrixd offi(2, 2);
  offi.set(0, 1, qi);
  offi.set(1, 0, qi);
  CHECK(!is_hermitian(offi, 1e-14));
  CHECK_THROWS_AS(HermitianMatrixd{offi}, DomainError);
}

TEST_CASE("hermitian quadratic forms are real") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const HermitianMatrixd x = random_hermitian(5, rng);
    const QuaternionVectord u = random_vector(5, rng);
    const Quaterniond full = dot(u, x.matrix() * u);
    const double im = modulus(imag(full));
    CHECK(im <= 1e-10 * (1.0 + std::abs(full.a)));
  }
}

TEST_CASE("adjoint reverses products") {
  Rng rng(17);
  const QuaternionMatrixd a = random_matrix(3, 4, rng);
  const QuaternionMatrixd b = random_matrix(4, 2, rng);
  const QuaternionMatrixd lhs = adjoint(a * b);
  const QuaternionMatrixd rhs = adjoint(b) * adjoint(a);
  CHECK(frobenius_norm(lhs - rhs) <= 1e-12 * (1.0 + frobenius_norm(lhs)));
  // involution
  const QuaternionMatrixd back = adjoint(adjoint(a));
  CHECK(frobenius_norm(back - a) == 0.0);
}
