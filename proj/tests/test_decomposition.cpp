#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "quatopt/decomposition.hpp"
#include "quatopt/random.hpp"
#include "quatopt/spectral.hpp"

using namespace quatopt;

namespace {

HermitianMatrixd diag_h(std::vector<double> entries) {
  QuaternionMatrixd m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m.set(i, i, {entries[i], 0, 0, 0});
  return HermitianMatrixd(m);
}

QuaternionMatrixd outer_sum(const std::vector<QuaternionVectord>& xs, Eigen::Index n) {
  QuaternionMatrixd sum(n, n);
  for (const auto& x : xs) sum += outer(x, x);
  return sum;
}

// Direct check of the equal-inner-product property: every factor takes the
// value (A_k . X)/r against each constraint matrix.
void check_equalities(const RankOneDecomposition& dec, double tol_scale = 1e-7) {
  const int r = static_cast<int>(dec.vectors.size());
  REQUIRE(r > 0);
  for (std::size_t k = 0; k < dec.constraint_matrices.size(); ++k) {
    const double target = inner_product(dec.constraint_matrices[k].matrix(), dec.target.matrix());
    CHECK(dec.means[k] == doctest::Approx(target / r).epsilon(1e-12));
    for (const auto& x : dec.vectors) {
      CHECK(std::abs(quad_form(dec.constraint_matrices[k], x) - target / r) <=
            tol_scale * (1.0 + std::abs(target)));
    }
  }
  CHECK(frobenius_norm(dec.target.matrix() - outer_sum(dec.vectors, dec.target.n())) <=
        1e-8 * (1.0 + frobenius_norm(dec.target.matrix())));
}

}  // namespace

TEST_CASE("nullspace direction") {
  {
    const Quaterniond w = nullspace_direction({});
    CHECK(w == Quaterniond{1, 0, 0, 0});
  }
  {
    const Quaterniond w = nullspace_direction({Quaterniond{1, 0, 0, 0}});
    CHECK(std::abs(w.a) <= 1e-14);
    CHECK(modulus(w) == doctest::Approx(1.0));
  }
  {
    const Quaterniond w = nullspace_direction(
        {Quaterniond{1, 0, 0, 0}, Quaterniond::unit_i(), Quaterniond::unit_j()});
    CHECK(std::abs(std::abs(w.d) - 1.0) <= 1e-14);  // forced onto the k axis
  }
  CHECK_THROWS_AS(nullspace_direction(std::vector<Quaterniond>(4)), DimensionError);
  // random: the returned direction annihilates every row
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Quaterniond> taus;
    for (int k = 0; k <= trial % 4 && k < 3; ++k) taus.push_back(random_quaternion(rng));
    const Quaterniond w = nullspace_direction(taus);
    CHECK(modulus(w) == doctest::Approx(1.0));
    for (const auto& t : taus) {
      CHECK(std::abs(t.a * w.a + t.b * w.b + t.c * w.c + t.d * w.d) <=
            1e-12 * (1.0 + modulus(t)));
    }
  }
}

TEST_CASE("positive root") {
  CHECK(positive_root(1, 0, -1) == doctest::Approx(1.0));
  CHECK(positive_root(1, 1.5, -4) == doctest::Approx(1.0));
  CHECK(positive_root(2, -1, -4) == doctest::Approx(2.0));
  CHECK_THROWS_AS(positive_root(-1, 0, -1), ContractError);
  CHECK_THROWS_AS(positive_root(1, 0, 1), ContractError);
  // residual of the quadratic at the returned root stays tiny
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = u(rng), c = -u(rng), iota = 5.0 * g(rng);
    const double alpha = positive_root(p, iota, c);
    CHECK(alpha > 0.0);
    CHECK(std::abs(p * alpha * alpha + 2 * iota * alpha + c) <=
          1e-10 * (1.0 + p * alpha * alpha + 2 * std::abs(iota) * alpha - c));
  }
}

TEST_CASE("pair rotation identity") {
  Rng rng(7);
  const QuaternionVectord e1 = QuaternionVectord::Unit(2, 0);
  const QuaternionVectord e2 = QuaternionVectord::Unit(2, 1);
  {
    auto [v1, v2] = rotate_pair(e1, e2, Quaterniond{0, 0, 0, 0});
    CHECK(norm(v1 - e2) <= 1e-15);
    CHECK(norm(v2 + e1) <= 1e-15);
  }
  {
    auto [v1, v2] = rotate_pair(e1, e2, Quaterniond{1, 0, 0, 0});
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(norm(v1 - (e1 + e2) * s) <= 1e-15);
    CHECK(norm(v2 - (e2 - e1) * s) <= 1e-15);
  }
  for (int trial = 0; trial < 500; ++trial) {
    const QuaternionVectord u1 = random_vector(4, rng);
    const QuaternionVectord u2 = random_vector(4, rng);
    const Quaterniond w = random_quaternion(rng);
    auto [v1, v2] = rotate_pair(u1, u2, w);
    const QuaternionMatrixd lhs = outer(v1, v1) + outer(v2, v2);
    const QuaternionMatrixd rhs = outer(u1, u1) + outer(u2, u2);
    CHECK(frobenius_norm(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("hand-executed instance: X = I2, A = diag(1,-1)") {
  const std::vector<HermitianMatrixd> a = {diag_h({1, -1})};
  const RankOneDecomposition dec = decompose(HermitianMatrixd::Identity(2), a);
  REQUIRE(dec.vectors.size() == 2);
  CHECK(dec.means[0] == doctest::Approx(0.0));
  for (const auto& x : dec.vectors) {
    CHECK(std::abs(quad_form(a[0], x)) <= 1e-9);
  }
  check_equalities(dec);
}

TEST_CASE("identity constraint passes orthonormal factors through unchanged") {
  std::vector<HermitianMatrixd> a = {HermitianMatrixd::Identity(3)};
  std::vector<QuaternionVectord> u;
  for (int i = 0; i < 3; ++i) u.push_back(QuaternionVectord::Unit(3, i));
  const std::vector<double> means = {1.0};  // (I . I3)/3
  const auto out = equalize_step(u, a, 1, means);
  REQUIRE(out.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(norm(out[i] - u[i]) == 0.0);
}

TEST_CASE("rank-one target returns the single factor") {
  Rng rng(11);
  const QuaternionVectord x = random_vector(4, rng);
  const HermitianMatrixd target{hermitian_part(outer(x, x))};
  std::vector<HermitianMatrixd> a;
  for (int k = 0; k < 4; ++k) a.push_back(random_hermitian(4, rng));
  const RankOneDecomposition dec = decompose(target, a);
  REQUIRE(dec.vectors.size() == 1);
  check_equalities(dec);
}

TEST_CASE("four constraint matrices on the identity") {
  Rng rng(13);
  std::vector<HermitianMatrixd> a;
  for (int k = 0; k < 4; ++k) a.push_back(random_hermitian(4, rng));
  const RankOneDecomposition dec = decompose(HermitianMatrixd::Identity(4), a);
  REQUIRE(dec.vectors.size() == 4);
  check_equalities(dec);
}

TEST_CASE("random instances across ranks and counts") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 3 + trial % 5;
    const Eigen::Index r = 1 + trial % n;
    const int num_a = 1 + trial % 4;
    const HermitianMatrixd x = random_psd(n, r, rng);
    std::vector<HermitianMatrixd> a;
    for (int k = 0; k < num_a; ++k) a.push_back(random_hermitian(n, rng));
    const RankOneDecomposition dec = decompose(x, a);
    CHECK(static_cast<Eigen::Index>(dec.vectors.size()) == r);
    check_equalities(dec);
  }
}

TEST_CASE("phase steps preserve earlier equalities") {
  Rng rng(19);
  const Eigen::Index n = 6;
  const HermitianMatrixd x = random_psd(n, 4, rng);
  std::vector<HermitianMatrixd> a;
  for (int k = 0; k < 4; ++k) a.push_back(random_hermitian(n, rng));

  auto u = psd_factorize(x);
  const int r = static_cast<int>(u.size());
  std::vector<double> means;
  for (int k = 0; k < 4; ++k) means.push_back(inner_product(a[k].matrix(), x.matrix()) / r);

  for (int ell = 1; ell <= 4; ++ell) {
    u = equalize_step(std::move(u), a, ell, means);
    REQUIRE(static_cast<int>(u.size()) == r);
    for (int k = 0; k < ell; ++k) {
      const double scale = 1.0 + std::abs(means[k] * r);
      for (const auto& ui : u) {
        CHECK(std::abs(quad_form(a[k], ui) - means[k]) <= 1e-7 * scale);
      }
    }
  }
}

TEST_CASE("precondition violations are reported") {
  Rng rng(23);
  const HermitianMatrixd x = random_psd(4, 3, rng);
  std::vector<HermitianMatrixd> a = {random_hermitian(4, rng), random_hermitian(4, rng)};
  auto u = psd_factorize(x);
  const int r = static_cast<int>(u.size());
  std::vector<double> means = {inner_product(a[0].matrix(), x.matrix()) / r,
                               inner_product(a[1].matrix(), x.matrix()) / r};
  // skipping phase 1 leaves the phase-2 precondition unsatisfied
  CHECK_THROWS_AS(equalize_step(u, a, 2, means), ContractError);
}

TEST_CASE("decomposition is invariant under unitary change of basis") {
  Rng rng(29);
  const Eigen::Index n = 5;
  const HermitianMatrixd x = random_psd(n, 3, rng);
  std::vector<HermitianMatrixd> a;
  for (int k = 0; k < 3; ++k) a.push_back(random_hermitian(n, rng));

  const QuaternionMatrixd p = random_unitary(n, rng);
  const HermitianMatrixd xr{hermitian_part(p * x.matrix() * adjoint(p))};
  std::vector<HermitianMatrixd> ar;
  for (const auto& ak : a) ar.emplace_back(hermitian_part(p * ak.matrix() * adjoint(p)));

  // inner products are unitarily invariant, so the means agree
  const RankOneDecomposition dec = decompose(x, a);
  const RankOneDecomposition dec_rot = decompose(xr, ar);
  REQUIRE(dec.vectors.size() == dec_rot.vectors.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(dec.means[k] == doctest::Approx(dec_rot.means[k]).epsilon(1e-8));
  }
  CHECK(frobenius_norm(xr.matrix() - outer_sum(dec_rot.vectors, n)) <=
        1e-8 * (1.0 + frobenius_norm(xr.matrix())));
  check_equalities(dec_rot);
}

TEST_CASE("more than four constraints are rejected") {
  Rng rng(31);
  std::vector<HermitianMatrixd> a;
  for (int k = 0; k < 5; ++k) a.push_back(random_hermitian(3, rng));
  CHECK_THROWS_AS(decompose(HermitianMatrixd::Identity(3), a), DimensionError);
}

TEST_CASE("zero constraint matrices are vacuous") {
  Rng rng(37);
  const HermitianMatrixd x = random_psd(5, 3, rng);
  std::vector<HermitianMatrixd> a = {random_hermitian(5, rng), HermitianMatrixd::Zero(5),
                                     HermitianMatrixd::Zero(5), HermitianMatrixd::Zero(5)};
  const RankOneDecomposition dec = decompose(x, a);
  check_equalities(dec);
}
