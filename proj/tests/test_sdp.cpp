#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "quatopt/random.hpp"
#include "quatopt/sdp.hpp"
#include "quatopt/spectral.hpp"

using namespace quatopt;

namespace {

Eigen::MatrixXd random_sym(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return 0.5 * (m + m.transpose()).eval();
}

Eigen::MatrixXd random_spd(int n, Rng& rng) {
  const Eigen::MatrixXd m = random_sym(n, rng);
  return m * m.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

// trace-normalized eigenvalue maximization: max C.X s.t. tr X = 1
SdpProblem lambda_max_problem(const Eigen::MatrixXd& c) {
  SdpProblem p;
  const int n = static_cast<int>(c.rows());
  p.block_sizes = {n};
  p.objective.blocks = {c};
  BlockMatrix tr;
  tr.blocks = {Eigen::MatrixXd::Identity(n, n)};
  p.constraints.push_back(tr);
  p.rhs = Eigen::VectorXd::Ones(1);
  p.maximize = true;
  return p;
}

double min_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

}  // namespace

TEST_CASE("lambda_max on diag(1,0)") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(0, 0) = 1.0;
  const SdpSolution sol = solve_sdp(lambda_max_problem(c));
  REQUIRE(sol.status == SdpStatus::Converged);
  CHECK(sol.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.x.blocks[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(sol.x.blocks[0](1, 1)) <= 1e-6);
}

TEST_CASE("zero objective with trace normalization") {
  SdpProblem p = lambda_max_problem(Eigen::MatrixXd::Zero(3, 3));
  const SdpSolution sol = solve_sdp(p);
  REQUIRE(sol.status == SdpStatus::Converged);
  CHECK(std::abs(sol.primal_objective) <= 1e-8);
  CHECK(sol.x.blocks[0].trace() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(min_eig(sol.x.blocks[0]) >= -1e-9);
}

TEST_CASE("lambda_max agrees with the eigensolver on random instances") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 6;
    const Eigen::MatrixXd c = random_sym(n, rng);
    const SdpSolution sol = solve_sdp(lambda_max_problem(c));
    REQUIRE(sol.status == SdpStatus::Converged);
    const double lmax =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .maxCoeff();
    CHECK(sol.primal_objective == doctest::Approx(lmax).epsilon(1e-7));
    CHECK(sol.gap <= 1e-8);
  }
}

TEST_CASE("random strictly feasible instances satisfy duality and complementarity") {
  Rng rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 4 + trial % 8;
    const int m = 2 + trial % 4;
    SdpProblem p;
    p.block_sizes = {n, 1};
    // primal strictly feasible point and consistent right-hand side
    BlockMatrix x0;
    x0.blocks = {random_spd(n, rng), Eigen::MatrixXd::Constant(1, 1, 0.5 + trial * 0.1)};
    p.rhs.resize(m);
    for (int i = 0; i < m; ++i) {
      BlockMatrix ai;
      ai.blocks = {random_sym(n, rng), Eigen::MatrixXd::Constant(1, 1, g(rng))};
      p.rhs(i) = block_dot(ai, x0);
      p.constraints.push_back(std::move(ai));
    }
    // dual strictly feasible objective: C = sum y A + Z with Z > 0
    BlockMatrix c = BlockMatrix::Zero(p.block_sizes);
    for (int i = 0; i < m; ++i) {
      const double yi = g(rng);
      for (std::size_t b = 0; b < c.blocks.size(); ++b) {
        c.blocks[b] += yi * p.constraints[i].blocks[b];
      }
    }
    c.blocks[0] += random_spd(n, rng);
    c.blocks[1](0, 0) += 0.3;
    p.objective = c;
    p.maximize = false;

    const SdpSolution sol = solve_sdp(p);
    REQUIRE(sol.status == SdpStatus::Converged);
    CHECK(sol.gap <= 1e-8);
    CHECK(sol.primal_residual <= 1e-8);
    CHECK(sol.dual_residual <= 1e-8);
    // weak duality at convergence (min form: primal >= dual up to gap slack)
    const double scale = 1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective);
    CHECK(sol.primal_objective - sol.dual_objective >= -1e-7 * scale);
    // complementary slackness
    CHECK(block_dot(sol.x, sol.z) <= 1e-7 * (1.0 + std::abs(sol.primal_objective)));
    // PSD within tolerance
    CHECK(min_eig(sol.x.blocks[0]) >= -1e-9);
    CHECK(min_eig(sol.z.blocks[0]) >= -1e-9);
  }
}

TEST_CASE("embedding of constraints") {
  // identity
  const Eigen::MatrixXd ei = embed_hermitian_constraint(HermitianMatrixd::Identity(3));
  CHECK((ei - 0.25 * Eigen::MatrixXd::Identity(12, 12)).norm() == 0.0);
  // diag(1,-1)
  QuaternionMatrixd d(2, 2);
  d.set(0, 0, {1, 0, 0, 0});
  d.set(1, 1, {-1, 0, 0, 0});
  Eigen::VectorXd expected(8);
  expected << 1, 1, 1, 1, -1, -1, -1, -1;
  const Eigen::MatrixXd ed = embed_hermitian_constraint(HermitianMatrixd(d));
  CHECK((ed - 0.25 * Eigen::MatrixXd(expected.asDiagonal())).norm() == 0.0);
  // inner product preservation
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrixd a = random_hermitian(4, rng);
    const HermitianMatrixd x = random_hermitian(4, rng);
    const double direct = inner_product(a.matrix(), x.matrix());
    const double embedded =
        embed_hermitian_constraint(a).cwiseProduct(real_embed(x.matrix()).matrix).sum();
    CHECK(direct == doctest::Approx(embedded).epsilon(1e-10));
  }
}

TEST_CASE("projection back to quaternion structure") {
  Rng rng(11);
  // fixed point on embedded matrices
  const HermitianMatrixd x = random_hermitian(3, rng);
  const HermitianMatrixd back = project_to_quaternion(real_embed(x.matrix()).matrix);
  CHECK(frobenius_norm(back.matrix() - x.matrix()) <= 1e-14 * (1.0 + frobenius_norm(x.matrix())));

  CHECK(frobenius_norm(project_to_quaternion(Eigen::MatrixXd::Identity(12, 12)).matrix() -
                       QuaternionMatrixd::Identity(3)) == 0.0);

  // general symmetric input: idempotent projection preserving embedded inner
  // products
  const int n = 3;
  Eigen::MatrixXd y = random_sym(4 * n, rng);
  const HermitianMatrixd py = project_to_quaternion(y);
  const HermitianMatrixd pp = project_to_quaternion(real_embed(py.matrix()).matrix);
  CHECK(frobenius_norm(pp.matrix() - py.matrix()) <=
        1e-12 * (1.0 + frobenius_norm(py.matrix())));
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianMatrixd a = random_hermitian(n, rng);
    const double before = embed_hermitian_constraint(a).cwiseProduct(y).sum();
    const double after = inner_product(a.matrix(), py.matrix());
    CHECK(before == doctest::Approx(after).epsilon(1e-9));
  }

  CHECK_THROWS_AS(project_to_quaternion(Eigen::MatrixXd::Zero(6, 6)), DimensionError);
}

TEST_CASE("projection preserves PSD-ness") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd y = random_spd(8, rng);
    const HermitianMatrixd p = project_to_quaternion(y);
    const Eigen::MatrixXd rp = real_embed(p.matrix()).matrix;
    CHECK(min_eig(rp) >= -1e-10 * (1.0 + y.norm()));
  }
}

TEST_CASE("invalid problems are rejected") {
  SdpProblem p;
  p.block_sizes = {2};
  p.objective.blocks = {Eigen::MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(solve_sdp(p), DimensionError);  // no constraints

  Eigen::MatrixXd nonsym(2, 2);
  nonsym << 0, 1, 0, 0;
  p.constraints.push_back(BlockMatrix{{nonsym}});
  p.rhs = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(solve_sdp(p), DomainError);  // asymmetric data
}
