#include "quatopt/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "quatopt/errors.hpp"
#include "quatopt/spectral.hpp"

namespace quatopt {

BlockMatrix BlockMatrix::Zero(const std::vector<int>& sizes) {
  BlockMatrix m;
  m.blocks.reserve(sizes.size());
  for (int s : sizes) m.blocks.push_back(Eigen::MatrixXd::Zero(s, s));
  return m;
}

BlockMatrix BlockMatrix::Identity(const std::vector<int>& sizes) {
  BlockMatrix m;
  m.blocks.reserve(sizes.size());
  for (int s : sizes) m.blocks.push_back(Eigen::MatrixXd::Identity(s, s));
  return m;
}

double block_dot(const BlockMatrix& x, const BlockMatrix& y) {
  double sum = 0.0;
  for (std::size_t b = 0; b < x.blocks.size(); ++b) {
    sum += x.blocks[b].cwiseProduct(y.blocks[b]).sum();
  }
  return sum;
}

double block_frobenius_norm(const BlockMatrix& x) {
  double sum = 0.0;
  for (const auto& blk : x.blocks) sum += blk.squaredNorm();
  return std::sqrt(sum);
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Converged: return "converged";
    case SdpStatus::MaxIterations: return "max-iterations";
    case SdpStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

BlockMatrix& axpy(BlockMatrix& y, double alpha, const BlockMatrix& x) {
  for (std::size_t b = 0; b < y.blocks.size(); ++b) y.blocks[b] += alpha * x.blocks[b];
  return y;
}

BlockMatrix scaled(const BlockMatrix& x, double alpha) {
  BlockMatrix y = x;
  for (auto& blk : y.blocks) blk *= alpha;
  return y;
}

void symmetrize(BlockMatrix& x) {
  for (auto& blk : x.blocks) blk = 0.5 * (blk + blk.transpose()).eval();
}

// (XY + (XY)')/2 blockwise.
BlockMatrix sym_prod(const BlockMatrix& x, const BlockMatrix& y) {
  BlockMatrix out;
  out.blocks.reserve(x.blocks.size());
  for (std::size_t b = 0; b < x.blocks.size(); ++b) {
    MatrixXd p = x.blocks[b] * y.blocks[b];
    out.blocks.push_back(0.5 * (p + p.transpose()));
  }
  return out;
}

bool all_finite(const BlockMatrix& x) {
  for (const auto& blk : x.blocks) {
    if (!blk.allFinite()) return false;
  }
  return true;
}

struct ZFactor {
  std::vector<MatrixXd> q;
  std::vector<VectorXd> lambda;
};

// Solve (U Z + Z U)/2 = V in the eigenbasis of Z.
BlockMatrix lyapunov_solve(const ZFactor& zf, const BlockMatrix& v) {
  BlockMatrix u;
  u.blocks.reserve(v.blocks.size());
  for (std::size_t b = 0; b < v.blocks.size(); ++b) {
    const MatrixXd vt = zf.q[b].transpose() * v.blocks[b] * zf.q[b];
    MatrixXd ut(vt.rows(), vt.cols());
    for (Eigen::Index i = 0; i < vt.rows(); ++i) {
      for (Eigen::Index j = 0; j < vt.cols(); ++j) {
        const double denom = 0.5 * (zf.lambda[b](i) + zf.lambda[b](j));
        if (!(denom > 0.0)) throw NumericalError("dual slack lost positive definiteness");
        ut(i, j) = vt(i, j) / denom;
      }
    }
    u.blocks.push_back(zf.q[b] * ut * zf.q[b].transpose());
  }
  return u;
}

// Largest alpha in (0, 1] keeping P + alpha*dP PSD, shrunk by the
// fraction-to-boundary factor.
double step_length(const BlockMatrix& p, const BlockMatrix& dp, double ftb) {
  double alpha_max = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    Eigen::LLT<MatrixXd> llt(p.blocks[b]);
    if (llt.info() != Eigen::Success) throw NumericalError("iterate lost positive definiteness");
    const MatrixXd l = llt.matrixL();
    MatrixXd w = l.triangularView<Eigen::Lower>().solve(dp.blocks[b]);
    w = l.triangularView<Eigen::Lower>().solve(w.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (w + w.transpose()),
                                               Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0.0) alpha_max = std::min(alpha_max, -1.0 / lmin);
  }
  return std::min(1.0, ftb * alpha_max);
}

struct Direction {
  BlockMatrix dx, dz;
  VectorXd dy;
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opts) {
  const std::size_t m = problem.constraints.size();
  if (m == 0) throw DimensionError("SDP needs at least one constraint");
  if (problem.rhs.size() != static_cast<Eigen::Index>(m)) {
    throw DimensionError("rhs length does not match constraint count");
  }
  if (problem.objective.blocks.size() != problem.block_sizes.size()) {
    throw DimensionError("objective block count does not match block_sizes");
  }
  for (const auto& a : problem.constraints) {
    if (a.blocks.size() != problem.block_sizes.size()) {
      throw DimensionError("constraint block count does not match block_sizes");
    }
  }
  for (std::size_t b = 0; b < problem.block_sizes.size(); ++b) {
    auto check_sym = [&](const MatrixXd& blk) {
      if (blk.rows() != problem.block_sizes[b] || blk.cols() != problem.block_sizes[b]) {
        throw DimensionError("block shape mismatch in SDP data");
      }
      if ((blk - blk.transpose()).cwiseAbs().maxCoeff() >
          1e-12 * (1.0 + blk.cwiseAbs().maxCoeff())) {
        throw DomainError("SDP data block is not symmetric");
      }
      if (!blk.allFinite()) throw DomainError("SDP data block is not finite");
    };
    check_sym(problem.objective.blocks[b]);
    for (const auto& a : problem.constraints) check_sym(a.blocks[b]);
  }

  const double sign = problem.maximize ? -1.0 : 1.0;
  const BlockMatrix c = scaled(problem.objective, sign);  // internal minimize form
  const VectorXd& b = problem.rhs;

  double n_total = 0.0;
  for (int s : problem.block_sizes) n_total += s;

  double a_norm_max = 0.0;
  for (const auto& a : problem.constraints) {
    a_norm_max = std::max(a_norm_max, block_frobenius_norm(a));
  }
  const double xi = 1.0 + b.cwiseAbs().maxCoeff() + a_norm_max;

  BlockMatrix x = BlockMatrix::Identity(problem.block_sizes);
  BlockMatrix z = BlockMatrix::Identity(problem.block_sizes);
  for (auto& blk : x.blocks) blk *= xi;
  for (auto& blk : z.blocks) blk *= xi;
  VectorXd y = VectorXd::Zero(m);

  const double c_norm = block_frobenius_norm(c);
  const double b_norm = b.norm();

  SdpSolution sol;
  sol.status = SdpStatus::MaxIterations;
  int stalls = 0;

  auto finish = [&](SdpStatus status, int iters) {
    sol.status = status;
    sol.iterations = iters;
    sol.x = x;
    sol.z = z;
    sol.y = problem.maximize ? VectorXd(-y) : y;
    sol.primal_objective = block_dot(problem.objective, x);
    sol.dual_objective = sign * b.dot(y);
    return sol;
  };

  int iter = 0;
  try {
    for (iter = 0; iter <= opts.max_iter; ++iter) {
      VectorXd rp(m);
      for (std::size_t i = 0; i < m; ++i) rp(i) = b(i) - block_dot(problem.constraints[i], x);
      BlockMatrix rd = c;
      axpy(rd, -1.0, z);
      for (std::size_t i = 0; i < m; ++i) axpy(rd, -y(i), problem.constraints[i]);

      const double pobj = block_dot(c, x);
      const double dobj = b.dot(y);
      sol.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      sol.primal_residual = rp.norm() / (1.0 + b_norm);
      sol.dual_residual = block_frobenius_norm(rd) / (1.0 + c_norm);
      if (sol.gap <= opts.gap_tol && sol.primal_residual <= opts.feas_tol &&
          sol.dual_residual <= opts.feas_tol) {
        return finish(SdpStatus::Converged, iter);
      }
      if (iter == opts.max_iter) break;

      const double mu = block_dot(x, z) / n_total;
      if (!std::isfinite(mu) || mu < 0.0) return finish(SdpStatus::NumericalFailure, iter);

      ZFactor zf;
      zf.q.reserve(z.blocks.size());
      zf.lambda.reserve(z.blocks.size());
      for (const auto& blk : z.blocks) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(blk);
        if (es.info() != Eigen::Success) return finish(SdpStatus::NumericalFailure, iter);
        zf.q.push_back(es.eigenvectors());
        zf.lambda.push_back(es.eigenvalues());
      }

      // Schur complement of the symmetrized Newton system.
      std::vector<BlockMatrix> k(m);
      for (std::size_t j = 0; j < m; ++j) {
        k[j] = lyapunov_solve(zf, sym_prod(x, problem.constraints[j]));
      }
      MatrixXd schur(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          schur(i, j) = block_dot(problem.constraints[i], k[j]);
        }
      }
      Eigen::PartialPivLU<MatrixXd> lu(schur);

      auto newton = [&](const BlockMatrix& rc) -> Direction {
        Direction dir;
        BlockMatrix g = rc;
        axpy(g, -1.0, sym_prod(x, rd));
        g = lyapunov_solve(zf, g);
        VectorXd rhs(m);
        for (std::size_t i = 0; i < m; ++i) {
          rhs(i) = rp(i) - block_dot(problem.constraints[i], g);
        }
        dir.dy = lu.solve(rhs);
        if ((schur * dir.dy - rhs).norm() > 1e-7 * (1.0 + rhs.norm())) {
          throw NumericalError("Newton system numerically singular");
        }
        dir.dz = rd;
        for (std::size_t i = 0; i < m; ++i) axpy(dir.dz, -dir.dy(i), problem.constraints[i]);
        dir.dx = g;
        for (std::size_t i = 0; i < m; ++i) axpy(dir.dx, dir.dy(i), k[i]);
        symmetrize(dir.dx);
        return dir;
      };

      // predictor
      BlockMatrix rc = sym_prod(x, z);
      for (auto& blk : rc.blocks) blk = -blk;
      Direction aff = newton(rc);
      const double ap_aff = step_length(x, aff.dx, 0.98);
      const double ad_aff = step_length(z, aff.dz, 0.98);

      BlockMatrix x_aff = x;
      axpy(x_aff, ap_aff, aff.dx);
      BlockMatrix z_aff = z;
      axpy(z_aff, ad_aff, aff.dz);
      const double mu_aff = std::max(block_dot(x_aff, z_aff) / n_total, 0.0);
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 1e-8, 1.0);

      // corrector
      BlockMatrix rc2 = rc;  // -H(XZ)
      axpy(rc2, -1.0, sym_prod(aff.dx, aff.dz));
      for (std::size_t bi = 0; bi < rc2.blocks.size(); ++bi) {
        rc2.blocks[bi] += sigma * mu *
            MatrixXd::Identity(problem.block_sizes[bi], problem.block_sizes[bi]);
      }
      Direction dir = newton(rc2);

      const double ap = step_length(x, dir.dx, 0.98);
      const double ad = step_length(z, dir.dz, 0.98);
      if (ap < 1e-8 && ad < 1e-8) {
        if (++stalls >= 3) return finish(SdpStatus::MaxIterations, iter);
      } else {
        stalls = 0;
      }

      axpy(x, ap, dir.dx);
      symmetrize(x);
      y += ad * dir.dy;
      axpy(z, ad, dir.dz);
      symmetrize(z);
      if (!all_finite(x) || !all_finite(z) || !y.allFinite()) {
        return finish(SdpStatus::NumericalFailure, iter);
      }
    }
  } catch (const NumericalError&) {
    return finish(SdpStatus::NumericalFailure, iter);
  }
  return finish(SdpStatus::MaxIterations, opts.max_iter);
}

Eigen::MatrixXd embed_hermitian_constraint(const HermitianMatrixd& a) {
  return 0.25 * real_embed(a.matrix()).matrix;
}

HermitianMatrixd project_to_quaternion(const Eigen::MatrixXd& x_real) {
  if (x_real.rows() != x_real.cols()) throw DimensionError("projection input must be square");
  if (x_real.rows() % 4 != 0) throw DimensionError("projection input size must be divisible by 4");
  const Eigen::Index n = x_real.rows() / 4;
  const Eigen::MatrixXd y = 0.5 * (x_real + x_real.transpose());
  QuaternionMatrixd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto blk = y.block<4, 4>(4 * i, 4 * j);
      q.a(i, j) = 0.25 * (blk(0, 0) + blk(1, 1) + blk(2, 2) + blk(3, 3));
      q.b(i, j) = 0.25 * (-blk(0, 1) + blk(1, 0) - blk(2, 3) + blk(3, 2));
      q.c(i, j) = 0.25 * (-blk(0, 2) + blk(1, 3) + blk(2, 0) - blk(3, 1));
      q.d(i, j) = 0.25 * (-blk(0, 3) - blk(1, 2) + blk(2, 1) + blk(3, 0));
    }
  }
  return HermitianMatrixd(q);
}

}  // namespace quatopt
