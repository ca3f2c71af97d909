#include "quatopt/applications.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quatopt/errors.hpp"
#include "quatopt/random.hpp"
#include "quatopt/spectral.hpp"

namespace quatopt {

namespace {

// Accept a solver result that formally ran out of iterations but still meets
// a usable accuracy; anything worse is a numerical error for the pipelines.
void require_usable(const SdpSolution& sol, const char* who) {
  if (sol.status == SdpStatus::Converged) return;
  const bool usable = sol.status == SdpStatus::MaxIterations && sol.gap <= 1e-6 &&
                      sol.primal_residual <= 1e-6 && sol.dual_residual <= 1e-6;
  if (!usable) {
    throw NumericalError(std::string(who) + ": SDP solver failed (" + to_string(sol.status) +
                         ", gap " + std::to_string(sol.gap) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Joint numerical range

JnrFeasiblePoint jnr_feasible_point(const JnrQuery& query, const SdpOptions& opts) {
  const Eigen::Index n = query.matrices[0].n();
  for (const auto& a : query.matrices) {
    if (a.n() != n) throw DimensionError("jnr matrices must share one dimension");
  }
  JnrFeasiblePoint out;

  bool all_zero = true;
  for (double v : query.target) all_zero = all_zero && v == 0.0;
  if (all_zero) {
    out.feasible = true;
    out.x = HermitianMatrixd::Zero(n);
    out.sdp_status = SdpStatus::Converged;
    return out;
  }

  // A zero matrix can only hit a zero target; keeping it would make the
  // Newton system singular.
  std::vector<int> active;
  for (int k = 0; k < 5; ++k) {
    if (frobenius_norm(query.matrices[k].matrix()) == 0.0) {
      if (query.target[k] != 0.0) {
        out.constraint_residual = std::abs(query.target[k]) / (1.0 + std::abs(query.target[k]));
        out.sdp_status = SdpStatus::Converged;
        return out;  // infeasible
      }
      continue;
    }
    active.push_back(k);
  }

  // Feasibility posed as minimum trace over the embedded cone; the identity
  // objective keeps the dual strictly feasible.
  SdpProblem prob;
  prob.block_sizes = {static_cast<int>(4 * n)};
  prob.objective.blocks = {embed_hermitian_constraint(HermitianMatrixd::Identity(n))};
  prob.rhs.resize(active.size());
  for (std::size_t t = 0; t < active.size(); ++t) {
    BlockMatrix ak;
    ak.blocks = {embed_hermitian_constraint(query.matrices[active[t]])};
    prob.constraints.push_back(std::move(ak));
    prob.rhs(t) = query.target[active[t]];
  }
  prob.maximize = false;

  SdpSolution sol = solve_sdp(prob, opts);
  out.sdp_status = sol.status;
  // An infeasible target shows up as a stalled or diverging solve whose final
  // iterate keeps a large constraint residual; that residual is the report.
  if (!sol.x.blocks[0].allFinite()) {
    throw NumericalError("jnr_feasible_point: SDP iterate diverged");
  }
  out.x = project_to_quaternion(sol.x.blocks[0]);
  double res = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double achieved = inner_product(query.matrices[k].matrix(), out.x.matrix());
    res = std::max(res, std::abs(achieved - query.target[k]) / (1.0 + std::abs(query.target[k])));
  }
  out.constraint_residual = res;
  out.feasible = res <= 1e-6;
  return out;
}

JnrRecovery jnr_recover(const JnrQuery& query, const SdpOptions& opts) {
  JnrRecovery out;
  const Eigen::Index n = query.matrices[0].n();

  bool all_zero = true;
  for (double v : query.target) all_zero = all_zero && v == 0.0;
  if (all_zero) {
    out.feasible = true;
    out.x = QuaternionVectord::Zero(n);
    out.point.feasible = true;
    out.point.x = HermitianMatrixd::Zero(n);
    out.point.sdp_status = SdpStatus::Converged;
    return out;
  }

  out.point = jnr_feasible_point(query, opts);
  if (!out.point.feasible) return out;

  // Pivot on the largest target component, eliminate it from the other four,
  // and equalize those differences to zero across the decomposition.
  int pivot = 0;
  for (int k = 1; k < 5; ++k) {
    if (std::abs(query.target[k]) > std::abs(query.target[pivot])) pivot = k;
  }
  const double vp = query.target[pivot];
  std::vector<HermitianMatrixd> diffs;
  std::vector<int> diff_index;
  for (int k = 0; k < 5; ++k) {
    if (k == pivot) continue;
    diffs.emplace_back(query.matrices[k].matrix() -
                       (query.target[k] / vp) * query.matrices[pivot].matrix());
    diff_index.push_back(k);
  }

  RankOneDecomposition dec = decompose(out.point.x, diffs);

  // A factor whose pivot value shares the sign of v_p exists because the
  // pivot values sum to v_p; take the largest for a well conditioned scaling.
  int best = -1;
  double best_val = 0.0;
  for (std::size_t i = 0; i < dec.vectors.size(); ++i) {
    const double t = quad_form(query.matrices[pivot], dec.vectors[i]);
    if (t * vp > 0.0 && std::abs(t) > std::abs(best_val)) {
      best = static_cast<int>(i);
      best_val = t;
    }
  }
  if (best < 0) {
    throw NumericalError("jnr_recover: no factor matches the pivot sign");
  }
  const double rho = std::sqrt(vp / best_val);
  out.x = dec.vectors[best] * rho;
  for (int k = 0; k < 5; ++k) out.achieved[k] = quad_form(query.matrices[k], out.x);
  out.feasible = true;
  return out;
}

// ---------------------------------------------------------------------------
// S-procedure

namespace {

bool is_zero_matrix(const HermitianMatrixd& a) { return frobenius_norm(a.matrix()) == 0.0; }

bool witness_ok(const HermitianMatrixd& a0, const std::array<HermitianMatrixd, 4>& a,
                const QuaternionVectord& w, double* f_out) {
  const double w2 = squared_norm(w);
  const double f = quad_form(a0, w);
  if (f_out) *f_out = f;
  if (!(f < 0.0)) return false;
  for (const auto& ak : a) {
    const double g = quad_form(ak, w);
    if (g < -1e-9 * (1.0 + w2 * frobenius_norm(ak.matrix()))) return false;
  }
  return true;
}

}  // namespace

SProcResult sproc_certificate(const HermitianMatrixd& a0, const std::array<HermitianMatrixd, 4>& a,
                              const QuaternionVectord& x0, std::uint64_t seed,
                              const SdpOptions& opts) {
  const Eigen::Index n = a0.n();
  for (const auto& ak : a) {
    if (ak.n() != n) throw DimensionError("sproc matrices must share one dimension");
  }
  if (x0.size() != n) throw DimensionError("sproc x0 dimension mismatch");

  std::vector<int> active;
  for (int k = 0; k < 4; ++k) {
    if (is_zero_matrix(a[k])) continue;  // vacuous form, pinned to tau = 0
    if (!(quad_form(a[k], x0) > 0.0)) {
      throw DomainError("sproc_certificate: x0 must make every nonzero form strictly positive");
    }
    active.push_back(k);
  }

  // max t  s.t.  A0 - sum tau_k A_k - t I >= 0, tau >= 0, written as the dual
  // of a trace-normalized minimization of A0 over the embedded cone.
  const int na = static_cast<int>(active.size());
  SdpProblem prob;
  prob.block_sizes.assign(1, static_cast<int>(4 * n));
  for (int t = 0; t < na; ++t) prob.block_sizes.push_back(1);
  prob.objective = BlockMatrix::Zero(prob.block_sizes);
  prob.objective.blocks[0] = embed_hermitian_constraint(a0);
  for (int t = 0; t < na; ++t) {
    BlockMatrix am = BlockMatrix::Zero(prob.block_sizes);
    am.blocks[0] = -embed_hermitian_constraint(a[active[t]]);
    am.blocks[1 + t](0, 0) = 1.0;
    prob.constraints.push_back(std::move(am));
  }
  BlockMatrix trace_con = BlockMatrix::Zero(prob.block_sizes);
  trace_con.blocks[0] = embed_hermitian_constraint(HermitianMatrixd::Identity(n));
  prob.constraints.push_back(std::move(trace_con));
  prob.rhs = Eigen::VectorXd::Zero(na + 1);
  prob.rhs(na) = 1.0;
  prob.maximize = false;

  SProcResult out;
  SdpSolution sol = solve_sdp(prob, opts);
  out.sdp_status = sol.status;
  require_usable(sol, "sproc_certificate");
  out.sdp_optimum = sol.y(na);

  SProcCertificate cert;
  QuaternionMatrixd slack = a0.matrix();
  for (int t = 0; t < na; ++t) {
    cert.taus[active[t]] = std::max(-sol.y(t), 0.0);
    slack -= cert.taus[active[t]] * a[active[t]].matrix();
  }
  cert.slack = HermitianMatrixd(slack);
  EigenDecomposition eig = eig_hermitian(cert.slack);
  cert.min_eig = eig.eigenvalues.size() ? eig.eigenvalues(eig.eigenvalues.size() - 1) : 0.0;

  const double floor = -1e-7 * (1.0 + frobenius_norm(a0.matrix()));
  if (cert.min_eig >= floor) {
    out.status = SProcStatus::Certified;
    out.certificate = cert;
    return out;
  }

  // No multipliers exist, so by losslessness the implication itself fails.
  // Recover a violating direction from the optimal measure: decompose the
  // primal solution against the four forms; the factors inherit G_k >= 0
  // and at least one carries the negative A0 mass.
  try {
    const HermitianMatrixd xq = project_to_quaternion(sol.x.blocks[0]);
    RankOneDecomposition dec = decompose(xq, std::vector<HermitianMatrixd>(a.begin(), a.end()));
    int best = -1;
    double best_f = 0.0;
    for (std::size_t i = 0; i < dec.vectors.size(); ++i) {
      const double f = quad_form(a0, dec.vectors[i]);
      if (f < best_f) {
        best_f = f;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      double f = 0.0;
      if (witness_ok(a0, a, dec.vectors[best], &f)) {
        out.status = SProcStatus::Refuted;
        out.witness = dec.vectors[best];
        out.witness_objective = f;
        return out;
      }
    }
  } catch (const std::exception&) {
    // fall through to sampling
  }

  Rng rng(seed);
  for (int s = 0; s < 10000; ++s) {
    const QuaternionVectord w = random_unit_vector(n, rng);
    double f = 0.0;
    if (witness_ok(a0, a, w, &f)) {
      out.status = SProcStatus::Refuted;
      out.witness = w;
      out.witness_objective = f;
      return out;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const QuaternionVectord w = QuaternionVectord::Unit(n, i);
    double f = 0.0;
    if (witness_ok(a0, a, w, &f)) {
      out.status = SProcStatus::Refuted;
      out.witness = w;
      out.witness_objective = f;
      return out;
    }
  }
  out.status = SProcStatus::Inconclusive;
  return out;
}

// ---------------------------------------------------------------------------
// QCQP

double qcqp_constraint_value(const QcqpProblem& p, int j, const QuaternionVectord& x) {
  const QcqpConstraint& con = p.constraints.at(j);
  return quad_form(con.a, x) + 2.0 * real(dot(x, con.b)) + con.c;
}

double qcqp_objective(const QcqpProblem& p, const QuaternionVectord& x) {
  return quad_form(p.q_matrix, x) + 2.0 * real(dot(x, p.q_vector));
}

std::vector<HermitianMatrixd> homogenize(const QcqpProblem& p) {
  const Eigen::Index n = p.q_matrix.n();
  const int m = static_cast<int>(p.constraints.size());
  std::vector<HermitianMatrixd> bs;
  bs.reserve(m + 2);

  auto border = [n](const HermitianMatrixd& mat, const QuaternionVectord& vec, double corner) {
    QuaternionMatrixd b(n + 1, n + 1);
    b.set(0, 0, {corner, 0, 0, 0});
    for (Eigen::Index i = 0; i < n; ++i) {
      b.set(i + 1, 0, vec(i));
      b.set(0, i + 1, conj(vec(i)));
      for (Eigen::Index j = 0; j < n; ++j) b.set(i + 1, j + 1, mat(i, j));
    }
    return HermitianMatrixd(b);
  };

  bs.push_back(border(p.q_matrix, p.q_vector, 0.0));
  for (const auto& con : p.constraints) bs.push_back(border(con.a, con.b, con.c));
  QuaternionMatrixd hom(n + 1, n + 1);
  hom.set(0, 0, {1, 0, 0, 0});
  bs.push_back(HermitianMatrixd(hom));
  return bs;
}

namespace {

void verify_slater(const QcqpProblem& p, std::uint64_t seed) {
  const int m = static_cast<int>(p.constraints.size());
  if (p.slater_point) {
    for (int j = 0; j < m; ++j) {
      if (!(qcqp_constraint_value(p, j, *p.slater_point) < 0.0)) {
        throw DomainError("qcqp_solve: supplied point is not strictly feasible");
      }
    }
    return;
  }
  const Eigen::Index n = p.q_matrix.n();
  Rng rng(seed);
  std::uniform_real_distribution<double> log_scale(-3.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  auto margin = [&](const QuaternionVectord& x) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) worst = std::max(worst, qcqp_constraint_value(p, j, x));
    return worst;
  };
  best = std::min(best, margin(QuaternionVectord::Zero(n)));
  for (int s = 0; s < 999 && best > -1e-6; ++s) {
    const QuaternionVectord x = random_vector(n, rng) * std::pow(10.0, log_scale(rng));
    best = std::min(best, margin(x));
  }
  if (!(best <= -1e-6)) {
    throw DomainError("qcqp_solve: Slater condition could not be verified by sampling");
  }
}

}  // namespace

QcqpSolution qcqp_solve(const QcqpProblem& p, std::uint64_t seed, const SdpOptions& opts) {
  const Eigen::Index n = p.q_matrix.n();
  const int m = static_cast<int>(p.constraints.size());
  if (m < 1 || m > 4) throw DimensionError("qcqp_solve handles 1 to 4 constraints");
  if (p.q_vector.size() != n) throw DimensionError("qcqp objective vector dimension mismatch");
  for (const auto& con : p.constraints) {
    if (con.a.n() != n || con.b.size() != n) {
      throw DimensionError("qcqp constraint dimension mismatch");
    }
  }
  verify_slater(p, seed);

  const std::vector<HermitianMatrixd> bs = homogenize(p);  // B_0 .. B_{m+1}

  // An all-zero constraint reads 0 <= 0; it carries no slack interior and is
  // dropped (its multiplier stays 0).
  std::vector<int> active;
  for (int j = 1; j <= m; ++j) {
    if (frobenius_norm(bs[j].matrix()) > 0.0) active.push_back(j);
  }
  const int ma = static_cast<int>(active.size());

  SdpProblem prob;
  prob.block_sizes.assign(1, static_cast<int>(4 * (n + 1)));
  for (int j = 0; j < ma; ++j) prob.block_sizes.push_back(1);
  prob.objective = BlockMatrix::Zero(prob.block_sizes);
  prob.objective.blocks[0] = embed_hermitian_constraint(bs[0]);
  for (int t = 0; t < ma; ++t) {
    BlockMatrix am = BlockMatrix::Zero(prob.block_sizes);
    am.blocks[0] = embed_hermitian_constraint(bs[active[t]]);
    am.blocks[1 + t](0, 0) = 1.0;
    prob.constraints.push_back(std::move(am));
  }
  BlockMatrix hom = BlockMatrix::Zero(prob.block_sizes);
  hom.blocks[0] = embed_hermitian_constraint(bs[m + 1]);
  prob.constraints.push_back(std::move(hom));
  prob.rhs = Eigen::VectorXd::Zero(ma + 1);
  prob.rhs(ma) = 1.0;
  prob.maximize = true;

  QcqpSolution out;
  SdpSolution sol = solve_sdp(prob, opts);
  out.sdp_status = sol.status;
  require_usable(sol, "qcqp_solve");
  out.sdp_value = sol.primal_objective;

  const HermitianMatrixd x_star = project_to_quaternion(sol.x.blocks[0]);
  std::vector<HermitianMatrixd> cons(bs.begin() + 1, bs.begin() + 1 + m);
  while (cons.size() < 4) cons.push_back(HermitianMatrixd::Zero(n + 1));
  RankOneDecomposition dec = decompose(x_star, cons);

  // sum_k |t_k|^2 = X*_{00} = 1, so the largest homogenizing component is
  // bounded away from zero.
  int best = -1;
  double best_t = 0.0;
  for (std::size_t k = 0; k < dec.vectors.size(); ++k) {
    const double t = modulus(dec.vectors[k](0));
    if (t > best_t + 1e-12) {
      best_t = t;
      best = static_cast<int>(k);
    }
  }
  if (best < 0 || best_t <= 1e-8) {
    throw ContractError("qcqp_solve: decomposition produced no usable homogenizing component");
  }
  out.recovery_index = best;

  const QuaternionVectord lifted = dec.vectors[best] * inverse(dec.vectors[best](0));
  QuaternionVectord x(n);
  for (Eigen::Index i = 0; i < n; ++i) x.set(i, lifted(i + 1));
  out.x = x;
  out.value = qcqp_objective(p, x);
  for (int j = 0; j < m; ++j) out.constraint_values[j] = qcqp_constraint_value(p, j, x);

  // Dual certificate Y = sum y_j B_j - B_0 + y_0 B_{m+1}.
  for (int t = 0; t < ma; ++t) out.duals.y[active[t] - 1] = std::max(sol.y(t), 0.0);
  out.duals.y0 = sol.y(ma);
  QuaternionMatrixd ym = -bs[0].matrix() + out.duals.y0 * bs[m + 1].matrix();
  for (int j = 0; j < m; ++j) ym += out.duals.y[j] * bs[j + 1].matrix();
  out.duals.y_matrix = HermitianMatrixd(ym);
  out.duals.complementarity =
      inner_product(out.duals.y_matrix.matrix(), outer(lifted, lifted));
  return out;
}

}  // namespace quatopt
