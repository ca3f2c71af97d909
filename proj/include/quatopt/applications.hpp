#ifndef QUATOPT_APPLICATIONS_HPP
#define QUATOPT_APPLICATIONS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "quatopt/decomposition.hpp"
#include "quatopt/sdp.hpp"

namespace quatopt {

// ---------------------------------------------------------------------------
// Joint numerical range: recover x with x^H A_k x = v_k for five Hermitian
// matrices, via SDP feasibility plus the rank-one decomposition.

struct JnrQuery {
  std::array<HermitianMatrixd, 5> matrices;
  std::array<double, 5> target{};
};

struct JnrFeasiblePoint {
  bool feasible = false;
  HermitianMatrixd x;          // valid when feasible
  double constraint_residual = 0.0;  // max_k |A_k . X - v_k| / (1 + |v_k|)
  SdpStatus sdp_status = SdpStatus::NumericalFailure;
};

JnrFeasiblePoint jnr_feasible_point(const JnrQuery& query, const SdpOptions& opts = {});

struct JnrRecovery {
  bool feasible = false;
  QuaternionVectord x;
  std::array<double, 5> achieved{};  // x^H A_k x
  JnrFeasiblePoint point;
};

JnrRecovery jnr_recover(const JnrQuery& query, const SdpOptions& opts = {});

// ---------------------------------------------------------------------------
// S-procedure for four quaternion Hermitian forms: find multipliers tau >= 0
// with A_0 - sum tau_k A_k >= 0, or refute with a witness vector.

struct SProcCertificate {
  std::array<double, 4> taus{};
  HermitianMatrixd slack;  // A_0 - sum tau_k A_k
  double min_eig = 0.0;
};

enum class SProcStatus { Certified, Refuted, Inconclusive };

struct SProcResult {
  SProcStatus status = SProcStatus::Inconclusive;
  std::optional<SProcCertificate> certificate;
  std::optional<QuaternionVectord> witness;  // G_i(w) >= 0 for all i, F(w) < 0
  double witness_objective = 0.0;            // F(w)
  double sdp_optimum = 0.0;                  // max t with A_0 - sum tau A - t I >= 0
  SdpStatus sdp_status = SdpStatus::NumericalFailure;
};

// x0 must make every non-zero constraint form strictly positive.
SProcResult sproc_certificate(const HermitianMatrixd& a0,
                              const std::array<HermitianMatrixd, 4>& a,
                              const QuaternionVectord& x0, std::uint64_t seed = 0,
                              const SdpOptions& opts = {});

// ---------------------------------------------------------------------------
// Quaternion QCQP with at most four constraints:
//   max x^H Q x + 2 Re(x^H q)
//   s.t. x^H A_j x + 2 Re(x^H b_j) + c_j <= 0, j = 1..m.

struct QcqpConstraint {
  HermitianMatrixd a;
  QuaternionVectord b;
  double c = 0.0;
};

struct QcqpProblem {
  HermitianMatrixd q_matrix;
  QuaternionVectord q_vector;
  std::vector<QcqpConstraint> constraints;  // m <= 4
  std::optional<QuaternionVectord> slater_point;
};

// Value of constraint j at x.
double qcqp_constraint_value(const QcqpProblem& p, int j, const QuaternionVectord& x);
double qcqp_objective(const QcqpProblem& p, const QuaternionVectord& x);

// Homogenization matrices B_0 = [[0, q^H], [q, Q]], B_j = [[c_j, b_j^H],
// [b_j, A_j]], B_{m+1} = e_0 e_0^H, each of size (n+1) x (n+1).
std::vector<HermitianMatrixd> homogenize(const QcqpProblem& p);

struct QcqpDuals {
  double y0 = 0.0;                // multiplier of the homogenizing constraint
  std::array<double, 4> y{};      // constraint multipliers, >= 0
  HermitianMatrixd y_matrix;      // dual slack Y
  double complementarity = 0.0;   // Y . (lifted solution)
};

struct QcqpSolution {
  QuaternionVectord x;
  double value = 0.0;      // objective at x
  double sdp_value = 0.0;  // optimum of the relaxation
  int recovery_index = 0;  // which decomposition factor was rescaled
  QcqpDuals duals;
  SdpStatus sdp_status = SdpStatus::NumericalFailure;
  std::array<double, 4> constraint_values{};  // at the recovered x
};

// Relaxation + projection + rank-one decomposition + rescaling. The Slater
// condition is taken from the supplied point or probed by seeded sampling;
// a DomainError is raised if it cannot be confirmed.
QcqpSolution qcqp_solve(const QcqpProblem& p, std::uint64_t seed = 0,
                        const SdpOptions& opts = {});

}  // namespace quatopt

#endif
