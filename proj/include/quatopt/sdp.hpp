#ifndef QUATOPT_SDP_HPP
#define QUATOPT_SDP_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "quatopt/quaternion_matrix.hpp"

namespace quatopt {

// Block-diagonal symmetric matrix; a nonnegative scalar variable is a
// 1x1 block.
struct BlockMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  static BlockMatrix Zero(const std::vector<int>& sizes);
  static BlockMatrix Identity(const std::vector<int>& sizes);
};

double block_dot(const BlockMatrix& x, const BlockMatrix& y);
double block_frobenius_norm(const BlockMatrix& x);

// Standard-form SDP over block-diagonal symmetric matrices:
//   optimize  objective . X   s.t.  constraints[i] . X = rhs[i],  X >= 0.
// All data blocks must be symmetric.
struct SdpProblem {
  std::vector<int> block_sizes;
  BlockMatrix objective;
  std::vector<BlockMatrix> constraints;
  Eigen::VectorXd rhs;
  bool maximize = false;
};

struct SdpOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
};

enum class SdpStatus { Converged, MaxIterations, NumericalFailure };

std::string to_string(SdpStatus s);

struct SdpSolution {
  BlockMatrix x;           // primal
  Eigen::VectorXd y;       // dual multipliers
  BlockMatrix z;           // dual slack
  SdpStatus status = SdpStatus::NumericalFailure;
  double primal_objective = 0.0;  // in the caller's orientation
  double dual_objective = 0.0;
  double gap = 0.0;             // relative duality gap
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

// Infeasible-start primal-dual path-following solver with Mehrotra
// predictor-corrector steps and the XZ+ZX symmetrized Newton direction.
SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opts = {});

// (1/4) R(A): satisfies A . X = embed(A) . R(X) for Hermitian A, X.
Eigen::MatrixXd embed_hermitian_constraint(const HermitianMatrixd& a);

// Orthogonal projection of a symmetric 4n x 4n matrix onto the embedded
// quaternion subspace, read back as a Hermitian quaternion matrix.
// Equivalently, the average over the right-multiplication symmetries that
// commute with the embedding; preserves PSD-ness and every inner product
// against embedded data matrices.
HermitianMatrixd project_to_quaternion(const Eigen::MatrixXd& x_real);

}  // namespace quatopt

#endif
