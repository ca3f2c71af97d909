#ifndef QUATOPT_DECOMPOSITION_HPP
#define QUATOPT_DECOMPOSITION_HPP

#include <utility>
#include <vector>

#include "quatopt/quaternion_matrix.hpp"

namespace quatopt {

// Rank-one decomposition X = sum_i x_i x_i^H in which every term takes the
// same value against each constraint matrix: x_i^H A_k x_i = (A_k . X) / r.
// Up to four constraint matrices are supported.
struct RankOneDecomposition {
  std::vector<QuaternionVectord> vectors;
  HermitianMatrixd target;
  std::vector<HermitianMatrixd> constraint_matrices;
  std::vector<double> means;  // (A_k . X) / r
};

// Unit quaternion omega with Re(conj(omega) * tau_k) = 0 for every given
// pairing scalar tau_k. At most three scalars; the homogeneous system always
// has a nonzero solution, taken as the right singular vector of the smallest
// singular value. Empty input returns 1.
Quaterniond nullspace_direction(const std::vector<Quaterniond>& taus);

// Unique positive root of p*alpha^2 + 2*iota*alpha + c = 0 for p > 0, c < 0,
// evaluated on the cancellation-free branch.
double positive_root(double p, double iota, double c);

// v1 = (u1 w + u2)/sqrt(1+|w|^2), v2 = (-u1 + u2 conj(w))/sqrt(1+|w|^2);
// v1 v1^H + v2 v2^H = u1 u1^H + u2 u2^H for every w.
std::pair<QuaternionVectord, QuaternionVectord> rotate_pair(const QuaternionVectord& u1,
                                                            const QuaternionVectord& u2,
                                                            const Quaterniond& omega);

// One phase of the decomposition: given vectors already equalized against
// A_1..A_{ell-1} (with prescribed means), returns vectors additionally
// equalized against A_ell. Earlier equalities and the sum of outer products
// are preserved.
std::vector<QuaternionVectord> equalize_step(std::vector<QuaternionVectord> u,
                                          const std::vector<HermitianMatrixd>& a, int ell,
                                          const std::vector<double>& means, double tol = 1e-7);

// Full pipeline: factorize X ~ sum u_i u_i^H, then run equalize_step for
// ell = 1..|a| in order. The seeding factorization keeps a tighter rank
// cutoff than standalone psd_factorize: truncated eigenmass shifts every
// mean away from the factor sum, and interior-point solutions carry
// eigenvalues near the 1e-10 threshold.
RankOneDecomposition decompose(const HermitianMatrixd& x, const std::vector<HermitianMatrixd>& a,
                               double tol = 1e-7, double psd_rel_tol = 1e-12);

}  // namespace quatopt

#endif
