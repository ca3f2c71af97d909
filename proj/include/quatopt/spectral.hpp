#ifndef QUATOPT_SPECTRAL_HPP
#define QUATOPT_SPECTRAL_HPP

#include <Eigen/Dense>
#include <vector>

#include "quatopt/quaternion_matrix.hpp"

namespace quatopt {

// Real representation R(M) of a quaternion matrix: every entry
// q = a + bi + cj + dk becomes the 4x4 block
//   [ a -b -c -d ]
//   [ b  a -d  c ]
//   [ c  d  a -b ]
//   [ d -c  b  a ]
// R is an algebra homomorphism (R(PQ) = R(P)R(Q), R(P^H) = R(P)'), maps
// Hermitian to symmetric, PSD to PSD, and satisfies
// inner_product(A, B) = trace(R(A)' R(B)) / 4.
struct RealEmbedding {
  Eigen::MatrixXd matrix;
  Eigen::Index quaternion_rows{0};
  Eigen::Index quaternion_cols{0};
};

RealEmbedding real_embed(const QuaternionMatrixd& m);

// Column stacking of a quaternion vector into R^{4n}; satisfies
// stack(M x) = R(M) stack(x) and <stack(x), stack(y)> = Re(x^H y).
Eigen::VectorXd real_column(const QuaternionVectord& v);
QuaternionVectord from_real_column(const Eigen::VectorXd& z);

// Eigenpairs of a quaternion Hermitian matrix. Eigenvalues are real and
// listed in descending order; eigenvectors are quaternion-orthonormal with
// X v_i = v_i lambda_i.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  std::vector<QuaternionVectord> eigenvectors;
};

// Cyclic Jacobi eigensolver for a dense real symmetric matrix.
// Converges when the off-diagonal Frobenius norm drops below
// rel_off_tol * ||S||_F; throws NumericalError after max_sweeps sweeps.
// Returns eigenvalues in descending order with matching eigenvector columns.
void jacobi_eigensolver(const Eigen::MatrixXd& s, Eigen::VectorXd& eigenvalues,
                        Eigen::MatrixXd& eigenvectors, double rel_off_tol = 1e-12,
                        int max_sweeps = 100);

// Symmetric eigensolve of R(X); the 4-fold eigenvalue multiplicity of the
// embedding is collapsed back to one quaternion eigenpair per cluster.
EigenDecomposition eig_hermitian(const HermitianMatrixd& x);

// Number of eigenvalues above rel_tol * max(lambda_max, tiny); input sorted
// descending.
int numerical_rank(const Eigen::VectorXd& eigenvalues, double rel_tol = 1e-10);

// Rank-revealing factorization X = sum_i u_i u_i^H with u_i = v_i sqrt(lambda_i).
// Eigenvalues in [-rel_tol*(1+lambda_max), 0) are clamped to zero; anything
// below that is a NotPsdError.
std::vector<QuaternionVectord> psd_factorize(const HermitianMatrixd& x,
                                             double rel_tol = 1e-10);

}  // namespace quatopt

#endif
