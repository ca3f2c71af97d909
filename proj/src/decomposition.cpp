#include "quatopt/decomposition.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "quatopt/errors.hpp"
#include "quatopt/spectral.hpp"

namespace quatopt {

Quaterniond nullspace_direction(const std::vector<Quaterniond>& taus) {
  if (taus.empty()) return Quaterniond{1, 0, 0, 0};
  if (taus.size() > 3) throw DimensionError("nullspace_direction takes at most 3 scalars");
  Eigen::MatrixXd rows(taus.size(), 4);
  for (std::size_t k = 0; k < taus.size(); ++k) {
    rows.row(k) << taus[k].a, taus[k].b, taus[k].c, taus[k].d;
  }
  // Right singular vector of the smallest singular value; with fewer rows
  // than columns the trailing column of V spans the exact nullspace.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const Eigen::Vector4d w = svd.matrixV().col(3);
  return Quaterniond{w(0), w(1), w(2), w(3)};
}

double positive_root(double p, double iota, double c) {
  if (!(p > 0.0) || !(c < 0.0)) {
    throw ContractError("positive_root requires p > 0 and c < 0");
  }
  const double s = std::sqrt(iota * iota - p * c);
  return iota > 0.0 ? -c / (s + iota) : (s - iota) / p;
}

std::pair<QuaternionVectord, QuaternionVectord> rotate_pair(const QuaternionVectord& u1,
                                                            const QuaternionVectord& u2,
                                                            const Quaterniond& omega) {
  const double scale = 1.0 / std::sqrt(1.0 + squared_modulus(omega));
  QuaternionVectord v1 = u1 * omega;
  v1 += u2;
  v1 *= scale;
  QuaternionVectord v2 = u2 * conj(omega);
  v2 -= u1;
  v2 *= scale;
  return {std::move(v1), std::move(v2)};
}

namespace {

double quad_value(const HermitianMatrixd& a, const QuaternionVectord& u) {
  return quad_form(a, u);
}

}  // namespace

std::vector<QuaternionVectord> equalize_step(std::vector<QuaternionVectord> u,
                                          const std::vector<HermitianMatrixd>& a, int ell,
                                          const std::vector<double>& means, double tol) {
  if (ell < 1 || ell > 4) throw DimensionError("equalize_step handles ell in 1..4");
  if (static_cast<int>(a.size()) < ell || static_cast<int>(means.size()) < ell) {
    throw DimensionError("equalize_step needs ell matrices and means");
  }
  const int r = static_cast<int>(u.size());
  const double mean = means[ell - 1];
  // A_ell . X recovered from its mean; used for scale-relative tolerances.
  const double scale_ell = 1.0 + std::abs(mean * r);
  const double eq_tol = 1e-9 * scale_ell;

  // Precondition: the incoming vectors already satisfy the earlier equalities.
  for (int k = 0; k + 1 < ell; ++k) {
    const double scale_k = 1.0 + std::abs(means[k] * r);
    for (const auto& ui : u) {
      if (std::abs(quad_value(a[k], ui) - means[k]) > tol * scale_k) {
        throw ContractError("equalize_step input violates the equal-inner-product precondition for k=" +
                            std::to_string(k + 1));
      }
    }
  }

  std::vector<QuaternionVectord> done;
  done.reserve(r);
  std::vector<QuaternionVectord> working;
  std::vector<double> dev;  // value - mean, kept in sync with `working`
  for (auto& ui : u) {
    const double di = quad_value(a[ell - 1], ui) - mean;
    if (std::abs(di) <= eq_tol) {
      done.push_back(std::move(ui));
    } else {
      working.push_back(std::move(ui));
      dev.push_back(di);
    }
  }

  while (!working.empty()) {
    int hi = 0, lo = 0;
    for (std::size_t s = 1; s < working.size(); ++s) {
      if (dev[s] > dev[hi]) hi = static_cast<int>(s);
      if (dev[s] < dev[lo]) lo = static_cast<int>(s);
    }
    if (!(dev[hi] > 0.0) || !(dev[lo] < 0.0)) {
      // One-sided leftovers. The deviations over the working set sum to the
      // (small) total already granted to `done`, so anything still here must
      // sit inside the output tolerance; otherwise the means are inconsistent.
      for (std::size_t s = 0; s < working.size(); ++s) {
        if (std::abs(dev[s]) > tol * scale_ell) {
          throw NumericalError("equalize_step: one-sided working set beyond tolerance; "
                               "inconsistent means");
        }
      }
      for (auto& w : working) done.push_back(std::move(w));
      working.clear();
      break;
    }

    const QuaternionVectord& u1 = working[hi];
    const QuaternionVectord& u2 = working[lo];
    std::vector<Quaterniond> taus;
    taus.reserve(ell - 1);
    for (int k = 0; k + 1 < ell; ++k) {
      taus.push_back(bilinear_form(u1, a[k].matrix(), u2));
    }
    const Quaterniond omega_star = nullspace_direction(taus);
    const Quaterniond tau_ell = bilinear_form(u1, a[ell - 1].matrix(), u2);
    const double iota = real(conj(omega_star) * tau_ell);
    const double alpha = positive_root(dev[hi], iota, dev[lo]);
    auto [v1, v2] = rotate_pair(u1, u2, omega_star * alpha);

    done.push_back(std::move(v1));
    const double dev2 = quad_value(a[ell - 1], v2) - mean;
    // erase the larger index first so the smaller one stays valid
    const int first = std::max(hi, lo), second = std::min(hi, lo);
    working.erase(working.begin() + first);
    dev.erase(dev.begin() + first);
    working.erase(working.begin() + second);
    dev.erase(dev.begin() + second);
    if (std::abs(dev2) <= eq_tol) {
      done.push_back(std::move(v2));
    } else {
      working.push_back(std::move(v2));
      dev.push_back(dev2);
    }
  }
  return done;
}

RankOneDecomposition decompose(const HermitianMatrixd& x, const std::vector<HermitianMatrixd>& a,
                               double tol, double psd_rel_tol) {
  if (a.size() > 4) throw DimensionError("decompose supports at most 4 constraint matrices");
  for (const auto& ak : a) {
    if (ak.n() != x.n()) throw DimensionError("constraint matrix dimension mismatch");
  }
  RankOneDecomposition result;
  result.target = x;
  result.constraint_matrices = a;
  result.vectors = psd_factorize(x, psd_rel_tol);
  const int r = static_cast<int>(result.vectors.size());
  result.means.assign(a.size(), 0.0);
  if (r == 0) return result;
  for (std::size_t k = 0; k < a.size(); ++k) {
    result.means[k] = inner_product(a[k].matrix(), x.matrix()) / r;
  }
  for (int ell = 1; ell <= static_cast<int>(a.size()); ++ell) {
    result.vectors = equalize_step(std::move(result.vectors), a, ell, result.means, tol);
  }
  return result;
}

}  // namespace quatopt
