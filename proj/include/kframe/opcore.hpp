#pragma once

#include <vector>

#include "kframe/core.hpp"

// Pseudo-inverse machinery, orthogonal projectors, deterministic basis
// completion and the Douglas range-inclusion factorization. Everything
// downstream (frames, K-frames, duals) is built on these.

namespace kframe {

/// Result of factoring l1 through l2 (l1 = l2 * factor_u).
struct DouglasFactorization {
  Mat factor_u;
  double norm_sq_u = 0.0;  // squared largest singular value of factor_u
  bool inclusion_ok = false;
};

/// A subspace given by an orthonormal column basis of the ambient space.
struct Subspace {
  Index ambient_dim = 0;
  Mat basis;  // ambient_dim x k, basis.adjoint() * basis == I_k

  Index dim() const { return basis.cols(); }
};

/// Rotates each column so its first non-negligible entry is real and
/// nonnegative. Removes the unit-phase ambiguity of computed bases.
void fix_column_phases(Mat& a);

/// Full SVD a = u * diag(s) * v.adjoint() with phase-normalized u (the
/// matching phases are absorbed into v). u, v are square unitaries and
/// s is descending.
struct Svd {
  Mat u;
  Eigen::VectorXd s;
  Mat v;
};
Svd svd(const Mat& a);

/// Number of singular values above the rank cutoff.
Index numerical_rank(const Mat& a, const Tolerance& tol = {});

/// Orthonormal basis of range(a) as columns, deterministic up to the
/// phase convention.
Mat range_basis(const Mat& a, const Tolerance& tol = {});

/// Orthonormal basis of the null space of a.
Mat null_basis(const Mat& a, const Tolerance& tol = {});

/// Moore-Penrose pseudo-inverse via SVD with relative cutoff.
Mat pinv(const Mat& a, const Tolerance& tol = {});

/// Orthogonal projector onto range(a), i.e. a * pinv(a).
Mat orth_projector(const Mat& a, const Tolerance& tol = {});

/// Factors l1 = l2 * u when range(l1) is contained in range(l2).
/// norm_sq_u is then the least alpha with l1 l1* <= alpha l2 l2*.
DouglasFactorization douglas_factor(const Mat& l1, const Mat& l2,
                                    const Tolerance& tol = {});

/// Extends the orthonormal list vs to a full orthonormal basis of the
/// ambient space. Completion is deterministic: standard basis vectors are
/// orthogonalized against the current set in index order, discarding
/// near-zero remainders.
std::vector<Vec> complete_to_onb(const std::vector<Vec>& vs, Index ambient_dim,
                                 const Tolerance& tol = {});

/// The unitary u with u * b1[j] == b2[j]; both partial lists are first
/// completed to full bases deterministically.
Mat unitary_bases_map(const std::vector<Vec>& b1, const std::vector<Vec>& b2,
                      const Tolerance& tol = {});

/// Canonical left inverse of an injective k, fixed to pinv(k).
Mat left_inverse(const Mat& k, const Tolerance& tol = {});

}  // namespace kframe
