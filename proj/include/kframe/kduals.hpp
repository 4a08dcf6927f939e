#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kframe/core.hpp"
#include "kframe/frames.hpp"

// K-dual families: verification of the duality T Theta* == K, the full
// dual family parameterized by a free operator, the analysis-error
// identity for Parseval pairs, and the equal-norm dual construction.

namespace kframe {

/// Verification record for a claimed K-dual pair.
struct DualPair {
  Mat k;
  FrameSystem frame;  // {f_j}
  FrameSystem dual;   // {g_j}
  double residual = 0.0;  // ||T Theta* - K||_F
  bool accepted = false;
  double recon_residual = 0.0;  // worst reconstruction error over samples
  double kstar_lower = 0.0;     // lower K*-frame bound of the dual
};

DualPair is_kdual(const Mat& k, const FrameSystem& f, const FrameSystem& g,
                  const Tolerance& tol = {});

/// One member of the family of K-duals of f: the columns of
/// V = (pinv(T) K + (I - pinv(T) T) z*)*. z == 0 gives the canonical dual.
FrameSystem kdual_family(const Mat& k, const FrameSystem& f, const Mat& z,
                         const Tolerance& tol = {});

/// Sampled check of ||(T* - Theta* K*) x||^2 == ||K K* x||^2 - ||K* x||^2
/// for a Parseval K-frame with a K-dual that is a Parseval K*-frame, plus
/// the two-sided bound on ||T - K Theta||^2. The lower bound is vacuous
/// whenever 1 - ||K||^2 <= 0, which the preconditions in fact force.
struct ErrorIdentityReport {
  double max_identity_residual = 0.0;
  bool identity_ok = false;
  double op_distance_sq = 0.0;  // ||T - K Theta||^2 (operator norm squared)
  double lower_bound = 0.0;
  double upper_bound = 0.0;  // ||K||^4
  bool lower_vacuous = false;
  bool within_bounds = false;
};

ErrorIdentityReport error_identity_report(const Mat& k, const FrameSystem& f,
                                          const FrameSystem& g,
                                          const Tolerance& tol = {},
                                          int samples = 100);

/// Norm audit of an equal-norm dual candidate. formula_value is the
/// closed-form squared norm a^2 + (1-2a^2)(n/m)||K||^2 + (a^2 n/m)||K||^4,
/// valid only in the regime flagged by formula_applies.
struct EqualNormDualReport {
  double a = 0.0;
  std::vector<double> norms;
  double max_norm_spread = 0.0;
  double formula_value = 0.0;
  bool formula_applies = false;
  double duality_residual = 0.0;
};

struct EqualNormDual {
  FrameSystem dual;
  Mat u;  // the partial isometry actually used (n x m)
  EqualNormDualReport report;
};

/// Builds the equal-norm K-dual g_j = pinv(K) f_j + a u delta_j for a
/// Parseval K-frame of an injective K. When u is not supplied, a feasible
/// partial isometry with initial space null(T) and the per-vector
/// orthogonality <pinv(K) f_j, u delta_j> == 0 is searched for with the
/// given seed (alternating projections, explicit failure when none is
/// found). Distinct values of a give distinct duals.
EqualNormDual equal_norm_dual(const Mat& k, const FrameSystem& f, double a,
                              const std::optional<Mat>& u = std::nullopt,
                              const Tolerance& tol = {},
                              std::uint64_t seed = 0);

}  // namespace kframe
