#pragma once

#include <cstdint>
#include <vector>

#include "kframe/core.hpp"
#include "kframe/frames.hpp"
#include "kframe/opcore.hpp"

// K-frame layer: membership and optimal bounds for the inequality
//   A ||K* f||^2 <= sum_j |<f, f_j>|^2 <= B ||f||^2,
// the canonical Parseval construction on range(K), the spectral/trace
// report, K-norm extension, dilation through K, and the correspondence
// between Parseval K-frames and subspaces.

namespace kframe {

struct KFrameInstance {
  Mat k;              // n x n
  FrameSystem frame;  // dim n, m vectors
};

void validate(const KFrameInstance& inst);

/// upper = largest eigenvalue of the frame operator. lower is the largest
/// A with A KK* <= S when range(K) lies inside range(T), else 0.
FrameBounds kframe_bounds(const KFrameInstance& inst, const Tolerance& tol = {});

/// Parseval K-frames are exactly the families whose frame operator is KK*.
bool is_parseval_kframe(const KFrameInstance& inst, const Tolerance& tol = {});

/// f_j = K w_j for a seeded random Parseval frame {w_j}; the result is a
/// Parseval K-frame by construction.
KFrameInstance random_parseval_kframe(const Mat& k, Index m, std::uint64_t seed);

/// Canonical Parseval frame for range(K): applies the inverse square root
/// of the frame operator restricted to range(K) after projecting onto it.
/// The output is simultaneously a Parseval frame for range(K) and a
/// Parseval P-frame for the whole space, P being the returned projector.
struct CanonicalParseval {
  FrameSystem frame;
  Mat projector;  // orthogonal projector onto range(K)
};

CanonicalParseval canonical_parseval(const KFrameInstance& inst,
                                     const Tolerance& tol = {});

/// Spectrum of the frame operator of a Parseval K-frame next to the
/// quantities the eigenvalue/trace identities compare. The trace identity
/// sum ||f_j||^2 == tr(S) always holds; the all-eigenvalues-equal claim
/// only in the regime where KK* is a multiple of the identity, which the
/// report flags instead of asserting.
struct SpectralReport {
  std::vector<double> eigenvalues;  // descending
  double sum_norms_sq = 0.0;
  double n_knorm_sq = 0.0;    // n * ||K||^2
  double trace_kkstar = 0.0;  // tr(K K*)
  bool eigen_claim_holds = false;
  bool regime_scalar_kkstar = false;
};

SpectralReport trace_eigen_report(const KFrameInstance& inst,
                                  const Tolerance& tol = {});

/// Extends M vectors of norm ||K|| to a K-norm frame: each vector is
/// completed to an orthonormal basis of H (of range(K) in tight mode,
/// which requires ||K|| ||pinv(K)|| == 1) and all basis vectors are scaled
/// by ||K||. The K-frame inequality holds with constants (M, M ||K||^2).
KFrameInstance extend_to_knorm(const Mat& k, const FrameSystem& partial,
                               bool tight_mode, const Tolerance& tol = {});

/// Dilation of a Parseval K-frame: f_j == K . embed* . P e_j for the
/// standard basis {e_j} of coefficient space, via the Parseval frame
/// {pinv(K) f_j} on range(K*).
DilationResult kframe_dilation(const KFrameInstance& inst,
                               const Tolerance& tol = {});

/// The subspace a Parseval K-frame for range(KP) corresponds to. Frames
/// are matched to a representation f_j = KP e'_j up to a unitary on H; the
/// result is U_F* . range(KP) for the unitary U_F mapping e_j to e'_j.
Subspace frame_to_subspace(const Mat& k, const Mat& p, const FrameSystem& f,
                           const Tolerance& tol = {});

/// Inverse direction: picks the unitary u carrying w onto range(KP) and
/// returns {u* KP u e_j} over the standard basis.
FrameSystem subspace_to_frame(const Mat& k, const Mat& p, const Subspace& w,
                              const Tolerance& tol = {});

/// Principal angles (radians, ascending) between two subspaces of one
/// ambient space.
std::vector<double> principal_angles(const Subspace& a, const Subspace& b);

}  // namespace kframe
