#pragma once

#include <vector>

#include "kframe/core.hpp"
#include "kframe/opcore.hpp"

// Classical frame machinery: synthesis/analysis/frame operators, optimal
// bounds, Parseval and equal-norm tests, projected frames, the dilation of
// a Parseval frame from coefficient space, and Gram-matrix equivalence.

namespace kframe {

/// Ordered finite family of vectors in an n-dimensional complex space.
/// The family need not span (K-frames do not require it).
struct FrameSystem {
  Index dim = 0;
  std::vector<Vec> vectors;

  Index count() const { return static_cast<Index>(vectors.size()); }
};

void validate(const FrameSystem& f);

/// Synthesis matrix: n x m with the j-th vector as j-th column.
Mat synthesis(const FrameSystem& f);

/// FrameSystem from the columns of a synthesis matrix.
FrameSystem frame_from_synthesis(const Mat& t);

struct FrameOperators {
  Mat synthesis;  // n x m
  Mat analysis;   // m x n, adjoint of synthesis
  Mat frame_op;   // n x n, synthesis * analysis
};

FrameOperators operators_of(const FrameSystem& f);

/// Optimal constants of the frame inequality: the extreme eigenvalues of
/// the frame operator. lower == 0 signals Bessel-but-not-frame.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

FrameBounds frame_bounds(const FrameSystem& f, const Tolerance& tol = {});

bool is_parseval(const FrameSystem& f, const Tolerance& tol = {});

struct EqualNormResult {
  bool equal_norm = false;
  double c = 0.0;  // norm of the first vector
};

EqualNormResult is_equal_norm(const FrameSystem& f, const Tolerance& tol = {});

/// Applies an orthogonal projector to every vector. The projected family is
/// a frame for the projected space with the original bounds.
FrameSystem project_frame(const FrameSystem& f, const Mat& p,
                          const Tolerance& tol = {});

/// Witness that a frame is the projection of an orthonormal basis from a
/// larger space: basis {e_j} of the big space and projector P with
/// P e_j == embed * f_j.
struct DilationResult {
  Index big_dim = 0;
  std::vector<Vec> basis;  // orthonormal basis of the big space
  Mat projector;           // Hermitian idempotent on the big space
  Mat embed;               // big_dim x n isometry from H into the big space
};

/// Realizes a Parseval frame as P e_j for the standard basis of coefficient
/// space, with P the projection onto the range of the analysis isometry.
DilationResult naimark_dilate(const FrameSystem& f, const Tolerance& tol = {});

/// Gram matrix with entries <x_j, x_i> at (i, j).
Mat gram_matrix(const FrameSystem& f);

/// Equal Gram matrices characterize frames related by a unitary.
bool gram_equivalent(const FrameSystem& f, const FrameSystem& g,
                     const Tolerance& tol = {});

}  // namespace kframe
