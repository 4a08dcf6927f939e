#include "kframe/frames.hpp"

#include <algorithm>
#include <cmath>

namespace kframe {

void validate(const FrameSystem& f) {
  if (f.dim < 1) throw Error(errc::invalid_input, "frame dimension must be positive");
  if (f.vectors.empty()) throw Error(errc::invalid_input, "frame must have at least one vector");
  for (const Vec& v : f.vectors) {
    if (v.size() != f.dim)
      throw Error(errc::invalid_input, "frame vector length differs from dim");
    if (!v.allFinite())
      throw Error(errc::invalid_input, "frame vector has non-finite entries");
  }
}

Mat synthesis(const FrameSystem& f) {
  Mat t(f.dim, f.count());
  for (Index j = 0; j < f.count(); ++j)
    t.col(j) = f.vectors[static_cast<std::size_t>(j)];
  return t;
}

FrameSystem frame_from_synthesis(const Mat& t) {
  FrameSystem f;
  f.dim = t.rows();
  f.vectors.reserve(static_cast<std::size_t>(t.cols()));
  for (Index j = 0; j < t.cols(); ++j) f.vectors.push_back(t.col(j));
  return f;
}

FrameOperators operators_of(const FrameSystem& f) {
  validate(f);
  FrameOperators out;
  out.synthesis = synthesis(f);
  out.analysis = out.synthesis.adjoint();
  out.frame_op = out.synthesis * out.analysis;
  return out;
}

FrameBounds frame_bounds(const FrameSystem& f, const Tolerance& tol) {
  require_valid(tol);
  const FrameOperators ops = operators_of(f);
  Eigen::SelfAdjointEigenSolver<Mat> eig(ops.frame_op);
  FrameBounds b;
  b.lower = std::max(0.0, eig.eigenvalues().minCoeff());
  b.upper = std::max(0.0, eig.eigenvalues().maxCoeff());
  // A tiny lower eigenvalue of a non-spanning family is numerical noise.
  const double cut = tol.rank_rel * static_cast<double>(f.dim) * b.upper;
  if (b.lower <= cut) b.lower = 0.0;
  return b;
}

bool is_parseval(const FrameSystem& f, const Tolerance& tol) {
  require_valid(tol);
  const FrameOperators ops = operators_of(f);
  return fnorm(ops.frame_op - identity(f.dim)) <=
         tol.eq_abs * std::sqrt(static_cast<double>(f.dim));
}

EqualNormResult is_equal_norm(const FrameSystem& f, const Tolerance& tol) {
  require_valid(tol);
  validate(f);
  EqualNormResult out;
  out.c = f.vectors.front().norm();
  out.equal_norm = true;
  for (const Vec& v : f.vectors)
    if (std::abs(v.norm() - out.c) > tol.eq_abs) out.equal_norm = false;
  return out;
}

FrameSystem project_frame(const FrameSystem& f, const Mat& p,
                          const Tolerance& tol) {
  require_valid(tol);
  validate(f);
  require_finite(p, "projector");
  if (p.rows() != f.dim || p.cols() != f.dim)
    throw Error(errc::invalid_input, "projector dimension differs from frame");
  const double scale = std::max(1.0, fnorm(p));
  if (fnorm(p - p.adjoint()) > tol.eq_abs * scale ||
      fnorm(p * p - p) > tol.eq_abs * scale)
    throw Error(errc::invalid_input, "matrix is not an orthogonal projector");

  FrameSystem out;
  out.dim = f.dim;
  out.vectors.reserve(f.vectors.size());
  for (const Vec& v : f.vectors) out.vectors.push_back(p * v);
  return out;
}

DilationResult naimark_dilate(const FrameSystem& f, const Tolerance& tol) {
  require_valid(tol);
  if (!is_parseval(f, tol))
    throw Error(errc::invalid_input, "frame is not Parseval");
  const FrameOperators ops = operators_of(f);
  const Index m = f.count();

  DilationResult out;
  out.big_dim = m;
  out.embed = ops.analysis;              // isometry since TT* == I
  out.projector = ops.analysis * ops.synthesis;  // projection onto range(T*)
  out.basis.reserve(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    Vec e = Vec::Zero(m);
    e(j) = 1.0;
    out.basis.push_back(e);  // P e_j == T* f_j falls out of P == T*T
  }
  return out;
}

Mat gram_matrix(const FrameSystem& f) {
  const Mat t = synthesis(f);
  return t.adjoint() * t;
}

bool gram_equivalent(const FrameSystem& f, const FrameSystem& g,
                     const Tolerance& tol) {
  require_valid(tol);
  validate(f);
  validate(g);
  if (f.count() != g.count())
    throw Error(errc::invalid_input, "frames have different vector counts");
  return fnorm(gram_matrix(f) - gram_matrix(g)) <=
         tol.eq_abs * static_cast<double>(f.count());
}

}  // namespace kframe
