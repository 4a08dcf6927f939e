#include "kframe/kframes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kframe/rand.hpp"

namespace kframe {

void validate(const KFrameInstance& inst) {
  require_finite(inst.k, "k");
  if (inst.k.rows() != inst.k.cols())
    throw Error(errc::invalid_input, "k must be square");
  validate(inst.frame);
  if (inst.k.rows() != inst.frame.dim)
    throw Error(errc::invalid_input, "k and frame dimensions differ");
}

FrameBounds kframe_bounds(const KFrameInstance& inst, const Tolerance& tol) {
  require_valid(tol);
  validate(inst);
  const FrameOperators ops = operators_of(inst.frame);

  FrameBounds b;
  Eigen::SelfAdjointEigenSolver<Mat> eig(ops.frame_op);
  b.upper = std::max(0.0, eig.eigenvalues().maxCoeff());

  // Membership: {f_j} is a K-frame iff range(K) is inside range(T).
  const Mat pt = orth_projector(ops.synthesis, tol);
  const double incl = fnorm(inst.k - pt * inst.k);
  if (incl > tol.eq_abs * std::max(1.0, fnorm(inst.k))) {
    b.lower = 0.0;
    return b;
  }

  // Largest A with A KK* <= S, i.e. 1 / lambda_max(K* pinv(S) K).
  const Mat m = inst.k.adjoint() * pinv(ops.frame_op, tol) * inst.k;
  Eigen::SelfAdjointEigenSolver<Mat> eig2(m);
  const double lm = eig2.eigenvalues().maxCoeff();
  b.lower = lm > 0.0 ? 1.0 / lm : std::numeric_limits<double>::infinity();
  return b;
}

bool is_parseval_kframe(const KFrameInstance& inst, const Tolerance& tol) {
  require_valid(tol);
  validate(inst);
  const FrameOperators ops = operators_of(inst.frame);
  const Mat kkstar = inst.k * inst.k.adjoint();
  const double scale = std::max(1.0, std::pow(opnorm(inst.k), 2)) *
                       std::sqrt(static_cast<double>(inst.frame.dim));
  return fnorm(ops.frame_op - kkstar) <= tol.eq_abs * scale;
}

KFrameInstance random_parseval_kframe(const Mat& k, Index m, std::uint64_t seed) {
  require_finite(k, "k");
  if (k.rows() != k.cols()) throw Error(errc::invalid_input, "k must be square");
  const Index n = k.rows();
  if (m < n)
    throw Error(errc::invalid_input, "need at least dim-many vectors for a Parseval frame");

  Rng rng(seed);
  const Mat w = haar_unitary(rng, m).topRows(n);  // co-isometry: w w* == I_n
  KFrameInstance inst;
  inst.k = k;
  inst.frame = frame_from_synthesis(k * w);
  return inst;
}

CanonicalParseval canonical_parseval(const KFrameInstance& inst,
                                     const Tolerance& tol) {
  require_valid(tol);
  validate(inst);

  const FrameOperators ops = operators_of(inst.frame);
  const Mat bk = range_basis(inst.k, tol);  // n x r
  const Mat proj = bk * bk.adjoint();

  // Hypothesis S(range K) == range K, tested as a column-space residual.
  // A tilt out of range(K) is a hypothesis violation even when the family
  // also fails to be a K-frame.
  const Mat sb = ops.frame_op * bk;
  const double resid = fnorm(sb - proj * sb);
  if (resid > tol.eq_abs * std::max(1.0, fnorm(sb)))
    throw Error(errc::hypothesis_violated,
                "frame operator does not map range(K) onto itself");

  if (!(kframe_bounds(inst, tol).lower > 0.0))
    throw Error(errc::not_a_kframe, "family is not a K-frame for this K");

  // Inverse square root of S compressed to range(K).
  const Mat m = bk.adjoint() * ops.frame_op * bk;
  Eigen::SelfAdjointEigenSolver<Mat> eig(m);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double cut = tol.rank_rel * static_cast<double>(bk.cols()) * lmax;
  Eigen::VectorXd invroot(eig.eigenvalues().size());
  for (Index i = 0; i < invroot.size(); ++i) {
    const double lam = eig.eigenvalues()(i);
    if (lam <= cut)
      throw Error(errc::hypothesis_violated,
                  "frame operator is singular on range(K)");
    invroot(i) = 1.0 / std::sqrt(lam);
  }
  const Mat s_invroot =
      eig.eigenvectors() * invroot.asDiagonal() * eig.eigenvectors().adjoint();

  CanonicalParseval out;
  out.projector = proj;
  out.frame = frame_from_synthesis(bk * s_invroot * (bk.adjoint() * ops.synthesis));
  return out;
}

SpectralReport trace_eigen_report(const KFrameInstance& inst,
                                  const Tolerance& tol) {
  require_valid(tol);
  if (!is_parseval_kframe(inst, tol))
    throw Error(errc::invalid_input, "instance is not a Parseval K-frame");

  const FrameOperators ops = operators_of(inst.frame);
  const Index n = inst.frame.dim;
  const double knorm_sq = std::pow(opnorm(inst.k), 2);
  const Mat kkstar = inst.k * inst.k.adjoint();

  SpectralReport rep;
  Eigen::SelfAdjointEigenSolver<Mat> eig(ops.frame_op);
  rep.eigenvalues.assign(eig.eigenvalues().data(),
                         eig.eigenvalues().data() + n);
  std::reverse(rep.eigenvalues.begin(), rep.eigenvalues.end());

  rep.sum_norms_sq = 0.0;
  for (const Vec& v : inst.frame.vectors) rep.sum_norms_sq += v.squaredNorm();
  rep.n_knorm_sq = static_cast<double>(n) * knorm_sq;
  rep.trace_kkstar = kkstar.trace().real();

  rep.eigen_claim_holds = true;
  for (double lam : rep.eigenvalues)
    if (std::abs(lam - knorm_sq) > tol.eq_abs) rep.eigen_claim_holds = false;
  rep.regime_scalar_kkstar =
      fnorm(kkstar - knorm_sq * identity(n)) <=
      tol.eq_abs * std::sqrt(static_cast<double>(n));
  return rep;
}

KFrameInstance extend_to_knorm(const Mat& k, const FrameSystem& partial,
                               bool tight_mode, const Tolerance& tol) {
  require_valid(tol);
  require_finite(k, "k");
  if (k.rows() != k.cols()) throw Error(errc::invalid_input, "k must be square");
  validate(partial);
  if (partial.dim != k.rows())
    throw Error(errc::invalid_input, "k and partial frame dimensions differ");

  const double knorm = opnorm(k);
  if (knorm <= 0.0)
    throw Error(errc::invalid_input, "k must be nonzero");
  for (const Vec& v : partial.vectors)
    if (std::abs(v.norm() - knorm) > tol.eq_abs)
      throw Error(errc::invalid_input, "input vectors must have norm ||K||");

  Mat bk;  // tight mode works inside range(K)
  if (tight_mode) {
    const double cond = knorm * opnorm(pinv(k, tol));
    if (std::abs(cond - 1.0) > tol.eq_rel)
      throw Error(errc::hypothesis_violated,
                  "||K|| ||pinv(K)|| differs from 1");
    bk = range_basis(k, tol);
    const Mat proj = bk * bk.adjoint();
    for (const Vec& v : partial.vectors)
      if ((v - proj * v).norm() > tol.eq_abs * std::max(1.0, v.norm()))
        throw Error(errc::hypothesis_violated,
                    "input vector lies outside range(K)");
  }

  KFrameInstance out;
  out.k = k;
  out.frame.dim = partial.dim;
  for (const Vec& v : partial.vectors) {
    if (tight_mode) {
      const Vec coeff = bk.adjoint() * (v / knorm);
      const std::vector<Vec> onb = complete_to_onb({coeff}, bk.cols(), tol);
      out.frame.vectors.push_back(v);  // keep the input bit-for-bit
      for (std::size_t i = 1; i < onb.size(); ++i)
        out.frame.vectors.push_back(knorm * (bk * onb[i]));
    } else {
      const Vec unit = v / knorm;
      const std::vector<Vec> onb = complete_to_onb({unit}, partial.dim, tol);
      out.frame.vectors.push_back(v);
      for (std::size_t i = 1; i < onb.size(); ++i)
        out.frame.vectors.push_back(knorm * onb[i]);
    }
  }
  return out;
}

DilationResult kframe_dilation(const KFrameInstance& inst,
                               const Tolerance& tol) {
  require_valid(tol);
  if (!is_parseval_kframe(inst, tol))
    throw Error(errc::invalid_input, "instance is not a Parseval K-frame");
  const FrameOperators ops = operators_of(inst.frame);

  // Parseval K-frames satisfy range(T) == range(K); verify both inclusions.
  const Mat pt = orth_projector(ops.synthesis, tol);
  const Mat pk = orth_projector(inst.k, tol);
  if (fnorm(inst.k - pt * inst.k) > tol.eq_abs * std::max(1.0, fnorm(inst.k)) ||
      fnorm(ops.synthesis - pk * ops.synthesis) >
          tol.eq_abs * std::max(1.0, fnorm(ops.synthesis)))
    throw Error(errc::hypothesis_violated, "range(T) differs from range(K)");

  // g_j = pinv(K) f_j is a Parseval frame for range(K*); dilate it there.
  const Mat kdag = pinv(inst.k, tol);
  const Mat b = range_basis(inst.k.adjoint(), tol);  // ONB of range(K*)
  FrameSystem g = frame_from_synthesis(b.adjoint() * (kdag * ops.synthesis));
  const DilationResult inner = naimark_dilate(g, tol);

  DilationResult out;
  out.big_dim = inner.big_dim;
  out.basis = inner.basis;
  out.projector = inner.projector;
  out.embed = inner.embed * b.adjoint();  // m x n, isometric on range(K*)
  return out;
}

namespace {

Mat kp_product(const Mat& k, const Mat& p, const Tolerance& tol) {
  require_finite(k, "k");
  require_finite(p, "p");
  if (k.rows() != k.cols() || p.rows() != p.cols() || k.rows() != p.rows())
    throw Error(errc::invalid_input, "k and p must be square of equal size");
  const Mat expected = orth_projector(k.adjoint(), tol);
  if (fnorm(p - expected) >
      tol.eq_abs * std::sqrt(static_cast<double>(p.rows())) * 10.0)
    throw Error(errc::invalid_input,
                "p is not the orthogonal projector onto range(K*)");
  return k * p;
}

}  // namespace

Subspace frame_to_subspace(const Mat& k, const Mat& p, const FrameSystem& f,
                           const Tolerance& tol) {
  require_valid(tol);
  validate(f);
  const Mat a = kp_product(k, p, tol);
  const Index n = a.rows();
  if (f.dim != n)
    throw Error(errc::invalid_input, "frame dimension differs from operator");
  if (f.count() != n)
    throw Error(errc::invalid_input,
                "corresponding frames carry exactly dim-many vectors");

  const Mat fsyn = synthesis(f);
  const Svd sa = svd(a);
  const Index rank = numerical_rank(a, tol);
  Mat e;  // unitary with columns e'_j

  // First try the literal representation f_j = A e'_j: least squares on
  // range(P) plus completion of the solution set to an orthonormal basis.
  const Mat x = pinv(a, tol) * fsyn;
  const bool in_range =
      fnorm(a * x - fsyn) <= tol.eq_abs * std::max(1.0, fnorm(fsyn));
  bool done = false;
  if (in_range) {
    const Mat gx = x.adjoint() * x;
    Eigen::SelfAdjointEigenSolver<Mat> eig(identity(n) - gx);
    const Index free_dim = n - rank;
    bool feasible = eig.eigenvalues().minCoeff() > -tol.eq_abs * 10.0;
    for (Index i = 0; i < n - free_dim; ++i)  // ascending order
      if (eig.eigenvalues()(i) > tol.eq_abs * 10.0) feasible = false;
    if (feasible) {
      Mat c = Mat::Zero(free_dim, n);
      for (Index i = 0; i < free_dim; ++i) {
        const double lam = std::max(0.0, eig.eigenvalues()(n - 1 - i));
        c.row(i) = std::sqrt(lam) * eig.eigenvectors().col(n - 1 - i).adjoint();
      }
      const Mat nb = null_basis(a, tol);
      e = x + nb * c;
      done = fnorm(e.adjoint() * e - identity(n)) <=
             tol.eq_abs * std::sqrt(static_cast<double>(n)) * 10.0;
    }
  }

  // Fall back to matching up to a unitary on H: F and A must share
  // singular values, and the aligned basis is V_a V_f*.
  if (!done) {
    const Svd sf = svd(fsyn);
    const double smax = std::max(1.0, sa.s(0));
    if ((sf.s - sa.s).cwiseAbs().maxCoeff() > tol.eq_abs * smax * 10.0)
      throw Error(errc::not_representable,
                  "no orthonormal basis represents this family through KP");
    e = sa.v * sf.v.adjoint();
  }

  Subspace out;
  out.ambient_dim = n;
  out.basis = range_basis(e.adjoint() * a, tol);
  return out;
}

FrameSystem subspace_to_frame(const Mat& k, const Mat& p, const Subspace& w,
                              const Tolerance& tol) {
  require_valid(tol);
  const Mat a = kp_product(k, p, tol);
  if (w.ambient_dim != a.rows())
    throw Error(errc::invalid_input, "subspace ambient dimension differs");
  const Mat r = range_basis(a, tol);
  if (w.dim() != r.cols())
    throw Error(errc::invalid_input, "subspace dimension differs from rank(KP)");

  std::vector<Vec> from, to;
  for (Index j = 0; j < w.dim(); ++j) {
    from.push_back(w.basis.col(j));
    to.push_back(r.col(j));
  }
  const Mat u = unitary_bases_map(from, to, tol);  // u w == range(KP)
  return frame_from_synthesis(u.adjoint() * a * u);
}

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw Error(errc::invalid_input, "subspaces live in different spaces");
  if (a.dim() != b.dim())
    throw Error(errc::invalid_input, "subspaces have different dimensions");
  Eigen::JacobiSVD<Mat> dec(a.basis.adjoint() * b.basis);
  std::vector<double> angles;
  for (Index i = 0; i < dec.singularValues().size(); ++i) {
    const double c = std::min(1.0, dec.singularValues()(i));
    angles.push_back(std::acos(c));  // descending cosines, ascending angles
  }
  return angles;
}

}  // namespace kframe
