#include "kframe/kduals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kframe/kframes.hpp"
#include "kframe/opcore.hpp"
#include "kframe/rand.hpp"

namespace kframe {

namespace {

// Fixed stream for the internal verification samples of operations whose
// signatures carry no seed; keeps repeated calls byte-reproducible.
constexpr std::uint64_t kVerifySeed = 0x9e3779b97f4a7c15ull;

void require_square_matching(const Mat& k, const FrameSystem& f) {
  require_finite(k, "k");
  if (k.rows() != k.cols()) throw Error(errc::invalid_input, "k must be square");
  validate(f);
  if (f.dim != k.rows())
    throw Error(errc::invalid_input, "k and frame dimensions differ");
}

}  // namespace

DualPair is_kdual(const Mat& k, const FrameSystem& f, const FrameSystem& g,
                  const Tolerance& tol) {
  require_valid(tol);
  require_square_matching(k, f);
  validate(g);
  if (f.count() != g.count())
    throw Error(errc::invalid_input, "frame and dual have different counts");
  if (g.dim != f.dim)
    throw Error(errc::invalid_input, "frame and dual have different dims");

  DualPair out;
  out.k = k;
  out.frame = f;
  out.dual = g;

  const Mat t = synthesis(f);
  const Mat theta = synthesis(g);
  out.residual = fnorm(t * theta.adjoint() - k);
  out.accepted = out.residual <= tol.eq_abs * std::max(1.0, opnorm(k));
  if (!out.accepted) return out;

  // Duality gives the reconstruction K x = sum_j <x, g_j> f_j; sample it.
  Rng rng(kVerifySeed);
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_unit_vector(rng, f.dim);
    const Vec err = k * x - t * (theta.adjoint() * x);
    out.recon_residual = std::max(out.recon_residual, err.norm());
  }

  KFrameInstance dual_inst{k.adjoint(), g};
  out.kstar_lower = kframe_bounds(dual_inst, tol).lower;
  return out;
}

FrameSystem kdual_family(const Mat& k, const FrameSystem& f, const Mat& z,
                         const Tolerance& tol) {
  require_valid(tol);
  require_square_matching(k, f);
  require_finite(z, "z");
  const Index m = f.count();
  if (z.rows() != f.dim || z.cols() != m)
    throw Error(errc::invalid_input, "z must be dim x count");

  const Mat t = synthesis(f);
  const Mat pt = orth_projector(t, tol);
  if (fnorm(k - pt * k) > tol.eq_abs * std::max(1.0, fnorm(k)))
    throw Error(errc::no_dual_exists,
                "range(K) is not contained in range(T)");

  const Mat tdag = pinv(t, tol);
  const Mat vstar = tdag * k + (identity(m) - tdag * t) * z.adjoint();
  return frame_from_synthesis(vstar.adjoint());
}

ErrorIdentityReport error_identity_report(const Mat& k, const FrameSystem& f,
                                          const FrameSystem& g,
                                          const Tolerance& tol, int samples) {
  require_valid(tol);
  require_square_matching(k, f);
  validate(g);
  if (samples < 1) throw Error(errc::invalid_input, "samples must be positive");
  if (f.count() != g.count() || g.dim != f.dim)
    throw Error(errc::invalid_input, "frame and dual shapes differ");

  const Mat t = synthesis(f);
  const Mat theta = synthesis(g);
  const Index n = f.dim;
  const Mat kkstar = k * k.adjoint();
  const double knorm = opnorm(k);
  const double scale = std::max(1.0, knorm * knorm);

  if (fnorm(t * t.adjoint() - kkstar) >
      tol.eq_abs * scale * std::sqrt(static_cast<double>(n)))
    throw Error(errc::hypothesis_violated, "frame is not a Parseval K-frame");
  if (fnorm(theta * theta.adjoint() - k.adjoint() * k) >
      tol.eq_abs * scale * std::sqrt(static_cast<double>(n)))
    throw Error(errc::hypothesis_violated,
                "dual is not a Parseval K*-frame");
  if (fnorm(t * theta.adjoint() - k) > tol.eq_abs * std::max(1.0, knorm))
    throw Error(errc::hypothesis_violated, "family is not a K-dual");

  ErrorIdentityReport rep;
  const Mat diff = t.adjoint() - theta.adjoint() * k.adjoint();
  Rng rng(kVerifySeed);
  for (int i = 0; i < samples; ++i) {
    const Vec x = random_unit_vector(rng, n);
    const double lhs = (diff * x).squaredNorm();
    const double rhs = (kkstar * x).squaredNorm() - (k.adjoint() * x).squaredNorm();
    rep.max_identity_residual = std::max(rep.max_identity_residual,
                                         std::abs(lhs - rhs));
  }
  rep.identity_ok = rep.max_identity_residual <=
                    tol.eq_abs * std::max(1.0, std::pow(knorm, 4));

  rep.op_distance_sq = std::pow(opnorm(t - k * theta), 2);
  rep.upper_bound = std::pow(knorm, 4);
  // ||inv(KK*)|| on range(K) is 1 over the smallest nonzero eigenvalue.
  Eigen::SelfAdjointEigenSolver<Mat> eig(kkstar);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double cut = tol.rank_rel * static_cast<double>(n) * std::max(lmax, 0.0);
  double lmin_pos = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double lam = eig.eigenvalues()(i);
    if (lam > cut) {
      lmin_pos = lam;
      break;  // ascending order
    }
  }
  rep.lower_bound = lmin_pos * lmin_pos * (1.0 - knorm * knorm);
  rep.lower_vacuous = rep.lower_bound <= 0.0;
  const double lo = rep.lower_vacuous ? 0.0 : rep.lower_bound;
  rep.within_bounds = rep.op_distance_sq >= lo - tol.eq_abs &&
                      rep.op_distance_sq <= rep.upper_bound + tol.eq_abs;
  return rep;
}

namespace {

// Projects b onto the affine set tr(m_j^H b) == 0 for all j, then back to
// the isometries; repeats until both residuals fall under the threshold.
bool refine_isometry(Mat& b, const std::vector<Mat>& constraints,
                     double threshold, int max_iters) {
  const Index count = static_cast<Index>(constraints.size());
  Mat gram(count, count);
  for (Index i = 0; i < count; ++i)
    for (Index j = 0; j < count; ++j)
      gram(i, j) = (constraints[static_cast<std::size_t>(i)].adjoint() *
                    constraints[static_cast<std::size_t>(j)])
                       .trace();
  const Mat gram_pinv = pinv(gram);

  for (int it = 0; it < max_iters; ++it) {
    Vec vals(count);
    for (Index j = 0; j < count; ++j)
      vals(j) = (constraints[static_cast<std::size_t>(j)].adjoint() * b).trace();
    const double cons_resid = vals.cwiseAbs().maxCoeff();
    const double iso_resid = fnorm(b.adjoint() * b - identity(b.cols()));
    if (cons_resid <= threshold && iso_resid <= threshold) return true;

    const Vec alpha = gram_pinv * vals;
    for (Index j = 0; j < count; ++j)
      b -= alpha(j) * constraints[static_cast<std::size_t>(j)];

    // Nearest isometry via the polar factor.
    Eigen::JacobiSVD<Mat> dec(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    b = dec.matrixU() * dec.matrixV().adjoint();
  }
  Vec vals(count);
  for (Index j = 0; j < count; ++j)
    vals(j) = (constraints[static_cast<std::size_t>(j)].adjoint() * b).trace();
  return vals.cwiseAbs().maxCoeff() <= threshold &&
         fnorm(b.adjoint() * b - identity(b.cols())) <= threshold;
}

}  // namespace

EqualNormDual equal_norm_dual(const Mat& k, const FrameSystem& f, double a,
                              const std::optional<Mat>& u,
                              const Tolerance& tol, std::uint64_t seed) {
  require_valid(tol);
  require_square_matching(k, f);
  if (a == 0.0) throw Error(errc::invalid_input, "a must be nonzero");

  const Index n = f.dim;
  const Index m = f.count();
  const Mat t = synthesis(f);

  KFrameInstance inst{k, f};
  if (!is_parseval_kframe(inst, tol))
    throw Error(errc::hypothesis_violated, "frame is not a Parseval K-frame");
  const Mat kdag = left_inverse(k, tol);  // throws not-injective if needed
  const Mat h = kdag * t;                 // columns pinv(K) f_j

  const Mat null_t = null_basis(t, tol);  // ONB of null(T) in C^m
  const Index d = null_t.cols();
  const Mat p_null = null_t * null_t.adjoint();

  Mat uu;
  if (u.has_value()) {
    uu = *u;
    require_finite(uu, "u");
    if (uu.rows() != n || uu.cols() != m)
      throw Error(errc::hypothesis_violated, "u must be dim x count");
    if (fnorm(uu * t.adjoint()) > tol.eq_abs * std::max(1.0, fnorm(t)))
      throw Error(errc::hypothesis_violated, "u does not annihilate range(T*)");
    if (fnorm(uu.adjoint() * uu - p_null) > tol.eq_abs * std::sqrt(double(m)))
      throw Error(errc::hypothesis_violated,
                  "u is not a partial isometry with initial space null(T)");
    for (Index j = 0; j < m; ++j)
      if (std::abs(uu.col(j).dot(h.col(j))) > tol.eq_abs)
        throw Error(errc::hypothesis_violated,
                    "<pinv(K) f_j, u delta_j> does not vanish");
  } else if (d == 0) {
    uu = Mat::Zero(n, m);
  } else {
    if (d > n)
      throw Error(errc::isometry_search_failed,
                  "null(T) is larger than the target space");
    // u = B C* with C an ONB of null(T); search for an isometry B whose
    // columns meet the per-vector orthogonality constraints.
    std::vector<Mat> constraints;
    constraints.reserve(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) {
      const Vec cj = null_t.adjoint() * Vec::Unit(m, j);
      constraints.push_back(h.col(j) * cj.adjoint());  // tr(M^H B) == <h_j, B c_j>*
    }
    Rng rng(seed);
    bool found = false;
    for (int restart = 0; restart < 8 && !found; ++restart) {
      Mat b0 = gaussian_matrix(rng, n, d);
      Eigen::JacobiSVD<Mat> dec(b0, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Mat b = dec.matrixU() * dec.matrixV().adjoint();
      if (refine_isometry(b, constraints, tol.eq_abs, 500)) {
        uu = b * null_t.adjoint();
        found = true;
      }
    }
    if (!found)
      throw Error(errc::isometry_search_failed,
                  "no isometry satisfies the orthogonality constraints");
  }

  EqualNormDual out;
  out.u = uu;
  const Mat theta = kdag * t + a * uu;
  out.dual = frame_from_synthesis(theta);

  EqualNormDualReport& rep = out.report;
  rep.a = a;
  rep.duality_residual = fnorm(t * theta.adjoint() - k);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index j = 0; j < m; ++j) {
    const double nj = theta.col(j).norm();
    rep.norms.push_back(nj);
    lo = std::min(lo, nj);
    hi = std::max(hi, nj);
  }
  rep.max_norm_spread = hi - lo;

  const double knorm_sq = std::pow(opnorm(k), 2);
  const double ratio = static_cast<double>(n) / static_cast<double>(m);
  rep.formula_value = a * a + (1.0 - 2.0 * a * a) * ratio * knorm_sq +
                      a * a * ratio * knorm_sq * knorm_sq;
  const Mat pk = orth_projector(k, tol);
  rep.formula_applies =
      is_equal_norm(f, tol).equal_norm &&
      fnorm(k * k.adjoint() - pk) <= tol.eq_abs * std::sqrt(double(n));
  return out;
}

}  // namespace kframe
