#include "kframe/opcore.hpp"

#include <algorithm>
#include <cmath>

namespace kframe {

double opnorm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> dec(a);
  return dec.singularValues()(0);
}

void fix_column_phases(Mat& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    const double colmax = a.col(j).cwiseAbs().maxCoeff();
    if (colmax <= 0.0) continue;
    for (Index i = 0; i < a.rows(); ++i) {
      const double m = std::abs(a(i, j));
      if (m > 1e-14 * colmax) {
        a.col(j) *= std::conj(a(i, j)) / m;
        break;
      }
    }
  }
}

Svd svd(const Mat& a) {
  Eigen::JacobiSVD<Mat> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  // Phase-normalize u and absorb the same phases into v so that
  // a == u * diag(s) * v.adjoint() still holds exactly.
  const Index r = std::min(a.rows(), a.cols());
  for (Index j = 0; j < out.u.cols(); ++j) {
    const double colmax = out.u.col(j).cwiseAbs().maxCoeff();
    if (colmax <= 0.0) continue;
    Complex phase(1.0, 0.0);
    for (Index i = 0; i < out.u.rows(); ++i) {
      const double m = std::abs(out.u(i, j));
      if (m > 1e-14 * colmax) {
        phase = std::conj(out.u(i, j)) / m;
        break;
      }
    }
    out.u.col(j) *= phase;
    if (j < r && j < out.v.cols()) out.v.col(j) *= phase;
  }
  // Kernel columns of v carry no u-phase; normalize them independently.
  if (out.v.cols() > r) {
    Mat tail = out.v.rightCols(out.v.cols() - r);
    fix_column_phases(tail);
    out.v.rightCols(out.v.cols() - r) = tail;
  }
  return out;
}

namespace {

double rank_cutoff(const Mat& a, const Eigen::VectorXd& s,
                   const Tolerance& tol) {
  if (s.size() == 0) return 0.0;
  const double dim = static_cast<double>(std::max(a.rows(), a.cols()));
  return tol.rank_rel * dim * s(0);
}

Index rank_from(const Mat& a, const Eigen::VectorXd& s, const Tolerance& tol) {
  const double cut = rank_cutoff(a, s, tol);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

}  // namespace

Index numerical_rank(const Mat& a, const Tolerance& tol) {
  require_finite(a, "matrix");
  const Svd dec = svd(a);
  return rank_from(a, dec.s, tol);
}

Mat range_basis(const Mat& a, const Tolerance& tol) {
  require_finite(a, "matrix");
  const Svd dec = svd(a);
  return dec.u.leftCols(rank_from(a, dec.s, tol));
}

Mat null_basis(const Mat& a, const Tolerance& tol) {
  require_finite(a, "matrix");
  const Svd dec = svd(a);
  return dec.v.rightCols(a.cols() - rank_from(a, dec.s, tol));
}

Mat pinv(const Mat& a, const Tolerance& tol) {
  require_valid(tol);
  require_finite(a, "matrix");
  const Svd dec = svd(a);
  const Index r = rank_from(a, dec.s, tol);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(dec.s.size());
  for (Index i = 0; i < r; ++i) inv(i) = 1.0 / dec.s(i);
  return dec.v.leftCols(dec.s.size()) * inv.asDiagonal() *
         dec.u.leftCols(dec.s.size()).adjoint();
}

Mat orth_projector(const Mat& a, const Tolerance& tol) {
  require_valid(tol);
  require_finite(a, "matrix");
  const Mat b = range_basis(a, tol);
  return b * b.adjoint();
}

DouglasFactorization douglas_factor(const Mat& l1, const Mat& l2,
                                    const Tolerance& tol) {
  require_valid(tol);
  require_finite(l1, "l1");
  require_finite(l2, "l2");
  if (l1.rows() != l2.rows())
    throw Error(errc::invalid_input, "l1 and l2 must share the row space");

  DouglasFactorization out;
  const Mat p2 = orth_projector(l2, tol);
  const double resid = fnorm(l1 - p2 * l1);
  out.inclusion_ok = resid <= tol.eq_abs * std::max(1.0, fnorm(l1));
  if (!out.inclusion_ok) {
    out.factor_u = Mat::Zero(l2.cols(), l1.cols());
    return out;
  }
  out.factor_u = pinv(l2, tol) * l1;
  out.norm_sq_u = std::pow(opnorm(out.factor_u), 2);
  return out;
}

std::vector<Vec> complete_to_onb(const std::vector<Vec>& vs, Index ambient_dim,
                                 const Tolerance& tol) {
  require_valid(tol);
  if (ambient_dim < 1)
    throw Error(errc::invalid_input, "ambient dimension must be positive");
  if (static_cast<Index>(vs.size()) > ambient_dim)
    throw Error(errc::invalid_input, "more vectors than the ambient dimension");

  Mat q(ambient_dim, vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j) {
    if (vs[j].size() != ambient_dim)
      throw Error(errc::invalid_input, "vector length differs from ambient");
    require_finite(vs[j], "basis vector");
    q.col(static_cast<Index>(j)) = vs[j];
  }
  if (!vs.empty()) {
    const Mat gram = q.adjoint() * q;
    const double dev = fnorm(gram - identity(q.cols()));
    if (dev > tol.eq_abs * std::max(1.0, std::sqrt(double(q.cols()))))
      throw Error(errc::invalid_input, "input vectors are not orthonormal");
  }

  std::vector<Vec> out = vs;
  const double discard = tol.rank_rel * static_cast<double>(ambient_dim);
  Mat cur = q;
  for (Index i = 0; i < ambient_dim && static_cast<Index>(out.size()) < ambient_dim; ++i) {
    Vec r = Vec::Zero(ambient_dim);
    r(i) = 1.0;
    // Re-orthogonalize twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      if (cur.cols() > 0) r -= cur * (cur.adjoint() * r);
    const double nr = r.norm();
    if (nr <= discard) continue;
    r /= nr;
    Mat col = r;
    fix_column_phases(col);
    out.push_back(col.col(0));
    cur.conservativeResize(ambient_dim, cur.cols() + 1);
    cur.col(cur.cols() - 1) = col.col(0);
  }
  if (static_cast<Index>(out.size()) != ambient_dim)
    throw Error(errc::invalid_input, "completion failed: input not orthonormal enough");
  return out;
}

Mat unitary_bases_map(const std::vector<Vec>& b1, const std::vector<Vec>& b2,
                      const Tolerance& tol) {
  require_valid(tol);
  if (b1.size() != b2.size())
    throw Error(errc::invalid_input, "basis lists must have equal cardinality");
  if (b1.empty())
    throw Error(errc::invalid_input, "basis lists must be nonempty");
  const Index n = b1.front().size();
  for (const Vec& v : b2)
    if (v.size() != n)
      throw Error(errc::invalid_input, "ambient dimensions differ");

  const std::vector<Vec> f1 = complete_to_onb(b1, n, tol);
  const std::vector<Vec> f2 = complete_to_onb(b2, n, tol);
  Mat u1(n, n), u2(n, n);
  for (Index j = 0; j < n; ++j) {
    u1.col(j) = f1[static_cast<std::size_t>(j)];
    u2.col(j) = f2[static_cast<std::size_t>(j)];
  }
  return u2 * u1.adjoint();
}

Mat left_inverse(const Mat& k, const Tolerance& tol) {
  require_valid(tol);
  require_finite(k, "k");
  if (numerical_rank(k, tol) != k.cols())
    throw Error(errc::not_injective, "operator has a nontrivial null space");
  return pinv(k, tol);
}

}  // namespace kframe
