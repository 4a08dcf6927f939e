#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

// Dense complex operator algebra shared by every module. All spaces are
// finite-dimensional; an operator is just a matrix, a vector a column.
//
// Inner product convention: <x,y> is linear in x and conjugates y, so that
// the analysis operator is literally the matrix adjoint of the synthesis
// operator. Note Eigen's a.dot(b) conjugates *a*, i.e. <x,y> == y.dot(x).

namespace kframe {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// <x,y>, linear in the first argument.
inline Complex inner(const Vec& x, const Vec& y) { return y.dot(x); }

enum class errc {
  invalid_input,
  not_injective,
  not_a_kframe,
  hypothesis_violated,
  no_dual_exists,
  not_representable,
  isometry_search_failed,
};

inline const char* to_string(errc e) {
  switch (e) {
    case errc::invalid_input: return "invalid-input";
    case errc::not_injective: return "not-injective";
    case errc::not_a_kframe: return "not-a-k-frame";
    case errc::hypothesis_violated: return "hypothesis-violated";
    case errc::no_dual_exists: return "no-dual-exists";
    case errc::not_representable: return "not-representable";
    case errc::isometry_search_failed: return "isometry-search-failed";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  errc kind() const { return kind_; }

 private:
  errc kind_;
};

/// Numerical tolerances threaded through every operation.
///
/// rank_rel is a per-unit-dimension cutoff: singular values below
/// rank_rel * max(rows, cols) * sigma_max count as zero. eq_abs/eq_rel
/// are the absolute/relative comparison tolerances for residual tests.
struct Tolerance {
  double rank_rel = 1e-12;
  double eq_abs = 1e-9;
  double eq_rel = 1e-8;
};

inline void require_valid(const Tolerance& tol) {
  if (!(tol.rank_rel > 0.0) || !(tol.eq_abs > 0.0) || !(tol.eq_rel > 0.0))
    throw Error(errc::invalid_input, "tolerances must be strictly positive");
}

inline bool all_finite(const Mat& a) { return a.allFinite(); }

inline void require_finite(const Mat& a, const char* name) {
  if (!all_finite(a))
    throw Error(errc::invalid_input,
                std::string(name) + " has non-finite entries");
}

inline double fnorm(const Mat& a) { return a.norm(); }

/// Operator 2-norm (largest singular value).
double opnorm(const Mat& a);

inline Mat identity(Index n) { return Mat::Identity(n, n); }

}  // namespace kframe
