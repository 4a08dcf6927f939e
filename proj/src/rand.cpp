#include "kframe/rand.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace kframe {

Mat gaussian_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      a(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return a;
}

Mat haar_unitary(Rng& rng, Index n) {
  const Mat g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

Vec random_unit_vector(Rng& rng, Index n) {
  Vec v = gaussian_matrix(rng, n, 1).col(0);
  const double nv = v.norm();
  if (nv == 0.0) {
    v = Vec::Zero(n);
    v(0) = 1.0;
    return v;
  }
  return v / nv;
}

Mat operator_from_spec(const std::string& spec, Index n, Rng& rng) {
  if (n < 1) throw Error(errc::invalid_input, "operator dimension must be positive");
  if (spec == "identity") return identity(n);
  if (spec == "random") return gaussian_matrix(rng, n, n) / std::sqrt(double(n));
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<double> vals;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        vals.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw Error(errc::invalid_input, "bad diag entry: " + item);
      }
    }
    if (static_cast<Index>(vals.size()) != n)
      throw Error(errc::invalid_input, "diag spec length differs from n");
    Mat d = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = vals[static_cast<std::size_t>(i)];
    return d;
  }
  if (spec.rfind("scaled-unitary:", 0) == 0) {
    double c = 0.0;
    try {
      c = std::stod(spec.substr(15));
    } catch (const std::exception&) {
      throw Error(errc::invalid_input, "bad scale in scaled-unitary spec");
    }
    return c * haar_unitary(rng, n);
  }
  if (spec.rfind("projection:", 0) == 0) {
    long r = 0;
    try {
      r = std::stol(spec.substr(11));
    } catch (const std::exception&) {
      throw Error(errc::invalid_input, "bad rank in projection spec");
    }
    if (r < 1 || r > n)
      throw Error(errc::invalid_input, "projection rank out of range");
    const Mat b = haar_unitary(rng, n).leftCols(r);
    return b * b.adjoint();
  }
  throw Error(errc::invalid_input, "unknown operator spec: " + spec);
}

}  // namespace kframe
