#include <doctest.h>

#include <cmath>

#include "kframe/kduals.hpp"
#include "kframe/kframes.hpp"
#include "test_support.hpp"

using namespace kframe;
using namespace kframe::testing;

namespace {

// Reference instance for the equal-norm dual construction: K = I on C^2,
// f = (1/sqrt(2)) {e1, e2, e1, e2}, null(T) = {(x, y, -x, -y)}.
struct ReferenceInstance {
  Mat k = identity(2);
  FrameSystem f;
  Mat u;  // hand-verified feasible partial isometry (2 x 4)

  ReferenceInstance() {
    const double s = 1.0 / std::sqrt(2.0);
    f.dim = 2;
    f.vectors = {s * Vec::Unit(2, 0), s * Vec::Unit(2, 1),
                 s * Vec::Unit(2, 0), s * Vec::Unit(2, 1)};
    Mat b = mat2(0, 1, -1, 0);
    Mat c(4, 2);  // ONB of null(T)
    c << s, 0, 0, s, -s, 0, 0, -s;
    u = b * c.adjoint();
  }
};

// Hand-verified one-dimensional error-identity instance: K = [2],
// T = [2, 0], Theta = [1, sqrt(3)], so T Theta* = 2, TT* = 4 = KK*,
// Theta Theta* = 4 = K*K and the identity reads 12|x|^2 = 16|x|^2 - 4|x|^2.
struct HandErrorInstance {
  Mat k;
  FrameSystem f, g;

  HandErrorInstance() {
    k = Mat(1, 1);
    k << 2.0;
    f.dim = 1;
    Vec f1(1), f2(1), g1(1), g2(1);
    f1 << 2.0;
    f2 << 0.0;
    g1 << 1.0;
    g2 << std::sqrt(3.0);
    f.vectors = {f1, f2};
    g.vectors = {g1, g2};
    g.dim = 1;
  }
};

}  // namespace

TEST_CASE("is_kdual") {
  SUBCASE("orthonormal basis is self-dual for K = I") {
    const FrameSystem f = standard_basis_frame(2);
    const DualPair p = is_kdual(identity(2), f, f);
    CHECK(p.accepted);
    CHECK(p.residual < 1e-14);
  }
  SUBCASE("Parseval frames are self-dual") {
    const FrameSystem f = mercedes_benz();
    const DualPair p = is_kdual(identity(2), f, f);
    CHECK(p.accepted);
    CHECK(p.recon_residual <= 1e-10);
    CHECK(p.kstar_lower > 0.0);
  }
  SUBCASE("scaling the dual breaks duality") {
    const FrameSystem f = mercedes_benz();
    FrameSystem g = f;
    for (Vec& v : g.vectors) v *= 2.0;
    const DualPair p = is_kdual(identity(2), f, g);
    CHECK_FALSE(p.accepted);
    CHECK(p.residual == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    // Rejection agrees with the reconstruction characterization: K x and
    // sum_j <x, g_j> f_j differ by ||x|| here.
    Rng rng(8);
    const Mat t = synthesis(f);
    const Mat theta = synthesis(g);
    const Vec x = random_unit_vector(rng, 2);
    CHECK((identity(2) * x - t * (theta.adjoint() * x)).norm() >
          1e-8 * x.norm());
  }
  SUBCASE("count mismatch is invalid input") {
    FrameSystem g;
    g.dim = 2;
    g.vectors = {Vec::Unit(2, 0)};
    CHECK_THROWS_AS(is_kdual(identity(2), mercedes_benz(), g), Error);
  }
  SUBCASE("acceptance coincides with the reconstruction identity") {
    Rng rng(606);
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 2 + static_cast<Index>(rng() % 4);
      const Index m = n + static_cast<Index>(rng() % 4);
      const Mat k = varied_operator(rng, n, trial);
      const FrameSystem f = random_spanning_frame(rng, n, m);
      const Mat z = gaussian_matrix(rng, n, m);
      const FrameSystem g = kdual_family(k, f, z);
      const DualPair p = is_kdual(k, f, g);
      REQUIRE(p.accepted);

      const Mat t = synthesis(f);
      const Mat theta = synthesis(g);
      const double knorm = opnorm(k);
      for (int s = 0; s < 20; ++s) {
        const Vec x = random_unit_vector(rng, n);
        const Vec err = k * x - t * (theta.adjoint() * x);
        CHECK(err.norm() <= 1e-8 * knorm * x.norm());
      }
    }
  }
}

TEST_CASE("kdual_family") {
  SUBCASE("canonical dual of an orthonormal basis is itself") {
    const FrameSystem f = standard_basis_frame(2);
    const FrameSystem g = kdual_family(identity(2), f, Mat::Zero(2, 2));
    CHECK(fnorm(synthesis(g) - identity(2)) < 1e-13);
  }
  SUBCASE("canonical dual of a Parseval frame is itself") {
    const FrameSystem f = mercedes_benz();
    const FrameSystem g = kdual_family(identity(2), f, Mat::Zero(2, 3));
    CHECK(fnorm(synthesis(g) - synthesis(f)) < 1e-12);
  }
  SUBCASE("range inclusion failure means no dual") {
    FrameSystem f;
    f.dim = 2;
    f.vectors = {Vec::Unit(2, 1)};
    try {
      kdual_family(diag2(1, 0), f, Mat::Zero(2, 1));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::no_dual_exists);
    }
  }
  SUBCASE("two parameters give two distinct duals, both dual to f") {
    Rng rng(99);
    const FrameSystem f = mercedes_benz();
    const Mat z1 = gaussian_matrix(rng, 2, 3);
    const Mat z2 = gaussian_matrix(rng, 2, 3);
    const FrameSystem g1 = kdual_family(identity(2), f, z1);
    const FrameSystem g2 = kdual_family(identity(2), f, z2);
    CHECK(is_kdual(identity(2), f, g1).accepted);
    CHECK(is_kdual(identity(2), f, g2).accepted);
    CHECK(fnorm(synthesis(g1) - synthesis(g2)) > 1e-6);
  }
  SUBCASE("duality residual and the Parseval-V identity over random z") {
    Rng rng(4004);
    for (int trial = 0; trial < 50; ++trial) {
      const Index n = 2 + static_cast<Index>(rng() % 4);
      const Index m = n + static_cast<Index>(rng() % 4);
      const Mat k = varied_operator(rng, n, trial);
      const FrameSystem f = random_spanning_frame(rng, n, m);
      const Mat z = gaussian_matrix(rng, n, m);
      const FrameSystem g = kdual_family(k, f, z);
      const Mat t = synthesis(f);
      const Mat v = synthesis(g);
      CHECK(fnorm(t * v.adjoint() - k) <= 1e-9 * std::max(1.0, fnorm(k)));
      for (int s = 0; s < 20; ++s) {
        const Vec x = random_unit_vector(rng, n);
        double total = 0.0;
        for (const Vec& gj : g.vectors) total += std::norm(inner(x, gj));
        CHECK(std::abs(total - (v.adjoint() * x).squaredNorm()) <= 1e-9);
      }
    }
  }
}

TEST_CASE("error_identity_report") {
  const HandErrorInstance hand;

  SUBCASE("K = I forces Theta = T and a vanishing identity") {
    const FrameSystem f = mercedes_benz();
    const ErrorIdentityReport rep = error_identity_report(identity(2), f, f);
    CHECK(rep.identity_ok);
    CHECK(rep.max_identity_residual <= 1e-12);
  }
  SUBCASE("hand-verified instance matches 12 = 16 - 4") {
    const ErrorIdentityReport rep =
        error_identity_report(hand.k, hand.f, hand.g, Tolerance{}, 100);
    CHECK(rep.identity_ok);
    CHECK(rep.max_identity_residual <= 1e-10);
    CHECK(rep.op_distance_sq == doctest::Approx(12.0).epsilon(1e-10));
    CHECK(rep.upper_bound == doctest::Approx(16.0).epsilon(1e-12));
    // 1 - ||K||^2 = -3, so the lower bound is vacuous here (and in fact the
    // preconditions force ||K|| >= 1 for every valid instance).
    CHECK(rep.lower_vacuous);
    CHECK(rep.within_bounds);
  }
  SUBCASE("g = f is rejected as a hypothesis violation") {
    // Here Theta Theta* = 4 = K*K actually holds; the failing precondition
    // is the duality T Theta* = K itself (4 != 2), and the rejection names it.
    try {
      error_identity_report(hand.k, hand.f, hand.f);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::hypothesis_violated);
      CHECK(std::string(e.what()).find("K-dual") != std::string::npos);
    }
  }
  SUBCASE("a genuine Parseval K*-frame failure is named") {
    FrameSystem g = hand.g;
    g.vectors[1] *= 2.0;  // Theta Theta* = 13 != 4, duality also breaks
    try {
      error_identity_report(hand.k, hand.f, g);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::hypothesis_violated);
      CHECK(std::string(e.what()).find("K*-frame") != std::string::npos);
    }
  }
  SUBCASE("non-Parseval f is rejected with its own message") {
    FrameSystem f;
    f.dim = 1;
    Vec v1(1);
    v1 << 1.0;
    f.vectors = {v1, v1};
    try {
      error_identity_report(hand.k, f, hand.g);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::hypothesis_violated);
      CHECK(std::string(e.what()).find("Parseval K-frame") != std::string::npos);
    }
  }
}

TEST_CASE("equal_norm_dual on the reference instance") {
  const ReferenceInstance ref;

  SUBCASE("supplied u reproduces the closed-form norms") {
    for (double a : {0.5, 1.0, 2.0}) {
      const EqualNormDual r = equal_norm_dual(ref.k, ref.f, a, ref.u);
      CHECK(r.report.max_norm_spread <= 1e-9);
      CHECK(r.report.duality_residual <= 1e-9);
      CHECK(r.report.formula_applies);
      const double expected = 0.5 + 0.5 * a * a;
      CHECK(r.report.formula_value == doctest::Approx(expected).epsilon(1e-12));
      for (double nj : r.report.norms)
        CHECK(nj * nj == doctest::Approx(expected).epsilon(1e-9));
    }
  }
  SUBCASE("a = 1 gives unit-norm dual vectors") {
    const EqualNormDual r = equal_norm_dual(ref.k, ref.f, 1.0, ref.u);
    for (double nj : r.report.norms) CHECK(nj == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.report.duality_residual <= 1e-10);
  }
  SUBCASE("a = 0 is invalid input") {
    CHECK_THROWS_AS(equal_norm_dual(ref.k, ref.f, 0.0, ref.u), Error);
  }
  SUBCASE("searched u meets the contract over 20 (a, seed) pairs") {
    const Mat t = synthesis(ref.f);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Mat prev;
      for (double a : {0.5, 1.0}) {
        const EqualNormDual r =
            equal_norm_dual(ref.k, ref.f, a, std::nullopt, Tolerance{}, seed);
        CHECK(r.report.max_norm_spread <= 1e-9);
        CHECK(r.report.duality_residual <= 1e-9);
        CHECK(fnorm(r.u * t.adjoint()) <= 1e-9);
        for (Index j = 0; j < 4; ++j)
          CHECK(std::abs(r.u.col(j).dot(ref.f.vectors[static_cast<std::size_t>(j)])) <= 1e-9);
        // Same seed, distinct a: duals separated proportionally to |a1 - a2|.
        if (prev.size() > 0)
          CHECK(fnorm(synthesis(r.dual) - prev) >= 0.5 * 0.5);
        prev = synthesis(r.dual);
      }
    }
  }
  SUBCASE("duals for distinct a differ proportionally") {
    Rng rng(2468);
    for (int pair = 0; pair < 20; ++pair) {
      const double a1 = 0.25 + 0.1 * pair;
      const double a2 = a1 + 0.5;
      const EqualNormDual r1 = equal_norm_dual(ref.k, ref.f, a1, ref.u);
      const EqualNormDual r2 = equal_norm_dual(ref.k, ref.f, a2, ref.u);
      CHECK(r1.report.max_norm_spread <= 1e-9);
      CHECK(r2.report.max_norm_spread <= 1e-9);
      const double dist = fnorm(synthesis(r1.dual) - synthesis(r2.dual));
      CHECK(dist >= std::abs(a1 - a2) * 1e-3);
    }
  }
  SUBCASE("every constructed dual is a K*-frame") {
    for (double a : {0.5, 1.0, 2.0}) {
      const EqualNormDual r = equal_norm_dual(ref.k, ref.f, a, ref.u);
      const KFrameInstance dual_inst{ref.k.adjoint(), r.dual};
      CHECK(kframe_bounds(dual_inst).lower > 0.0);
    }
  }
}

TEST_CASE("equal_norm_dual hypothesis failures") {
  const ReferenceInstance ref;

  SUBCASE("scalar instance is infeasible") {
    Mat k(1, 1);
    k << 1.0;
    FrameSystem f;
    f.dim = 1;
    Vec v(1);
    v << 1.0 / std::sqrt(2.0);
    f.vectors = {v, v};
    try {
      equal_norm_dual(k, f, 1.0, std::nullopt, Tolerance{}, 5);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::isometry_search_failed);
    }
  }
  SUBCASE("non-injective K") {
    FrameSystem f;
    f.dim = 2;
    f.vectors = {Vec::Unit(2, 0)};
    try {
      equal_norm_dual(diag2(1, 0), f, 1.0, std::nullopt, Tolerance{}, 5);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::not_injective);
    }
  }
  SUBCASE("non-Parseval frame") {
    FrameSystem f;
    f.dim = 2;
    f.vectors = {Vec::Unit(2, 0), Vec::Unit(2, 0), Vec::Unit(2, 1)};
    try {
      equal_norm_dual(identity(2), f, 1.0, std::nullopt, Tolerance{}, 5);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::hypothesis_violated);
    }
  }
  SUBCASE("supplied u failing orthogonality is named") {
    Mat bad = ref.u;
    bad.col(0).swap(bad.col(1));  // breaks <pinv(K) f_j, u delta_j> = 0
    try {
      equal_norm_dual(ref.k, ref.f, 1.0, bad);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::hypothesis_violated);
    }
  }
}
