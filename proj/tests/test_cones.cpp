#include <cmath>

#include "blocktrace/cones.hpp"
#include "blocktrace/generators.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace blocktrace;

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix phase_pair(double t) {
  // diag(1 + it, 1 - it)
  return {{Complex{1.0, t}, Complex{0.0, 0.0}}, {Complex{0.0, 0.0}, Complex{1.0, -t}}};
}

}  // namespace

TEST_SUITE("cones") {

TEST_CASE("cartesian decomposition fixtures") {
  const ComplexMatrix h = rand_hermitian(4, 71);
  const auto [re_h, im_h] = cartesian_parts(h);
  CHECK(oracles::max_abs_diff(re_h, h) == 0.0);
  CHECK(frobenius_norm(im_h) == 0.0);

  const ComplexMatrix i_eye = ComplexMatrix::identity(3) * Complex{0.0, 1.0};
  const auto [re_i, im_i] = cartesian_parts(i_eye);
  CHECK(frobenius_norm(re_i) == 0.0);
  CHECK(oracles::max_abs_diff(im_i, ComplexMatrix::identity(3)) == 0.0);

  const ComplexMatrix pair = phase_pair(0.7);
  const auto [re_p, im_p] = cartesian_parts(pair);
  CHECK(oracles::max_abs_diff(re_p, ComplexMatrix::identity(2)) == 0.0);
  CHECK(im_p(0, 0) == Complex{0.7, 0.0});
  CHECK(im_p(1, 1) == Complex{-0.7, 0.0});
}

TEST_CASE("cartesian parts reconstruct the input") {
  Rng rng(72);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix a = oracles::random_complex(rng, 5, 5);
    const auto [re, im] = cartesian_parts(a);
    const ComplexMatrix back = re + Complex{0.0, 1.0} * im;
    CHECK(frobenius_norm(back - a) <= 1e-14 * frobenius_norm(a));
    // both parts Hermitian
    CHECK(frobenius_norm(re - adjoint(re)) == 0.0);
    CHECK(frobenius_norm(im - adjoint(im)) == 0.0);
  }
  CHECK_THROWS_AS(cartesian_parts(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("is_psd basics") {
  const PsdVerdict eye = is_psd(ComplexMatrix::identity(3));
  CHECK(eye.is_psd);
  CHECK(eye.lambda_min == doctest::Approx(1.0));

  const ComplexMatrix indef = {{1.0, 0.0}, {0.0, -1.0}};
  CHECK_FALSE(is_psd(indef).is_psd);

  Rng rng(73);
  CHECK_THROWS_AS(is_psd(oracles::random_complex(rng, 3, 3)), DomainError);
}

TEST_CASE("is_psd accepts Gram matrices including rank-deficient ones") {
  Rng rng(74);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 5;
    const int rank = 1 + trial % d;
    const ComplexMatrix g = oracles::random_complex(rng, d, rank);
    const PsdVerdict v = is_psd(matmul(g, adjoint(g)));
    CHECK(v.is_psd);
    CHECK(v.lambda_min >= -v.tolerance_used);
  }
}

TEST_CASE("loewner comparisons") {
  const ComplexMatrix eye = ComplexMatrix::identity(2);
  CHECK(loewner_ge(eye * Complex{2.0, 0.0}, eye).is_psd);
  const ComplexMatrix d20 = {{2.0, 0.0}, {0.0, 0.0}};
  CHECK_FALSE(loewner_ge(eye, d20).is_psd);

  // fixture arithmetic: diag(10,10,10,10) >= diag(3,3,7,7)
  const BlockMatrix fix = oracles::diag_fixture();
  const ComplexMatrix lhs = ComplexMatrix::identity(4) * trace(fix.data);
  const ComplexMatrix rhs = embed_right(partial_trace_2(fix), 2).data;
  CHECK(loewner_ge(lhs, rhs).is_psd);

  CHECK_THROWS_AS(loewner_ge(eye, ComplexMatrix::identity(3)), DimensionError);
}

TEST_CASE("is_ppt on fixtures and separable draws") {
  const BlockMatrix eye(2, 2, ComplexMatrix::identity(4));
  CHECK(is_ppt(eye).is_ppt);
  CHECK(is_ppt(oracles::diag_fixture()).is_ppt);

  for (int trial = 0; trial < 200; ++trial) {
    GeneratorConfig cfg;
    cfg.seed = 7000 + trial;
    cfg.m = trial % 2 == 0 ? 2 : 3;
    cfg.n = 2;
    const BlockMatrix a = rand_ppt_separable(cfg);
    const PptVerdict v = is_ppt(a);
    CHECK(v.is_ppt);
    CHECK(v.direct.is_psd);
    CHECK(v.transposed.is_psd);
  }
}

TEST_CASE("sector_margin fixtures") {
  // Hermitian positive definite: margin 0
  const ComplexMatrix pd = matmul(adjoint(phase_pair(0.0)), phase_pair(0.0)) +
                           ComplexMatrix::identity(2);
  const SectorMargin zero = sector_margin(pd);
  CHECK(zero.re_pd);
  CHECK(zero.alpha_min == doctest::Approx(0.0).epsilon(1e-12));

  for (double t : {0.25, 1.0, 2.5}) {
    const SectorMargin m = sector_margin(phase_pair(t));
    CHECK(m.re_pd);
    CHECK(m.alpha_min == doctest::Approx(std::atan(t)).epsilon(1e-12));
  }

  const ComplexMatrix indef = {{1.0, 0.0}, {0.0, -1.0}};
  const SectorMargin none = sector_margin(indef);
  CHECK_FALSE(none.re_pd);
  CHECK(std::isinf(none.alpha_min));
}

TEST_CASE("support function fixtures") {
  for (double theta : {0.0, 0.3, -0.8, 1.2}) {
    CHECK(support_function(ComplexMatrix::identity(3), theta) ==
          doctest::Approx(std::cos(theta)).epsilon(1e-12));
  }
  CHECK(support_function(phase_pair(0.9), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("sector margin agrees with the support-function grid estimate") {
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = (trial % 3 == 0) ? kPi / 6 : (trial % 3 == 1 ? kPi / 4 : kPi / 3);
    const int d = 2 + trial % 3;
    const ComplexMatrix a = rand_sector(d, SectorParams(alpha), 7100 + trial);
    const SectorMargin algebraic = sector_margin(a);
    REQUIRE(algebraic.re_pd);
    const double grid = oracles::grid_sector_estimate(a);
    CHECK(std::abs(algebraic.alpha_min - grid) <= 1e-6);
  }
}

TEST_CASE("sector margin is scale invariant") {
  for (int trial = 0; trial < 25; ++trial) {
    const ComplexMatrix a = rand_sector(3, SectorParams(kPi / 4), 7200 + trial);
    const double base = sector_margin(a).alpha_min;
    for (double c : {1e-3, 17.0, 1e3}) {
      const double scaled = sector_margin(a * Complex{c, 0.0}).alpha_min;
      CHECK(std::abs(scaled - base) <= 1e-10);
    }
  }
}

TEST_CASE("generated sector matrices respect their angle bound") {
  for (int trial = 0; trial < 500; ++trial) {
    const ComplexMatrix a = rand_sector(2 + trial % 4, SectorParams(kPi / 4), 7300 + trial);
    const SectorMargin m = sector_margin(a);
    REQUIRE(m.re_pd);
    CHECK(m.alpha_min <= kPi / 4 + 1e-9);
  }
}

TEST_CASE("alpha zero reduces to Hermitian positive definiteness") {
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = rand_sector(3, SectorParams(0.0), 7400 + trial);
    const SectorMargin m = sector_margin(a);
    CHECK(m.re_pd);
    CHECK(m.alpha_min <= 1e-9);
    // exactly Hermitian by construction at alpha = 0
    CHECK(frobenius_norm(a - adjoint(a)) == 0.0);
    CHECK(is_psd(a).is_psd);
  }
}

TEST_CASE("PSD cone is closed under addition") {
  Rng rng(75);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix g1 = oracles::random_complex(rng, 4, 4);
    const ComplexMatrix g2 = oracles::random_complex(rng, 4, 4);
    const ComplexMatrix a = matmul(g1, adjoint(g1));
    const ComplexMatrix b = matmul(g2, adjoint(g2));
    CHECK(is_psd(a + b).is_psd);
  }
}

TEST_CASE("PSD is preserved under congruence") {
  Rng rng(76);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix g = oracles::random_complex(rng, 4, 4);
    const ComplexMatrix a = matmul(g, adjoint(g));
    const ComplexMatrix m = oracles::random_complex(rng, 4, 4);
    CHECK(is_psd(matmul(matmul(adjoint(m), a), m)).is_psd);
  }
}

TEST_CASE("sector params validate the angle") {
  CHECK_THROWS_AS(SectorParams(-0.1), DomainError);
  CHECK_THROWS_AS(SectorParams(kPi / 2), DomainError);
  const SectorParams p(kPi / 3);
  CHECK(p.tan_alpha == doctest::Approx(std::tan(kPi / 3)));
}

}  // TEST_SUITE
