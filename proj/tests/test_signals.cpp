#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "gil/signals.hpp"
#include "support/oracles.hpp"

using namespace gil;

TEST_CASE("evaluate: Gaussian window and the pair") {
  CHECK(GaussianMixture::gaussian().evaluate(0.0).real() == Approx(1.0).epsilon(1e-15));

  auto [fp, fm] = make_pair(SeparationParam(1.0));
  CHECK(fp.evaluate(0.0).real() == Approx(2.0 * std::exp(-kPi)).epsilon(1e-14));

  for (double a : {0.3, 1.0, 2.5, 7.0}) {
    auto pr = make_pair(SeparationParam(a));
    CHECK(std::abs(pr.second.evaluate(0.0)) < 1e-15); // odd in t at the origin
  }
}

TEST_CASE("make_pair: term structure and sum/difference identities") {
  auto [fp, fm] = make_pair(SeparationParam(2.0));
  REQUIRE(fp.terms().size() == 2);
  REQUIRE(fm.terms().size() == 2);
  CHECK(fp.terms()[0].shift == -2.0);
  CHECK(fp.terms()[1].shift == 2.0);
  CHECK(fp.terms()[0].coeff == complexd{1.0, 0.0});
  CHECK(fp.terms()[1].coeff == complexd{1.0, 0.0});
  CHECK(fm.terms()[1].coeff == complexd{-1.0, 0.0});

  GaussianMixture sum = fp + fm;       // 2 u_{-a}
  GaussianMixture diff = fp - fm;      // 2 u_{a}
  REQUIRE(sum.terms().size() == 1);
  CHECK(sum.terms()[0].shift == -2.0);
  CHECK(sum.terms()[0].coeff.real() == 2.0);
  REQUIRE(diff.terms().size() == 1);
  CHECK(diff.terms()[0].shift == 2.0);
  CHECK(diff.terms()[0].coeff.real() == 2.0);

  CHECK_THROWS_AS(make_pair(SeparationParam(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(make_pair(SeparationParam(-1.0)), std::invalid_argument);
}

TEST_CASE("term merging: shifts within tolerance collapse") {
  GaussianMixture m({{complexd{1.0, 0.0}, 1.0}, {complexd{2.0, 0.0}, 1.0 + 1e-13}});
  REQUIRE(m.terms().size() == 1);
  CHECK(m.terms()[0].coeff.real() == 3.0);

  GaussianMixture z({{complexd{1.0, 0.0}, 0.5}, {complexd{-1.0, 0.0}, 0.5}});
  CHECK(z.empty());
}

TEST_CASE("inner_product: closed form against quadrature") {
  GaussianMixture phi = GaussianMixture::gaussian();
  CHECK(inner_product(phi, phi).real() == Approx(kInvSqrt2).epsilon(1e-14));

  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    GaussianMixture ua = GaussianMixture::translate(a);
    GaussianMixture uma = GaussianMixture::translate(-a);
    double expect = kInvSqrt2 * std::exp(-2.0 * kPi * a * a);
    CHECK(inner_product(ua, uma).real() == Approx(expect).margin(1e-300).epsilon(1e-13));

    auto [fp, fm] = make_pair(SeparationParam(a));
    CHECK(std::abs(inner_product(fp, fm)) < 1e-15);

    // oracle: trapezoid quadrature of the defining integral; error measured
    // against the Cauchy-Schwarz scale so exact zeros are comparable
    std::vector<GaussianMixture> sigs{phi, ua, fp, fm};
    for (const auto& f : sigs)
      for (const auto& g : sigs) {
        complexd closed = inner_product(f, g);
        complexd quad = oracle::inner_product_quad(f, g, a + 8.0, 1.0 / 256.0);
        double scale = std::max(std::abs(closed), norm(f) * norm(g));
        CHECK(std::abs(closed - quad) / scale < 1e-10);
      }
  }
}

TEST_CASE("inner_product: hermitian, positive, zero only for the zero signal") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> us(-3.0, 3.0), uc(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GaussianTerm> tf, tg;
    for (int i = 0; i < 3; ++i) {
      tf.push_back({complexd{uc(rng), uc(rng)}, us(rng)});
      tg.push_back({complexd{uc(rng), uc(rng)}, us(rng)});
    }
    GaussianMixture f(tf), g(tg);
    complexd fg = inner_product(f, g);
    complexd gf = inner_product(g, f);
    CHECK(std::abs(fg - std::conj(gf)) < 1e-12 * (1.0 + std::abs(fg)));
    complexd ff = inner_product(f, f);
    CHECK(std::abs(ff.imag()) < 1e-12 * (1.0 + ff.real()));
    CHECK(ff.real() >= 0.0);
    if (!f.empty()) CHECK(ff.real() > 0.0);
  }
  CHECK(squared_norm(GaussianMixture{}) == 0.0);
}

TEST_CASE("quotient_distance: identity, pair value, phase invariance") {
  GaussianMixture phi = GaussianMixture::gaussian();
  CHECK(quotient_distance(phi, phi) == 0.0);
  CHECK(quotient_distance(phi, phi.scaled(complexd{0.0, 1.0})) < 1e-12);

  double expect = std::pow(2.0, 0.75);
  for (double a : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    auto [fp, fm] = make_pair(SeparationParam(a));
    CHECK(std::abs(quotient_distance(fp, fm) - expect) / expect < 1e-12);
  }

  auto [fp, fm] = make_pair(SeparationParam(1.5));
  double base = quotient_distance(fp, fm);
  for (int k = 0; k < 16; ++k) {
    complexd tau = std::polar(1.0, 2.0 * kPi * k / 16.0);
    CHECK(quotient_distance(fp, fm.scaled(tau)) == Approx(base).epsilon(1e-12));
    CHECK(quotient_distance(fm.scaled(tau), fp) == Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("subspace_dim: 2k+1 with a nonsingular Gram oracle") {
  CHECK(subspace_dim(1, 1.0) == 3);
  CHECK(subspace_dim(5, 1.0) == 11);
  CHECK_THROWS_AS(subspace_dim(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(subspace_dim(3, 0.0), std::invalid_argument);

  // Gram matrix of the 2k+1 translates is symmetric positive definite.
  for (auto [k, q] : std::vector<std::pair<int, double>>{{1, 1.0}, {5, 0.5}}) {
    int n = subspace_dim(k, q);
    std::vector<double> gram(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double si = (-k + i) * q, sj = (-k + j) * q;
        gram[static_cast<std::size_t>(i) * n + j] =
            inner_product(GaussianMixture::translate(si), GaussianMixture::translate(sj)).real();
      }
    CHECK(oracle::cholesky_spd(gram, n));
  }
}
