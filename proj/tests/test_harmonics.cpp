#include "spherefft/harmonics.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "spherefft/gauss_legendre.hpp"

using namespace spherefft;
using Catch::Matchers::WithinAbs;

TEST_CASE("gauss_legendre rules have the classical properties") {
  for (int n : {1, 2, 5, 64, 400, 2000}) {
    auto rule = gauss_legendre(n);
    double wsum = 0.0, x2 = 0.0;
    for (int i = 0; i < n; ++i) {
      wsum += rule.weights[i];
      x2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
      if (i > 0) REQUIRE(rule.nodes[i] > rule.nodes[i - 1]);
      REQUIRE(std::abs(rule.nodes[i]) < 1.0);
    }
    INFO("n = " << n);
    CHECK_THAT(wsum, WithinAbs(2.0, 1e-13));
    if (n >= 2) CHECK_THAT(x2, WithinAbs(2.0 / 3.0, 1e-13));
  }
  SECTION("degree 2n-1 exactness") {
    auto rule = gauss_legendre(5);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], 8);
    CHECK_THAT(acc, WithinAbs(2.0 / 9.0, 1e-14));
  }
}

TEST_CASE("legendre_q matches closed forms at low degree") {
  for (double t : {0.0, 0.3, 1.2, kPi / 2.0, 2.9, kPi}) {
    CHECK_THAT(legendre_q(0, 0, t), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(legendre_q(1, 0, t), WithinAbs(std::sqrt(1.5) * std::cos(t), 1e-15));
    CHECK_THAT(legendre_q(1, 1, t), WithinAbs(-std::sqrt(0.75) * std::sin(t), 1e-15));
    CHECK_THAT(legendre_q(2, 0, t),
               WithinAbs(std::sqrt(2.5) * 0.5 * (3.0 * std::cos(t) * std::cos(t) - 1.0), 1e-14));
  }
}

TEST_CASE("legendre_q columns are orthonormal in the sin(theta) weight") {
  auto rule = gauss_legendre(200);
  const int n_max = 12;
  for (int m = 0; m <= n_max; ++m) {
    std::vector<std::vector<double>> cols(rule.nodes.size());
    for (std::size_t a = 0; a < rule.nodes.size(); ++a)
      cols[a] = legendre_q_column(n_max, m, std::acos(rule.nodes[a]));
    for (int n1 = m; n1 <= n_max; ++n1) {
      for (int n2 = n1; n2 <= n_max; ++n2) {
        double acc = 0.0;
        for (std::size_t a = 0; a < rule.nodes.size(); ++a)
          acc += rule.weights[a] * cols[a][n1 - m] * cols[a][n2 - m];
        INFO("m=" << m << " n1=" << n1 << " n2=" << n2);
        REQUIRE_THAT(acc, WithinAbs(n1 == n2 ? 1.0 : 0.0, 1e-12));
      }
    }
  }
}

TEST_CASE("legendre_q has the expected parity about the equator") {
  auto rng = testutil::make_rng(5150);
  std::uniform_real_distribution<double> ut(0.0, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    double t = ut(rng);
    for (int n = 0; n <= 8; ++n) {
      for (int m = 0; m <= n; ++m) {
        double sign = ((n + m) % 2 == 0) ? 1.0 : -1.0;
        REQUIRE_THAT(legendre_q(n, m, kPi - t), WithinAbs(sign * legendre_q(n, m, t), 1e-13));
      }
    }
  }
}

TEST_CASE("spherical_harmonic matches closed forms") {
  CHECK(std::abs(spherical_harmonic(0, 0, 0.7, 1.1) - 1.0 / std::sqrt(4.0 * kPi)) < 1e-15);
  for (double t : {0.2, 1.0, 2.5}) {
    CHECK(std::abs(spherical_harmonic(1, 0, t, 0.4) -
                   std::sqrt(3.0 / (4.0 * kPi)) * std::cos(t)) < 1e-15);
    // The (-1)^{(m+|m|)/2} prefactor cancels the Condon-Shortley phase for
    // m > 0, so Y_1^1 = +sqrt(3/(8 pi)) sin(theta) e^{i phi} here.
    Complex want = std::sqrt(3.0 / (8.0 * kPi)) * std::sin(t) * std::polar(1.0, 0.9);
    CHECK(std::abs(spherical_harmonic(1, 1, t, 0.9) - want) < 1e-15);
  }
}

TEST_CASE("spherical harmonics are orthonormal on the sphere") {
  const int n_max = 10;
  auto rule = gauss_legendre(64);
  const int n_phi = 64;

  // All harmonics evaluated on the product grid, then a Gram matrix.
  struct Entry {
    int n, m;
  };
  std::vector<Entry> basis;
  for (int n = 0; n <= n_max; ++n)
    for (int m = -n; m <= n; ++m) basis.push_back({n, m});

  std::vector<std::vector<Complex>> vals(basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    vals[b].resize(rule.nodes.size() * n_phi);
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
      double theta = std::acos(rule.nodes[a]);
      for (int p = 0; p < n_phi; ++p) {
        double phi = 2.0 * kPi * p / n_phi;
        vals[b][a * n_phi + p] = spherical_harmonic(basis[b].n, basis[b].m, theta, phi);
      }
    }
  }
  double wphi = 2.0 * kPi / n_phi;
  double worst = 0.0;
  for (std::size_t b1 = 0; b1 < basis.size(); ++b1) {
    for (std::size_t b2 = b1; b2 < basis.size(); ++b2) {
      Complex acc{};
      for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
        Complex inner{};
        for (int p = 0; p < n_phi; ++p)
          inner += vals[b1][a * n_phi + p] * std::conj(vals[b2][a * n_phi + p]);
        acc += rule.weights[a] * wphi * inner;
      }
      double want = (b1 == b2) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(acc - want));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("spherical harmonics satisfy the standard symmetries") {
  auto rng = testutil::make_rng(777);
  std::uniform_real_distribution<double> ut(0.0, kPi);
  std::uniform_real_distribution<double> up(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 100; ++trial) {
    double t = ut(rng), p = up(rng);
    for (int n = 0; n <= 6; ++n) {
      for (int m = -n; m <= n; ++m) {
        Complex y = spherical_harmonic(n, m, t, p);
        REQUIRE(std::abs(spherical_harmonic(n, m, -t, p + kPi) - y) < 1e-12);
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        REQUIRE(std::abs(spherical_harmonic(n, -m, t, p) - sign * std::conj(y)) < 1e-13);
      }
    }
  }
}

TEST_CASE("harmonics with m != 0 vanish at the poles") {
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= n; ++m) {
      CHECK(spherical_harmonic(n, m, 0.0, 1.3) == Complex{});
      // sin(pi) rounds to ~1.2e-16 rather than zero, so only near-zero here.
      CHECK(std::abs(spherical_harmonic(n, -m, kPi, 0.2)) < 1e-15);
    }
  }
}

TEST_CASE("legendre_q validates its arguments") {
  CHECK_THROWS_AS(legendre_q(2, 3, 0.5), ContractViolation);
  CHECK_THROWS_AS(legendre_q(-1, 0, 0.5), ContractViolation);
  CHECK_THROWS_AS(legendre_q_column(1, 2, 0.5), ContractViolation);
  CHECK_THROWS_AS(gauss_legendre(0), ContractViolation);
}
