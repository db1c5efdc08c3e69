#include <cmath>
#include <sstream>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "oracles.hpp"
#include "spherefft/cubature.hpp"
#include "spherefft/interpolant.hpp"
#include "spherefft/norms.hpp"

using spherefft::Complex;
using spherefft::kPi;

namespace {

/// Dense Gauss-Legendre x trapezoid quadrature of the evaluated interpolant
/// against the plane-wave kernel, sharing no code with the moment pipeline.
Complex dense_cubature(const spherefft::SphericalSamples& samples, double kappa,
                       int n_theta = 400, int n_phi = 400) {
  auto coeffs = spherefft::build(samples);
  auto quad = spherefft::make_quadrature_grid(n_theta, n_phi);
  auto field = spherefft::evaluate_on_product_grid(coeffs, quad.theta, quad.phi, false);
  testutil::LongComplex acc{};
  for (int a = 0; a < static_cast<int>(quad.x.size()); ++a) {
    testutil::LongComplex row{};
    for (int b = 0; b < n_phi; ++b) row += testutil::LongComplex(field.value(a, b));
    long double arg = static_cast<long double>(kappa) * quad.x[a];
    testutil::LongComplex kernel(std::cos(arg), std::sin(arg));
    acc += static_cast<long double>(quad.w_x[a]) * row * kernel;
  }
  acc *= static_cast<long double>(quad.w_phi);
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace

TEST_CASE("moments at kappa zero reduce to plain line integrals") {
  auto mv = spherefft::moments(0.0, 64);
  REQUIRE(mv.omega.size() == 65);
  CHECK(mv.omega[0] == Complex(4.0 * kPi, 0.0));
  for (int l = 1; l <= 64; ++l) {
    Complex want = l % 2 == 0 ? Complex(-4.0 * kPi / (static_cast<double>(l) * l - 1.0), 0.0)
                              : Complex{};
    CHECK(std::abs(mv.omega[l] - want) < 1e-14);
  }
}

TEST_CASE("zeroth moment equals 4 pi sin(kappa)/kappa") {
  for (double kappa : {1e-9, 1e-5, 1e-3, 0.5, 1.0, 3.0, 10.0, 123.456, 1e3, 1e6}) {
    auto mv = spherefft::moments(kappa, 8);
    double want = 4.0 * kPi * std::sin(kappa) / kappa;
    CHECK_THAT(mv.omega[0].real(), Catch::Matchers::WithinAbs(want, 1e-12));
    CHECK(mv.omega[0].imag() == 0.0);
  }
}

TEST_CASE("moments match the panel quadrature oracle across regimes") {
  // Small and large kappa, plus values straddling the switch between the
  // forward recurrence and the boundary-value solve.
  for (double kappa : {1e-6, 1e-3, 0.5, 1.0, 2.7, 3.2, 5.0, 10.0, 100.0, 1e3, 1e6}) {
    auto mv = spherefft::moments(kappa, 256);
    auto want = testutil::moment_oracle(kappa, 256);
    double worst = 0.0;
    for (int l = 0; l <= 256; ++l) worst = std::max(worst, std::abs(mv.omega[l] - want[l]));
    INFO("kappa = " << kappa << ", worst deviation = " << worst);
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("moment vectors of different lengths agree on shared entries") {
  for (double kappa : {0.7, 10.0, 300.0}) {
    auto small = spherefft::moments(kappa, 5);
    auto big = spherefft::moments(kappa, 200);
    for (int l = 0; l <= 5; ++l) CHECK(std::abs(small.omega[l] - big.omega[l]) < 1e-13);
  }
}

TEST_CASE("negating kappa conjugates the moments") {
  for (double kappa : {0.5, 10.0, 1e4}) {
    auto plus = spherefft::moments(kappa, 32);
    auto minus = spherefft::moments(-kappa, 32);
    for (int l = 0; l <= 32; ++l) CHECK(minus.omega[l] == std::conj(plus.omega[l]));
  }
}

TEST_CASE("moments stay within the a priori bound up to kappa 1e6") {
  for (double kappa : {1e2, 1e3, 1e4, 1e5, 1e6}) {
    auto mv = spherefft::moments(kappa, 256);
    for (const auto& w : mv.omega) CHECK(std::abs(w) <= 4.0 * kPi + 1e-9);
  }
}

TEST_CASE("constant integrand reproduces the closed-form sphere integral") {
  auto samples = spherefft::sample([](double, double) { return Complex(1.0, 0.0); }, 8);
  for (double kappa : {0.0, 1e-9, 1.0, 10.0, 100.0, 1e6}) {
    auto result = spherefft::integrate(samples, kappa);
    double want = kappa == 0.0 ? 4.0 * kPi : 4.0 * kPi * std::sin(kappa) / kappa;
    CHECK_THAT(std::abs(result.value - Complex(want, 0.0)),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK(result.n == 8);
    CHECK(result.kappa == kappa);
  }
}

TEST_CASE("cubature equals dense quadrature of the evaluated interpolant") {
  for (const char* name : {"F1", "F2"}) {
    auto fn = spherefft::builtin(name);
    for (int n : {4, 8, 16}) {
      auto samples = spherefft::sample(fn, n);
      for (double kappa : {0.0, 1.0, 10.0, 100.0}) {
        Complex filon = spherefft::integrate(samples, kappa).value;
        Complex dense = dense_cubature(samples, kappa);
        INFO(name << ", N = " << n << ", kappa = " << kappa << ": filon = " << filon
                  << ", dense = " << dense);
        // F2's integral vanishes by symmetry, so measure relative to the
        // larger of the integral and the sample sup.
        double scale = std::max(std::abs(dense), samples.max_abs());
        CHECK(std::abs(filon - dense) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("real samples give conjugate-symmetric integrals in kappa") {
  auto samples = spherefft::sample(spherefft::builtin("F1"), 12);
  for (double kappa : {0.5, 10.0, 250.0}) {
    Complex plus = spherefft::integrate(samples, kappa).value;
    Complex minus = spherefft::integrate(samples, -kappa).value;
    CHECK(std::abs(minus - std::conj(plus)) < 1e-12);
  }
}

TEST_CASE("smooth integrand errors shrink with N and with kappa") {
  auto fn = spherefft::builtin("F1");
  std::vector<int> ns{8, 16};
  std::vector<double> kappas{1.0, 10.0, 100.0};
  auto table = spherefft::rate_table(fn, ns, kappas);
  REQUIRE(table.reference_n == 64);
  REQUIRE(table.errors.size() == 2);
  REQUIRE(table.errors[0].size() == 3);

  // N = 8, kappa = 10 sits near 9.14e-07 against the N = 64 reference.
  CHECK(table.errors[0][1] > 9.14e-07 / 3.0);
  CHECK(table.errors[0][1] < 9.14e-07 * 3.0);
  // The N = 16 row is converged to near machine precision for kappa >= 1.
  for (double err : table.errors[1]) CHECK(err <= 1e-12);
}

TEST_CASE("limited-regularity integrand decays like kappa^-2 across columns") {
  auto fn = spherefft::builtin("F4");
  std::vector<int> ns{8};
  std::vector<double> kappas{1e3, 1e4};
  auto table = spherefft::rate_table(fn, ns, kappas);
  double ratio = table.errors[0][1] / table.errors[0][0];
  INFO("error(1e4)/error(1e3) = " << ratio);
  CHECK(ratio > 1e-2 / 3.0);
  CHECK(ratio < 3e-2);
}

TEST_CASE("constant integrand rate table is exact for every N") {
  spherefft::TestFunction one{"one",
                              "smooth",
                              [](double, double) { return 1.0; },
                              [](double, double) { return 0.0; },
                              [](double, double) { return 0.0; }};
  std::vector<int> ns{2, 4, 8};
  std::vector<double> kappas{0.0, 10.0, 1e3};
  auto table = spherefft::rate_table(one, ns, kappas);
  for (const auto& row : table.errors)
    for (double err : row) CHECK(err <= 1e-13);
}

TEST_CASE("rate table CSV layout has kappa columns and N rows") {
  spherefft::RateTable table;
  table.n_values = {4, 8};
  table.kappas = {0.0, 10.0, 1e6};
  table.errors = {{1e-3, 2e-4, 3e-5}, {4e-6, 5e-7, 6e-8}};
  std::ostringstream os;
  spherefft::write_rate_table_csv(table, os);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "N\\kappa,0,10,1000000");
  REQUIRE(std::getline(is, line));
  CHECK(line == "4,1.000000e-03,2.000000e-04,3.000000e-05");
  REQUIRE(std::getline(is, line));
  CHECK(line == "8,4.000000e-06,5.000000e-07,6.000000e-08");
  CHECK_FALSE(std::getline(is, line));
}

TEST_CASE("cubature interface rejects malformed requests") {
  CHECK_THROWS_AS(spherefft::moments(1.0, -1), spherefft::ContractViolation);

  auto samples = spherefft::sample(spherefft::builtin("F1"), 8);
  auto short_moments = spherefft::moments(1.0, 4);
  CHECK_THROWS_AS(spherefft::integrate(samples, short_moments), spherefft::ContractViolation);

  auto fn = spherefft::builtin("F1");
  std::vector<int> ns{4};
  std::vector<double> kappas{1.0};
  CHECK_THROWS_AS(spherefft::rate_table(fn, std::vector<int>{}, kappas),
                  spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::rate_table(fn, ns, std::vector<double>{}),
                  spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::rate_table(fn, ns, kappas, 1), spherefft::ContractViolation);
}
