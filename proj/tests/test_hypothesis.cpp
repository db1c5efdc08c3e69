#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "oracles.hpp"
#include "spherefft/hypothesis.hpp"

using spherefft::kPi;
using testutil::minimize_quotient;
using testutil::product_integral_oracle;
using testutil::quadrature_forms;

TEST_CASE("integral table reproduces hand values and quadrature") {
  spherefft::ChebIntegralTable table(80);
  CHECK(table.line_integral(0) == 2.0);
  CHECK(table.line_integral(1) == 0.0);
  CHECK(table.line_integral(2) == -2.0 / 3.0);
  CHECK(table.entry(1, 1) == 2.0);
  CHECK(table.entry(1, 3) == -2.0 / 3.0);
  CHECK(table.entry(2, 2) == Catch::Approx(2.0 / 3.0).margin(1e-15));

  auto rng = testutil::make_rng(2024);
  std::uniform_int_distribution<int> idx(1, 40);
  for (int trial = 0; trial < 60; ++trial) {
    int i = idx(rng), j = idx(rng);
    double want = product_integral_oracle(i - 1, j - 1, 0, 0);
    CHECK_THAT(table.entry(i, j), Catch::Matchers::WithinAbs(want, 1e-12));
    CHECK(table.entry(i, j) == table.entry(j, i));
  }
}

TEST_CASE("triple products match quadrature") {
  spherefft::ChebIntegralTable table(200);
  auto rng = testutil::make_rng(7);
  std::uniform_int_distribution<int> deg(0, 40);
  for (int trial = 0; trial < 60; ++trial) {
    int a = deg(rng), b = deg(rng), d = deg(rng);
    double want = product_integral_oracle(a, b, d, 0);
    CHECK_THAT(table.triple(a, b, d), Catch::Matchers::WithinAbs(want, 1e-12));
  }
}

TEST_CASE("one-dimensional Gram pair comes out in closed form") {
  auto gram = spherefft::assemble(0, 2);
  REQUIRE(gram.a.rows() == 1);
  REQUIRE(gram.b.rows() == 1);
  CHECK(gram.a(0, 0) == 2.0);
  CHECK_THAT(gram.b(0, 0), Catch::Matchers::WithinAbs(-2.0 / 15.0, 1e-15));
}

TEST_CASE("assembled Gram entries match direct quadrature") {
  for (int alpha : {0, 1, 2}) {
    for (int n : {3, 5, 8}) {
      auto gram = spherefft::assemble(alpha, n);
      for (int i = 0; i < n - 1; ++i) {
        for (int j = 0; j < n - 1; ++j) {
          double a_want = product_integral_oracle(i, j, 0, alpha);
          INFO("alpha = " << alpha << ", N = " << n << ", entry (" << i << ", " << j << ")");
          CHECK_THAT(gram.a(i, j), Catch::Matchers::WithinAbs(a_want, 1e-12));
          // T_{2N} adds one more cosine factor under the integral.
          double b_want = product_integral_oracle(i, j, 2 * n, alpha);
          CHECK_THAT(gram.b(i, j), Catch::Matchers::WithinAbs(b_want, 1e-12));
        }
      }
    }
  }
}

TEST_CASE("Gram matrices are symmetric, parity-sparse and positive definite") {
  for (int alpha : {0, 1, 2}) {
    for (int n : {2, 3, 8, 17, 33, 64}) {
      auto gram = spherefft::assemble(alpha, n);
      CHECK(gram.a == gram.a.transpose().eval());
      CHECK(gram.b == gram.b.transpose().eval());
      for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j)
          if ((i + j) % 2 != 0) {
            CHECK(gram.a(i, j) == 0.0);
            CHECK(gram.b(i, j) == 0.0);
          }
      Eigen::LLT<Eigen::MatrixXd> llt(gram.a);
      CHECK(llt.info() == Eigen::Success);
    }
  }
}

TEST_CASE("smallest verified case has the exact rational value") {
  CHECK_THAT(spherefft::c_h(0, 2), Catch::Matchers::WithinAbs(2.0 / 15.0, 1e-12));
}

TEST_CASE("quotient bound holds over the verified sweep") {
  for (int alpha : {0, 1, 2}) {
    for (int n = 2; n <= 64; ++n) {
      double value = spherefft::c_h(alpha, n);
      INFO("alpha = " << alpha << ", N = " << n << ", c_H = " << value);
      CHECK(value < 1.0);
      CHECK(std::abs(value) <= 2.0);
    }
  }
}

TEST_CASE("matrix value agrees with quadrature-based cross-checks") {
  auto rng = testutil::make_rng(99);
  for (int alpha : {0, 1, 2}) {
    for (int n = 2; n <= 8; ++n) {
      double matrix_value = spherefft::c_h(alpha, n);
      auto forms = quadrature_forms(alpha, n);

      // Dense solve on the quadrature-assembled forms.
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
          forms.b, forms.a, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
      double dense = -2.0 * solver.eigenvalues()(0);
      INFO("alpha = " << alpha << ", N = " << n << ": matrix = " << matrix_value
                      << ", dense quadrature = " << dense);
      CHECK_THAT(dense, Catch::Matchers::WithinAbs(matrix_value, 1e-10));

      // Random-restart optimization over coefficient vectors.
      double brute = -2.0 * minimize_quotient(forms, 12, rng);
      INFO("alpha = " << alpha << ", N = " << n << ": matrix = " << matrix_value
                      << ", brute = " << brute);
      CHECK_THAT(brute, Catch::Matchers::WithinAbs(matrix_value, 1e-8));
      // Any candidate quotient bounds the true minimum from above.
      CHECK(brute <= matrix_value + 1e-10);
    }
  }
}

TEST_CASE("quotient is invariant under common rescaling of both forms") {
  auto gram = spherefft::assemble(1, 6);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> plain(
      gram.b, gram.a, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> scaled(
      (7.5 * gram.b).eval(), (7.5 * gram.a).eval(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  CHECK_THAT(scaled.eigenvalues()(0),
             Catch::Matchers::WithinAbs(plain.eigenvalues()(0), 1e-12));
}

TEST_CASE("range verification reports one ordered row per case") {
  std::vector<int> alphas{0, 1, 2};
  auto report = spherefft::verify_range(16, alphas);
  REQUIRE(report.rows.size() == 3 * 15);
  CHECK(report.all_pass);
  std::size_t idx = 0;
  for (int n = 2; n <= 16; ++n) {
    for (int alpha : alphas) {
      const auto& row = report.rows[idx++];
      CHECK(row.n == n);
      CHECK(row.alpha == alpha);
      CHECK(row.pass == (row.c_h < 1.0));
      CHECK_THAT(row.c_h, Catch::Matchers::WithinAbs(spherefft::c_h(alpha, n), 1e-14));
    }
  }
}

TEST_CASE("verification output formats") {
  spherefft::HypothesisReport report;
  report.rows.push_back({2, 0, 2.0 / 15.0, true});
  report.rows.push_back({3, 2, 0.25, true});
  std::ostringstream csv;
  spherefft::write_hypothesis_csv(report, csv);
  std::istringstream is(csv.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "N,alpha,c_H,pass");
  REQUIRE(std::getline(is, line));
  CHECK(line == "2,0,1.333333333333e-01,1");
  REQUIRE(std::getline(is, line));
  CHECK(line == "3,2,2.500000000000e-01,1");

  std::ostringstream json;
  spherefft::write_hypothesis_json(report, json);
  CHECK(json.str().find("\"all_pass\": true") != std::string::npos);
  CHECK(json.str().find("\"N\": 2") != std::string::npos);
  CHECK(json.str().find("\"pass\": true") != std::string::npos);
}

TEST_CASE("hypothesis interface rejects malformed requests") {
  CHECK_THROWS_AS(spherefft::c_h(3, 4), spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::c_h(-1, 4), spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::c_h(0, 1), spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::assemble(0, 1), spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::ChebIntegralTable(-1), spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::ChebIntegralTable(4).line_integral(5),
                  spherefft::ContractViolation);

  std::vector<int> alphas{0};
  CHECK_THROWS_AS(spherefft::verify_range(1, alphas), spherefft::ContractViolation);
  CHECK_THROWS_AS(spherefft::verify_range(8, std::vector<int>{}),
                  spherefft::ContractViolation);
  std::vector<int> bad{0, 5};
  CHECK_THROWS_AS(spherefft::verify_range(8, bad), spherefft::ContractViolation);

  spherefft::ChebIntegralTable small(10);
  CHECK_THROWS_AS(spherefft::assemble(0, 8, small), spherefft::ContractViolation);
}
