#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spherefft/common.hpp"

namespace spherefft {

/// Verifies that the trigonometric ansatz space admits a uniformly bounded
/// interpolation constant by reducing the defining inequality, after the
/// cosine change of variables, to a generalized eigenvalue problem between
/// two Chebyshev Gram matrices:
///
///   A_ij = int_{-1}^{1} T_{i-1} T_{j-1} (1-x^2)^alpha dx,
///   B_ij = int_{-1}^{1} T_{i-1} T_{j-1} (1-x^2)^alpha T_{2N} dx,
///
/// and c_H(N; alpha) = -2 min_b (b^T B b)/(b^T A b). The verified claim is
/// c_H < 1.

/// Exact line integrals of Chebyshev polynomials and their products,
/// assembled from I_k = int_{-1}^{1} T_k dx = -2/(k^2-1) for even k, 0 for
/// odd k.
class ChebIntegralTable {
 public:
  explicit ChebIntegralTable(int max_index) {
    if (max_index < 0)
      throw ContractViolation("ChebIntegralTable: max index must be >= 0, got " +
                              std::to_string(max_index));
    line_.resize(max_index + 1);
    for (int k = 0; k <= max_index; ++k)
      line_[k] = k % 2 == 0 ? -2.0 / (static_cast<double>(k) * k - 1.0) : 0.0;
  }

  int max_index() const { return static_cast<int>(line_.size()) - 1; }

  /// int T_k dx.
  double line_integral(int k) const {
    if (k < 0 || k > max_index())
      throw ContractViolation("ChebIntegralTable: index " + std::to_string(k) +
                              " outside table of size " + std::to_string(line_.size()));
    return line_[k];
  }

  /// int T_{i-1} T_{j-1} dx with the 1-based indexing of the coefficient
  /// vectors: entry(i, j) = (I_{i+j-2} + I_{|i-j|}) / 2.
  double entry(int i, int j) const {
    if (i < 1 || j < 1)
      throw ContractViolation("ChebIntegralTable: entries are 1-based, got (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
    return 0.5 * (line_integral(i + j - 2) + line_integral(std::abs(i - j)));
  }

  /// int T_a T_b T_d dx by expanding the product into four line integrals.
  double triple(int a, int b, int d) const {
    if (a < 0 || b < 0 || d < 0)
      throw ContractViolation("ChebIntegralTable: triple product degrees must be >= 0");
    int s = std::abs(a - b);
    return 0.25 * (line_integral(a + b + d) + line_integral(std::abs(a + b - d)) +
                   line_integral(s + d) + line_integral(std::abs(s - d)));
  }

 private:
  std::vector<double> line_;
};

namespace detail {

/// (1 - x^2)^alpha expanded in the Chebyshev basis as (degree, weight) pairs.
inline std::vector<std::pair<int, double>> weight_expansion(int alpha) {
  switch (alpha) {
    case 0:
      return {{0, 1.0}};
    case 1:
      return {{0, 0.5}, {2, -0.5}};
    case 2:
      return {{0, 0.375}, {2, -0.5}, {4, 0.125}};
    default:
      throw ContractViolation("hypothesis: alpha must be 0, 1 or 2, got " +
                              std::to_string(alpha));
  }
}

inline int table_span(int n) { return 4 * n + 2; }

}  // namespace detail

struct ChebyshevGram {
  int alpha = 0;
  int n = 0;
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};

/// Assembles both Gram matrices exactly: every entry is a short signed sum
/// of tabulated line integrals, no quadrature involved. The T_{2N} factor in
/// B shifts each weight term via T_d T_{2N} = (T_{d+2N} + T_{|d-2N|}) / 2.
inline ChebyshevGram assemble(int alpha, int n, const ChebIntegralTable& table) {
  auto weights = detail::weight_expansion(alpha);
  if (n < 2) throw ContractViolation("assemble: N must be >= 2, got " + std::to_string(n));
  if (table.max_index() < detail::table_span(n))
    throw ContractViolation("assemble: integral table spans index " +
                            std::to_string(table.max_index()) + ", need " +
                            std::to_string(detail::table_span(n)));
  const int m = n - 1;
  ChebyshevGram gram;
  gram.alpha = alpha;
  gram.n = n;
  gram.a.setZero(m, m);
  gram.b.setZero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double a_val = 0.0, b_val = 0.0;
      for (const auto& [d, w] : weights) {
        a_val += w * table.triple(i, j, d);
        b_val += 0.5 * w * (table.triple(i, j, d + 2 * n) + table.triple(i, j, std::abs(d - 2 * n)));
      }
      gram.a(i, j) = a_val;
      gram.a(j, i) = a_val;
      gram.b(i, j) = b_val;
      gram.b(j, i) = b_val;
    }
  }
  return gram;
}

inline ChebyshevGram assemble(int alpha, int n) {
  if (n < 2) throw ContractViolation("assemble: N must be >= 2, got " + std::to_string(n));
  return assemble(alpha, n, ChebIntegralTable(detail::table_span(n)));
}

/// c_H(N; alpha) = -2 lambda_min of the pencil (B, A), via Cholesky reduction
/// of the positive definite A inside the symmetric generalized solver.
inline double c_h(int alpha, int n, const ChebIntegralTable& table) {
  auto gram = assemble(alpha, n, table);
  Eigen::LLT<Eigen::MatrixXd> llt(gram.a);
  if (llt.info() != Eigen::Success)
    throw ContractViolation("c_h: Gram matrix A failed Cholesky factorization at N = " +
                            std::to_string(n) + ", alpha = " + std::to_string(alpha) +
                            " (assembly bug)");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      gram.b, gram.a, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw ContractViolation("c_h: generalized eigenvalue solve failed at N = " +
                            std::to_string(n) + ", alpha = " + std::to_string(alpha));
  return -2.0 * solver.eigenvalues()(0);
}

inline double c_h(int alpha, int n) {
  if (n < 2) throw ContractViolation("c_h: N must be >= 2, got " + std::to_string(n));
  return c_h(alpha, n, ChebIntegralTable(detail::table_span(n)));
}

struct HypothesisRow {
  int n = 0;
  int alpha = 0;
  double c_h = 0.0;
  bool pass = false;
};

struct HypothesisReport {
  std::vector<HypothesisRow> rows;
  bool all_pass = true;
};

/// Sweeps N = 2..n_max for each requested alpha, sharing one integral table.
/// Rows are ordered by N, then by the given alpha order. The sweep is
/// batched so it can stop early once a failing row is found; rows after the
/// first failure are not reported.
inline HypothesisReport verify_range(int n_max, std::span<const int> alphas) {
  if (n_max < 2)
    throw ContractViolation("verify_range: N_max must be >= 2, got " + std::to_string(n_max));
  if (alphas.empty()) throw ContractViolation("verify_range: empty alpha list");
  for (int alpha : alphas) detail::weight_expansion(alpha);

  ChebIntegralTable table(detail::table_span(n_max));
  HypothesisReport report;
  const int batch = 32;
  for (int lo = 2; lo <= n_max; lo += batch) {
    int hi = std::min(n_max, lo + batch - 1);
    std::vector<std::vector<double>> values(hi - lo + 1,
                                            std::vector<double>(alphas.size(), 0.0));
    parallel_for(
        0, values.size(),
        [&](std::size_t idx) {
          for (std::size_t a = 0; a < alphas.size(); ++a)
            values[idx][a] = c_h(alphas[a], lo + static_cast<int>(idx), table);
        },
        1);
    for (int n = lo; n <= hi; ++n) {
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        double value = values[n - lo][a];
        report.rows.push_back({n, alphas[a], value, value < 1.0});
        if (value >= 1.0) {
          report.all_pass = false;
          return report;
        }
      }
    }
  }
  return report;
}

inline void write_hypothesis_csv(const HypothesisReport& report, std::ostream& os) {
  os << "N,alpha,c_H,pass\n";
  char buf[64];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.12e,%d", row.n, row.alpha, row.c_h,
                  row.pass ? 1 : 0);
    os << buf << "\n";
  }
}

inline void write_hypothesis_json(const HypothesisReport& report, std::ostream& os) {
  os << "{\n  \"all_pass\": " << (report.all_pass ? "true" : "false") << ",\n  \"rows\": [";
  char buf[128];
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    std::snprintf(buf, sizeof(buf),
                  "%s    {\"N\": %d, \"alpha\": %d, \"c_H\": %.17g, \"pass\": %s}",
                  i == 0 ? "\n" : ",\n", row.n, row.alpha, row.c_h,
                  row.pass ? "true" : "false");
    os << buf;
  }
  os << "\n  ]\n}\n";
}

}  // namespace spherefft
