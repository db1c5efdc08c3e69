#pragma once

#include <cmath>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spherefft/gauss_legendre.hpp"
#include "spherefft/grid.hpp"
#include "spherefft/interpolant.hpp"

namespace spherefft {

/// Sobolev norms on the sphere in the integral form
///
///   |F|_{H0}^2 = int |F|^2 sin(theta) dtheta dphi,
///   |F|_{H1}^2 = (1/4) |F|_{H0}^2 + int |dF/dphi|^2 / sin(theta)
///              + int |dF/dtheta|^2 sin(theta),
///
/// discretized by Gauss-Legendre in x = cos(theta) crossed with the uniform
/// trapezoid rule in phi. For a spherical harmonic Y_n^m this gives
/// |Y|_{H1}^2 = 1/4 + n(n+1) = (n + 1/2)^2.
struct NormQuadrature {
  int n_theta = 1600;
  int n_phi = 1600;
  // When set, norms are recomputed at half resolution and a warning is
  // printed if the two disagree; useful for low-regularity integrands.
  bool check_self_convergence = false;
};

struct QuadratureGrid {
  std::vector<double> x;      // Gauss-Legendre nodes in (-1, 1)
  std::vector<double> w_x;    // matching weights
  std::vector<double> theta;  // acos(x)
  std::vector<double> phi;    // uniform on [0, 2 pi)
  double w_phi = 0.0;
};

inline QuadratureGrid make_quadrature_grid(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2)
    throw ContractViolation("make_quadrature_grid: need at least 2 nodes per direction, got " +
                            std::to_string(n_theta) + " x " + std::to_string(n_phi));
  QuadratureGrid g;
  auto rule = gauss_legendre(n_theta);
  g.x = std::move(rule.nodes);
  g.w_x = std::move(rule.weights);
  g.theta.resize(g.x.size());
  for (std::size_t a = 0; a < g.x.size(); ++a) g.theta[a] = std::acos(g.x[a]);
  g.phi.resize(n_phi);
  for (int b = 0; b < n_phi; ++b) g.phi[b] = 2.0 * kPi * b / n_phi;
  g.w_phi = 2.0 * kPi / n_phi;
  return g;
}

namespace detail {

/// Shared quadrature core: accumulates w * term(a, b) over the product grid
/// with the deterministic blocked reduction.
template <class Term>
double integrate_product_grid(const QuadratureGrid& g, Term&& term) {
  const std::size_t n_phi = g.phi.size();
  return block_sum<double>(g.x.size() * n_phi, [&](std::size_t i) {
    std::size_t a = i / n_phi, b = i % n_phi;
    return g.w_x[a] * g.w_phi * term(a, b);
  });
}

inline double h1_squared_from_parts(double h0_sq, double dphi_part, double dtheta_part) {
  return 0.25 * h0_sq + dphi_part + dtheta_part;
}

}  // namespace detail

/// H0 norm of a callable g(theta, phi) -> Complex (or double).
template <class Fn>
double h0_norm(Fn&& g, const NormQuadrature& quad = {}) {
  auto grid = make_quadrature_grid(quad.n_theta, quad.n_phi);
  double sq = detail::integrate_product_grid(
      grid, [&](std::size_t a, std::size_t b) { return std::norm(Complex(g(grid.theta[a], grid.phi[b]))); });
  double result = std::sqrt(sq);
  if (quad.check_self_convergence) {
    NormQuadrature half{quad.n_theta / 2, quad.n_phi / 2, false};
    double coarse = h0_norm(g, half);
    if (std::abs(coarse - result) > 1e-6 * std::max(result, 1e-30))
      std::cerr << "warning: h0_norm self-convergence check failed (" << coarse << " vs " << result
                << "); increase quadrature resolution\n";
  }
  return result;
}

/// H1 norm from a callable and its two first partials.
template <class Fn, class FnT, class FnP>
double h1_norm(Fn&& g, FnT&& g_theta, FnP&& g_phi, const NormQuadrature& quad = {}) {
  auto grid = make_quadrature_grid(quad.n_theta, quad.n_phi);
  double h0_sq = detail::integrate_product_grid(
      grid, [&](std::size_t a, std::size_t b) { return std::norm(Complex(g(grid.theta[a], grid.phi[b]))); });
  double dphi_part = detail::integrate_product_grid(grid, [&](std::size_t a, std::size_t b) {
    return std::norm(Complex(g_phi(grid.theta[a], grid.phi[b]))) / (1.0 - grid.x[a] * grid.x[a]);
  });
  double dtheta_part = detail::integrate_product_grid(grid, [&](std::size_t a, std::size_t b) {
    return std::norm(Complex(g_theta(grid.theta[a], grid.phi[b])));
  });
  double result = std::sqrt(detail::h1_squared_from_parts(h0_sq, dphi_part, dtheta_part));
  if (quad.check_self_convergence) {
    NormQuadrature half{quad.n_theta / 2, quad.n_phi / 2, false};
    double coarse = h1_norm(g, g_theta, g_phi, half);
    if (std::abs(coarse - result) > 1e-6 * std::max(result, 1e-30))
      std::cerr << "warning: h1_norm self-convergence check failed (" << coarse << " vs " << result
                << "); increase quadrature resolution\n";
  }
  return result;
}

struct InterpolationError {
  double h0 = 0.0;
  double h1 = 0.0;
};

/// Builds the degree-N interpolant of fn and measures F - Q_N F in both
/// norms on one shared quadrature grid. The interpolant fields come from the
/// tensor-grid evaluator, so the cost is O(quad nodes * N + N^3) rather than
/// O(quad nodes * N^2).
inline InterpolationError interpolation_error(const TestFunction& fn, int n,
                                              const NormQuadrature& quad = {}) {
  auto grid = make_quadrature_grid(quad.n_theta, quad.n_phi);
  auto q = build(sample(fn, n));
  auto fields = evaluate_on_product_grid(q, grid.theta, grid.phi, true);

  const std::size_t n_phi = grid.phi.size();
  Eigen::MatrixXd err_val(grid.x.size(), n_phi), err_dt(grid.x.size(), n_phi),
      err_dp(grid.x.size(), n_phi);
  parallel_for(0, grid.x.size(), [&](std::size_t a) {
    for (std::size_t b = 0; b < n_phi; ++b) {
      double t = grid.theta[a], p = grid.phi[b];
      err_val(a, b) = std::norm(fields.value(a, b) - fn.f(t, p));
      err_dt(a, b) = std::norm(fields.d_theta(a, b) - fn.df_dtheta(t, p));
      err_dp(a, b) = std::norm(fields.d_phi(a, b) - fn.df_dphi(t, p));
    }
  });

  double h0_sq = detail::integrate_product_grid(
      grid, [&](std::size_t a, std::size_t b) { return err_val(a, b); });
  double dphi_part = detail::integrate_product_grid(grid, [&](std::size_t a, std::size_t b) {
    return err_dp(a, b) / (1.0 - grid.x[a] * grid.x[a]);
  });
  double dtheta_part = detail::integrate_product_grid(
      grid, [&](std::size_t a, std::size_t b) { return err_dt(a, b); });

  InterpolationError out;
  out.h0 = std::sqrt(h0_sq);
  out.h1 = std::sqrt(detail::h1_squared_from_parts(h0_sq, dphi_part, dtheta_part));
  if (quad.check_self_convergence) {
    NormQuadrature half{quad.n_theta / 2, quad.n_phi / 2, false};
    auto coarse = interpolation_error(fn, n, half);
    if (std::abs(coarse.h1 - out.h1) > 1e-6 * std::max(out.h1, 1e-30))
      std::cerr << "warning: interpolation_error self-convergence check failed for " << fn.name
                << " at N=" << n << " (H1 " << coarse.h1 << " vs " << out.h1 << ")\n";
  }
  return out;
}

/// Estimated orders log(e_i/e_{i+1}) / log(n_{i+1}/n_i); one entry fewer than
/// the input.
inline std::vector<double> eoc(std::span<const std::pair<int, double>> errors) {
  if (errors.size() < 2)
    throw ContractViolation("eoc: need at least 2 records, got " + std::to_string(errors.size()));
  std::vector<double> out;
  out.reserve(errors.size() - 1);
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    auto [n1, e1] = errors[i];
    auto [n2, e2] = errors[i + 1];
    if (n2 <= n1)
      throw ContractViolation("eoc: N values must increase, got " + std::to_string(n1) +
                              " then " + std::to_string(n2));
    out.push_back(std::log(e1 / e2) / std::log(static_cast<double>(n2) / n1));
  }
  return out;
}

struct ErrorRecord {
  int n = 0;
  double error_h0 = 0.0;
  double error_h1 = 0.0;
  std::optional<double> eoc_h0;
  std::optional<double> eoc_h1;
};

inline std::vector<ErrorRecord> convergence_table(const TestFunction& fn,
                                                  std::span<const int> n_values,
                                                  const NormQuadrature& quad = {}) {
  if (n_values.empty()) throw ContractViolation("convergence_table: empty N list");
  std::vector<ErrorRecord> records;
  records.reserve(n_values.size());
  for (int n : n_values) {
    auto err = interpolation_error(fn, n, quad);
    ErrorRecord rec;
    rec.n = n;
    rec.error_h0 = err.h0;
    rec.error_h1 = err.h1;
    if (!records.empty()) {
      const auto& prev = records.back();
      double ratio = std::log(static_cast<double>(n) / prev.n);
      rec.eoc_h0 = std::log(prev.error_h0 / err.h0) / ratio;
      rec.eoc_h1 = std::log(prev.error_h1 / err.h1) / ratio;
    }
    records.push_back(rec);
  }
  return records;
}

inline void write_convergence_csv(const std::vector<ErrorRecord>& records, std::ostream& os) {
  os << "N,error_h0,eoc_h0,error_h1,eoc_h1\n";
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d,%.12e,", r.n, r.error_h0);
    os << buf;
    if (r.eoc_h0) {
      std::snprintf(buf, sizeof(buf), "%.6f", *r.eoc_h0);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.12e,", r.error_h1);
    os << buf;
    if (r.eoc_h1) {
      std::snprintf(buf, sizeof(buf), "%.6f", *r.eoc_h1);
      os << buf;
    }
    os << "\n";
  }
}

inline void write_convergence_json(const std::vector<ErrorRecord>& records, std::ostream& os) {
  os << "[\n";
  char buf[160];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::snprintf(buf, sizeof(buf), "  {\"N\": %d, \"error_h0\": %.12e, \"error_h1\": %.12e", r.n,
                  r.error_h0, r.error_h1);
    os << buf;
    if (r.eoc_h0) {
      std::snprintf(buf, sizeof(buf), ", \"eoc_h0\": %.6f, \"eoc_h1\": %.6f", *r.eoc_h0,
                    *r.eoc_h1);
      os << buf;
    }
    os << "}" << (i + 1 < records.size() ? "," : "") << "\n";
  }
  os << "]\n";
}

}  // namespace spherefft
