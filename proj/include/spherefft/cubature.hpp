#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "spherefft/grid.hpp"
#include "spherefft/transforms.hpp"

namespace spherefft {

/// Oscillatory cubature on the sphere: integrates F(theta, phi) times the
/// plane-wave kernel exp(i kappa cos(theta)) by replacing F with its grid
/// interpolant. Only the azimuthal mean survives the phi integral, so the
/// rule reduces to Chebyshev coefficients of the mean paired with the
/// oscillatory moments
///
///   omega_l(kappa) = 2 pi int_{-1}^{1} T_l(x) exp(i kappa x) dx.
struct MomentVector {
  double kappa = 0.0;
  std::vector<Complex> omega;  // l = 0..L
};

namespace detail {

/// int_{-1}^1 T_l dx: 0 for odd l, -2/(l^2-1) for even l.
inline double chebyshev_line_integral(int l) {
  if (l % 2 != 0) return 0.0;
  return -2.0 / (static_cast<double>(l) * l - 1.0);
}

/// Boundary combination e^{i kappa} + (-1)^l e^{-i kappa}.
inline Complex boundary_term(double kappa, int l) {
  return l % 2 == 0 ? Complex(2.0 * std::cos(kappa), 0.0)
                    : Complex(0.0, 2.0 * std::sin(kappa));
}

/// rho_1 = 2i (sin k / k^2 - cos k / k); the parenthesis is the spherical
/// Bessel function j_1, evaluated by series for small k to dodge the
/// cancellation of the two 1/k terms.
inline Complex rho_one(double kappa) {
  double j1;
  if (std::abs(kappa) < 0.05) {
    double k2 = kappa * kappa;
    j1 = kappa * (1.0 / 3.0 - k2 / 30.0 + k2 * k2 / 840.0 - k2 * k2 * k2 / 45360.0);
  } else {
    j1 = std::sin(kappa) / (kappa * kappa) - std::cos(kappa) / kappa;
  }
  return {0.0, 2.0 * j1};
}

/// rho_2 in closed form; safe for kappa away from 0.
inline Complex rho_two(double kappa) {
  double k = kappa;
  double re = 2.0 * std::sin(k) / k - 8.0 * std::sin(k) / (k * k * k) +
              8.0 * std::cos(k) / (k * k);
  return {re, 0.0};
}

/// Tridiagonal solve with partial pivoting (one extra superdiagonal of
/// fill-in). Overwrites the inputs; returns the solution in rhs.
inline void solve_tridiagonal(std::vector<Complex>& sub, std::vector<Complex>& diag,
                              std::vector<Complex>& sup, std::vector<Complex>& rhs) {
  const std::size_t m = diag.size();
  std::vector<Complex> sup2(m, Complex{});  // fill-in two above the diagonal
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(sub[i + 1]) > std::abs(diag[i])) {
      std::swap(diag[i], sub[i + 1]);
      std::swap(sup[i], diag[i + 1]);
      // Row i originally had no entry two to the right; row i+1 does after
      // the swap only when i+2 < m.
      if (i + 2 < m) std::swap(sup2[i], sup[i + 1]);
      std::swap(rhs[i], rhs[i + 1]);
    }
    if (diag[i] == Complex{}) throw ContractViolation("moments: singular tridiagonal system");
    Complex factor = sub[i + 1] / diag[i];
    diag[i + 1] -= factor * sup[i];
    if (i + 2 < m) sup[i + 1] -= factor * sup2[i];
    rhs[i + 1] -= factor * rhs[i];
  }
  for (std::size_t ii = m; ii-- > 0;) {
    Complex acc = rhs[ii];
    if (ii + 1 < m) acc -= sup[ii] * rhs[ii + 1];
    if (ii + 2 < m) acc -= sup2[ii] * rhs[ii + 2];
    rhs[ii] = acc / diag[ii];
  }
}

/// Fills rho[a..b] given rho[a-1] (and the recurrence coupling) by solving
/// the boundary-value form of the three-term relation with the far boundary
/// rho_{b+1} = 0. The relation at l >= 2 reads
///
///   -(i k/2)/(l-1) rho_{l-1} + rho_l + (i k/2)/(l+1) rho_{l+1}
///       = -G_l/(l^2-1),
///
/// whose decaying solution is picked out by the far boundary condition; this
/// is the stable direction for l > kappa, where the forward recurrence blows
/// up.
inline void oliver_fill(std::vector<Complex>& rho, double kappa, int a, int b) {
  const int m = b - a + 1;
  std::vector<Complex> sub(m, Complex{}), diag(m, Complex(1.0, 0.0)), sup(m, Complex{}),
      rhs(m);
  const Complex ik_half(0.0, 0.5 * kappa);
  for (int i = 0; i < m; ++i) {
    int l = a + i;
    rhs[i] = -boundary_term(kappa, l) / (static_cast<double>(l) * l - 1.0);
    if (i > 0) sub[i] = -ik_half / static_cast<double>(l - 1);
    if (i + 1 < m) sup[i] = ik_half / static_cast<double>(l + 1);
  }
  rhs[0] += ik_half / static_cast<double>(a - 1) * rho[a - 1];
  solve_tridiagonal(sub, diag, sup, rhs);
  for (int i = 0; i < m; ++i) rho[a + i] = rhs[i];
}

inline std::vector<Complex> rho_values(double kappa, int l_max) {
  std::vector<Complex> rho(l_max + 1);
  rho[0] = std::abs(kappa) < 1e-300 ? Complex(2.0, 0.0)
                                    : Complex(2.0 * std::sin(kappa) / kappa, 0.0);
  if (l_max == 0) return rho;
  rho[1] = rho_one(kappa);

  if (kappa == 0.0) {
    for (int l = 2; l <= l_max; ++l) rho[l] = Complex(chebyshev_line_integral(l), 0.0);
    return rho;
  }

  // Forward recurrence while l stays safely below kappa.
  int forward_max = std::min<double>(l_max, std::floor(kappa) - 1.0);
  if (forward_max >= 2) {
    rho[2] = rho_two(kappa);
    for (int l = 2; l + 1 <= forward_max; ++l) {
      Complex brace = rho[l] + boundary_term(kappa, l) / (static_cast<double>(l) * l - 1.0);
      rho[l + 1] = Complex(0.0, 2.0 * (l + 1) / kappa) * brace +
                   (static_cast<double>(l + 1) / (l - 1)) * rho[l - 1];
    }
  }

  int start = std::max(2, forward_max + 1);
  if (start > l_max) return rho;

  // Boundary-value solve beyond, with the zero boundary pushed well past the
  // recurrence's turning region l ~ kappa (width O(kappa^{1/3})); a re-solve
  // with a farther boundary guards the placement.
  int buffer = 64 + 4 * static_cast<int>(std::ceil(std::cbrt(std::max(1.0, kappa))));
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<Complex> wide(rho.begin(), rho.end());
    wide.resize(l_max + buffer + 1, Complex{});
    oliver_fill(wide, kappa, start, l_max + buffer);
    std::vector<Complex> wider(rho.begin(), rho.end());
    wider.resize(l_max + buffer + 65, Complex{});
    oliver_fill(wider, kappa, start, l_max + buffer + 64);
    double dev = 0.0;
    for (int l = start; l <= l_max; ++l) dev = std::max(dev, std::abs(wide[l] - wider[l]));
    if (dev < 1e-14) {
      for (int l = start; l <= l_max; ++l) rho[l] = wider[l];
      return rho;
    }
    buffer *= 2;
  }
  throw ContractViolation("moments: boundary-value solve did not stabilize at kappa = " +
                          std::to_string(kappa));
}

}  // namespace detail

/// omega_l(kappa) for l = 0..l_max. Negative kappa is handled by conjugation
/// symmetry, kappa = 0 reduces to the plain line integrals.
inline MomentVector moments(double kappa, int l_max) {
  if (l_max < 0)
    throw ContractViolation("moments: l_max must be >= 0, got " + std::to_string(l_max));
  MomentVector out;
  out.kappa = kappa;
  auto rho = detail::rho_values(std::abs(kappa), l_max);
  if (kappa < 0.0)
    for (auto& v : rho) v = std::conj(v);
  out.omega.resize(rho.size());
  for (std::size_t l = 0; l < rho.size(); ++l) {
    if (std::abs(rho[l]) > 2.0 + 1e-9)
      throw ContractViolation("moments: |rho_" + std::to_string(l) + "| = " +
                              std::to_string(std::abs(rho[l])) + " exceeds the a priori bound 2");
    out.omega[l] = 2.0 * kPi * rho[l];
  }
  return out;
}

struct CubatureResult {
  Complex value;
  int n = 0;
  double kappa = 0.0;
};

/// Integrates the grid interpolant of the samples against
/// exp(i kappa cos(theta)): the azimuthal mean's cosine coefficients are
/// paired with the moments, sum'' halving first and last.
inline CubatureResult integrate(const SphericalSamples& samples, const MomentVector& mv) {
  const int n = samples.n;
  if (static_cast<int>(mv.omega.size()) < n + 1)
    throw ContractViolation("integrate: moment vector has " + std::to_string(mv.omega.size()) +
                            " entries, need " + std::to_string(n + 1));
  std::vector<Complex> mean(n + 1);
  const double inv_cols = 1.0 / samples.cols();
  for (int j = 0; j <= n; ++j) {
    Complex acc{};
    const Complex* row = samples.row(j);
    for (int k = 0; k < samples.cols(); ++k) acc += row[k];
    mean[j] = acc * inv_cols;
  }
  auto coef = dct1(std::span<const Complex>(mean), n);
  Complex acc{};
  for (int l = 0; l <= n; ++l) {
    double h = (l == 0 || l == n) ? 0.5 : 1.0;
    acc += h * coef[l] * mv.omega[l];
  }
  CubatureResult out;
  out.value = acc * (2.0 / n);
  out.n = n;
  out.kappa = mv.kappa;

  // |integral| <= 4 pi sup|interpolant|; allow a generous sup factor for the
  // interpolant's overshoot between nodes.
  double bound = 4.0 * kPi * 10.0 * std::max(samples.max_abs(), 1e-300);
  if (std::abs(out.value) > bound)
    throw ContractViolation("integrate: result " + std::to_string(std::abs(out.value)) +
                            " violates the magnitude bound " + std::to_string(bound));
  return out;
}

inline CubatureResult integrate(const SphericalSamples& samples, double kappa) {
  return integrate(samples, moments(kappa, samples.n));
}

/// Absolute cubature errors against a refined reference interpolant, one row
/// per N and one column per kappa.
struct RateTable {
  std::vector<int> n_values;
  std::vector<double> kappas;
  std::vector<Complex> reference;       // per kappa
  std::vector<std::vector<double>> errors;  // [n index][kappa index]
  int reference_n = 0;
};

template <class Fn>
RateTable rate_table(Fn&& fn, std::span<const int> n_values, std::span<const double> kappas,
                     int ref_multiplier = 4) {
  if (n_values.empty()) throw ContractViolation("rate_table: empty N list");
  if (kappas.empty()) throw ContractViolation("rate_table: empty kappa list");
  if (ref_multiplier < 2)
    throw ContractViolation("rate_table: reference multiplier must be >= 2, got " +
                            std::to_string(ref_multiplier));
  RateTable table;
  table.n_values.assign(n_values.begin(), n_values.end());
  table.kappas.assign(kappas.begin(), kappas.end());
  int n_max = *std::max_element(table.n_values.begin(), table.n_values.end());
  table.reference_n = ref_multiplier * n_max;

  auto ref_samples = sample(fn, table.reference_n);
  std::vector<SphericalSamples> coarse;
  coarse.reserve(table.n_values.size());
  for (int n : table.n_values) coarse.push_back(sample(fn, n));

  table.errors.assign(table.n_values.size(), std::vector<double>(table.kappas.size(), 0.0));
  table.reference.resize(table.kappas.size());
  for (std::size_t c = 0; c < table.kappas.size(); ++c) {
    auto mv = moments(table.kappas[c], table.reference_n);
    Complex ref = integrate(ref_samples, mv).value;
    table.reference[c] = ref;
    for (std::size_t r = 0; r < table.n_values.size(); ++r)
      table.errors[r][c] = std::abs(integrate(coarse[r], mv).value - ref);
  }
  return table;
}

inline void write_rate_table_csv(const RateTable& table, std::ostream& os) {
  os << "N\\kappa";
  char buf[64];
  for (double k : table.kappas) {
    std::snprintf(buf, sizeof(buf), ",%.10g", k);
    os << buf;
  }
  os << "\n";
  for (std::size_t r = 0; r < table.n_values.size(); ++r) {
    os << table.n_values[r];
    for (double e : table.errors[r]) {
      std::snprintf(buf, sizeof(buf), ",%.6e", e);
      os << buf;
    }
    os << "\n";
  }
}

}  // namespace spherefft
