#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "spherefft/common.hpp"

namespace spherefft {

/// Normalized associated Legendre functions Q_n^m(theta) with
/// int_0^pi Q_n^m(theta)^2 sin(theta) dtheta = 1 and the Condon-Shortley
/// phase folded in, so Q_0^0 = 1/sqrt(2) and Q_1^0 = sqrt(3/2) cos(theta).
///
/// Everything is computed in sin(theta)/cos(theta) directly (never through
/// cos(theta) alone), which keeps the recurrences stable at the poles and
/// makes the functions well defined for any real theta.

namespace detail {

/// Q_m^m, Q_{m+1}^m, then the normalized three-term recurrence upward in n:
///   Q_n^m = A cos(theta) Q_{n-1}^m - C Q_{n-2}^m,
///   A = sqrt((4n^2-1)/(n^2-m^2)),
///   C = sqrt((2n+1)((n-1)^2-m^2) / ((2n-3)(n^2-m^2))).
inline void legendre_q_column_into(int n_max, int m_abs, double st, double ct,
                                   std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(n_max - m_abs + 1), 0.0);
  double q_diag = 1.0 / std::sqrt(2.0);
  for (int m = 1; m <= m_abs; ++m)
    q_diag *= -st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  out[0] = q_diag;
  if (n_max == m_abs) return;
  out[1] = std::sqrt(2.0 * m_abs + 3.0) * ct * q_diag;
  for (int n = m_abs + 2; n <= n_max; ++n) {
    double nn = static_cast<double>(n), mm = static_cast<double>(m_abs);
    double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - mm * mm));
    double c = std::sqrt((2.0 * nn + 1.0) * ((nn - 1.0) * (nn - 1.0) - mm * mm) /
                         ((2.0 * nn - 3.0) * (nn * nn - mm * mm)));
    out[n - m_abs] = a * ct * out[n - m_abs - 1] - c * out[n - m_abs - 2];
  }
}

}  // namespace detail

/// Q_n^m(theta) for n = |m|..n_max (index i holds degree |m| + i).
inline std::vector<double> legendre_q_column(int n_max, int m, double theta) {
  int m_abs = std::abs(m);
  if (n_max < m_abs)
    throw ContractViolation("legendre_q_column: need n_max >= |m|, got n_max = " +
                            std::to_string(n_max) + ", m = " + std::to_string(m));
  std::vector<double> out;
  detail::legendre_q_column_into(n_max, m_abs, std::sin(theta), std::cos(theta), out);
  return out;
}

inline double legendre_q(int n, int m, double theta) {
  if (n < 0) throw ContractViolation("legendre_q: degree must be >= 0, got " + std::to_string(n));
  if (std::abs(m) > n)
    throw ContractViolation("legendre_q: need |m| <= n, got n = " + std::to_string(n) +
                            ", m = " + std::to_string(m));
  return legendre_q_column(n, m, theta).back();
}

/// Orthonormal spherical harmonic
///   Y_n^m(theta, phi) = (-1)^{(m+|m|)/2} Q_n^{|m|}(theta) e^{i m phi} / sqrt(2 pi),
/// so Y_0^0 = 1/sqrt(4 pi) and Y_1^0 = sqrt(3/(4 pi)) cos(theta).
inline Complex spherical_harmonic(int n, int m, double theta, double phi) {
  double q = legendre_q(n, m, theta);
  double phase = (m > 0 && m % 2 != 0) ? -1.0 : 1.0;
  return phase * q / std::sqrt(2.0 * kPi) *
         std::polar(1.0, static_cast<double>(m) * phi);
}

/// Finite harmonic expansion sum_{n<=degree} sum_{|m|<=n} c_{n,m} Y_n^m,
/// evaluated by direct summation (one Legendre column per order m).
struct SphericalPolynomial {
  int degree = 0;
  std::vector<Complex> coef;  // index n^2 + n + m

  const Complex& c(int n, int m) const { return coef[static_cast<std::size_t>(n) * n + n + m]; }
  Complex& c(int n, int m) { return coef[static_cast<std::size_t>(n) * n + n + m]; }

  Complex operator()(double theta, double phi) const {
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    Complex acc{};
    std::vector<double> col;
    for (int m = -degree; m <= degree; ++m) {
      int m_abs = std::abs(m);
      detail::legendre_q_column_into(degree, m_abs, std::sin(theta), std::cos(theta), col);
      Complex inner{};
      for (int n = m_abs; n <= degree; ++n) inner += c(n, m) * col[n - m_abs];
      double phase = (m > 0 && m % 2 != 0) ? -1.0 : 1.0;
      acc += inner * (phase * norm) * std::polar(1.0, m * phi);
    }
    return acc;
  }

  /// sum |c_{n,m}| sup|Y_n^m|; a sup-norm bound used to scale tolerances.
  double sup_bound() const {
    double s = 0.0;
    for (int n = 0; n <= degree; ++n)
      for (int m = -n; m <= n; ++m)
        s += std::abs(c(n, m)) * std::sqrt((2.0 * n + 1.0) / (4.0 * kPi));
    return s;
  }
};

template <class Rng>
SphericalPolynomial random_spherical_polynomial(int degree, Rng& rng) {
  if (degree < 0)
    throw ContractViolation("random_spherical_polynomial: degree must be >= 0, got " +
                            std::to_string(degree));
  SphericalPolynomial p;
  p.degree = degree;
  p.coef.assign(static_cast<std::size_t>(degree + 1) * (degree + 1), Complex{});
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& z : p.coef) z = Complex(dist(rng), dist(rng));
  return p;
}

}  // namespace spherefft
