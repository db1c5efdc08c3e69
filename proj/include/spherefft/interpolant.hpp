#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "spherefft/grid.hpp"
#include "spherefft/harmonics.hpp"
#include "spherefft/transforms.hpp"

namespace spherefft {

/// Interpolation coefficients of the trigonometric ansatz
///
///   Q(theta, phi) = (2/N) sum_r [ sum''_{l=0}^{N} alpha_{r,l} cos(l theta) ] e^{i mu_e(r) phi}
///               + (2/N) sum_r [ sum_{l=1}^{N-1} beta_{r,l} sin(l theta) ] e^{i mu_o(r) phi},
///
/// where r runs over the N even and N odd azimuthal bins, sum'' halves its
/// first and last terms, and the bin-to-frequency maps mu_e/mu_o are below.
/// The ansatz space has dimension 2N^2 - 2N + 2 on the sphere and matches the
/// grid samples at every node.
struct InterpolantCoefficients {
  int n = 0;
  std::vector<Complex> alpha;  // N x (N+1), row-major; row r is azimuthal bin 2r
  std::vector<Complex> beta;   // N x (N-1), row-major; row r is azimuthal bin 2r+1

  Complex& alpha_at(int r, int l) { return alpha[static_cast<std::size_t>(r) * (n + 1) + l]; }
  const Complex& alpha_at(int r, int l) const {
    return alpha[static_cast<std::size_t>(r) * (n + 1) + l];
  }
  Complex& beta_at(int r, int l) {
    return beta[static_cast<std::size_t>(r) * (n - 1) + (l - 1)];
  }
  const Complex& beta_at(int r, int l) const {
    return beta[static_cast<std::size_t>(r) * (n - 1) + (l - 1)];
  }
};

/// Azimuthal frequency carried by even bin 2r: the DFT bin aliases to the
/// signed frequency in (-N, N].
inline int even_row_frequency(int n, int r) { return 2 * r <= n ? 2 * r : 2 * r - 2 * n; }

/// Azimuthal frequency carried by odd bin 2r+1.
inline int odd_row_frequency(int n, int r) {
  int mu = 2 * r + 1;
  return mu <= n ? mu : mu - 2 * n;
}

/// Builds the interpolant from grid samples in O(N^2 log N): one inverse FFT
/// per latitude row to split off the azimuthal bins, then one cosine (even
/// bins) or sine (odd bins) transform per bin across latitudes.
inline InterpolantCoefficients build(const SphericalSamples& samples) {
  const int n = samples.n;
  SphericalGrid grid = samples.grid();
  const int n_phi = grid.num_phi();

  InterpolantCoefficients out;
  out.n = n;
  out.alpha.assign(static_cast<std::size_t>(n) * (n + 1), Complex{});
  out.beta.assign(static_cast<std::size_t>(n) * (n - 1), Complex{});

  // Azimuthal stage, stored transposed so the latitude stage reads rows.
  Dft az_plan(static_cast<std::size_t>(n_phi));
  std::vector<Complex> bins(static_cast<std::size_t>(n_phi) * (n + 1));
  const double inv_len = 1.0 / n_phi;
  parallel_for(0, static_cast<std::size_t>(n + 1), [&](std::size_t j) {
    std::vector<Complex> row(samples.row(static_cast<int>(j)),
                             samples.row(static_cast<int>(j)) + n_phi);
    az_plan.transform(row, -1);
    for (int c = 0; c < n_phi; ++c)
      bins[static_cast<std::size_t>(c) * (n + 1) + j] = row[c] * inv_len;
  });

  Dft lat_plan(static_cast<std::size_t>(2 * n));
  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t r) {
    std::vector<Complex> work(2 * n);
    const Complex* even_col = &bins[static_cast<std::size_t>(2 * r) * (n + 1)];
    detail::dct1_core(lat_plan, std::span<const Complex>(even_col, n + 1),
                      std::span<Complex>(&out.alpha_at(static_cast<int>(r), 0), n + 1), work);
    const Complex* odd_col = &bins[static_cast<std::size_t>(2 * r + 1) * (n + 1)];
    detail::dst1_core(lat_plan, std::span<const Complex>(odd_col + 1, n - 1),
                      std::span<Complex>(&out.beta_at(static_cast<int>(r), 1), n - 1), work);
  });
  return out;
}

namespace detail {

/// Clenshaw for sum_{k=0}^{L} c(k) T_k(x).
template <class CoefFn>
Complex clenshaw_t(CoefFn&& c, int l_max, double x) {
  Complex b1{}, b2{};
  for (int k = l_max; k >= 1; --k) {
    Complex b0 = c(k) + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c(0) + x * b1 - b2;
}

/// Clenshaw for sum_{k=0}^{L} d(k) U_k(x).
template <class CoefFn>
Complex clenshaw_u(CoefFn&& d, int l_max, double x) {
  if (l_max < 0) return Complex{};
  Complex b1{}, b2{};
  for (int k = l_max; k >= 1; --k) {
    Complex b0 = d(k) + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return d(0) + 2.0 * x * b1 - b2;
}

struct ThetaPolynomials {
  // value(a, r) and d_theta(a, r) of mode row r at theta_a; even rows first.
  Eigen::MatrixXcd value;
  Eigen::MatrixXcd d_theta;
};

/// Evaluates every mode row's latitude polynomial (and optionally its theta
/// derivative) at the given angles.
inline ThetaPolynomials theta_polynomials(const InterpolantCoefficients& q,
                                          std::span<const double> thetas, bool with_gradient) {
  const int n = q.n;
  const double scale = 2.0 / n;
  const std::size_t n_t = thetas.size();
  ThetaPolynomials out;
  out.value.resize(n_t, 2 * n);
  if (with_gradient) out.d_theta.resize(n_t, 2 * n);

  parallel_for(0, n_t, [&](std::size_t a) {
    const double x = std::cos(thetas[a]);
    const double s = std::sin(thetas[a]);
    for (int r = 0; r < n; ++r) {
      const Complex* ce = &q.alpha_at(r, 0);
      auto even_coef = [&](int k) {
        return (k == 0 || k == n) ? 0.5 * scale * ce[k] : scale * ce[k];
      };
      out.value(a, r) = clenshaw_t(even_coef, n, x);
      const Complex* co = &q.beta_at(r, 1);
      auto odd_coef = [&](int k) { return scale * co[k]; };
      out.value(a, n + r) = s * clenshaw_u(odd_coef, n - 2, x);
      if (with_gradient) {
        auto even_deriv = [&](int k) { return -static_cast<double>(k + 1) * even_coef(k + 1); };
        out.d_theta(a, r) = s * clenshaw_u(even_deriv, n - 1, x);
        auto odd_deriv = [&](int k) {
          return k == 0 ? Complex{} : static_cast<double>(k) * scale * co[k - 1];
        };
        out.d_theta(a, n + r) = clenshaw_t(odd_deriv, n - 1, x);
      }
    }
  });
  return out;
}

inline int mode_row_frequency(int n, int row) {
  return row < n ? even_row_frequency(n, row) : odd_row_frequency(n, row - n);
}

}  // namespace detail

struct PointGradient {
  Complex value;
  Complex d_theta;
  Complex d_phi;
};

/// Direct evaluation at one point, O(N^2).
inline PointGradient evaluate_with_gradient(const InterpolantCoefficients& q, double theta,
                                            double phi) {
  if (q.n < 2) throw ContractViolation("evaluate: coefficients are empty");
  const int n = q.n;
  double th[1] = {theta};
  auto polys = detail::theta_polynomials(q, std::span<const double>(th, 1), true);
  PointGradient out{};
  for (int row = 0; row < 2 * n; ++row) {
    int mu = detail::mode_row_frequency(n, row);
    Complex phase = std::polar(1.0, mu * phi);
    out.value += polys.value(0, row) * phase;
    out.d_theta += polys.d_theta(0, row) * phase;
    out.d_phi += polys.value(0, row) * phase * Complex(0.0, static_cast<double>(mu));
  }
  return out;
}

inline Complex evaluate(const InterpolantCoefficients& q, double theta, double phi) {
  if (q.n < 2) throw ContractViolation("evaluate: coefficients are empty");
  const int n = q.n;
  double th[1] = {theta};
  auto polys = detail::theta_polynomials(q, std::span<const double>(th, 1), false);
  Complex acc{};
  for (int row = 0; row < 2 * n; ++row)
    acc += polys.value(0, row) * std::polar(1.0, detail::mode_row_frequency(n, row) * phi);
  return acc;
}

/// Values (and first partials) on the tensor grid thetas x phis, stored
/// row-major over (theta index, phi index). The heavy lifting is two or three
/// matrix products against the azimuthal phase matrix.
struct FieldMatrices {
  std::size_t n_theta = 0, n_phi = 0;
  Eigen::MatrixXcd value;    // n_theta x n_phi
  Eigen::MatrixXcd d_theta;  // empty unless gradients were requested
  Eigen::MatrixXcd d_phi;
};

inline FieldMatrices evaluate_on_product_grid(const InterpolantCoefficients& q,
                                              std::span<const double> thetas,
                                              std::span<const double> phis, bool with_gradient) {
  if (q.n < 2) throw ContractViolation("evaluate_on_product_grid: coefficients are empty");
  const int n = q.n;
  auto polys = detail::theta_polynomials(q, thetas, with_gradient);

  Eigen::MatrixXcd phases(2 * n, phis.size());
  Eigen::MatrixXcd phases_dphi(2 * n, phis.size());
  for (int row = 0; row < 2 * n; ++row) {
    int mu = detail::mode_row_frequency(n, row);
    for (std::size_t b = 0; b < phis.size(); ++b) {
      Complex e = std::polar(1.0, mu * phis[b]);
      phases(row, b) = e;
      phases_dphi(row, b) = e * Complex(0.0, static_cast<double>(mu));
    }
  }

  FieldMatrices out;
  out.n_theta = thetas.size();
  out.n_phi = phis.size();
  out.value = polys.value * phases;
  if (with_gradient) {
    out.d_theta = polys.d_theta * phases;
    out.d_phi = polys.value * phases_dphi;
  }
  return out;
}

/// Evaluates the interpolant on the refinement of its own grid with
/// refine * N latitude intervals, in O((MN)^2 log(MN)) via zero-padded
/// transforms. refine = 1 reproduces the build samples.
inline SphericalSamples evaluate_grid(const InterpolantCoefficients& q, int refine) {
  if (q.n < 2) throw ContractViolation("evaluate_grid: coefficients are empty");
  if (refine < 1)
    throw ContractViolation("evaluate_grid: refine must be >= 1, got " + std::to_string(refine));
  const int n = q.n;
  const int nr = refine * n;
  const double scale = 2.0 / n;

  // Latitude stage: padded cosine/sine transforms give each mode row's
  // values at the refined colatitudes.
  Dft lat_plan(static_cast<std::size_t>(2 * nr));
  Eigen::MatrixXcd rows(2 * n, nr + 1);
  parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t r) {
    std::vector<Complex> work(2 * nr);
    std::vector<Complex> padded(nr + 1, Complex{});
    std::vector<Complex> vals(nr + 1);
    for (int l = 0; l <= n; ++l) padded[l] = q.alpha_at(static_cast<int>(r), l);
    if (nr > n) padded[n] *= 0.5;  // interior now; sum'' no longer halves it
    detail::dct1_core(lat_plan, padded, vals, work);
    for (int j = 0; j <= nr; ++j) rows(static_cast<Eigen::Index>(r), j) = scale * vals[j];

    std::vector<Complex> padded_odd(nr - 1, Complex{});
    std::vector<Complex> vals_odd(nr - 1);
    for (int l = 1; l < n; ++l) padded_odd[l - 1] = q.beta_at(static_cast<int>(r), l);
    detail::dst1_core(lat_plan, padded_odd, vals_odd, work);
    rows(static_cast<Eigen::Index>(n + r), 0) = Complex{};
    rows(static_cast<Eigen::Index>(n + r), nr) = Complex{};
    for (int j = 1; j < nr; ++j) rows(static_cast<Eigen::Index>(n + r), j) = scale * vals_odd[j - 1];
  });

  // Azimuthal stage: scatter each mode row into its aliased bin and run a
  // forward FFT per refined latitude.
  SphericalSamples out(nr);
  const int n_phi = out.cols();
  Dft az_plan(static_cast<std::size_t>(n_phi));
  std::vector<int> bin_of(2 * n);
  for (int row = 0; row < 2 * n; ++row) {
    int mu = detail::mode_row_frequency(n, row);
    bin_of[row] = ((mu % n_phi) + n_phi) % n_phi;
  }
  parallel_for(0, static_cast<std::size_t>(nr + 1), [&](std::size_t j) {
    std::vector<Complex> spectrum(n_phi, Complex{});
    for (int row = 0; row < 2 * n; ++row)
      spectrum[bin_of[row]] += rows(row, static_cast<Eigen::Index>(j));
    az_plan.transform(spectrum, +1);
    for (int k = 0; k < n_phi; ++k) out.at(static_cast<int>(j), k) = spectrum[k];
  });
  return out;
}

struct ReproduceReport {
  double max_deviation = 0.0;  // worst |Q_N g - g| over all trials and points
  double scale = 1.0;          // sup-norm bound of the worst trial's g
  double relative = 0.0;       // max_deviation / scale
};

/// Draws random harmonic expansions of the given degree, interpolates their
/// grid samples, and measures the worst pointwise deviation from the exact
/// expansion. Expansions of degree < N lie inside the ansatz space, so the
/// relative deviation is at rounding level for them.
inline ReproduceReport reproduce_check(int n, int degree, int trials, std::uint64_t seed = 12345) {
  if (trials < 1)
    throw ContractViolation("reproduce_check: trials must be >= 1, got " + std::to_string(trials));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, kPi);
  std::uniform_real_distribution<double> up(0.0, 2.0 * kPi);
  ReproduceReport report;
  for (int trial = 0; trial < trials; ++trial) {
    auto poly = random_spherical_polynomial(degree, rng);
    auto samples = sample([&poly](double t, double p) { return poly(t, p); }, n);
    auto q = build(samples);
    double dev = 0.0;
    const int points = 200;
    for (int i = 0; i < points; ++i) {
      double t = ut(rng), p = up(rng);
      dev = std::max(dev, std::abs(evaluate(q, t, p) - poly(t, p)));
    }
    double scale = std::max(1e-300, poly.sup_bound());
    if (dev / scale > report.relative) {
      report.relative = dev / scale;
      report.max_deviation = dev;
      report.scale = scale;
    }
  }
  return report;
}

/// Writes {"N": .., "alpha": [[re, im], ..], "beta": [[re, im], ..]} with the
/// coefficient rows flattened in row-major order.
inline void write_coefficients_json(const InterpolantCoefficients& q, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  auto emit_array = [&os](const std::vector<Complex>& v) {
    os << "[";
    char buf[80];
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%s[%.17g, %.17g]", i == 0 ? "" : ", ", v[i].real(),
                    v[i].imag());
      os << buf;
    }
    os << "]";
  };
  os << "{\n  \"N\": " << q.n << ",\n  \"alpha\": ";
  emit_array(q.alpha);
  os << ",\n  \"beta\": ";
  emit_array(q.beta);
  os << "\n}\n";
  if (!os) throw IoError(path + ": write failed");
}

}  // namespace spherefft
