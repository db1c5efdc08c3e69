#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <type_traits>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spherefft/common.hpp"

namespace spherefft {

/// Uniform spherical-polar grid: theta_j = j pi / N for j = 0..N and
/// phi_k = k pi / N for k = 0..2N-1. Rows j = 0 and j = N are the poles, so
/// the (N+1) x 2N parameter grid covers 2N(N-1) + 2 distinct sphere points,
/// which equals the dimension of the interpolation space.
struct SphericalGrid {
  int n;

  explicit SphericalGrid(int n_in) : n(n_in) {
    if (n < 2) throw ContractViolation("SphericalGrid: N must be >= 2, got " + std::to_string(n));
  }

  int num_theta() const { return n + 1; }
  int num_phi() const { return 2 * n; }
  double theta(int j) const { return kPi * j / n; }
  double phi(int k) const { return kPi * k / n; }
  long long num_points() const { return 2LL * n * (n - 1) + 2; }
  long long dimension() const { return 2LL * n * n - 2LL * n + 2; }
};

/// Function values on a SphericalGrid, row-major over (j, k).
struct SphericalSamples {
  int n = 0;
  std::vector<Complex> values;

  SphericalSamples() = default;
  explicit SphericalSamples(int n_in) : n(n_in) {
    SphericalGrid check(n);
    values.assign(static_cast<std::size_t>(n + 1) * (2 * n), Complex{});
  }

  SphericalGrid grid() const { return SphericalGrid(n); }
  int rows() const { return n + 1; }
  int cols() const { return 2 * n; }
  Complex& at(int j, int k) { return values[static_cast<std::size_t>(j) * cols() + k]; }
  const Complex& at(int j, int k) const {
    return values[static_cast<std::size_t>(j) * cols() + k];
  }
  Complex* row(int j) { return values.data() + static_cast<std::size_t>(j) * cols(); }
  const Complex* row(int j) const {
    return values.data() + static_cast<std::size_t>(j) * cols();
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

/// A test integrand with analytic first partials in the spherical angles.
struct TestFunction {
  std::string name;
  std::string smoothness;
  std::function<double(double, double)> f;
  std::function<double(double, double)> df_dtheta;
  std::function<double(double, double)> df_dphi;
};

namespace detail {

inline double clamp_nonneg(double x) { return x > 0.0 ? x : 0.0; }

/// coeff * pow(g, e), extended by continuity where the base vanishes: the
/// coefficient factors vanish faster than any negative power blows up, so
/// the limit at g = 0 is 0 (and coeff itself for e = 0). Without this the
/// singular parameter points would produce 0 * inf.
inline double guarded_term(double coeff, double g, double e) {
  if (coeff == 0.0) return 0.0;
  if (g <= 0.0) return e == 0.0 ? coeff : 0.0;
  return coeff * std::pow(g, e);
}

inline TestFunction make_f1() {
  auto den = [](double t, double p) {
    return 4.0 + std::sin(t) * (std::cos(p) + std::sin(p)) + std::cos(t);
  };
  TestFunction fn;
  fn.name = "F1";
  fn.smoothness = "analytic on the sphere";
  fn.f = [den](double t, double p) { return 1.0 / den(t, p); };
  fn.df_dtheta = [den](double t, double p) {
    double d = den(t, p);
    double dd = std::cos(t) * (std::cos(p) + std::sin(p)) - std::sin(t);
    return -dd / (d * d);
  };
  fn.df_dphi = [den](double t, double p) {
    double d = den(t, p);
    double dd = std::sin(t) * (std::cos(p) - std::sin(p));
    return -dd / (d * d);
  };
  return fn;
}

/// (1 - sin^2(theta) cos^2(phi))^s * sin(theta) sin(phi) cos(theta); the
/// exponent s controls the Sobolev regularity at the two points where the
/// base vanishes.
inline TestFunction make_power_function(const char* name, double s, const char* smoothness) {
  auto base = [](double t, double p) {
    double sc = std::sin(t) * std::cos(p);
    return clamp_nonneg(1.0 - sc * sc);
  };
  TestFunction fn;
  fn.name = name;
  fn.smoothness = smoothness;
  fn.f = [base, s](double t, double p) {
    double yz = std::sin(t) * std::sin(p) * std::cos(t);
    return guarded_term(yz, base(t, p), s);
  };
  fn.df_dtheta = [base, s](double t, double p) {
    double g = base(t, p);
    double yz = std::sin(t) * std::sin(p) * std::cos(t);
    double dg = -std::sin(2.0 * t) * std::cos(p) * std::cos(p);
    double dyz = std::sin(p) * std::cos(2.0 * t);
    return guarded_term(s * dg * yz, g, s - 1.0) + guarded_term(dyz, g, s);
  };
  fn.df_dphi = [base, s](double t, double p) {
    double g = base(t, p);
    double st = std::sin(t);
    double yz = st * std::sin(p) * std::cos(t);
    double dg = st * st * std::sin(2.0 * p);
    double dyz = st * std::cos(p) * std::cos(t);
    return guarded_term(s * dg * yz, g, s - 1.0) + guarded_term(dyz, g, s);
  };
  return fn;
}

/// dist(x, x*)^3 = (2 - 2 x . x*)^{3/2} for the direction x* along (1,1,1).
inline TestFunction make_f4() {
  constexpr double a = 0.57735026918962576451;
  auto dot = [](double t, double p) {
    return a * (std::sin(t) * (std::cos(p) + std::sin(p)) + std::cos(t));
  };
  TestFunction fn;
  fn.name = "F4";
  fn.smoothness = "H^s for s < 4";
  fn.f = [dot](double t, double p) {
    double r2 = clamp_nonneg(2.0 - 2.0 * dot(t, p));
    return r2 * std::sqrt(r2);
  };
  fn.df_dtheta = [dot](double t, double p) {
    double r2 = clamp_nonneg(2.0 - 2.0 * dot(t, p));
    double dd = a * (std::cos(t) * (std::cos(p) + std::sin(p)) - std::sin(t));
    return -3.0 * std::sqrt(r2) * dd;
  };
  fn.df_dphi = [dot](double t, double p) {
    double r2 = clamp_nonneg(2.0 - 2.0 * dot(t, p));
    double dd = a * std::sin(t) * (std::cos(p) - std::sin(p));
    return -3.0 * std::sqrt(r2) * dd;
  };
  return fn;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"F1", "F2", "F3", "F4"};
  return names;
}

/// Looks up one of the built-in test functions F1..F4 by name.
inline TestFunction builtin(const std::string& name) {
  if (name == "F1") return detail::make_f1();
  if (name == "F2") return detail::make_power_function("F2", 0.5, "H^s for s < 4");
  if (name == "F3") return detail::make_power_function("F3", -0.5, "H^s for s < 2");
  if (name == "F4") return detail::make_f4();
  std::string known;
  for (const auto& s : builtin_names()) known += (known.empty() ? "" : ", ") + s;
  throw ContractViolation("builtin: unknown function '" + name + "' (known: " + known + ")");
}

/// Samples fn on the grid; the two pole rows are filled with a single
/// function evaluation each, so they are constant by construction.
template <class Fn>
  requires std::is_invocable_v<Fn&, double, double>
SphericalSamples sample(Fn&& fn, int n) {
  SphericalSamples s(n);
  SphericalGrid g = s.grid();
  const Complex north{fn(0.0, 0.0)};
  const Complex south{fn(kPi, 0.0)};
  for (int k = 0; k < g.num_phi(); ++k) {
    s.at(0, k) = north;
    s.at(n, k) = south;
  }
  parallel_for(1, static_cast<std::size_t>(n), [&](std::size_t j) {
    double theta = g.theta(static_cast<int>(j));
    for (int k = 0; k < g.num_phi(); ++k)
      s.at(static_cast<int>(j), k) = Complex{fn(theta, g.phi(k))};
  });
  return s;
}

inline SphericalSamples sample(const TestFunction& fn, int n) {
  return sample([&fn](double t, double p) { return fn.f(t, p); }, n);
}

namespace detail {

inline constexpr char kBinaryMagic[4] = {'S', 'P', 'H', '1'};

inline void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 4);
}

inline void put_f64(std::ostream& os, double d) {
  auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

inline bool get_u32(std::istream& is, std::uint32_t& v) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return true;
}

inline bool get_f64(std::istream& is, double& d) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  d = std::bit_cast<double>(v);
  return true;
}

inline void format_entry(std::ostream& os, const Complex& z) {
  char buf[64];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof(buf), "%.17g", z.real());
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", z.real(), z.imag());
  }
  os << buf;
}

inline Complex parse_entry(const std::string& token, const std::string& path, int line) {
  const char* s = token.c_str();
  char* end = nullptr;
  double re = std::strtod(s, &end);
  if (end == s)
    throw IoError(path + ":" + std::to_string(line) + ": cannot parse value '" + token + "'");
  double im = 0.0;
  if (*end == '+' || *end == '-') {
    const char* im_start = end;
    im = std::strtod(im_start, &end);
    if (end == im_start || *end != 'j')
      throw IoError(path + ":" + std::to_string(line) + ": cannot parse value '" + token +
                    "' (expected re or re+imj)");
    ++end;
  }
  while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
  if (*end != '\0')
    throw IoError(path + ":" + std::to_string(line) + ": trailing characters in value '" + token +
                  "'");
  if (!std::isfinite(re) || !std::isfinite(im))
    throw IoError(path + ":" + std::to_string(line) + ": non-finite value '" + token + "'");
  return {re, im};
}

inline void check_poles(const SphericalSamples& s, bool strict, const std::string& origin) {
  double scale = std::max(1.0, s.max_abs());
  for (int j : {0, s.n}) {
    double dev = 0.0;
    for (int k = 1; k < s.cols(); ++k) dev = std::max(dev, std::abs(s.at(j, k) - s.at(j, 0)));
    if (dev > 1e-9 * scale) {
      std::string msg = origin + ": pole row j=" + std::to_string(j) +
                        " is not constant (max deviation " + std::to_string(dev) + ")";
      if (strict) throw ContractViolation(msg);
      std::cerr << "warning: " << msg << "\n";
    }
  }
}

}  // namespace detail

enum class SampleFormat { text, binary };

inline void write_samples(const SphericalSamples& s, const std::string& path, SampleFormat fmt) {
  if (fmt == SampleFormat::binary) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError(path + ": cannot open for writing");
    os.write(detail::kBinaryMagic, 4);
    detail::put_u32(os, static_cast<std::uint32_t>(s.n));
    for (const auto& z : s.values) {
      detail::put_f64(os, z.real());
      detail::put_f64(os, z.imag());
    }
    if (!os) throw IoError(path + ": write failed");
    return;
  }
  std::ofstream os(path);
  if (!os) throw IoError(path + ": cannot open for writing");
  os << "N=" << s.n << "\n";
  for (int j = 0; j <= s.n; ++j) {
    for (int k = 0; k < s.cols(); ++k) {
      if (k > 0) os << ",";
      detail::format_entry(os, s.at(j, k));
    }
    os << "\n";
  }
  if (!os) throw IoError(path + ": write failed");
}

/// Picks the binary layout for .sph paths, the text layout otherwise.
inline void write_samples(const SphericalSamples& s, const std::string& path) {
  bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".sph") == 0;
  write_samples(s, path, binary ? SampleFormat::binary : SampleFormat::text);
}

/// Reads either layout (the binary one is detected by its magic bytes) and
/// runs the pole-consistency check: inconsistent pole rows throw in strict
/// mode and warn otherwise.
inline SphericalSamples read_samples(const std::string& path, bool strict_poles = false) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError(path + ": cannot open for reading");
  char magic[4] = {};
  probe.read(magic, 4);
  bool binary = probe.gcount() == 4 && std::equal(magic, magic + 4, detail::kBinaryMagic);

  SphericalSamples s;
  if (binary) {
    std::uint32_t n32 = 0;
    if (!detail::get_u32(probe, n32)) throw IoError(path + ": truncated header");
    if (n32 < 2 || n32 > (1u << 20))
      throw IoError(path + ": header N=" + std::to_string(n32) + " out of range");
    s = SphericalSamples(static_cast<int>(n32));
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      double re = 0.0, im = 0.0;
      if (!detail::get_f64(probe, re) || !detail::get_f64(probe, im))
        throw IoError(path + ": truncated data (expected " + std::to_string(s.values.size()) +
                      " entries, got " + std::to_string(i) + ")");
      if (!std::isfinite(re) || !std::isfinite(im))
        throw IoError(path + ": non-finite value at entry " + std::to_string(i));
      s.values[i] = {re, im};
    }
    if (probe.peek() != std::char_traits<char>::eof())
      throw IoError(path + ": trailing bytes after sample data");
  } else {
    probe.close();
    std::ifstream is(path);
    if (!is) throw IoError(path + ": cannot open for reading");
    std::string line;
    if (!std::getline(is, line)) throw IoError(path + ":1: empty file");
    if (line.rfind("N=", 0) != 0)
      throw IoError(path + ":1: expected header 'N=<int>', got '" + line + "'");
    int n = 0;
    try {
      n = std::stoi(line.substr(2));
    } catch (const std::exception&) {
      throw IoError(path + ":1: cannot parse N from '" + line + "'");
    }
    if (n < 2) throw IoError(path + ":1: N must be >= 2, got " + std::to_string(n));
    s = SphericalSamples(n);
    for (int j = 0; j <= n; ++j) {
      if (!std::getline(is, line))
        throw IoError(path + ": expected " + std::to_string(n + 1) + " sample rows, got " +
                      std::to_string(j));
      int line_no = j + 2;
      std::stringstream ss(line);
      std::string token;
      int k = 0;
      while (std::getline(ss, token, ',')) {
        if (k >= s.cols())
          throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(s.cols()) + " entries per row, got more");
        s.at(j, k) = detail::parse_entry(token, path, line_no);
        ++k;
      }
      if (k != s.cols())
        throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(s.cols()) + " entries per row, got " + std::to_string(k));
    }
    while (std::getline(is, line)) {
      if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
        throw IoError(path + ": unexpected extra row after " + std::to_string(n + 1) +
                      " sample rows");
    }
  }
  detail::check_poles(s, strict_poles, path);
  return s;
}

}  // namespace spherefft
