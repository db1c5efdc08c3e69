#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spherefft/common.hpp"

namespace spherefft {

/// Discrete transforms on the uniform grid, with the conventions used
/// throughout this library:
///
///   dst1(y, N)_j  = sum_{k=1}^{N-1} y_k sin(k j pi / N),      j = 1..N-1
///   dct1(x, N)_j  = sum''_{k=0}^{N} x_k cos(k j pi / N),      j = 0..N
///   fft(f)_k      = sum_{j=0}^{M-1} f_j exp(+2 pi i j k / M), k = 0..M-1
///   ifft(z)_j     = (1/M) sum_{k=0}^{M-1} z_k exp(-2 pi i j k / M)
///
/// where sum'' halves the first and last terms. DST-I and DCT-I are (2/N)
/// times their own inverses; idst1/idct1 apply that factor. fft/ifft are a
/// round-trip pair for any length M >= 1, including non-powers of two.

/// Complex DFT plan: out_k = sum_j in_j exp(sign * 2 pi i j k / n).
/// Powers of two run the iterative radix-2 kernel; other lengths go through
/// Bluestein's chirp-z embedding into a power-of-two convolution.
class Dft {
 public:
  explicit Dft(std::size_t n) : n_(n) {
    if (n == 0) throw ContractViolation("Dft: size must be >= 1, got 0");
    if (is_pow2(n)) {
      init_pow2(n);
    } else {
      init_bluestein(n);
    }
  }

  std::size_t size() const { return n_; }

  /// In-place transform; sign must be +1 or -1. data.size() must equal size().
  void transform(std::span<Complex> data, int sign) const {
    if (data.size() != n_)
      throw ContractViolation("Dft::transform: expected length " + std::to_string(n_) +
                              ", got " + std::to_string(data.size()));
    if (sign != 1 && sign != -1)
      throw ContractViolation("Dft::transform: sign must be +1 or -1");
    if (n_ == 1) return;
    if (sub_ == nullptr) {
      radix2(data.data(), sign);
    } else {
      bluestein(data.data(), sign);
    }
  }

 private:
  static bool is_pow2(std::size_t n) { return (n & (n - 1)) == 0; }

  void init_pow2(std::size_t n) {
    tw_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
      tw_[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    rev_.resize(n);
    std::uint32_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::uint32_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      rev_[i] = static_cast<std::uint32_t>(r);
    }
  }

  void init_bluestein(std::size_t n) {
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    m_ = m;
    sub_ = std::make_unique<Dft>(m);
    chirp_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t r = (j * j) % (2 * n);
      chirp_[j] = std::polar(1.0, -kPi * static_cast<double>(r) / static_cast<double>(n));
    }
    std::vector<Complex> v(m, Complex{});
    v[0] = std::conj(chirp_[0]);
    for (std::size_t t = 1; t < n; ++t) v[t] = v[m - t] = std::conj(chirp_[t]);
    sub_->transform(v, -1);
    vfreq_ = std::move(v);
  }

  void radix2(Complex* a, int sign) const {
    std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = rev_[i];
      if (i < r) std::swap(a[i], a[r]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      std::size_t half = len / 2, step = n / len;
      for (std::size_t base = 0; base < n; base += len) {
        for (std::size_t k = 0; k < half; ++k) {
          Complex w = tw_[k * step];
          if (sign > 0) w = std::conj(w);
          Complex u = a[base + k];
          Complex v = a[base + k + half] * w;
          a[base + k] = u + v;
          a[base + k + half] = u - v;
        }
      }
    }
  }

  // Chirp-z: out_k = chirp_k * (u * v)_k with u_j = in_j chirp_j and
  // v_t = conj(chirp_|t|); the circular convolution runs at length m_.
  // The kernel is native to sign -1; sign +1 conjugates in and out.
  void bluestein(Complex* a, int sign) const {
    std::size_t n = n_;
    if (sign > 0)
      for (std::size_t j = 0; j < n; ++j) a[j] = std::conj(a[j]);
    std::vector<Complex> u(m_, Complex{});
    for (std::size_t j = 0; j < n; ++j) u[j] = a[j] * chirp_[j];
    sub_->transform(u, -1);
    for (std::size_t k = 0; k < m_; ++k) u[k] *= vfreq_[k];
    sub_->transform(u, +1);
    double inv_m = 1.0 / static_cast<double>(m_);
    for (std::size_t k = 0; k < n; ++k) {
      Complex out = chirp_[k] * (u[k] * inv_m);
      a[k] = sign > 0 ? std::conj(out) : out;
    }
  }

  std::size_t n_;
  std::vector<Complex> tw_;
  std::vector<std::uint32_t> rev_;
  std::size_t m_ = 0;
  std::vector<Complex> chirp_;
  std::vector<Complex> vfreq_;
  std::unique_ptr<Dft> sub_;
};

namespace detail {

inline void check_length(const char* op, std::size_t expected, std::size_t got) {
  if (expected != got)
    throw ContractViolation(std::string(op) + ": expected input length " +
                            std::to_string(expected) + ", got " + std::to_string(got));
}

/// DST-I of x (length N-1) through the odd extension
/// (0, x_1..x_{N-1}, 0, -x_{N-1}..-x_1) of length 2N: the sign -1 DFT of the
/// extension satisfies w_j = -2i * dst1_j.
inline void dst1_core(const Dft& plan2n, std::span<const Complex> x, std::span<Complex> out,
                      std::span<Complex> work) {
  std::size_t two_n = plan2n.size();
  std::size_t n = two_n / 2;
  work[0] = Complex{};
  work[n] = Complex{};
  for (std::size_t k = 1; k < n; ++k) {
    work[k] = x[k - 1];
    work[two_n - k] = -x[k - 1];
  }
  plan2n.transform(work, -1);
  const Complex half_i{0.0, 0.5};
  for (std::size_t j = 1; j < n; ++j) out[j - 1] = half_i * work[j];
}

/// DCT-I of x (length N+1) through the even extension
/// (x_0..x_N, x_{N-1}..x_1) of length 2N: the DFT of the extension satisfies
/// w_j = 2 * dct1_j (the extension absorbs the sum'' halving).
inline void dct1_core(const Dft& plan2n, std::span<const Complex> x, std::span<Complex> out,
                      std::span<Complex> work) {
  std::size_t two_n = plan2n.size();
  std::size_t n = two_n / 2;
  work[0] = x[0];
  work[n] = x[n];
  for (std::size_t k = 1; k < n; ++k) {
    work[k] = x[k];
    work[two_n - k] = x[k];
  }
  plan2n.transform(work, -1);
  for (std::size_t j = 0; j <= n; ++j) out[j] = 0.5 * work[j];
}

inline std::vector<double> real_parts(const std::vector<Complex>& z) {
  std::vector<double> r(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i].real();
  return r;
}

inline std::vector<Complex> widen(std::span<const double> x) {
  return std::vector<Complex>(x.begin(), x.end());
}

}  // namespace detail

inline std::vector<Complex> dst1(std::span<const Complex> y, int big_n) {
  if (big_n < 2) throw ContractViolation("dst1: N must be >= 2, got " + std::to_string(big_n));
  std::size_t n = static_cast<std::size_t>(big_n);
  detail::check_length("dst1", n - 1, y.size());
  Dft plan(2 * n);
  std::vector<Complex> out(n - 1), work(2 * n);
  detail::dst1_core(plan, y, out, work);
  return out;
}

inline std::vector<Complex> dct1(std::span<const Complex> x, int big_n) {
  if (big_n < 1) throw ContractViolation("dct1: N must be >= 1, got " + std::to_string(big_n));
  std::size_t n = static_cast<std::size_t>(big_n);
  detail::check_length("dct1", n + 1, x.size());
  Dft plan(2 * n);
  std::vector<Complex> out(n + 1), work(2 * n);
  detail::dct1_core(plan, x, out, work);
  return out;
}

inline std::vector<Complex> idst1(std::span<const Complex> y, int big_n) {
  auto out = dst1(y, big_n);
  double s = 2.0 / big_n;
  for (auto& v : out) v *= s;
  return out;
}

inline std::vector<Complex> idct1(std::span<const Complex> x, int big_n) {
  auto out = dct1(x, big_n);
  double s = 2.0 / big_n;
  for (auto& v : out) v *= s;
  return out;
}

inline std::vector<double> dst1(std::span<const double> y, int big_n) {
  return detail::real_parts(dst1(detail::widen(y), big_n));
}
inline std::vector<double> dct1(std::span<const double> x, int big_n) {
  return detail::real_parts(dct1(detail::widen(x), big_n));
}
inline std::vector<double> idst1(std::span<const double> y, int big_n) {
  return detail::real_parts(idst1(detail::widen(y), big_n));
}
inline std::vector<double> idct1(std::span<const double> x, int big_n) {
  return detail::real_parts(idct1(detail::widen(x), big_n));
}

inline std::vector<Complex> fft(std::span<const Complex> f) {
  if (f.empty()) throw ContractViolation("fft: expected input length >= 1, got 0");
  std::vector<Complex> out(f.begin(), f.end());
  Dft plan(out.size());
  plan.transform(out, +1);
  return out;
}

inline std::vector<Complex> ifft(std::span<const Complex> z) {
  if (z.empty()) throw ContractViolation("ifft: expected input length >= 1, got 0");
  std::vector<Complex> out(z.begin(), z.end());
  Dft plan(out.size());
  plan.transform(out, -1);
  double inv_m = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= inv_m;
  return out;
}

}  // namespace spherefft
