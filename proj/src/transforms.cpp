#include "sparsedct/transforms.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace sparsedct {

unsigned log2_exact(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("length " + std::to_string(n) + " is not a power of two");
  }
  return static_cast<unsigned>(std::countr_zero(n));
}

void require_finite(std::span<const double> v, const char* what) {
  for (double e : v) {
    if (!std::isfinite(e)) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

Complex unit_root(std::size_t n, long long k) {
  const auto nn = static_cast<long long>(n);
  long long r = k % nn;
  if (r < 0) r += nn;
  if (r == 0) return {1.0, 0.0};
  const double angle = -2.0 * kPi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

TwiddleTable::TwiddleTable(std::size_t order) : roots_(order) {
  if (!is_power_of_two(order)) {
    throw std::invalid_argument("twiddle table order must be a power of two");
  }
  roots_[0] = {1.0, 0.0};
  // Octant symmetry keeps every entry as accurate as a direct cos/sin call
  // while computing only N/8 of them.
  const std::size_t n = order;
  for (std::size_t k = 1; k < n; ++k) {
    if (n >= 8 && k > n / 8) break;
    roots_[k] = unit_root(n, static_cast<long long>(k));
  }
  if (n >= 8) {
    const std::size_t q = n / 4;
    const std::size_t e = n / 8;
    for (std::size_t k = e + 1; k <= q; ++k) {
      // omega^k = -i * conj(omega^(q-k))
      const Complex w = roots_[q - k];
      roots_[k] = {-w.imag(), -w.real()};
    }
    for (std::size_t k = q + 1; k < n; ++k) {
      // omega^(k) = -i * omega^(k-q)
      const Complex w = roots_[k - q];
      roots_[k] = {w.imag(), -w.real()};
    }
  }
}

Complex TwiddleTable::power(long long k) const {
  const auto n = static_cast<long long>(roots_.size());
  long long r = k % n;
  if (r < 0) r += n;
  return roots_[static_cast<std::size_t>(r)];
}

std::shared_ptr<const TwiddleTable> twiddles(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const TwiddleTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_shared<const TwiddleTable>(order);
  return slot;
}

ComplexVector naive_dft(std::span<const Complex> v) {
  const std::size_t n = v.size();
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t l = 0; l < n; ++l) {
      acc += unit_root(n, static_cast<long long>((k * l) % n)) * v[l];
    }
    out[k] = acc;
  }
  return out;
}

ComplexVector naive_dft_parallel(std::span<const Complex> v) {
  const std::size_t n = v.size();
  ComplexVector out(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < sn; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t l = 0; l < n; ++l) {
      acc += unit_root(n, static_cast<long long>((static_cast<std::size_t>(k) * l) % n)) * v[l];
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

namespace {

void bit_reverse_permute(ComplexVector& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
}

void radix2_serial(ComplexVector& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  const auto table = twiddles(n);
  bit_reverse_permute(a);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex w = (*table)[k * stride];
        if (inverse) w = std::conj(w);
        const Complex t = w * a[start + k + half];
        a[start + k + half] = a[start + k] - t;
        a[start + k] += t;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& e : a) e *= scale;
  }
}

void radix2_parallel(ComplexVector& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  const auto table = twiddles(n);
  const unsigned bits = log2_exact(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    std::size_t r = 0;
    for (unsigned b = 0; b < bits; ++b) r |= ((ui >> b) & 1u) << (bits - 1 - b);
    if (ui < r) std::swap(a[ui], a[r]);
  }

  const auto butterflies = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < butterflies; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      const std::size_t k = ub % half;
      const std::size_t start = (ub / half) * len;
      Complex w = (*table)[k * stride];
      if (inverse) w = std::conj(w);
      const Complex t = w * a[start + k + half];
      a[start + k + half] = a[start + k] - t;
      a[start + k] += t;
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < sn; ++i) a[static_cast<std::size_t>(i)] *= scale;
  }
}

ComplexVector checked_copy(std::span<const Complex> v) {
  if (!is_power_of_two(v.size())) {
    throw std::invalid_argument("radix-2 FFT needs a power-of-two length, got " +
                                std::to_string(v.size()));
  }
  return ComplexVector(v.begin(), v.end());
}

}  // namespace

ComplexVector fft_radix2(std::span<const Complex> v) {
  auto a = checked_copy(v);
  radix2_serial(a, false);
  return a;
}

ComplexVector ifft_radix2(std::span<const Complex> v) {
  auto a = checked_copy(v);
  radix2_serial(a, true);
  return a;
}

ComplexVector fft_radix2_parallel(std::span<const Complex> v) {
  auto a = checked_copy(v);
  radix2_parallel(a, false);
  return a;
}

ComplexVector ifft_radix2_parallel(std::span<const Complex> v) {
  auto a = checked_copy(v);
  radix2_parallel(a, true);
  return a;
}

double dct_epsilon(std::size_t n, std::size_t k) {
  return (k % n == 0) ? 1.0 / std::sqrt(2.0) : 1.0;
}

RealVector naive_dct2(std::span<const double> x) {
  const std::size_t n = x.size();
  RealVector out(n, 0.0);
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      // cos(k(2l+1)pi/(2N)) is the real part of omega_{4N}^{-k(2l+1)}
      acc += unit_root(4 * n, static_cast<long long>((k * (2 * l + 1)) % (4 * n))).real() * x[l];
    }
    out[k] = norm * dct_epsilon(n, k) * acc;
  }
  return out;
}

RealVector naive_dct3(std::span<const double> c) {
  const std::size_t n = c.size();
  RealVector out(n, 0.0);
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t l = 0; l < n; ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += dct_epsilon(n, k) *
             unit_root(4 * n, static_cast<long long>((k * (2 * l + 1)) % (4 * n))).real() * c[k];
    }
    out[l] = norm * acc;
  }
  return out;
}

RealVector dct2_via_fft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("dct2_via_fft needs a power-of-two length");
  }
  ComplexVector y(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    y[k] = x[k];
    y[2 * n - 1 - k] = x[k];
  }
  const ComplexVector yhat = fft_radix2(y);
  const auto w4 = twiddles(4 * n);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));

  double energy = 0.0;
  for (double e : x) energy += e * e;
  const double tol = 1e-9 * std::max(1.0, std::sqrt(energy));

  RealVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex c = dct_epsilon(n, k) * scale * (*w4)[k] * yhat[k];
    if (std::abs(c.imag()) > tol) {
      throw std::runtime_error("dct2_via_fft: imaginary residue " + std::to_string(c.imag()) +
                               " exceeds tolerance");
    }
    out[k] = c.real();
  }
  return out;
}

}  // namespace sparsedct
