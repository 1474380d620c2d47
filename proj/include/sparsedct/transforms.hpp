#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sparsedct {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Base-2 logarithm of a power of two.
unsigned log2_exact(std::size_t n);

// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(std::span<const double> v, const char* what);

// e^(-2*pi*i*k/n) with the exponent reduced exactly before the trig call.
Complex unit_root(std::size_t n, long long k);

// Precomputed roots of unity omega_N^k = exp(-2 pi i k / N), k in [0, N).
class TwiddleTable {
 public:
  explicit TwiddleTable(std::size_t order);

  std::size_t order() const { return roots_.size(); }
  const Complex& operator[](std::size_t k) const { return roots_[k]; }
  // omega_N^k for any integer k (reduced mod N).
  Complex power(long long k) const;
  std::span<const Complex> roots() const { return roots_; }

 private:
  std::vector<Complex> roots_;
};

// Shared, lazily built table for a power-of-two order. Safe to call from
// several threads; each order is built once.
std::shared_ptr<const TwiddleTable> twiddles(std::size_t order);

// Direct O(N^2) evaluation of F_N v. Any length.
ComplexVector naive_dft(std::span<const Complex> v);

// Iterative radix-2 transforms; forward is unnormalized, inverse scales by 1/N.
// Both throw std::invalid_argument for non-power-of-two lengths.
ComplexVector fft_radix2(std::span<const Complex> v);
ComplexVector ifft_radix2(std::span<const Complex> v);

// OpenMP variants of the radix-2 kernels. Same contract as the serial ones,
// which stay as the reference the parallel versions are tested against.
ComplexVector fft_radix2_parallel(std::span<const Complex> v);
ComplexVector ifft_radix2_parallel(std::span<const Complex> v);
ComplexVector naive_dft_parallel(std::span<const Complex> v);

// epsilon_N(k): 1/sqrt(2) when k = 0 mod N, else 1.
double dct_epsilon(std::size_t n, std::size_t k);

// Orthonormal DCT-II (C_N^II x) and its transpose, by direct summation.
RealVector naive_dct2(std::span<const double> x);
RealVector naive_dct3(std::span<const double> c);

// DCT-II through a length-2N FFT of the mirrored vector (x, J_N x).
RealVector dct2_via_fft(std::span<const double> x);

}  // namespace sparsedct
