#include "sparsedct/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace sparsedct {

void SampleCounter::record(std::size_t index) {
  total_.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard lock(mutex_);
  seen_.insert(index);
}

OracleStats SampleCounter::stats() const {
  std::lock_guard lock(mutex_);
  return {total_.load(std::memory_order_relaxed), seen_.size()};
}

void SampleCounter::reset() {
  std::lock_guard lock(mutex_);
  total_ = 0;
  seen_.clear();
}

FrequencyOracle::FrequencyOracle(std::size_t size) : size_(size), n_exp_(log2_exact(size)) {}

Complex FrequencyOracle::sample(std::size_t k) {
  if (k >= size_) {
    throw std::out_of_range("frequency index " + std::to_string(k) + " outside [0, " +
                            std::to_string(size_) + ")");
  }
  counter_.record(k);
  return fetch(k);
}

DenseOracle::DenseOracle(ComplexVector spectrum)
    : FrequencyOracle(spectrum.size()), spectrum_(std::move(spectrum)) {}

Complex DenseOracle::fetch(std::size_t k) { return spectrum_[k]; }

Complex dct_backed_sample(std::span<const double> xhat2, std::size_t k) {
  const std::size_t n = xhat2.size();
  if (k >= 2 * n) {
    throw std::out_of_range("frequency index " + std::to_string(k) + " outside [0, " +
                            std::to_string(2 * n) + ")");
  }
  if (k == n) return {0.0, 0.0};
  const double root = std::sqrt(2.0 * static_cast<double>(n));
  const Complex w = unit_root(4 * n, -static_cast<long long>(k));
  if (k < n) return root / dct_epsilon(n, k) * w * xhat2[k];
  return -root / dct_epsilon(n, 2 * n - k) * w * xhat2[2 * n - k];
}

DctOracle::DctOracle(RealVector coefficients)
    : FrequencyOracle(2 * coefficients.size()), coefficients_(std::move(coefficients)) {
  require_finite(coefficients_, "DCT-II coefficients");
}

Complex DctOracle::fetch(std::size_t k) {
  std::lock_guard lock(memo_mutex_);
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  const std::size_t n = coefficients_.size();
  if (k < n) {
    coefficients_read_.record(k);
  } else if (k > n) {
    coefficients_read_.record(2 * n - k);
  }
  const Complex value = dct_backed_sample(coefficients_, k);
  memo_.emplace(k, value);
  return value;
}

namespace {

double uniform_symmetric(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double target_noise_norm(double signal_norm, double snr) {
  return signal_norm * std::pow(10.0, -snr / 20.0);
}

}  // namespace

std::pair<ComplexVector, double> add_noise_to_snr(std::span<const Complex> v, const NoiseSpec& spec) {
  if (std::isnan(spec.snr_db)) throw std::invalid_argument("SNR must not be NaN");
  ComplexVector out(v.begin(), v.end());
  if (spec.is_noiseless()) return {std::move(out), spec.snr_db};

  double signal = 0.0;
  for (const auto& e : v) signal += std::norm(e);
  signal = std::sqrt(signal);
  if (signal == 0.0) throw std::invalid_argument("cannot set an SNR for a zero-norm signal");

  std::mt19937_64 rng(spec.seed);
  ComplexVector eta(v.size());
  double raw = 0.0;
  for (auto& e : eta) {
    const double re = uniform_symmetric(rng);
    const double im = uniform_symmetric(rng);
    e = {re, im};
    raw += re * re + im * im;
  }
  const double scale = target_noise_norm(signal, spec.snr_db) / std::sqrt(raw);
  for (std::size_t k = 0; k < out.size(); ++k) {
    eta[k] *= scale;
    out[k] += eta[k];
  }
  return {std::move(out), snr_db(v, eta)};
}

std::pair<RealVector, double> add_noise_to_snr(std::span<const double> v, const NoiseSpec& spec) {
  if (std::isnan(spec.snr_db)) throw std::invalid_argument("SNR must not be NaN");
  RealVector out(v.begin(), v.end());
  if (spec.is_noiseless()) return {std::move(out), spec.snr_db};

  double signal = 0.0;
  for (double e : v) signal += e * e;
  signal = std::sqrt(signal);
  if (signal == 0.0) throw std::invalid_argument("cannot set an SNR for a zero-norm signal");

  std::mt19937_64 rng(spec.seed);
  RealVector eta(v.size());
  double raw = 0.0;
  for (auto& e : eta) {
    e = uniform_symmetric(rng);
    raw += e * e;
  }
  const double scale = target_noise_norm(signal, spec.snr_db) / std::sqrt(raw);
  double noise = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    eta[k] *= scale;
    noise += eta[k] * eta[k];
    out[k] += eta[k];
  }
  return {std::move(out), 20.0 * std::log10(signal / std::sqrt(noise))};
}

double snr_db(std::span<const Complex> signal, std::span<const Complex> noise) {
  double s = 0.0;
  double n = 0.0;
  for (const auto& e : signal) s += std::norm(e);
  for (const auto& e : noise) n += std::norm(e);
  if (n == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(s / n);
}

}  // namespace sparsedct
