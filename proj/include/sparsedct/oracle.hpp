#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "sparsedct/transforms.hpp"

namespace sparsedct {

struct OracleStats {
  std::size_t total_requests = 0;
  std::size_t distinct_indices = 0;
};

// Uniform box noise rescaled to a target SNR in dB. An infinite snr_db means
// no noise at all.
struct NoiseSpec {
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;

  bool is_noiseless() const { return snr_db == std::numeric_limits<double>::infinity(); }
};

// Counts requests and distinct indices. Thread-safe.
class SampleCounter {
 public:
  void record(std::size_t index);
  OracleStats stats() const;
  void reset();

 private:
  std::atomic<std::size_t> total_{0};
  mutable std::mutex mutex_;
  std::unordered_set<std::size_t> seen_;
};

// Source of samples yhat_k of the length-2^J spectrum, k in [0, 2^J).
class FrequencyOracle {
 public:
  virtual ~FrequencyOracle() = default;

  // Returns yhat_k and counts the request. Throws std::out_of_range.
  Complex sample(std::size_t k);

  std::size_t size() const { return size_; }
  unsigned n_exp() const { return n_exp_; }
  OracleStats stats() const { return counter_.stats(); }

 protected:
  explicit FrequencyOracle(std::size_t size);
  virtual Complex fetch(std::size_t k) = 0;

 private:
  std::size_t size_;
  unsigned n_exp_;
  SampleCounter counter_;
};

// Serves entries of a fully materialized spectrum.
class DenseOracle final : public FrequencyOracle {
 public:
  explicit DenseOracle(ComplexVector spectrum);
  std::span<const Complex> spectrum() const { return spectrum_; }

 protected:
  Complex fetch(std::size_t k) override;

 private:
  ComplexVector spectrum_;
};

// yhat_k of y = (x, J_N x) computed from the DCT-II coefficients of x.
Complex dct_backed_sample(std::span<const double> xhat2, std::size_t k);

// Converts DCT-II coefficients to spectrum samples on demand. Each spectrum
// index is converted once; coefficient reads are counted separately.
class DctOracle final : public FrequencyOracle {
 public:
  explicit DctOracle(RealVector coefficients);

  // Distinct DCT-II coefficients read so far.
  OracleStats coefficient_stats() const { return coefficients_read_.stats(); }

 protected:
  Complex fetch(std::size_t k) override;

 private:
  RealVector coefficients_;
  SampleCounter coefficients_read_;
  std::mutex memo_mutex_;
  std::unordered_map<std::size_t, Complex> memo_;
};

// Adds uniform noise scaled so that 20 log10(|v| / |eta|) == snr_db.
// Returns the noisy vector and the achieved SNR (infinite when noiseless).
std::pair<ComplexVector, double> add_noise_to_snr(std::span<const Complex> v, const NoiseSpec& spec);
std::pair<RealVector, double> add_noise_to_snr(std::span<const double> v, const NoiseSpec& spec);

// SNR in dB of a signal against a perturbation.
double snr_db(std::span<const Complex> signal, std::span<const Complex> noise);

}  // namespace sparsedct
