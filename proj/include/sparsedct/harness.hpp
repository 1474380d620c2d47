#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sparsedct/sparse_idct.hpp"
#include "sparsedct/sparse_ifft.hpp"
#include "sparsedct/support.hpp"

namespace sparsedct {

enum class Mode { Ifft, Idct };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct TrialSpec {
  unsigned n_exp = 10;
  std::size_t block_length = 10;
  std::uint64_t seed = 0;
  double snr_db = std::numeric_limits<double>::infinity();
  double epsilon = 1e-4;
  unsigned b_exp = 0;
  Mode mode = Mode::Ifft;
  bool zero_fill = true;
  CompareMode compare = CompareMode::Signed;
  // Also compute the error of a full inverse transform on the same data.
  bool with_baseline = false;

  // Throws std::invalid_argument unless 2 <= J and 1 <= m < 2^(J-1).
  void validate() const;
};

struct Instance {
  RealVector x;
  RealVector y;
  IndexSet x_support;
  IndexSet y_support;
  std::size_t first_index = 0;
  std::uint64_t noise_seed = 0;
};

// Random nonnegative block vector: first index uniform, entries uniform on
// (0, 10], optionally with up to floor((m-2)/2) interior entries zeroed.
Instance gen_instance(const TrialSpec& spec);

struct TrialResult {
  double err_per_length = 0.0;
  double max_abs_err = 0.0;
  std::size_t samples_distinct = 0;
  std::size_t samples_total = 0;
  std::size_t sample_bound = 0;
  std::int64_t runtime_ns = 0;
  bool support_correct = false;
  bool length_bounded = false;
  std::size_t detected_len = 0;
  double achieved_snr = std::numeric_limits<double>::infinity();
  std::optional<double> baseline_err_per_length;
};

TrialResult run_trial(const TrialSpec& spec);

// 2^L (J - L + 1) with 2^(L-1) < 2m <= 2^L.
std::size_t sample_bound(unsigned n_exp, std::size_t block_length);

// Per-trial seed derived from a base seed with std::seed_seq.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial);

// Default threshold for a mode and SNR, taken from the nearest tabulated SNR.
// Noiseless data gets 1e-4.
double default_epsilon(Mode mode, double snr_db);

struct BenchRow {
  std::string mode;
  unsigned n_exp = 0;
  std::size_t m = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double snr_db = 0.0;
  std::int64_t runtime_ns = 0;
  std::size_t samples_distinct = 0;
  double err_per_length = 0.0;
  bool support_correct = false;
  bool length_bounded = false;
  std::size_t detected_len = 0;
};

struct BenchConfig {
  unsigned n_exp = 16;
  std::vector<std::size_t> block_lengths{10, 100, 1000};
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  Mode mode = Mode::Ifft;
  std::optional<double> epsilon;
  double snr_db = std::numeric_limits<double>::infinity();
  unsigned b_exp = 0;
  CompareMode compare = CompareMode::Signed;
  // Emit a row for the full radix-2 inverse transform after every sparse row.
  bool include_full = true;
};

// Runs trials serially so timings do not compete for cores.
std::vector<BenchRow> bench_sweep(const BenchConfig& config);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

struct NoiseRow {
  std::string mode;
  unsigned n_exp = 0;
  std::size_t m = 0;
  double snr_db = 0.0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  double recovery_rate = 0.0;
  double bounded_rate = 0.0;
  double mean_err = 0.0;
  double mean_samples = 0.0;
  // Every trial that contained the truth also had m' <= 3m.
  bool bounded_when_recovered = true;
};

struct NoiseConfig {
  unsigned n_exp = 16;
  std::size_t block_length = 100;
  std::vector<double> snr_list{0, 10, 20, 30, 40, 50};
  // Empty: one row per SNR with the default threshold. Otherwise every
  // (snr, epsilon) pair.
  std::vector<double> epsilon_list;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  Mode mode = Mode::Ifft;
  unsigned b_exp = 0;
  CompareMode compare = CompareMode::Signed;
};

// Trials run in parallel; rows come back in (snr, epsilon) order.
std::vector<NoiseRow> noise_sweep(const NoiseConfig& config);
void write_noise_csv(std::ostream& out, const std::vector<NoiseRow>& rows);

struct VerifyReport {
  std::size_t instances = 0;
  std::size_t failures = 0;
  double max_err = 0.0;
  std::vector<std::string> failure_notes;

  bool ok() const { return failures == 0; }
};

// Every J in [2, j_max], every first index and block length, `seeds` seeds,
// both modes: max-norm error <= tolerance, truth contained, sample bound held.
VerifyReport verify_exhaustive(unsigned j_max, std::size_t seeds = 5, double epsilon = 1e-8,
                               double tolerance = 1e-10);

}  // namespace sparsedct
