#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sparsedct/oracle.hpp"
#include "sparsedct/support.hpp"
#include "sparsedct/transforms.hpp"

namespace sparsedct {

// How thresholded values are compared against epsilon. Signed keeps an entry
// when value > epsilon, Magnitude when |value| > epsilon.
enum class CompareMode { Signed, Magnitude };

struct AlgorithmConfig {
  double epsilon = 1e-8;
  unsigned b_exp = 0;
  CompareMode compare = CompareMode::Signed;
  // Keep the intermediate vectors (v, a, z) in every StepTrace.
  bool trace_vectors = false;
  // Check each two-block shift against its spectrum sample and redo the
  // level as a one-block step when they disagree.
  bool check_shifts = true;

  void validate(unsigned n_exp) const;
  bool keeps(double value) const {
    return compare == CompareMode::Signed ? value > epsilon : std::abs(value) > epsilon;
  }
};

// Raised when no usable odd-indexed spectrum sample exists to decide a shift.
class DegenerateSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LevelEntry {
  std::size_t index = 0;
  double value = 0.0;
};

// A length-2^j periodization stored by its nonzero entries, sorted by index.
// Every recovery step touches only O(block length) entries, so levels are
// never materialized densely until the caller asks for it.
class LevelVector {
 public:
  LevelVector() = default;
  explicit LevelVector(std::size_t length) : length_(length) {}
  LevelVector(std::size_t length, std::vector<LevelEntry> entries);

  static LevelVector from_dense(std::span<const double> dense);

  std::size_t size() const { return length_; }
  std::span<const LevelEntry> entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }

  double at(std::size_t k) const;
  // Entries with index in [first, last).
  std::span<const LevelEntry> range(std::size_t first, std::size_t last) const;
  RealVector to_dense() const;

 private:
  std::size_t length_ = 0;
  std::vector<LevelEntry> entries_;
};

struct IterationState {
  unsigned level = 0;
  LevelVector y;
  SupportState support = zero_support();
};

enum class StepBranch { Initial, Direct, Restricted, TwoBlock, Zero };
enum class DetectionCase { Initial, MiddleToTwoBlock, Full, BoundaryShift, BoundaryFinal, TwoBlockShift, None };

// Diagnostics for one level transition. Optional fields are set only on the
// branch that produced them.
struct StepTrace {
  unsigned level = 0;
  StepBranch branch = StepBranch::Zero;
  DetectionCase detection = DetectionCase::None;
  std::size_t samples_requested = 0;

  std::optional<unsigned> restriction_exp;
  std::optional<std::size_t> k0;
  std::optional<Complex> odd_sample;
  std::optional<Complex> u0_hat;
  std::optional<std::size_t> lambda;
  // min(|u0 - s|, |u0 + s|) for the chosen shift.
  std::optional<double> shift_mismatch;
  // The two-block model was rejected and the level redone as one block.
  bool fallback = false;
  std::optional<std::size_t> d0, d1;
  std::optional<double> e0, e1;
  IndexSet t0, t1;

  // Only with AlgorithmConfig::trace_vectors.
  ComplexVector v, a;
  RealVector z_j, z_next;
};

struct ReconstructionResult {
  RealVector y;
  SupportState support = zero_support();
  OracleStats stats;
  std::vector<StepTrace> traces;
};

// y^(b) from 2^b equidistant samples, thresholded, with its support labeled.
IterationState initial_periodization(FrequencyOracle& oracle, const AlgorithmConfig& config,
                                     StepTrace* trace = nullptr);

// Level j -> j+1 for a one-block state (direct IFFT when m^(j) > 2^(j-1),
// otherwise the restricted diagonal-Fourier-diagonal solve).
std::pair<LevelVector, StepTrace> recover_one_block_step(const IterationState& state,
                                                         FrequencyOracle& oracle,
                                                         const AlgorithmConfig& config);

// argmax over k < 2n of |yhat_{2^(J-j-1)(2k+1)}|, smallest k on ties.
std::pair<std::size_t, Complex> find_nonzero_odd_sample(FrequencyOracle& oracle, unsigned level,
                                                        std::size_t block_length);

// Level j -> j+1 for a reflected two-block state: decides whether the blocks
// move by 2^j using one nonzero odd-indexed spectrum sample.
std::pair<LevelVector, StepTrace> recover_two_block_step(const IterationState& state,
                                                         FrequencyOracle& oracle);

// Labels the support of y^(j+1) given the state at level j. `lambda` is the
// block position chosen by the two-block step and is required after it.
SupportState detect_support(const LevelVector& y_next, const IterationState& prior, unsigned n_exp,
                            const AlgorithmConfig& config, std::optional<std::size_t> lambda = {},
                            StepTrace* trace = nullptr);

// Smallest symmetric one-block label (middle, boundary or full) covering the
// entries of y that pass the threshold.
SupportState symmetric_cover(const LevelVector& y, const AlgorithmConfig& config);

// Whether a two-block step's shift agrees with its spectrum sample.
bool shift_consistent(const StepTrace& trace, const AlgorithmConfig& config,
                      std::size_t block_length);

// Labels a periodization without a previous level (start of the iteration).
SupportState detect_initial_support(const LevelVector& y, unsigned level, unsigned n_exp,
                                    const AlgorithmConfig& config);

// Full reconstruction of y in R^(2^J) from the oracle.
ReconstructionResult reconstruct(FrequencyOracle& oracle, const AlgorithmConfig& config);

// Detected support restricted to the first half [0, 2^(J-1)).
IndexSet detected_half_support(const SupportState& s, unsigned n_exp);

// Length m' of the shortest wrapped block covering the detected first-half support.
std::size_t detected_block_length(const SupportState& s, unsigned n_exp);

}  // namespace sparsedct
