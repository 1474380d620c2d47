#include "sparsedct/sparse_ifft.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sparsedct {

namespace {

std::size_t pow2(unsigned e) { return std::size_t{1} << e; }

unsigned ceil_log2(std::size_t m) {
  unsigned l = 0;
  while (pow2(l) < m) ++l;
  return l;
}

IndexSet kept_indices(std::span<const LevelEntry> entries, const AlgorithmConfig& config) {
  IndexSet out;
  for (const auto& e : entries) {
    if (config.keeps(e.value)) out.push_back(e.index);
  }
  return out;
}

// Sum of |y_k| over the wrapped window [first, first+len) mod y.size().
double window_energy(const LevelVector& y, std::size_t first, std::size_t len) {
  const std::size_t n = y.size();
  double e = 0.0;
  const std::size_t end = first + len;
  for (const auto& x : y.range(first, std::min(end, n))) e += std::abs(x.value);
  if (end > n) {
    for (const auto& x : y.range(0, end - n)) e += std::abs(x.value);
  }
  return e;
}

std::vector<LevelEntry> sorted_entries(std::vector<LevelEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const LevelEntry& a, const LevelEntry& b) { return a.index < b.index; });
  return entries;
}

// Whether every kept entry in the first half of y lies inside the label.
// Labels that miss entries come from edge entries that vanished at an
// earlier level and are replaced by the symmetric cover.
bool covers_kept(const SupportState& s, const LevelVector& y, const AlgorithmConfig& config) {
  const std::size_t len = y.size();
  for (const auto& e : y.range(0, len / 2)) {
    if (!config.keeps(e.value)) continue;
    if (const auto* one = std::get_if<OneBlock>(&s)) {
      if ((e.index + len - one->mu) % len >= one->length) return false;
    } else if (const auto* two = std::get_if<TwoBlockReflected>(&s)) {
      if (e.index < two->mu || e.index > two->nu()) return false;
    }
  }
  return true;
}

}  // namespace

void AlgorithmConfig::validate(unsigned n_exp) const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be finite and non-negative");
  }
  if (b_exp > n_exp) {
    throw std::invalid_argument("b_exp " + std::to_string(b_exp) + " exceeds J = " +
                                std::to_string(n_exp));
  }
}

LevelVector::LevelVector(std::size_t length, std::vector<LevelEntry> entries)
    : length_(length), entries_(sorted_entries(std::move(entries))) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].index >= length_) throw std::out_of_range("level entry index out of range");
    if (i > 0 && entries_[i].index == entries_[i - 1].index) {
      throw std::invalid_argument("duplicate level entry index");
    }
  }
  std::erase_if(entries_, [](const LevelEntry& e) { return e.value == 0.0; });
}

LevelVector LevelVector::from_dense(std::span<const double> dense) {
  LevelVector out(dense.size());
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (dense[k] != 0.0) out.entries_.push_back({k, dense[k]});
  }
  return out;
}

double LevelVector::at(std::size_t k) const {
  if (k >= length_) throw std::out_of_range("level index out of range");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const LevelEntry& e, std::size_t i) { return e.index < i; });
  return (it != entries_.end() && it->index == k) ? it->value : 0.0;
}

std::span<const LevelEntry> LevelVector::range(std::size_t first, std::size_t last) const {
  auto cmp = [](const LevelEntry& e, std::size_t i) { return e.index < i; };
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), first, cmp);
  auto hi = std::lower_bound(lo, entries_.end(), std::max(first, last), cmp);
  return {lo, hi};
}

RealVector LevelVector::to_dense() const {
  RealVector out(length_, 0.0);
  for (const auto& e : entries_) out[e.index] = e.value;
  return out;
}

SupportState detect_initial_support(const LevelVector& y, unsigned level, unsigned n_exp,
                                    const AlgorithmConfig& config) {
  if (level == 0) {
    return config.keeps(y.at(0)) ? SupportState{OneBlock{0, 1, BlockCenter::Full}} : zero_support();
  }
  const std::size_t h = pow2(level);
  const IndexSet t = kept_indices(y.range(0, h / 2), config);
  if (t.empty()) return zero_support();
  const std::size_t t1 = t.front();
  const std::size_t tk = t.back();
  const bool at_zero = t1 == 0;
  const bool at_middle = tk == h / 2 - 1;

  if (at_zero && at_middle) {
    if (level < n_exp) return OneBlock{0, h, BlockCenter::Full};
    // Final level: split at the widest interior gap, if there is one.
    std::size_t gap = 0;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      if (t[i + 1] - t[i] - 1 > gap) {
        gap = t[i + 1] - t[i] - 1;
        at = i;
      }
    }
    if (gap == 0) return OneBlock{0, h, BlockCenter::Full};
    const std::size_t lo = t[at];
    const std::size_t hi = t[at + 1];
    return TwoBlockFinal{hi, h - 1 - lo, h - 2 * hi, 2 * (lo + 1)};
  }
  if (level == n_exp) {
    if (at_middle) return OneBlock{t1, h - 2 * t1, BlockCenter::Middle};
    if (at_zero) return OneBlock{h - 1 - tk, 2 * (tk + 1), BlockCenter::Boundary};
    return TwoBlockReflected{t1, tk - t1 + 1};
  }
  // Same rule as after a full level: anything longer than half is kept full.
  if (at_middle && 2 * (h / 2 - t1) <= h / 2) return OneBlock{t1, h - 2 * t1, BlockCenter::Middle};
  if (at_zero && 2 * (tk + 1) <= h / 2) return OneBlock{h - 1 - tk, 2 * (tk + 1), BlockCenter::Boundary};
  if (!at_middle && !at_zero && 4 * (tk - t1 + 1) <= h / 2) return TwoBlockReflected{t1, tk - t1 + 1};
  return OneBlock{0, h, BlockCenter::Full};
}

IterationState initial_periodization(FrequencyOracle& oracle, const AlgorithmConfig& config,
                                     StepTrace* trace) {
  const unsigned n_exp = oracle.n_exp();
  config.validate(n_exp);
  const unsigned b = config.b_exp;
  const std::size_t h = pow2(b);
  const std::size_t stride = pow2(n_exp - b);

  ComplexVector samples(h);
  for (std::size_t k = 0; k < h; ++k) samples[k] = oracle.sample(stride * k);
  const ComplexVector yb = ifft_radix2(samples);

  std::vector<LevelEntry> kept;
  for (std::size_t k = 0; k < h; ++k) {
    if (config.keeps(yb[k].real())) kept.push_back({k, yb[k].real()});
  }
  IterationState state{b, LevelVector(h, std::move(kept)), zero_support()};
  state.support = detect_initial_support(state.y, b, n_exp, config);

  if (trace != nullptr) {
    *trace = StepTrace{};
    trace->level = b;
    trace->branch = StepBranch::Initial;
    trace->detection = DetectionCase::Initial;
    trace->samples_requested = h;
    if (config.trace_vectors) {
      trace->v = samples;
      trace->z_next = state.y.to_dense();
    }
  }
  return state;
}

std::pair<LevelVector, StepTrace> recover_one_block_step(const IterationState& state,
                                                         FrequencyOracle& oracle,
                                                         const AlgorithmConfig& config) {
  const unsigned n_exp = oracle.n_exp();
  const unsigned j = state.level;
  if (j >= n_exp) throw std::invalid_argument("no level above the final one");
  const std::size_t h = pow2(j);
  if (state.y.size() != h) throw std::invalid_argument("state vector length does not match level");
  const auto* one = std::get_if<OneBlock>(&state.support);
  if (one == nullptr) throw std::invalid_argument("one-block step needs a one-block support");

  StepTrace trace;
  trace.level = j;
  if (one->is_zero()) {
    trace.branch = StepBranch::Zero;
    return {LevelVector(2 * h), std::move(trace)};
  }

  const std::size_t m = one->length;
  const std::size_t odd_stride = pow2(n_exp - j - 1);
  std::vector<LevelEntry> out;

  if (2 * m > h) {
    trace.branch = StepBranch::Direct;
    ComplexVector v(h);
    for (std::size_t k = 0; k < h; ++k) v[k] = oracle.sample(odd_stride * (2 * k + 1));
    trace.samples_requested = h;
    ComplexVector a = ifft_radix2(v);
    const auto table = twiddles(2 * h);
    const RealVector yj = state.y.to_dense();
    RealVector z0(h);
    for (std::size_t l = 0; l < h; ++l) {
      a[l] *= table->power(-static_cast<long long>(l));
      const double val = 0.5 * (yj[l] + a[l].real());
      z0[l] = config.keeps(val) ? val : 0.0;
      if (z0[l] != 0.0) {
        out.push_back({l, z0[l]});
        out.push_back({2 * h - 1 - l, z0[l]});
      }
    }
    if (config.trace_vectors) {
      trace.v = std::move(v);
      trace.a = std::move(a);
      trace.z_j = yj;
      trace.z_next = std::move(z0);
    }
    return {LevelVector(2 * h, std::move(out)), std::move(trace)};
  }

  trace.branch = StepBranch::Restricted;
  const unsigned l_exp = ceil_log2(m);
  const std::size_t p_len = pow2(l_exp);
  trace.restriction_exp = l_exp;
  const std::size_t mu = one->mu;
  const std::size_t coarse = pow2(n_exp - l_exp);

  ComplexVector v(p_len);
  const auto small = twiddles(p_len);
  for (std::size_t p = 0; p < p_len; ++p) {
    v[p] = oracle.sample(coarse * p + odd_stride);
  }
  trace.samples_requested = p_len;
  ComplexVector shifted(p_len);
  for (std::size_t p = 0; p < p_len; ++p) {
    shifted[p] = small->power(-static_cast<long long>((p * mu) % p_len)) * v[p];
  }
  ComplexVector a = ifft_radix2(shifted);
  const auto table = twiddles(2 * h);
  RealVector z(p_len), z0(p_len);
  for (std::size_t r = 0; r < p_len; ++r) {
    const std::size_t pos = (mu + r) % h;
    z[r] = state.y.at(pos);
    a[r] *= table->power(-static_cast<long long>(pos));
    const double val = 0.5 * (z[r] + a[r].real());
    z0[r] = config.keeps(val) ? val : 0.0;
    if (z0[r] != 0.0) {
      out.push_back({pos, z0[r]});
      out.push_back({2 * h - 1 - pos, z0[r]});
    }
  }
  if (config.trace_vectors) {
    trace.v = std::move(v);
    trace.a = std::move(a);
    trace.z_j = std::move(z);
    trace.z_next = std::move(z0);
  }
  return {LevelVector(2 * h, std::move(out)), std::move(trace)};
}

std::pair<std::size_t, Complex> find_nonzero_odd_sample(FrequencyOracle& oracle, unsigned level,
                                                        std::size_t block_length) {
  const unsigned n_exp = oracle.n_exp();
  if (level >= n_exp) throw std::invalid_argument("no odd samples above the final level");
  if (block_length == 0 || 2 * block_length > pow2(level)) {
    throw std::invalid_argument("block length does not fit a reflected two-block support");
  }
  const std::size_t stride = pow2(n_exp - level - 1);
  std::size_t best_k = 0;
  Complex best{0.0, 0.0};
  double best_abs = -1.0;
  for (std::size_t k = 0; k < 2 * block_length; ++k) {
    const Complex s = oracle.sample(stride * (2 * k + 1));
    if (std::abs(s) > best_abs) {
      best_abs = std::abs(s);
      best = s;
      best_k = k;
    }
  }
  if (!(best_abs >= 1e-300)) {
    throw DegenerateSignalError("every odd-indexed sample at level " + std::to_string(level) +
                                " vanishes");
  }
  return {best_k, best};
}

std::pair<LevelVector, StepTrace> recover_two_block_step(const IterationState& state,
                                                         FrequencyOracle& oracle) {
  const unsigned j = state.level;
  const std::size_t h = pow2(j);
  if (state.y.size() != h) throw std::invalid_argument("state vector length does not match level");
  const auto* two = std::get_if<TwoBlockReflected>(&state.support);
  if (two == nullptr) throw std::invalid_argument("two-block step needs a two-block support");
  const std::size_t mu = two->mu;
  const std::size_t n = two->block_length;
  if (2 * (mu + n) > h) throw std::invalid_argument("two-block support leaves the first half");

  StepTrace trace;
  trace.level = j;
  trace.branch = StepBranch::TwoBlock;
  const auto [k0, s] = find_nonzero_odd_sample(oracle, j, n);
  trace.samples_requested = 2 * n;
  trace.k0 = k0;
  trace.odd_sample = s;

  // Spectrum value the blocks would produce if they stayed in place.
  const std::size_t period = 2 * h;
  const std::size_t freq = (2 * k0 + 1) % period;
  const auto table = twiddles(period);
  const auto first_block = state.y.range(mu, mu + n);
  const auto mirror_block = state.y.range(h - n - mu, h - mu);
  Complex u0{0.0, 0.0};
  for (const auto& e : first_block) u0 += table->power(static_cast<long long>((freq * e.index) % period)) * e.value;
  for (const auto& e : mirror_block) {
    u0 += table->power(static_cast<long long>((freq * (e.index + h)) % period)) * e.value;
  }
  trace.u0_hat = u0;

  const bool stay = std::abs(u0 - s) <= std::abs(u0 + s);
  trace.shift_mismatch = std::min(std::abs(u0 - s), std::abs(u0 + s));
  const std::size_t lambda = stay ? mu : h + mu;
  trace.lambda = lambda;

  std::vector<LevelEntry> out;
  out.reserve(first_block.size() + mirror_block.size());
  for (const auto& e : first_block) out.push_back({e.index + (stay ? 0 : h), e.value});
  for (const auto& e : mirror_block) out.push_back({e.index + (stay ? h : 0), e.value});
  return {LevelVector(period, std::move(out)), std::move(trace)};
}

SupportState symmetric_cover(const LevelVector& y, const AlgorithmConfig& config) {
  const std::size_t len = y.size();
  if (len == 1) {
    return config.keeps(y.at(0)) ? SupportState{OneBlock{0, 1, BlockCenter::Full}} : zero_support();
  }
  const IndexSet t = kept_indices(y.range(0, len / 2), config);
  if (t.empty()) return zero_support();
  const std::size_t t1 = t.front();
  const std::size_t tk = t.back();
  // Gaps around the middle (d0) and around the boundary (d1); the block
  // sits opposite the larger one.
  const std::size_t d0 = len - 1 - 2 * tk;
  const std::size_t d1 = 2 * t1 + 1;
  if (d0 < d1) return OneBlock{t1, len - 2 * t1, BlockCenter::Middle};
  if (d0 > d1) return OneBlock{len - 1 - tk, 2 * (tk + 1), BlockCenter::Boundary};
  return OneBlock{0, len, BlockCenter::Full};
}

bool shift_consistent(const StepTrace& trace, const AlgorithmConfig& config,
                      std::size_t block_length) {
  if (!trace.shift_mismatch || !trace.odd_sample) return true;
  // Every entry of the level is off by at most about epsilon.
  const double tol = 2.0 * static_cast<double>(block_length) * config.epsilon +
                     1e-9 * std::abs(*trace.odd_sample);
  return *trace.shift_mismatch <= tol;
}

SupportState detect_support(const LevelVector& y_next, const IterationState& prior, unsigned n_exp,
                            const AlgorithmConfig& config, std::optional<std::size_t> lambda,
                            StepTrace* trace) {
  const unsigned j = prior.level;
  const std::size_t h = pow2(j);
  if (y_next.size() != 2 * h) throw std::invalid_argument("next level has the wrong length");
  StepTrace scratch;
  StepTrace& tr = trace != nullptr ? *trace : scratch;

  if (const auto* two = std::get_if<TwoBlockReflected>(&prior.support)) {
    if (!lambda) throw std::invalid_argument("two-block detection needs lambda");
    tr.detection = DetectionCase::TwoBlockShift;
    if (*lambda == two->mu) return *two;
    if (*lambda != h + two->mu) throw std::invalid_argument("lambda is not a valid block position");
    return TwoBlockReflected{h - two->block_length - two->mu, two->block_length};
  }

  const auto* one = std::get_if<OneBlock>(&prior.support);
  if (one == nullptr) throw std::invalid_argument("final-level supports cannot be refined");
  if (one->is_zero()) return zero_support();
  const bool final_step = j + 1 == n_exp;

  switch (one->center) {
    case BlockCenter::Middle: {
      tr.detection = DetectionCase::MiddleToTwoBlock;
      tr.t0 = kept_indices(y_next.range(one->mu, h - one->mu), config);
      if (tr.t0.empty()) return zero_support();
      const SupportState two = TwoBlockReflected{tr.t0.front(), tr.t0.back() - tr.t0.front() + 1};
      return covers_kept(two, y_next, config) ? two : symmetric_cover(y_next, config);
    }
    case BlockCenter::Full: {
      tr.detection = DetectionCase::Full;
      if (!final_step) {
        tr.t0 = kept_indices(y_next.range(0, h), config);
        if (!tr.t0.empty()) {
          tr.d0 = 2 * h - 1 - 2 * tr.t0.back();
          tr.d1 = 2 * tr.t0.front() + 1;
        }
        return symmetric_cover(y_next, config);
      }
      tr.t0 = kept_indices(y_next.range(0, h / 2), config);
      tr.t1 = kept_indices(y_next.range(h / 2, h), config);
      if (tr.t0.empty() && tr.t1.empty()) return zero_support();
      if (tr.t0.empty()) {
        const std::size_t u1 = tr.t1.front();
        return OneBlock{u1, 2 * (h - u1), BlockCenter::Middle};
      }
      if (tr.t1.empty()) {
        const std::size_t tk = tr.t0.back();
        return OneBlock{2 * h - 1 - tk, 2 * (tk + 1), BlockCenter::Boundary};
      }
      return Unstructured{kept_indices(y_next.entries(), config)};
    }
    case BlockCenter::Boundary: {
      const std::size_t mu = one->mu;
      const std::size_t m = one->length;
      if (!final_step) {
        tr.detection = DetectionCase::BoundaryShift;
        const double e0 = window_energy(y_next, mu, m);
        const double e1 = window_energy(y_next, h + mu, m);
        tr.e0 = e0;
        tr.e1 = e1;
        if (e0 == 0.0 && e1 == 0.0) return zero_support();
        const SupportState moved = e0 >= e1 ? SupportState{OneBlock{mu, m, BlockCenter::Middle}}
                                            : SupportState{OneBlock{h + mu, m, BlockCenter::Boundary}};
        return covers_kept(moved, y_next, config) ? moved : symmetric_cover(y_next, config);
      }
      tr.detection = DetectionCase::BoundaryFinal;
      tr.t0 = kept_indices(y_next.range(mu, h), config);
      tr.t1 = kept_indices(y_next.range(h + mu, 2 * h), config);
      if (tr.t0.empty() && tr.t1.empty()) return zero_support();
      if (tr.t0.empty()) {
        const std::size_t u1 = tr.t1.front();
        return OneBlock{u1, 2 * (2 * h - u1), BlockCenter::Boundary};
      }
      if (tr.t1.empty()) {
        const std::size_t t1 = tr.t0.front();
        return OneBlock{t1, 2 * (h - t1), BlockCenter::Middle};
      }
      const std::size_t t1 = tr.t0.front();
      const std::size_t u1 = tr.t1.front();
      return TwoBlockFinal{t1, u1, 2 * (h - t1), 2 * (2 * h - u1)};
    }
  }
  throw std::logic_error("unreachable block center");
}

ReconstructionResult reconstruct(FrequencyOracle& oracle, const AlgorithmConfig& config) {
  const unsigned n_exp = oracle.n_exp();
  config.validate(n_exp);
  ReconstructionResult result;
  StepTrace first;
  IterationState state = initial_periodization(oracle, config, &first);
  result.traces.push_back(std::move(first));

  while (state.level < n_exp) {
    std::pair<LevelVector, StepTrace> step;
    std::optional<std::size_t> lambda;
    if (std::holds_alternative<OneBlock>(state.support)) {
      step = recover_one_block_step(state, oracle, config);
    } else if (std::holds_alternative<TwoBlockReflected>(state.support)) {
      step = recover_two_block_step(state, oracle);
      lambda = step.second.lambda;
      const std::size_t n = std::get<TwoBlockReflected>(state.support).block_length;
      if (config.check_shifts && !shift_consistent(step.second, config, n)) {
        // Blocks that do not move as a whole: redo the level over their hull.
        StepTrace rejected = std::move(step.second);
        state.support = symmetric_cover(state.y, config);
        step = recover_one_block_step(state, oracle, config);
        step.second.fallback = true;
        step.second.samples_requested += rejected.samples_requested;
        step.second.k0 = rejected.k0;
        step.second.odd_sample = rejected.odd_sample;
        step.second.u0_hat = rejected.u0_hat;
        step.second.shift_mismatch = rejected.shift_mismatch;
        lambda.reset();
      }
    } else {
      throw std::logic_error("final-level support reached before the last level");
    }
    SupportState next = detect_support(step.first, state, n_exp, config, lambda, &step.second);
    state = IterationState{state.level + 1, std::move(step.first), std::move(next)};
    result.traces.push_back(std::move(step.second));
  }

  result.y = state.y.to_dense();
  result.support = std::move(state.support);
  result.stats = oracle.stats();
  return result;
}

IndexSet detected_half_support(const SupportState& s, unsigned n_exp) {
  IndexSet all = support_indices(s, n_exp);
  const std::size_t half = pow2(n_exp - 1);
  all.erase(std::lower_bound(all.begin(), all.end(), half), all.end());
  return all;
}

std::size_t detected_block_length(const SupportState& s, unsigned n_exp) {
  return covering_interval_length(detected_half_support(s, n_exp), pow2(n_exp - 1));
}

}  // namespace sparsedct
