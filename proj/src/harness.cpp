#include "sparsedct/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <random>
#include <stdexcept>
#include <utility>

namespace sparsedct {

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection keeps the draw unbiased for any n.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % n;
}

double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

double max_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::abs(a[k] - b[k]));
  return s;
}

bool contains(const IndexSet& big, const IndexSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Spectrum of y = (x, Jx) via its relation to the DCT-II of x. Only used for
// baselines; the oracle path converts on demand.
ComplexVector spectrum_from_dct(std::span<const double> xhat2) {
  ComplexVector out(2 * xhat2.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = dct_backed_sample(xhat2, k);
  return out;
}

struct Data {
  ComplexVector spectrum;
  RealVector coefficients;
  double achieved_snr = std::numeric_limits<double>::infinity();
};

Data make_data(const TrialSpec& spec, const Instance& inst) {
  Data d;
  const NoiseSpec noise{spec.snr_db, inst.noise_seed};
  if (spec.mode == Mode::Ifft) {
    const ComplexVector y(inst.y.begin(), inst.y.end());
    std::tie(d.spectrum, d.achieved_snr) = add_noise_to_snr(fft_radix2(y), noise);
  } else {
    std::tie(d.coefficients, d.achieved_snr) = add_noise_to_snr(dct2_via_fft(inst.x), noise);
  }
  return d;
}

}  // namespace

const char* mode_name(Mode m) { return m == Mode::Ifft ? "ifft" : "idct"; }

Mode parse_mode(const std::string& s) {
  if (s == "ifft") return Mode::Ifft;
  if (s == "idct") return Mode::Idct;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

void TrialSpec::validate() const {
  if (n_exp < 2 || n_exp > 30) throw std::invalid_argument("n_exp must be in [2, 30]");
  const std::size_t n = std::size_t{1} << (n_exp - 1);
  if (block_length < 1 || block_length >= n) {
    throw std::invalid_argument("block length " + std::to_string(block_length) + " outside [1, " +
                                std::to_string(n) + ")");
  }
  if (std::isnan(snr_db)) throw std::invalid_argument("SNR must not be NaN");
  AlgorithmConfig{epsilon, b_exp, compare, false}.validate(n_exp);
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Instance gen_instance(const TrialSpec& spec) {
  spec.validate();
  const std::size_t n = std::size_t{1} << (spec.n_exp - 1);
  const std::size_t m = spec.block_length;
  std::mt19937_64 rng(spec.seed);

  Instance inst;
  inst.first_index = below(rng, n);
  RealVector values(m);
  for (auto& v : values) v = 10.0 * (1.0 - unit_interval(rng));
  if (spec.zero_fill && m > 2) {
    // Draws with replacement, so at most floor((m-2)/2) distinct entries go.
    for (std::size_t i = 0; i < (m - 2) / 2; ++i) values[1 + below(rng, m - 2)] = 0.0;
  }
  inst.noise_seed = rng();

  BlockVectorSpec block{spec.n_exp, inst.first_index, values};
  inst.x = block.to_vector();
  inst.y = build_y(inst.x);
  for (std::size_t k = 0; k < n; ++k) {
    if (inst.x[k] != 0.0) inst.x_support.push_back(k);
  }
  for (std::size_t k = 0; k < 2 * n; ++k) {
    if (inst.y[k] != 0.0) inst.y_support.push_back(k);
  }
  return inst;
}

std::size_t sample_bound(unsigned n_exp, std::size_t block_length) {
  unsigned l = 0;
  while ((std::size_t{1} << l) < 2 * block_length) ++l;
  return (std::size_t{1} << l) * (n_exp - l + 1);
}

TrialResult run_trial(const TrialSpec& spec) {
  const Instance inst = gen_instance(spec);
  Data data = make_data(spec, inst);
  const AlgorithmConfig config{spec.epsilon, spec.b_exp, spec.compare, false};
  const std::size_t n = inst.x.size();

  TrialResult r;
  r.achieved_snr = data.achieved_snr;
  r.sample_bound = sample_bound(spec.n_exp, spec.block_length);

  std::unique_ptr<FrequencyOracle> oracle;
  if (spec.mode == Mode::Ifft) {
    oracle = std::make_unique<DenseOracle>(data.spectrum);
  } else {
    oracle = std::make_unique<DctOracle>(data.coefficients);
  }
  const auto start = std::chrono::steady_clock::now();
  ReconstructionResult rec = reconstruct(*oracle, config);
  const auto stop = std::chrono::steady_clock::now();
  r.runtime_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
  r.samples_distinct = rec.stats.distinct_indices;
  r.samples_total = rec.stats.total_requests;

  if (spec.mode == Mode::Ifft) {
    r.err_per_length = l2_distance(inst.y, rec.y) / static_cast<double>(2 * n);
    r.max_abs_err = max_distance(inst.y, rec.y);
    r.support_correct = contains(support_indices(rec.support, spec.n_exp), inst.y_support);
  } else {
    const std::span<const double> x_rec(rec.y.data(), n);
    r.err_per_length = l2_distance(inst.x, x_rec) / static_cast<double>(n);
    r.max_abs_err = max_distance(inst.x, x_rec);
    r.support_correct = contains(detected_half_support(rec.support, spec.n_exp), inst.x_support);
  }
  r.detected_len = detected_block_length(rec.support, spec.n_exp);
  r.length_bounded = r.detected_len <= 3 * spec.block_length;

  if (spec.with_baseline) {
    if (spec.mode == Mode::Ifft) {
      const ComplexVector full = ifft_radix2(data.spectrum);
      RealVector y_full(full.size());
      for (std::size_t k = 0; k < full.size(); ++k) y_full[k] = full[k].real();
      r.baseline_err_per_length = l2_distance(inst.y, y_full) / static_cast<double>(2 * n);
    } else {
      const ComplexVector full = ifft_radix2(spectrum_from_dct(data.coefficients));
      RealVector x_full(n);
      for (std::size_t k = 0; k < n; ++k) x_full[k] = full[k].real();
      r.baseline_err_per_length = l2_distance(inst.x, x_full) / static_cast<double>(n);
    }
  }
  return r;
}

double default_epsilon(Mode mode, double snr_db) {
  static constexpr std::array<double, 6> snrs{0, 10, 20, 30, 40, 50};
  static constexpr std::array<double, 6> ifft_eps{1.7, 1.2, 0.4, 0.19, 0.05, 0.02};
  static constexpr std::array<double, 6> idct_eps{2.5, 1.8, 1.0, 0.3, 0.15, 0.05};
  if (std::isnan(snr_db)) throw std::invalid_argument("SNR must not be NaN");
  if (snr_db == std::numeric_limits<double>::infinity()) return 1e-4;
  std::size_t best = 0;
  for (std::size_t i = 1; i < snrs.size(); ++i) {
    if (std::abs(snrs[i] - snr_db) < std::abs(snrs[best] - snr_db)) best = i;
  }
  return mode == Mode::Ifft ? ifft_eps[best] : idct_eps[best];
}

std::vector<BenchRow> bench_sweep(const BenchConfig& config) {
  if (config.block_lengths.empty()) throw std::invalid_argument("block length list is empty");
  const double eps = config.epsilon.value_or(default_epsilon(config.mode, config.snr_db));
  std::vector<BenchRow> rows;
  for (std::size_t m : config.block_lengths) {
    for (std::size_t t = 0; t < config.trials; ++t) {
      TrialSpec spec;
      spec.n_exp = config.n_exp;
      spec.block_length = m;
      spec.seed = trial_seed(config.seed, t);
      spec.snr_db = config.snr_db;
      spec.epsilon = eps;
      spec.b_exp = config.b_exp;
      spec.mode = config.mode;
      spec.compare = config.compare;
      const TrialResult r = run_trial(spec);
      rows.push_back({mode_name(config.mode), config.n_exp, m, t, spec.seed, eps, config.snr_db,
                      r.runtime_ns, r.samples_distinct, r.err_per_length, r.support_correct,
                      r.length_bounded, r.detected_len});
      if (!config.include_full) continue;

      // Full inverse transform of the same data, thresholded the same way.
      const Instance inst = gen_instance(spec);
      const Data data = make_data(spec, inst);
      const std::size_t n = inst.x.size();
      const auto start = std::chrono::steady_clock::now();
      RealVector rec;
      if (spec.mode == Mode::Ifft) {
        const ComplexVector full = ifft_radix2(data.spectrum);
        rec.resize(full.size());
        for (std::size_t k = 0; k < full.size(); ++k) rec[k] = full[k].real();
      } else {
        const ComplexVector full = ifft_radix2(spectrum_from_dct(data.coefficients));
        rec.resize(n);
        for (std::size_t k = 0; k < n; ++k) rec[k] = full[k].real();
      }
      const auto stop = std::chrono::steady_clock::now();
      const RealVector& truth = spec.mode == Mode::Ifft ? inst.y : inst.x;
      const IndexSet& truth_support = spec.mode == Mode::Ifft ? inst.y_support : inst.x_support;
      IndexSet found;
      for (std::size_t k = 0; k < rec.size(); ++k) {
        if (spec.compare == CompareMode::Signed ? rec[k] > eps : std::abs(rec[k]) > eps) found.push_back(k);
      }
      IndexSet half;
      for (std::size_t k : found) {
        if (k < n) half.push_back(k);
      }
      const std::size_t len = covering_interval_length(half, n);
      rows.push_back({std::string("full-") + mode_name(config.mode), config.n_exp, m, t, spec.seed, eps,
                      config.snr_db,
                      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count(),
                      spec.mode == Mode::Ifft ? 2 * n : n,
                      l2_distance(truth, rec) / static_cast<double>(rec.size()),
                      contains(found, truth_support), len <= 3 * m, len});
    }
  }
  return rows;
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string fmt_err(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.6e", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "mode,n_exp,m,trial,seed,epsilon,snr_db,runtime_ns,samples_distinct,err_per_length,"
         "support_correct,length_bounded,detected_len\n";
  for (const auto& r : rows) {
    out << r.mode << ',' << r.n_exp << ',' << r.m << ',' << r.trial << ',' << r.seed << ','
        << fmt(r.epsilon) << ',' << fmt(r.snr_db) << ',' << r.runtime_ns << ',' << r.samples_distinct
        << ',' << fmt_err(r.err_per_length) << ',' << (r.support_correct ? 1 : 0) << ','
        << (r.length_bounded ? 1 : 0) << ',' << r.detected_len << '\n';
  }
}

std::vector<NoiseRow> noise_sweep(const NoiseConfig& config) {
  if (config.snr_list.empty()) throw std::invalid_argument("SNR list is empty");
  if (config.trials == 0) throw std::invalid_argument("need at least one trial");
  std::vector<std::pair<double, double>> cells;
  for (double snr : config.snr_list) {
    if (config.epsilon_list.empty()) {
      cells.emplace_back(snr, default_epsilon(config.mode, snr));
    } else {
      for (double eps : config.epsilon_list) cells.emplace_back(snr, eps);
    }
  }

  const std::size_t trials = config.trials;
  const std::size_t total = cells.size() * trials;
  std::vector<TrialResult> results(total);
  std::vector<std::string> errors(total);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto& [snr, eps] = cells[idx / trials];
    TrialSpec spec;
    spec.n_exp = config.n_exp;
    spec.block_length = config.block_length;
    spec.seed = trial_seed(config.seed, idx % trials);
    spec.snr_db = snr;
    spec.epsilon = eps;
    spec.b_exp = config.b_exp;
    spec.mode = config.mode;
    spec.compare = config.compare;
    try {
      results[idx] = run_trial(spec);
    } catch (const std::exception& e) {
      // A failed reconstruction counts as a miss, not as a sweep error.
      errors[idx] = e.what();
      results[idx].err_per_length = std::numeric_limits<double>::quiet_NaN();
    }
  }

  std::vector<NoiseRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    NoiseRow row;
    row.mode = mode_name(config.mode);
    row.n_exp = config.n_exp;
    row.m = config.block_length;
    row.snr_db = cells[c].first;
    row.epsilon = cells[c].second;
    row.trials = trials;
    std::size_t recovered = 0, bounded = 0, finite = 0;
    double err = 0.0, samples = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const TrialResult& r = results[c * trials + t];
      if (r.support_correct) {
        ++recovered;
        if (r.length_bounded) {
          ++bounded;
        } else {
          row.bounded_when_recovered = false;
        }
      }
      if (std::isfinite(r.err_per_length)) {
        err += r.err_per_length;
        ++finite;
      }
      samples += static_cast<double>(r.samples_distinct);
    }
    row.recovery_rate = static_cast<double>(recovered) / static_cast<double>(trials);
    row.bounded_rate = static_cast<double>(bounded) / static_cast<double>(trials);
    row.mean_err = finite > 0 ? err / static_cast<double>(finite) : std::numeric_limits<double>::quiet_NaN();
    row.mean_samples = samples / static_cast<double>(trials);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_noise_csv(std::ostream& out, const std::vector<NoiseRow>& rows) {
  out << "mode,n_exp,m,snr_db,epsilon,trials,recovery_rate,bounded_rate,mean_err_per_length,"
         "mean_samples_distinct\n";
  for (const auto& r : rows) {
    out << r.mode << ',' << r.n_exp << ',' << r.m << ',' << fmt(r.snr_db) << ',' << fmt(r.epsilon)
        << ',' << r.trials << ',' << fmt(r.recovery_rate) << ',' << fmt(r.bounded_rate) << ','
        << fmt_err(r.mean_err) << ',' << fmt(r.mean_samples) << '\n';
  }
}

VerifyReport verify_exhaustive(unsigned j_max, std::size_t seeds, double epsilon, double tolerance) {
  if (j_max < 2) throw std::invalid_argument("j_max must be at least 2");
  VerifyReport report;
  for (unsigned j = 2; j <= j_max; ++j) {
    const std::size_t n = std::size_t{1} << (j - 1);
    for (std::size_t mu = 0; mu < n; ++mu) {
      for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t s = 0; s < seeds; ++s) {
          const std::uint64_t seed = trial_seed((std::uint64_t{j} << 40) | (mu << 20) | m, s);
          std::mt19937_64 rng(seed);
          RealVector values(m);
          for (auto& v : values) v = 10.0 * (1.0 - unit_interval(rng));
          const RealVector x = BlockVectorSpec{j, mu, values}.to_vector();
          const RealVector y = build_y(x);
          const std::size_t bound = sample_bound(j, m);
          const AlgorithmConfig config{epsilon, 0, CompareMode::Signed, false};

          auto note = [&](const char* what, double err) {
            ++report.failures;
            if (report.failure_notes.size() < 20) {
              report.failure_notes.push_back(std::string(what) + " J=" + std::to_string(j) +
                                             " mu=" + std::to_string(mu) + " m=" + std::to_string(m) +
                                             " seed#" + std::to_string(s) + " err=" + fmt_err(err));
            }
          };

          ++report.instances;
          try {
            DenseOracle oracle(fft_radix2(ComplexVector(y.begin(), y.end())));
            const ReconstructionResult r = reconstruct(oracle, config);
            const double err = max_distance(y, r.y);
            report.max_err = std::max(report.max_err, err);
            if (!(err <= tolerance)) note("ifft error", err);
            else if (r.stats.distinct_indices > bound) note("ifft samples", static_cast<double>(r.stats.distinct_indices));
          } catch (const std::exception&) {
            note("ifft threw", std::numeric_limits<double>::quiet_NaN());
          }

          ++report.instances;
          try {
            const DctResult r = reconstruct_x({naive_dct2(x), config});
            const double err = max_distance(x, r.x);
            report.max_err = std::max(report.max_err, err);
            if (!(err <= tolerance)) note("idct error", err);
            else if (r.spectrum_stats.distinct_indices > bound) note("idct samples", static_cast<double>(r.spectrum_stats.distinct_indices));
          } catch (const std::exception&) {
            note("idct threw", std::numeric_limits<double>::quiet_NaN());
          }
        }
      }
    }
  }
  return report;
}

}  // namespace sparsedct
