#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "sparsedct/harness.hpp"
#include "sparsedct/sparse_idct.hpp"
#include "sparsedct/sparse_ifft.hpp"

namespace sparsedct {
namespace {

constexpr int kCases = 250;

struct Case {
  unsigned n_exp;
  RealVector x;
  RealVector y;
};

// Random nonnegative block vector with 2 <= J <= 10.
Case random_case(std::mt19937_64& rng, unsigned min_exp = 2) {
  Case c;
  c.n_exp = min_exp + static_cast<unsigned>(rng() % (11 - min_exp));
  const std::size_t n = std::size_t{1} << (c.n_exp - 1);
  const std::size_t m = 1 + rng() % (n - 1);
  const std::size_t first = rng() % n;
  std::uniform_real_distribution<double> u(0.0, 10.0);
  c.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) c.x[(first + i) % n] = 10.0 - u(rng);
  c.y = build_y(c.x);
  return c;
}

ComplexVector to_complex(const RealVector& v) { return ComplexVector(v.begin(), v.end()); }

double max_abs(std::span<const double> v) {
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x));
  return d;
}

// The plain level loop without the shift check, calling `visit` after every
// level with the recovered vector and its label.
void walk(FrequencyOracle& oracle, const AlgorithmConfig& config,
          const std::function<void(const IterationState&, const IterationState&, const StepTrace&)>& visit) {
  IterationState state = initial_periodization(oracle, config);
  while (state.level < oracle.n_exp()) {
    std::pair<LevelVector, StepTrace> step;
    std::optional<std::size_t> lambda;
    if (std::holds_alternative<OneBlock>(state.support)) {
      step = recover_one_block_step(state, oracle, config);
    } else {
      step = recover_two_block_step(state, oracle);
      lambda = step.second.lambda;
    }
    SupportState label = detect_support(step.first, state, oracle.n_exp(), config, lambda, &step.second);
    IterationState next{state.level + 1, std::move(step.first), std::move(label)};
    visit(state, next, step.second);
    state = std::move(next);
  }
}

TEST(Properties, PeriodizationIsSymmetric) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < kCases; ++t) {
    const Case c = random_case(rng);
    for (unsigned j = 0; j <= c.n_exp; ++j) {
      const RealVector p = periodize(c.y, j);
      const RealVector r = reflect(p);
      for (std::size_t k = 0; k < p.size(); ++k) {
        ASSERT_NEAR(r[k], p[k], 1e-12 * std::abs(p[k])) << "case " << t << " level " << j;
      }
    }
  }
}

TEST(Properties, EquidistantSampling) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < kCases; ++t) {
    const Case c = random_case(rng);
    const ComplexVector yhat = fft_radix2(to_complex(c.y));
    for (unsigned j = 0; j <= c.n_exp; ++j) {
      const ComplexVector f = fft_radix2(to_complex(periodize(c.y, j)));
      const std::size_t stride = std::size_t{1} << (c.n_exp - j);
      for (std::size_t k = 0; k < f.size(); ++k) {
        ASSERT_LE(std::abs(f[k] - yhat[stride * k]), 1e-10) << "case " << t << " level " << j << " k " << k;
      }
    }
  }
}

TEST(Properties, HalfShiftFlipsOddSamples) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < kCases; ++t) {
    const unsigned e = 1 + static_cast<unsigned>(rng() % 10);
    const std::size_t len = std::size_t{1} << e;
    RealVector v(len);
    for (auto& x : v) x = u(rng);
    RealVector shifted(len);
    for (std::size_t k = 0; k < len; ++k) shifted[k] = v[(k + len / 2) % len];
    const ComplexVector a = fft_radix2(to_complex(v));
    const ComplexVector b = fft_radix2(to_complex(shifted));
    for (std::size_t k = 0; k < len; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      ASSERT_LE(std::abs(b[k] - sign * a[k]), 1e-10) << "case " << t;
    }
  }
}

TEST(Properties, DctFromSpectrum) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t n = std::size_t{1} << (rng() % 10);
    RealVector x(n);
    for (auto& v : x) v = u(rng);
    const RealVector want = naive_dct2(x);
    const RealVector got = dct2_via_fft(x);
    for (std::size_t k = 0; k < n; ++k) ASSERT_NEAR(got[k], want[k], 1e-10) << "case " << t;
  }
}

TEST(Properties, SpectrumFromDct) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t n = std::size_t{1} << (rng() % 10);
    RealVector x(n);
    for (auto& v : x) v = u(rng);
    const ComplexVector want = fft_radix2(to_complex(build_y(x)));
    const RealVector c = naive_dct2(x);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      ASSERT_LE(std::abs(dct_backed_sample(c, k) - want[k]), 1e-10) << "case " << t << " k " << k;
    }
  }
}

TEST(Properties, RoundTrips) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t n = std::size_t{1} << (rng() % 11);
    ComplexVector v(n);
    RealVector x(n);
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = {u(rng), u(rng)};
      x[k] = u(rng);
    }
    const ComplexVector back = ifft_radix2(fft_radix2(v));
    for (std::size_t k = 0; k < n; ++k) ASSERT_LE(std::abs(back[k] - v[k]), 1e-12) << "case " << t;
    if (n <= 256) {
      const RealVector xb = naive_dct3(naive_dct2(x));
      for (std::size_t k = 0; k < n; ++k) ASSERT_NEAR(xb[k], x[k], 1e-12) << "case " << t;
    }
  }
}

TEST(Properties, PeriodizedSupportShapes) {
  // Every level of every J = 5 instance is one symmetric block or two
  // disjoint mirrored blocks. The last level may also split into a middle
  // and a boundary block.
  const unsigned big_j = 5;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (std::size_t first = 0; first < 16; ++first) {
    for (std::size_t m = 1; m < 16; ++m) {
      RealVector x(16, 0.0);
      for (std::size_t i = 0; i < m; ++i) x[(first + i) % 16] = 10.0 - u(rng);
      const RealVector y = build_y(x);
      for (unsigned j = 0; j <= big_j; ++j) {
        const RealVector p = periodize(y, j);
        const std::size_t h = p.size();
        IndexSet s;
        for (std::size_t k = 0; k < h; ++k) {
          if (p[k] > 0.0) s.push_back(k);
        }
        const std::size_t cover = covering_interval_length(s, h);
        const bool one_block = cover == s.size();
        IndexSet half;
        for (std::size_t k : s) {
          if (k < h / 2) half.push_back(k);
        }
        const bool two_block = !one_block && !half.empty() && half.front() > 0 && half.back() < h / 2 - 1 &&
                               half.back() - half.front() + 1 == half.size() && 2 * half.size() == s.size();
        std::size_t gaps = 0;
        for (std::size_t i = 0; i + 1 < half.size(); ++i) gaps += half[i + 1] != half[i] + 1;
        const bool split = j == big_j && !one_block && !half.empty() && half.front() == 0 &&
                           half.back() == h / 2 - 1 && gaps == 1;
        ASSERT_EQ(int(one_block) + int(two_block) + int(split), 1)
            << "first " << first << " m " << m << " level " << j;
      }
    }
  }
}

TEST(Properties, LevelsMatchPeriodizations) {
  std::mt19937_64 rng(8);
  AlgorithmConfig config;
  for (int t = 0; t < kCases; ++t) {
    const Case c = random_case(rng);
    DenseOracle oracle(fft_radix2(to_complex(c.y)));
    const double tol = 1e-9 * max_abs(c.x);
    bool in_two_block = false;
    std::size_t two_block_len = 0;
    walk(oracle, config, [&](const IterationState& prior, const IterationState& next, const StepTrace& tr) {
      const RealVector truth = periodize(c.y, next.level);
      const RealVector got = next.y.to_dense();
      for (std::size_t k = 0; k < truth.size(); ++k) {
        ASSERT_NEAR(got[k], truth[k], tol) << "case " << t << " level " << next.level;
      }
      // The label covers everything above the threshold.
      const IndexSet label = support_indices(next.support, next.level);
      for (const auto& e : next.y.entries()) {
        if (config.keeps(e.value)) {
          ASSERT_TRUE(std::binary_search(label.begin(), label.end(), e.index)) << "case " << t;
        }
      }
      // Once two blocks appear they stay, with the same length, until the end.
      if (in_two_block && next.level < c.n_exp) {
        const auto* two = std::get_if<TwoBlockReflected>(&next.support);
        ASSERT_NE(two, nullptr) << "case " << t;
        ASSERT_EQ(two->block_length, two_block_len);
      }
      if (const auto* two = std::get_if<TwoBlockReflected>(&next.support); two != nullptr && !in_two_block) {
        in_two_block = true;
        two_block_len = two->block_length;
      }
      // Case B always picks the shift that reproduces the truth.
      if (tr.lambda) {
        const auto& two = std::get<TwoBlockReflected>(prior.support);
        const std::size_t h = prior.y.size();
        const bool moved = *tr.lambda == two.mu + h;
        ASSERT_EQ(*tr.lambda == two.mu || moved, true);
        ASSERT_GT(truth[two.mu + (moved ? h : 0)], 0.0) << "case " << t;
      }
    });
  }
}

TEST(Properties, ReconstructionAndSampleBound) {
  std::mt19937_64 rng(9);
  AlgorithmConfig config;
  for (int t = 0; t < kCases; ++t) {
    const Case c = random_case(rng);
    const std::size_t m = covering_interval_length(
        [&] {
          IndexSet s;
          for (std::size_t k = 0; k < c.x.size(); ++k) {
            if (c.x[k] != 0.0) s.push_back(k);
          }
          return s;
        }(),
        c.x.size());
    DenseOracle oracle(fft_radix2(to_complex(c.y)));
    const ReconstructionResult r = reconstruct(oracle, config);
    ASSERT_LE(max_abs([&] {
                RealVector d(c.y.size());
                for (std::size_t k = 0; k < d.size(); ++k) d[k] = r.y[k] - c.y[k];
                return d;
              }()),
              1e-9 * max_abs(c.x))
        << "case " << t;
    ASSERT_LE(r.stats.distinct_indices, sample_bound(c.n_exp, m)) << "case " << t;
    for (const auto& tr : r.traces) ASSERT_FALSE(tr.fallback) << "case " << t;

    DctProblem p{dct2_via_fft(c.x), config};
    const DctResult d = reconstruct_x(p);
    for (std::size_t k = 0; k < c.x.size(); ++k) ASSERT_NEAR(d.x[k], c.x[k], 1e-9 * max_abs(c.x)) << "case " << t;
    ASSERT_LE(d.coefficient_stats.distinct_indices, d.spectrum_stats.distinct_indices);
  }
}

TEST(Properties, ZeroFilledInstancesStayExact) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < kCases; ++t) {
    TrialSpec s;
    s.n_exp = 4 + static_cast<unsigned>(rng() % 7);
    s.block_length = 1 + rng() % ((std::size_t{1} << (s.n_exp - 1)) - 1);
    s.seed = rng();
    s.epsilon = 1e-8;
    s.mode = (t % 2 == 0) ? Mode::Ifft : Mode::Idct;
    const TrialResult r = run_trial(s);
    ASSERT_LE(r.max_abs_err, 1e-9) << "case " << t;
    ASSERT_TRUE(r.support_correct) << "case " << t;
  }
}

}  // namespace
}  // namespace sparsedct
