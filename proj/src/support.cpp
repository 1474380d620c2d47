#include "sparsedct/support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsedct {

bool is_zero_support(const SupportState& s) {
  const auto* one = std::get_if<OneBlock>(&s);
  return one != nullptr && one->is_zero();
}

void BlockVectorSpec::validate() const {
  if (n_exp < 2 || n_exp > 62) throw std::invalid_argument("n_exp must be in [2, 62]");
  const std::size_t n = vector_length();
  const std::size_t m = values.size();
  if (m < 1 || m >= n) {
    throw std::invalid_argument("block length " + std::to_string(m) + " outside [1, " +
                                std::to_string(n) + ")");
  }
  if (first_index >= n) throw std::invalid_argument("first index out of range");
  if (values.front() == 0.0 || values.back() == 0.0) {
    throw std::invalid_argument("first and last block entries must be nonzero");
  }
  require_finite(values, "block values");
}

RealVector BlockVectorSpec::to_vector() const {
  validate();
  const std::size_t n = vector_length();
  RealVector x(n, 0.0);
  for (std::size_t r = 0; r < values.size(); ++r) x[(first_index + r) % n] = values[r];
  return x;
}

RealVector reflect(std::span<const double> v) { return RealVector(v.rbegin(), v.rend()); }

RealVector build_y(std::span<const double> x) {
  RealVector y(2 * x.size());
  std::copy(x.begin(), x.end(), y.begin());
  std::copy(x.rbegin(), x.rend(), y.begin() + static_cast<std::ptrdiff_t>(x.size()));
  return y;
}

RealVector periodize(std::span<const double> y, unsigned level) {
  const unsigned top = log2_exact(y.size());
  if (level > top) {
    throw std::invalid_argument("periodization level " + std::to_string(level) +
                                " exceeds " + std::to_string(top));
  }
  const std::size_t len = std::size_t{1} << level;
  RealVector out(len, 0.0);
  for (std::size_t k = 0; k < y.size(); ++k) out[k & (len - 1)] += y[k];
  return out;
}

bool check_no_cancellation(std::span<const double> y, double threshold) {
  const unsigned top = log2_exact(y.size());
  std::vector<RealVector> ladder(top + 1);
  ladder[top] = RealVector(y.begin(), y.end());
  for (unsigned j = top; j > 0; --j) {
    const std::size_t half = std::size_t{1} << (j - 1);
    ladder[j - 1].resize(half);
    for (std::size_t k = 0; k < half; ++k) ladder[j - 1][k] = ladder[j][k] + ladder[j][k + half];
  }
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] == 0.0) continue;
    for (unsigned j = 0; j <= top; ++j) {
      const std::size_t mask = (std::size_t{1} << j) - 1;
      if (!(std::abs(ladder[j][k & mask]) > threshold)) return false;
    }
  }
  return true;
}

IndexSet cyclic_interval(std::size_t first, std::size_t length, std::size_t modulus) {
  IndexSet out;
  length = std::min(length, modulus);
  out.reserve(length);
  for (std::size_t r = 0; r < length; ++r) out.push_back((first + r) % modulus);
  std::sort(out.begin(), out.end());
  return out;
}

IndexSet support_indices(const SupportState& s, unsigned level) {
  const std::size_t len = std::size_t{1} << level;
  if (const auto* one = std::get_if<OneBlock>(&s)) {
    return cyclic_interval(one->mu, one->length, len);
  }
  if (const auto* two = std::get_if<TwoBlockReflected>(&s)) {
    IndexSet out = cyclic_interval(two->mu, two->block_length, len);
    const std::size_t mirror_first = (len - 1 - two->nu() % len) % len;
    IndexSet second = cyclic_interval(mirror_first, two->block_length, len);
    out.insert(out.end(), second.begin(), second.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  if (const auto* fin = std::get_if<TwoBlockFinal>(&s)) {
    IndexSet out = cyclic_interval(fin->mu, fin->len_middle, len);
    IndexSet second = cyclic_interval(fin->eta, fin->len_boundary, len);
    out.insert(out.end(), second.begin(), second.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  return std::get<Unstructured>(s).indices;
}

std::size_t covering_interval_length(const IndexSet& sorted, std::size_t modulus) {
  if (sorted.empty()) return 0;
  // The covering arc is the circle minus its largest gap.
  std::size_t largest_gap = 0;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    largest_gap = std::max(largest_gap, sorted[i + 1] - sorted[i] - 1);
  }
  largest_gap = std::max(largest_gap, modulus - 1 - sorted.back() + sorted.front());
  return modulus - largest_gap;
}

}  // namespace sparsedct
