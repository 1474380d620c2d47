#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "sparsedct/transforms.hpp"

namespace sparsedct {

using IndexSet = std::vector<std::size_t>;

enum class BlockCenter { Middle, Boundary, Full };

// Symmetric one-block support I_{mu, 2^j-1-mu}. length == 0 is the sentinel
// for an all-zero periodization.
struct OneBlock {
  std::size_t mu = 0;
  std::size_t length = 0;
  BlockCenter center = BlockCenter::Full;

  bool is_zero() const { return length == 0; }
  friend bool operator==(const OneBlock&, const OneBlock&) = default;
};

// Blocks I_{mu, nu} and I_{2^j-1-nu, 2^j-1-mu}, nu = mu + block_length - 1.
struct TwoBlockReflected {
  std::size_t mu = 0;
  std::size_t block_length = 0;

  std::size_t nu() const { return mu + block_length - 1; }
  friend bool operator==(const TwoBlockReflected&, const TwoBlockReflected&) = default;
};

// Final-level support made of a middle-centered block starting at mu and a
// boundary-centered block starting at eta, mu < 2^(J-1) <= eta.
struct TwoBlockFinal {
  std::size_t mu = 0;
  std::size_t eta = 0;
  std::size_t len_middle = 0;
  std::size_t len_boundary = 0;

  friend bool operator==(const TwoBlockFinal&, const TwoBlockFinal&) = default;
};

// Explicit index set, used when the final level is not labeled structurally.
struct Unstructured {
  IndexSet indices;

  friend bool operator==(const Unstructured&, const Unstructured&) = default;
};

using SupportState = std::variant<OneBlock, TwoBlockReflected, TwoBlockFinal, Unstructured>;

inline SupportState zero_support() { return OneBlock{0, 0, BlockCenter::Full}; }
bool is_zero_support(const SupportState& s);

// Input description: a length-2^(J-1) vector with values on a wrapped block.
struct BlockVectorSpec {
  unsigned n_exp = 0;
  std::size_t first_index = 0;
  RealVector values;

  std::size_t vector_length() const { return std::size_t{1} << (n_exp - 1); }
  std::size_t block_length() const { return values.size(); }
  // Checks 1 <= m < N, first_index < N and nonzero end entries.
  void validate() const;
  RealVector to_vector() const;
};

// Counter identity J_N: entry k goes to N-1-k.
RealVector reflect(std::span<const double> v);

// (x, J_N x), the length-2N mirrored extension.
RealVector build_y(std::span<const double> x);

// y^(j)_k = sum_l y_{k + 2^j l}; y must have length 2^J with j <= J.
RealVector periodize(std::span<const double> y, unsigned level);

// True iff no nonzero y_k is annihilated in any periodization, i.e.
// |y^(j)_(k mod 2^j)| > threshold for all j.
bool check_no_cancellation(std::span<const double> y, double threshold = 0.0);

// Explicit sorted index set of the support at the given level.
IndexSet support_indices(const SupportState& s, unsigned level);

// Sorted indices of I_{first, first+length-1} taken mod `modulus`.
IndexSet cyclic_interval(std::size_t first, std::size_t length, std::size_t modulus);

// Length of the shortest cyclic interval in Z_modulus covering `sorted`.
std::size_t covering_interval_length(const IndexSet& sorted, std::size_t modulus);

}  // namespace sparsedct
