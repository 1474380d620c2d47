#pragma once

#include <cstddef>

#include "sparsedct/oracle.hpp"
#include "sparsedct/sparse_ifft.hpp"

namespace sparsedct {

// Inverse DCT-II of a block-sparse nonnegative vector from its coefficients.
struct DctProblem {
  RealVector coefficients;
  AlgorithmConfig config;

  // Throws std::invalid_argument unless N >= 2 is a power of two.
  void validate() const;
};

struct DctResult {
  RealVector x;
  SupportState support = zero_support();
  // Requests made against the length-2N spectrum.
  OracleStats spectrum_stats;
  // Distinct DCT-II coefficients actually read.
  OracleStats coefficient_stats;
  std::vector<StepTrace> traces;
};

DctResult reconstruct_x(const DctProblem& problem);

}  // namespace sparsedct
