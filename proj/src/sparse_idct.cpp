#include "sparsedct/sparse_idct.hpp"

#include <stdexcept>
#include <string>

namespace sparsedct {

void DctProblem::validate() const {
  const std::size_t n = coefficients.size();
  if (n < 2 || !is_power_of_two(n)) {
    throw std::invalid_argument("coefficient count " + std::to_string(n) +
                                " is not a power of two >= 2");
  }
  require_finite(coefficients, "DCT-II coefficients");
}

DctResult reconstruct_x(const DctProblem& problem) {
  problem.validate();
  const std::size_t n = problem.coefficients.size();
  DctOracle oracle(problem.coefficients);
  ReconstructionResult r = reconstruct(oracle, problem.config);

  DctResult out;
  out.x.assign(r.y.begin(), r.y.begin() + static_cast<std::ptrdiff_t>(n));
  out.support = std::move(r.support);
  out.spectrum_stats = r.stats;
  out.coefficient_stats = oracle.coefficient_stats();
  out.traces = std::move(r.traces);
  return out;
}

}  // namespace sparsedct
