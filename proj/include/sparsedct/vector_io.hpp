#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <variant>

#include "sparsedct/transforms.hpp"

namespace sparsedct {

// Text vector files: a "# realvec <len>" or "# complexvec <len>" header, then
// one entry per line with 17 significant digits. Complex entries are "re\tim".

class VectorFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyVector = std::variant<RealVector, ComplexVector>;

void write_vector(std::ostream& out, std::span<const double> v);
void write_vector(std::ostream& out, std::span<const Complex> v);

AnyVector read_vector(std::istream& in);
RealVector read_real_vector(std::istream& in);
// Accepts real files too (imaginary parts zero).
ComplexVector read_complex_vector(std::istream& in);

void save_vector(const std::filesystem::path& path, std::span<const double> v);
void save_vector(const std::filesystem::path& path, std::span<const Complex> v);
AnyVector load_vector(const std::filesystem::path& path);

}  // namespace sparsedct
