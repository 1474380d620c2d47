#include "sparsedct/vector_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace sparsedct {

namespace {

std::string format_double(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.16e", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw VectorFormatError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void write_vector(std::ostream& out, std::span<const double> v) {
  out << "# realvec " << v.size() << '\n';
  for (double e : v) out << format_double(e) << '\n';
}

void write_vector(std::ostream& out, std::span<const Complex> v) {
  out << "# complexvec " << v.size() << '\n';
  for (const auto& e : v) out << format_double(e.real()) << '\t' << format_double(e.imag()) << '\n';
}

AnyVector read_vector(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw VectorFormatError("empty vector file");
  std::istringstream header(line);
  std::string hash, kind;
  long long len = -1;
  if (!(header >> hash >> kind >> len) || hash != "#" || len < 0 ||
      (kind != "realvec" && kind != "complexvec")) {
    throw VectorFormatError("bad header '" + line + "'");
  }
  const bool complex = kind == "complexvec";
  RealVector re;
  ComplexVector cx;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    if (complex) {
      const auto sep = body.find_first_of(" \t");
      if (sep == std::string_view::npos) {
        throw VectorFormatError("line " + std::to_string(lineno) + ": expected two columns");
      }
      cx.emplace_back(parse_double(body.substr(0, sep), lineno), parse_double(body.substr(sep), lineno));
    } else {
      re.push_back(parse_double(body, lineno));
    }
  }
  const std::size_t got = complex ? cx.size() : re.size();
  if (got != static_cast<std::size_t>(len)) {
    throw VectorFormatError("header says " + std::to_string(len) + " entries, found " +
                            std::to_string(got));
  }
  if (complex) return cx;
  return re;
}

RealVector read_real_vector(std::istream& in) {
  AnyVector v = read_vector(in);
  if (auto* r = std::get_if<RealVector>(&v)) return std::move(*r);
  throw VectorFormatError("expected a realvec file");
}

ComplexVector read_complex_vector(std::istream& in) {
  AnyVector v = read_vector(in);
  if (auto* c = std::get_if<ComplexVector>(&v)) return std::move(*c);
  const auto& r = std::get<RealVector>(v);
  return ComplexVector(r.begin(), r.end());
}

void save_vector(const std::filesystem::path& path, std::span<const double> v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_vector(out, v);
}

void save_vector(const std::filesystem::path& path, std::span<const Complex> v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_vector(out, v);
}

AnyVector load_vector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_vector(in);
}

}  // namespace sparsedct
