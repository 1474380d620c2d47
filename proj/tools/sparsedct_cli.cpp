#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparsedct/harness.hpp"
#include "sparsedct/sparse_idct.hpp"
#include "sparsedct/sparse_ifft.hpp"
#include "sparsedct/vector_io.hpp"

using namespace sparsedct;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_snr(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "Inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad SNR '" + s + "'");
  }
  if (used != s.size() || std::isnan(v)) throw UsageError("bad SNR '" + s + "'");
  return v;
}

std::vector<double> parse_snr_list(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(parse_snr(s));
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SPARSEDCT_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("SPARSEDCT_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

CompareMode parse_compare(const std::string& s) {
  if (s == "signed") return CompareMode::Signed;
  if (s == "magnitude") return CompareMode::Magnitude;
  throw UsageError("unknown compare mode '" + s + "'");
}

// Writes to the file, or stdout for an empty path / "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  fn(out);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string describe(const SupportState& s) {
  if (const auto* one = std::get_if<OneBlock>(&s)) {
    if (one->is_zero()) return "zero";
    const char* c = one->center == BlockCenter::Middle ? "middle" : one->center == BlockCenter::Boundary ? "boundary" : "full";
    return "one-block mu=" + std::to_string(one->mu) + " length=" + std::to_string(one->length) + " " + c;
  }
  if (const auto* two = std::get_if<TwoBlockReflected>(&s)) {
    return "two-block mu=" + std::to_string(two->mu) + " length=" + std::to_string(two->block_length);
  }
  if (const auto* fin = std::get_if<TwoBlockFinal>(&s)) {
    return "two-block-final mu=" + std::to_string(fin->mu) + " eta=" + std::to_string(fin->eta) +
           " lengths=" + std::to_string(fin->len_middle) + "," + std::to_string(fin->len_boundary);
  }
  return "unstructured count=" + std::to_string(std::get<Unstructured>(s).indices.size());
}

struct Options {
  unsigned n_exp = 10;
  std::size_t block_length = 10;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::string snr = "inf";
  unsigned b_exp = 0;
  std::size_t trials = 10;
  std::string mode = "ifft";
  std::string compare = "signed";
  std::string out;
  std::string in;
  std::string truth_out;
  std::vector<std::size_t> block_lengths;
  std::vector<std::string> snr_list;
  std::vector<double> epsilon_list;
  bool no_full = false;
  bool snr_given = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "RNG seed (falls back to SPARSEDCT_SEED)");
  cmd->add_option("--epsilon", o.epsilon, "threshold")->check(CLI::NonNegativeNumber);
  cmd->add_option("--b-exp", o.b_exp, "initial level b");
  cmd->add_option("--compare", o.compare, "signed|magnitude")->check(CLI::IsMember({"signed", "magnitude"}));
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
}

int cmd_gen(const Options& o) {
  TrialSpec spec;
  spec.n_exp = o.n_exp;
  spec.block_length = o.block_length;
  spec.seed = resolve_seed(o.seed);
  spec.snr_db = parse_snr(o.snr);
  spec.mode = parse_mode(o.mode);
  const Instance inst = gen_instance(spec);
  const NoiseSpec noise{spec.snr_db, inst.noise_seed};
  if (spec.mode == Mode::Ifft) {
    const ComplexVector y(inst.y.begin(), inst.y.end());
    const auto [spectrum, snr] = add_noise_to_snr(fft_radix2(y), noise);
    with_output(o.out, [&](std::ostream& os) { write_vector(os, std::span<const Complex>(spectrum)); });
    if (!o.truth_out.empty()) save_vector(o.truth_out, std::span<const double>(inst.y));
  } else {
    const auto [coeffs, snr] = add_noise_to_snr(dct2_via_fft(inst.x), noise);
    with_output(o.out, [&](std::ostream& os) { write_vector(os, std::span<const double>(coeffs)); });
    if (!o.truth_out.empty()) save_vector(o.truth_out, std::span<const double>(inst.x));
  }
  return kOk;
}

AlgorithmConfig algorithm_config(const Options& o, Mode mode) {
  AlgorithmConfig c;
  c.epsilon = o.epsilon.value_or(default_epsilon(mode, parse_snr(o.snr)));
  c.b_exp = o.b_exp;
  c.compare = parse_compare(o.compare);
  return c;
}

int cmd_ifft(const Options& o) {
  if (o.in.empty()) throw UsageError("ifft needs --in <spectrum file>");
  const AnyVector loaded = load_vector(o.in);
  const ComplexVector spectrum = std::holds_alternative<ComplexVector>(loaded)
                                     ? std::get<ComplexVector>(loaded)
                                     : ComplexVector(std::get<RealVector>(loaded).begin(), std::get<RealVector>(loaded).end());
  if (spectrum.size() < 2 || !is_power_of_two(spectrum.size())) {
    throw UsageError("spectrum length must be a power of two >= 2");
  }
  DenseOracle oracle(spectrum);
  const ReconstructionResult r = reconstruct(oracle, algorithm_config(o, Mode::Ifft));
  with_output(o.out, [&](std::ostream& os) { write_vector(os, std::span<const double>(r.y)); });
  std::cerr << "support: " << describe(r.support) << "\nsamples: " << r.stats.distinct_indices
            << " distinct of " << spectrum.size() << "\n";
  return kOk;
}

int cmd_idct(const Options& o) {
  if (o.in.empty()) throw UsageError("idct needs --in <coefficient file>");
  std::ifstream in(o.in);
  if (!in) throw std::runtime_error("cannot open " + o.in);
  DctProblem problem{read_real_vector(in), algorithm_config(o, Mode::Idct)};
  const DctResult r = reconstruct_x(problem);
  with_output(o.out, [&](std::ostream& os) { write_vector(os, std::span<const double>(r.x)); });
  std::cerr << "support: " << describe(r.support) << "\ncoefficients read: "
            << r.coefficient_stats.distinct_indices << " of " << problem.coefficients.size() << "\n";
  return kOk;
}

int cmd_bench(const Options& o) {
  BenchConfig c;
  c.n_exp = o.n_exp;
  c.block_lengths = o.block_lengths.empty() ? std::vector<std::size_t>{o.block_length} : o.block_lengths;
  c.trials = o.trials;
  c.seed = resolve_seed(o.seed);
  c.mode = parse_mode(o.mode);
  c.epsilon = o.epsilon;
  c.snr_db = parse_snr(o.snr);
  c.b_exp = o.b_exp;
  c.compare = parse_compare(o.compare);
  c.include_full = !o.no_full;
  const auto rows = bench_sweep(c);
  with_output(o.out, [&](std::ostream& os) { write_bench_csv(os, rows); });
  return kOk;
}

int cmd_noise(const Options& o) {
  NoiseConfig c;
  c.n_exp = o.n_exp;
  c.block_length = o.block_length;
  if (!o.snr_list.empty()) {
    c.snr_list = parse_snr_list(o.snr_list);
  } else if (o.snr_given) {
    c.snr_list = {parse_snr(o.snr)};
  }
  c.epsilon_list = o.epsilon_list;
  if (o.epsilon && c.epsilon_list.empty()) c.epsilon_list = {*o.epsilon};
  c.trials = o.trials;
  c.seed = resolve_seed(o.seed);
  c.mode = parse_mode(o.mode);
  c.b_exp = o.b_exp;
  c.compare = parse_compare(o.compare);
  const auto rows = noise_sweep(c);
  with_output(o.out, [&](std::ostream& os) { write_noise_csv(os, rows); });
  return kOk;
}

int cmd_verify(const Options& o, bool n_exp_given, bool trials_given) {
  const unsigned j_max = n_exp_given ? o.n_exp : 5;
  const std::size_t seeds = trials_given ? o.trials : 5;
  const VerifyReport rep = verify_exhaustive(j_max, seeds, o.epsilon.value_or(1e-8));
  with_output(o.out, [&](std::ostream& os) {
    os << "instances " << rep.instances << "\nfailures " << rep.failures << "\nmax_err " << rep.max_err << "\n";
    for (const auto& note : rep.failure_notes) os << "  " << note << "\n";
    os << (rep.ok() ? "PASS" : "FAIL") << "\n";
  });
  return rep.ok() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse inverse FFT and DCT-II for block-supported vectors"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "write a random instance's spectrum or DCT-II coefficients");
  auto* ifft = app.add_subcommand("ifft", "reconstruct y from a spectrum file");
  auto* idct = app.add_subcommand("idct", "reconstruct x from a DCT-II coefficient file");
  auto* bench = app.add_subcommand("bench", "runtime/accuracy sweep, CSV");
  auto* noise = app.add_subcommand("noise-sweep", "recovery rates under noise, CSV");
  auto* verify = app.add_subcommand("verify", "exhaustive check of every small instance");

  CLI::Option* n_exp_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  std::vector<CLI::Option*> snr_opts;
  for (auto* cmd : {gen, ifft, idct, bench, noise, verify}) {
    add_common(cmd, o);
    snr_opts.push_back(cmd->add_option("--snr", o.snr, "SNR in dB or inf"));
    cmd->add_option("--mode", o.mode, "ifft|idct")->check(CLI::IsMember({"ifft", "idct"}));
  }
  for (auto* cmd : {gen, bench, noise}) {
    cmd->add_option("--n-exp", o.n_exp, "J, vector length 2^J")->check(CLI::Range(2u, 30u));
    cmd->add_option("--block-length", o.block_length, "m")->check(CLI::PositiveNumber);
  }
  gen->add_option("--truth-out", o.truth_out, "also write the true vector here");
  ifft->add_option("--in", o.in, "complexvec spectrum file")->check(CLI::ExistingFile);
  idct->add_option("--in", o.in, "realvec coefficient file")->check(CLI::ExistingFile);
  for (auto* cmd : {bench, noise}) cmd->add_option("--trials", o.trials, "trials per cell")->check(CLI::PositiveNumber);
  bench->add_option("--block-lengths", o.block_lengths, "several m values")->delimiter(',');
  bench->add_flag("--no-full", o.no_full, "skip the full-transform rows");
  noise->add_option("--snr-list", o.snr_list, "SNR values")->delimiter(',');
  noise->add_option("--epsilon-list", o.epsilon_list, "thresholds")->delimiter(',');
  n_exp_opt = verify->add_option("--n-exp", o.n_exp, "largest J")->check(CLI::Range(2u, 8u));
  trials_opt = verify->add_option("--trials", o.trials, "seeds per instance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  for (auto* opt : snr_opts) o.snr_given = o.snr_given || opt->count() > 0;

  try {
    if (*gen) return cmd_gen(o);
    if (*ifft) return cmd_ifft(o);
    if (*idct) return cmd_idct(o);
    if (*bench) return cmd_bench(o);
    if (*noise) return cmd_noise(o);
    if (*verify) return cmd_verify(o, n_exp_opt->count() > 0, trials_opt->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
