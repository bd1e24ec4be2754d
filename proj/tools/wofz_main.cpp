// wofz: command-line front end for the Faddeeva function library.
// Exit codes: 0 success, 2 usage/domain/io failure, 3 the oracle could not
// certify a reference value (method inconsistency or non-convergence).

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "wofz/eval.hpp"
#include "wofz/format.hpp"
#include "wofz/lineshape.hpp"
#include "wofz/oracle.hpp"
#include "wofz/verify.hpp"

namespace {

using wofz::CoefficientTable;
using wofz::Variant;
using wofz::format::double_shortest;

std::complex<double> evaluate(Variant variant, std::complex<double> z,
                              const CoefficientTable& table) {
  switch (variant) {
    case Variant::Eq2:
      return wofz::w_eq2(z, table);
    case Variant::Eq4:
      return wofz::w_eq4(z, table);
    default:
      return wofz::w_any(z, table);
  }
}

// --digits beats WOFZ_ORACLE_DIGITS beats the library default.
int resolve_digits(bool flag_set, int flag_value) {
  if (flag_set) {
    return flag_value;
  }
  const char* env = std::getenv("WOFZ_ORACLE_DIGITS");
  if (env == nullptr || *env == '\0') {
    return wofz::oracle::kDefaultDigits;
  }
  const std::string s(env);
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() ||
      v < wofz::oracle::kMinDigits || v > wofz::oracle::kMaxDigits) {
    throw std::runtime_error(
        "WOFZ_ORACLE_DIGITS must be an integer in [" +
        std::to_string(wofz::oracle::kMinDigits) + ", " +
        std::to_string(wofz::oracle::kMaxDigits) + "], got \"" + s + "\"");
  }
  return v;
}

struct EvalOpts {
  double x = 0.0;
  double y = 0.0;
  Variant variant = Variant::Auto;
  bool check = false;
  int digits = wofz::oracle::kDefaultDigits;
  bool digits_set = false;
};

int run_eval(const EvalOpts& o, const CoefficientTable& table) {
  const std::complex<double> z{o.x, o.y};
  const std::complex<double> w = evaluate(o.variant, z, table);
  std::string out = "re=" + double_shortest(w.real()) +
                    " im=" + double_shortest(w.imag());
  if (o.check) {
    const int digits = resolve_digits(o.digits_set, o.digits);
    const wofz::oracle::ReferenceValue ref = wofz::oracle::w_ref(z, digits);
    const auto [dre, dim] = wofz::verify::rel_err_components(w, ref);
    out += " delta_re=" + double_shortest(dre) +
           " delta_im=" + double_shortest(dim);
  }
  std::cout << out << '\n';
  return 0;
}

struct BatchOpts {
  std::string input;
  std::string output;
  Variant variant = Variant::Auto;
};

int run_batch(const BatchOpts& o, const CoefficientTable& table) {
  std::ifstream in(o.input, std::ios::binary);
  if (!in) {
    throw std::runtime_error("batch: cannot open " + o.input);
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) {
    throw std::runtime_error("batch: cannot open " + o.output);
  }
  std::string raw;
  if (!std::getline(in, raw) || wofz::format::strip_cr(raw) != "x,y") {
    throw std::runtime_error("batch: " + o.input +
                             " must start with header x,y");
  }
  out << "x,y,re,im\n";
  int row = 1;
  int warnings = 0;
  while (std::getline(in, raw)) {
    ++row;
    const std::string_view text = wofz::format::strip_cr(raw);
    if (text.empty()) {
      continue;
    }
    const auto fields = wofz::format::split(text, ',');
    if (fields.size() != 2) {
      throw std::runtime_error("batch: line " + std::to_string(row) +
                               ": expected 2 fields, got " +
                               std::to_string(fields.size()));
    }
    const auto px = wofz::format::parse_double(fields[0]);
    const auto py = wofz::format::parse_double(fields[1]);
    if (!px || !py) {
      throw std::runtime_error("batch: line " + std::to_string(row) +
                               ": fields must be numbers");
    }
    out << double_shortest(*px) << ',' << double_shortest(*py) << ',';
    try {
      const std::complex<double> w = evaluate(o.variant, {*px, *py}, table);
      out << double_shortest(w.real()) << ',' << double_shortest(w.imag())
          << '\n';
    } catch (const std::exception&) {
      out << "nan,nan\n";
      ++warnings;
    }
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("batch: write failed for " + o.output);
  }
  if (warnings > 0) {
    std::cerr << "warning: " << warnings << " row(s) failed to evaluate\n";
  }
  return 0;
}

struct GridOpts {
  double xmin;
  double xmax;
  int nx;
  double ymin;
  double ymax;
  int ny;
  bool log_x;
  bool log_y;

  wofz::verify::GridSpec to_grid() const {
    wofz::verify::GridSpec g;
    g.x_min = xmin;
    g.x_max = xmax;
    g.nx = nx;
    g.y_min = ymin;
    g.y_max = ymax;
    g.ny = ny;
    g.x_scale = log_x ? wofz::verify::Scale::Log10
                      : wofz::verify::Scale::Linear;
    g.y_scale = log_y ? wofz::verify::Scale::Log10
                      : wofz::verify::Scale::Linear;
    return g;
  }
};

void add_grid_flags(CLI::App* cmd, GridOpts& g) {
  cmd->add_option("--xmin", g.xmin, "grid x minimum")
      ->capture_default_str();
  cmd->add_option("--xmax", g.xmax, "grid x maximum")
      ->capture_default_str();
  cmd->add_option("--nx", g.nx, "grid x node count")->capture_default_str();
  cmd->add_option("--ymin", g.ymin, "grid y minimum")
      ->capture_default_str();
  cmd->add_option("--ymax", g.ymax, "grid y maximum")
      ->capture_default_str();
  cmd->add_option("--ny", g.ny, "grid y node count")->capture_default_str();
  cmd->add_flag("--log-x,!--no-log-x", g.log_x,
                "space x nodes uniformly in log10");
  cmd->add_flag("--log-y,!--no-log-y", g.log_y,
                "space y nodes uniformly in log10");
}

struct ErrmapOpts {
  GridOpts grid{0.0, 10.0, 101, 1e-14, 1e-1, 61, false, true};
  Variant variant = Variant::Auto;
  std::string output = "errmap.csv";
  std::string summary_path;
  int digits = wofz::oracle::kDefaultDigits;
  bool digits_set = false;
};

int run_errmap(const ErrmapOpts& o, const CoefficientTable& table) {
  const int digits = resolve_digits(o.digits_set, o.digits);
  const wofz::verify::ErrorMap map =
      wofz::verify::sweep(o.grid.to_grid(), o.variant, table, digits);
  wofz::verify::write_csv(map, o.output);
  const wofz::verify::ErrorSummary summary = wofz::verify::summarize(map);
  std::cout << wofz::verify::summary_json(summary) << '\n';
  if (!o.summary_path.empty()) {
    wofz::verify::write_summary(summary, o.summary_path);
  }
  return 0;
}

int run_overlap(const GridOpts& g, const CoefficientTable& table) {
  const double worst = wofz::verify::overlap_consistency(g.to_grid(), table);
  std::cout << "max_rel_discrepancy=" << double_shortest(worst) << '\n';
  return 0;
}

struct VoigtOpts {
  std::string lines_path;
  double nu_start = 0.0;
  double nu_end = 0.0;
  int n_points = 1001;
  std::string output = "profile.csv";
};

int run_voigt(const VoigtOpts& o, const CoefficientTable& table) {
  const auto lines = wofz::lineshape::parse_line_list(o.lines_path);
  const wofz::lineshape::WavenumberGrid grid{o.nu_start, o.nu_end,
                                             o.n_points};
  const std::vector<double> values =
      wofz::lineshape::synthesize(lines, grid, table);
  const std::vector<double> nus = wofz::lineshape::grid_nu(grid);
  std::ofstream out(o.output, std::ios::binary);
  if (!out) {
    throw std::runtime_error("voigt: cannot open " + o.output);
  }
  out << "nu,value\n";
  for (std::size_t i = 0; i < nus.size(); ++i) {
    out << double_shortest(nus[i]) << ',' << double_shortest(values[i])
        << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("voigt: write failed for " + o.output);
  }
  return 0;
}

struct BenchOpts {
  std::int64_t n = 1000000;
  Variant variant = Variant::Auto;
};

// Order-independent fold so the parallel checksum cannot depend on the
// schedule; the index multiplier still pins each value to its slot.
std::uint64_t point_hash(std::int64_t i, std::complex<double> w) {
  const auto re = std::bit_cast<std::uint64_t>(w.real());
  const auto im = std::bit_cast<std::uint64_t>(w.imag());
  return re ^ ((im << 27) | (im >> 37)) ^
         (static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

int run_bench(const BenchOpts& o, const CoefficientTable& table) {
  if (o.n < 1) {
    throw std::invalid_argument("bench: --n must be >= 1");
  }
  constexpr std::uint64_t kSeed = 0x5EEDC0FFEE;
  std::mt19937_64 gen(kSeed);
  const auto u53 = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  };
  const auto n = static_cast<std::size_t>(o.n);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = 40000.0 * u53();                     // uniform on [0, 40000)
    ys[i] = std::pow(10.0, -14.0 + 16.0 * u53());  // log-uniform [1e-14,1e2)
  }

  using clock = std::chrono::steady_clock;
  std::uint64_t checksum_serial = 0;
  const auto t0 = clock::now();
  for (std::int64_t i = 0; i < o.n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    checksum_serial ^= point_hash(i, evaluate(o.variant, {xs[k], ys[k]}, table));
  }
  const auto t1 = clock::now();

  std::uint64_t checksum_parallel = 0;
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  const auto t2 = clock::now();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(^ : checksum_parallel)
#endif
  for (std::int64_t i = 0; i < o.n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    checksum_parallel ^=
        point_hash(i, evaluate(o.variant, {xs[k], ys[k]}, table));
  }
  const auto t3 = clock::now();

  const auto secs = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  const double rate_serial = static_cast<double>(o.n) / secs(t0, t1);
  const double rate_parallel = static_cast<double>(o.n) / secs(t2, t3);
  const char* vname = o.variant == Variant::Eq2   ? "eq2"
                      : o.variant == Variant::Eq4 ? "eq4"
                                                  : "auto";
  std::cout << "n=" << o.n << " variant=" << vname << " seed=" << kSeed
            << '\n';
  std::cout << "serial_rate=" << double_shortest(rate_serial) << '\n';
  std::cout << "parallel_rate=" << double_shortest(rate_parallel)
            << " threads=" << threads << '\n';
  std::cout << "checksum_serial=" << hex64(checksum_serial) << '\n';
  std::cout << "checksum_parallel=" << hex64(checksum_parallel) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Faddeeva function w(z): evaluation, verification, spectra"};
  app.require_subcommand(1);
  const std::map<std::string, Variant> variant_names{
      {"eq2", Variant::Eq2}, {"eq4", Variant::Eq4}, {"auto", Variant::Auto}};
  const auto variant_check =
      CLI::CheckedTransformer(variant_names, CLI::ignore_case);
  const auto digits_range = CLI::Range(wofz::oracle::kMinDigits,
                                       wofz::oracle::kMaxDigits);

  EvalOpts eval_opts;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate w(x + iy) at one point");
  eval_cmd->add_option("--x", eval_opts.x, "Re[z]")->required();
  eval_cmd->add_option("--y", eval_opts.y, "Im[z]")->required();
  eval_cmd->add_option("--variant", eval_opts.variant, "formula selection")
      ->transform(variant_check)
      ->capture_default_str();
  eval_cmd->add_flag("--check", eval_opts.check,
                     "also print relative errors vs the oracle");
  eval_cmd
      ->add_option("--digits", eval_opts.digits, "oracle decimal digits")
      ->check(digits_range);

  BatchOpts batch_opts;
  CLI::App* batch_cmd =
      app.add_subcommand("batch", "evaluate a CSV of x,y points");
  batch_cmd->add_option("--input", batch_opts.input, "input CSV (header x,y)")
      ->required();
  batch_cmd->add_option("--output", batch_opts.output, "output CSV")
      ->required();
  batch_cmd->add_option("--variant", batch_opts.variant, "formula selection")
      ->transform(variant_check)
      ->capture_default_str();

  ErrmapOpts errmap_opts;
  CLI::App* errmap_cmd = app.add_subcommand(
      "errmap", "sweep a grid against the oracle and write the error map");
  add_grid_flags(errmap_cmd, errmap_opts.grid);
  errmap_cmd
      ->add_option("--variant", errmap_opts.variant, "formula selection")
      ->transform(variant_check)
      ->capture_default_str();
  errmap_cmd->add_option("--output", errmap_opts.output, "error-map CSV path")
      ->capture_default_str();
  errmap_cmd->add_option("--summary", errmap_opts.summary_path,
                         "also write the summary JSON to this path");
  errmap_cmd
      ->add_option("--digits", errmap_opts.digits, "oracle decimal digits")
      ->check(digits_range);

  GridOpts overlap_grid{0.0, 10.0, 51, 1e-3, 1e-1, 21, false, true};
  CLI::App* overlap_cmd = app.add_subcommand(
      "overlap", "max discrepancy between the two formulas on a grid");
  add_grid_flags(overlap_cmd, overlap_grid);

  VoigtOpts voigt_opts;
  CLI::App* voigt_cmd = app.add_subcommand(
      "voigt", "synthesize a Voigt spectrum from a line list");
  voigt_cmd
      ->add_option("--lines", voigt_opts.lines_path,
                   "line-list CSV (header nu0,alpha_d,gamma_l,intensity)")
      ->required();
  voigt_cmd->add_option("--nu-start", voigt_opts.nu_start, "grid start, cm^-1")
      ->required();
  voigt_cmd->add_option("--nu-end", voigt_opts.nu_end, "grid end, cm^-1")
      ->required();
  voigt_cmd->add_option("--n", voigt_opts.n_points, "grid node count")
      ->capture_default_str();
  voigt_cmd->add_option("--output", voigt_opts.output, "profile CSV path")
      ->capture_default_str();

  BenchOpts bench_opts;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "fixed-seed throughput benchmark");
  bench_cmd->add_option("--n", bench_opts.n, "number of evaluations")
      ->capture_default_str();
  bench_cmd->add_option("--variant", bench_opts.variant, "formula selection")
      ->transform(variant_check)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends: exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  eval_opts.digits_set = eval_cmd->count("--digits") > 0;
  errmap_opts.digits_set = errmap_cmd->count("--digits") > 0;
  try {
    if (eval_cmd->parsed()) {
      return run_eval(eval_opts, wofz::build_coefficients());
    }
    if (batch_cmd->parsed()) {
      return run_batch(batch_opts, wofz::build_coefficients());
    }
    if (errmap_cmd->parsed()) {
      return run_errmap(errmap_opts, wofz::build_coefficients());
    }
    if (overlap_cmd->parsed()) {
      return run_overlap(overlap_grid, wofz::build_coefficients());
    }
    if (voigt_cmd->parsed()) {
      return run_voigt(voigt_opts, wofz::build_coefficients());
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench_opts, wofz::build_coefficients());
    }
  } catch (const wofz::oracle::InconsistencyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const wofz::oracle::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}
