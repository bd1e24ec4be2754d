#include "wofz/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>

#include "wofz/format.hpp"

namespace wofz::verify {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> axis(double lo, double hi, int n, Scale scale) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  if (scale == Scale::Linear) {
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = lo + i * step;
    }
  } else {
    const double llo = std::log10(lo);
    const double step = (std::log10(hi) - llo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = std::pow(10.0, llo + i * step);
    }
  }
  // Endpoints are contract values, not products of rounding.
  out.front() = lo;
  out.back() = hi;
  return out;
}

void check_axis(const char* name, double lo, double hi, int n, Scale scale) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument(std::string("GridSpec: ") + name +
                                " bounds must be finite");
  }
  if (!(lo <= hi)) {
    throw std::invalid_argument(std::string("GridSpec: ") + name +
                                "_min must not exceed " + name + "_max");
  }
  if (n < 1) {
    throw std::invalid_argument(std::string("GridSpec: n") + name +
                                " must be >= 1");
  }
  if (scale == Scale::Log10 && !(lo > 0.0)) {
    throw std::invalid_argument(std::string("GridSpec: Log10 ") + name +
                                " axis requires " + name + "_min > 0");
  }
}

std::complex<double> evaluate(Variant variant, std::complex<double> z,
                              const CoefficientTable& table) {
  switch (variant) {
    case Variant::Eq2:
      return w_eq2(z, table);
    case Variant::Eq4:
      return w_eq4(z, table);
    default:
      return w_upper_right(z, table);
  }
}

// The one per-point computation shared by the parallel and serial sweeps;
// bit-identical output follows from it being a pure function of (x, y).
void sweep_point(double x, double y, Variant variant,
                 const CoefficientTable& table, int digits,
                 double& delta_re, double& delta_im) {
  const std::complex<double> z{x, y};
  const std::complex<double> approx = evaluate(variant, z, table);
  const oracle::ReferenceValue ref = oracle::w_ref(z, digits);
  const auto [dre, dim] = rel_err_components(approx, ref);
  delta_re = dre;
  delta_im = dim;
}

ErrorMap sweep_impl(const GridSpec& grid, Variant variant,
                    const CoefficientTable& table, int digits,
                    bool parallel) {
  validate(grid);
  if (grid.x_min < 0.0 || grid.y_min < 0.0) {
    throw std::domain_error(
        "sweep: grid must lie in the closed upper-right quadrant");
  }
  const std::vector<double> xs = grid_x(grid);
  const std::vector<double> ys = grid_y(grid);
  const std::int64_t nx = grid.nx;
  const std::int64_t total = nx * grid.ny;
  ErrorMap map{grid, variant,
               std::vector<double>(static_cast<std::size_t>(total), 0.0),
               std::vector<double>(static_cast<std::size_t>(total), 0.0)};

  if (!parallel) {
    for (std::int64_t idx = 0; idx < total; ++idx) {
      const auto i = static_cast<std::size_t>(idx);
      sweep_point(xs[static_cast<std::size_t>(idx % nx)],
                  ys[static_cast<std::size_t>(idx / nx)], variant, table,
                  digits, map.delta_re[i], map.delta_im[i]);
    }
    return map;
  }

  std::exception_ptr error;
  std::atomic<bool> failed{false};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (std::int64_t idx = 0; idx < total; ++idx) {
    if (failed.load(std::memory_order_relaxed)) {
      continue;
    }
    try {
      const auto i = static_cast<std::size_t>(idx);
      sweep_point(xs[static_cast<std::size_t>(idx % nx)],
                  ys[static_cast<std::size_t>(idx / nx)], variant, table,
                  digits, map.delta_re[i], map.delta_im[i]);
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
#ifdef _OPENMP
#pragma omp critical(wofz_sweep_error)
#endif
      {
        if (!error) {
          error = std::current_exception();
        }
      }
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  return map;
}

// Nearest-rank percentile over the collected (non-NaN) entries.
double percentile999(std::vector<double>& vals) {
  if (vals.empty()) {
    return kNaN;
  }
  const auto m = vals.size();
  auto rank = static_cast<std::size_t>(
      std::ceil(0.999 * static_cast<double>(m)));
  rank = std::clamp<std::size_t>(rank, 1, m);
  std::nth_element(vals.begin(), vals.begin() + (rank - 1), vals.end());
  return vals[rank - 1];
}

void append_number(std::string& out, const char* key, double v, bool last) {
  out += '"';
  out += key;
  out += "\": ";
  out += format::json_number(v);
  if (!last) {
    out += ", ";
  }
}

}  // namespace

void validate(const GridSpec& grid) {
  check_axis("x", grid.x_min, grid.x_max, grid.nx, grid.x_scale);
  check_axis("y", grid.y_min, grid.y_max, grid.ny, grid.y_scale);
}

std::vector<double> grid_x(const GridSpec& grid) {
  validate(grid);
  return axis(grid.x_min, grid.x_max, grid.nx, grid.x_scale);
}

std::vector<double> grid_y(const GridSpec& grid) {
  validate(grid);
  return axis(grid.y_min, grid.y_max, grid.ny, grid.y_scale);
}

std::pair<double, double> rel_err_components(std::complex<double> approx,
                                             std::complex<double> reference) {
  const auto component = [](double a, double r) {
    if (r == 0.0) {
      return kNaN;  // undefined quotient, excluded from summaries
    }
    return std::abs((r - a) / r);
  };
  return {component(approx.real(), reference.real()),
          component(approx.imag(), reference.imag())};
}

std::pair<double, double> rel_err_components(
    std::complex<double> approx, const oracle::ReferenceValue& reference) {
  return rel_err_components(approx, reference.rounded());
}

ErrorMap sweep(const GridSpec& grid, Variant variant,
               const CoefficientTable& table, int digits) {
  return sweep_impl(grid, variant, table, digits, true);
}

ErrorMap sweep_serial(const GridSpec& grid, Variant variant,
                      const CoefficientTable& table, int digits) {
  return sweep_impl(grid, variant, table, digits, false);
}

ErrorSummary summarize(const ErrorMap& map) {
  validate(map.grid);
  const auto total = static_cast<std::size_t>(map.grid.nx) *
                     static_cast<std::size_t>(map.grid.ny);
  if (map.delta_re.size() != total || map.delta_im.size() != total) {
    throw std::invalid_argument("summarize: map size does not match grid");
  }
  const std::vector<double> xs = grid_x(map.grid);
  const std::vector<double> ys = grid_y(map.grid);

  struct Component {
    double max = -1.0;
    std::size_t arg = 0;
    std::vector<double> vals;
  };
  Component re, im;
  re.vals.reserve(total);
  im.vals.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double dre = map.delta_re[idx];
    if (!std::isnan(dre)) {
      re.vals.push_back(dre);
      if (dre > re.max) {
        re.max = dre;
        re.arg = idx;
      }
    }
    const double dim = map.delta_im[idx];
    if (!std::isnan(dim)) {
      im.vals.push_back(dim);
      if (dim > im.max) {
        im.max = dim;
        im.arg = idx;
      }
    }
  }
  if (re.vals.empty() && im.vals.empty()) {
    throw EmptyMapError("summarize: every entry of both components is NaN");
  }
  const auto nx = static_cast<std::size_t>(map.grid.nx);
  const auto node = [&](std::size_t idx) {
    return std::complex<double>{xs[idx % nx], ys[idx / nx]};
  };
  ErrorSummary s{};
  s.max_re = re.vals.empty() ? kNaN : re.max;
  s.max_im = im.vals.empty() ? kNaN : im.max;
  s.argmax_re = re.vals.empty() ? std::complex<double>{kNaN, kNaN}
                                : node(re.arg);
  s.argmax_im = im.vals.empty() ? std::complex<double>{kNaN, kNaN}
                                : node(im.arg);
  s.p999_re = percentile999(re.vals);
  s.p999_im = percentile999(im.vals);
  return s;
}

double overlap_consistency(const GridSpec& grid,
                           const CoefficientTable& table,
                           Variant variant_a, Variant variant_b) {
  validate(grid);
  if (grid.x_min < 0.0 || grid.y_min < 0.0) {
    throw std::domain_error(
        "overlap_consistency: grid must lie in the closed upper-right "
        "quadrant");
  }
  const std::vector<double> xs = grid_x(grid);
  const std::vector<double> ys = grid_y(grid);
  double worst = 0.0;
  for (const double y : ys) {
    for (const double x : xs) {
      const std::complex<double> z{x, y};
      const std::complex<double> wa = evaluate(variant_a, z, table);
      const std::complex<double> wb = evaluate(variant_b, z, table);
      const double d = std::abs(wa - wb) / std::abs(wa);
      if (d > worst) {
        worst = d;
      }
    }
  }
  return worst;
}

void write_csv(const ErrorMap& map, std::ostream& os) {
  const std::vector<double> xs = grid_x(map.grid);
  const std::vector<double> ys = grid_y(map.grid);
  os << "x,y,delta_re,delta_im\n";
  const auto nx = static_cast<std::size_t>(map.grid.nx);
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t idx = iy * nx + ix;
      os << format::double_shortest(xs[ix]) << ','
         << format::double_shortest(ys[iy]) << ','
         << format::double_shortest(map.delta_re[idx]) << ','
         << format::double_shortest(map.delta_im[idx]) << '\n';
    }
  }
}

void write_csv(const ErrorMap& map, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("write_csv: cannot open " + path);
  }
  write_csv(map, os);
  os.flush();
  if (!os) {
    throw std::runtime_error("write_csv: write failed for " + path);
  }
}

std::string summary_json(const ErrorSummary& summary) {
  std::string out = "{";
  append_number(out, "max_re", summary.max_re, false);
  append_number(out, "max_im", summary.max_im, false);
  append_number(out, "argmax_re_x", summary.argmax_re.real(), false);
  append_number(out, "argmax_re_y", summary.argmax_re.imag(), false);
  append_number(out, "argmax_im_x", summary.argmax_im.real(), false);
  append_number(out, "argmax_im_y", summary.argmax_im.imag(), false);
  append_number(out, "p999_re", summary.p999_re, false);
  append_number(out, "p999_im", summary.p999_im, true);
  out += "}";
  return out;
}

void write_summary(const ErrorSummary& summary, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("write_summary: cannot open " + path);
  }
  os << summary_json(summary) << '\n';
  os.flush();
  if (!os) {
    throw std::runtime_error("write_summary: write failed for " + path);
  }
}

}  // namespace wofz::verify
