#include "wofz/lineshape.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>

#include "wofz/format.hpp"

namespace wofz::lineshape {
namespace {

std::vector<double> profile_impl(const SpectralLine& line,
                                 const WavenumberGrid& grid,
                                 const CoefficientTable& table,
                                 bool parallel) {
  validate(line);
  validate(grid);
  const std::vector<double> nus = grid_nu(grid);
  const double y = kSqrtLn2 * line.gamma_l / line.alpha_d;
  const double amp =
      line.intensity * (kSqrtLn2 / (kSqrtPi * line.alpha_d));
  std::vector<double> out(nus.size());
  const auto n = static_cast<std::ptrdiff_t>(nus.size());
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double x = kSqrtLn2 * (nus[k] - line.nu0) / line.alpha_d;
      out[k] = amp * voigt(x, y, table);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double x = kSqrtLn2 * (nus[k] - line.nu0) / line.alpha_d;
      out[k] = amp * voigt(x, y, table);
    }
  }
  return out;
}

}  // namespace

void validate(const SpectralLine& line) {
  if (!std::isfinite(line.nu0) || !std::isfinite(line.alpha_d) ||
      !std::isfinite(line.gamma_l) || !std::isfinite(line.intensity)) {
    throw std::invalid_argument("SpectralLine: all fields must be finite");
  }
  if (!(line.alpha_d > 0.0)) {
    throw std::invalid_argument("SpectralLine: alpha_d must be > 0");
  }
  if (line.gamma_l < 0.0) {
    throw std::invalid_argument("SpectralLine: gamma_l must be >= 0");
  }
  if (line.intensity < 0.0) {
    throw std::invalid_argument("SpectralLine: intensity must be >= 0");
  }
}

void validate(const WavenumberGrid& grid) {
  if (!std::isfinite(grid.nu_start) || !std::isfinite(grid.nu_end)) {
    throw std::invalid_argument("WavenumberGrid: bounds must be finite");
  }
  if (!(grid.nu_start < grid.nu_end)) {
    throw std::invalid_argument("WavenumberGrid: nu_start must be < nu_end");
  }
  if (grid.n_points < 2) {
    throw std::invalid_argument("WavenumberGrid: n_points must be >= 2");
  }
}

std::vector<double> grid_nu(const WavenumberGrid& grid) {
  validate(grid);
  const auto n = static_cast<std::size_t>(grid.n_points);
  std::vector<double> out(n);
  const double step = (grid.nu_end - grid.nu_start) / (grid.n_points - 1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = grid.nu_start + static_cast<double>(i) * step;
  }
  out.front() = grid.nu_start;
  out.back() = grid.nu_end;
  return out;
}

std::complex<double> to_reduced_coords(double nu, const SpectralLine& line) {
  validate(line);
  return {kSqrtLn2 * (nu - line.nu0) / line.alpha_d,
          kSqrtLn2 * line.gamma_l / line.alpha_d};
}

std::vector<double> voigt_profile(const SpectralLine& line,
                                  const WavenumberGrid& grid,
                                  const CoefficientTable& table) {
  return profile_impl(line, grid, table, true);
}

std::vector<double> voigt_profile_serial(const SpectralLine& line,
                                         const WavenumberGrid& grid,
                                         const CoefficientTable& table) {
  return profile_impl(line, grid, table, false);
}

std::vector<double> synthesize(const std::vector<SpectralLine>& lines,
                               const WavenumberGrid& grid,
                               const CoefficientTable& table) {
  validate(grid);
  std::vector<double> total(static_cast<std::size_t>(grid.n_points), 0.0);
  for (const SpectralLine& line : lines) {
    const std::vector<double> one = voigt_profile(line, grid, table);
    for (std::size_t i = 0; i < total.size(); ++i) {
      total[i] += one[i];
    }
  }
  return total;
}

std::vector<SpectralLine> parse_line_list(std::istream& in) {
  std::string raw;
  int row = 0;
  bool have_header = false;
  std::vector<SpectralLine> lines;
  while (std::getline(in, raw)) {
    ++row;
    const std::string_view text = format::strip_cr(raw);
    if (!have_header) {
      if (text != "nu0,alpha_d,gamma_l,intensity") {
        throw ParseError("line " + std::to_string(row) +
                             ": expected header nu0,alpha_d,gamma_l,intensity",
                         row);
      }
      have_header = true;
      continue;
    }
    if (text.empty()) {
      continue;
    }
    const std::vector<std::string_view> fields = format::split(text, ',');
    if (fields.size() != 4) {
      throw ParseError("line " + std::to_string(row) + ": expected 4 fields, got " +
                           std::to_string(fields.size()),
                       row);
    }
    double v[4];
    static const char* const names[4] = {"nu0", "alpha_d", "gamma_l",
                                         "intensity"};
    for (int i = 0; i < 4; ++i) {
      const auto parsed = format::parse_double(fields[static_cast<std::size_t>(i)]);
      if (!parsed) {
        throw ParseError("line " + std::to_string(row) + ": field " +
                             names[i] + " is not a number",
                         row);
      }
      v[i] = *parsed;
    }
    const SpectralLine line{v[0], v[1], v[2], v[3]};
    try {
      validate(line);
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(row) + ": " + e.what(), row);
    }
    lines.push_back(line);
  }
  if (!have_header) {
    throw ParseError("line 1: missing header nu0,alpha_d,gamma_l,intensity",
                     1);
  }
  return lines;
}

std::vector<SpectralLine> parse_line_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("parse_line_list: cannot open " + path);
  }
  return parse_line_list(in);
}

}  // namespace wofz::lineshape
