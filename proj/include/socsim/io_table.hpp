#pragma once

// Leontief input-output machinery: load a sector-by-sector input coefficient
// matrix, validate it (nonnegative, square, spectral radius < 1), invert
// I - A by dense LU with partial pivoting, and reduce the inverse to
// per-sector multipliers for comparison against simulated avalanche means.

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "socsim/detail/text.hpp"
#include "socsim/errors.hpp"

namespace socsim {

struct IOTable {
  std::vector<std::string> sectors;
  Eigen::MatrixXd coefficients;  // A(i, j) = input of i per unit output of j
};

// Upper estimate of the Perron root of a nonnegative matrix via power
// iteration with Collatz-Wielandt ratio bounds on the shifted matrix A + I
// (the shift keeps the iterate positive and removes periodicity). Stops
// when the upper and lower ratio bounds agree within tol.
inline double spectral_radius(const Eigen::MatrixXd& a, int iterations = 200,
                              double tol = 1e-9) {
  const auto n = a.rows();
  if (n == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  double upper = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd w = a * v + v;  // (A + I) v
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double ratio = w[i] / v[i];
      if (ratio > hi) hi = ratio;
      if (ratio < lo) lo = ratio;
    }
    upper = hi;
    if (hi - lo < tol) break;
    v = w / w.maxCoeff();
  }
  return upper - 1.0;
}

inline IOTable load_io_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open IO table '" + path + "'");

  std::string line;
  std::size_t line_no = 0;
  IOTable table;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    for (auto cell : detail::split_on(content, ',')) {
      auto code = detail::trim(cell);
      if (code.empty())
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": empty sector code in header");
      table.sectors.emplace_back(code);
    }
    break;
  }
  const std::size_t k = table.sectors.size();
  if (k == 0) throw ParseError("'" + path + "': missing header row");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (table.sectors[i] == table.sectors[j])
        throw ParseError("'" + path + "': duplicate sector code '" +
                         table.sectors[i] + "'");

  table.coefficients.resize(static_cast<Eigen::Index>(k),
                            static_cast<Eigen::Index>(k));
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    if (row >= k)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(k) +
                       " body rows, found more");
    auto cells = detail::split_on(content, ',');
    if (cells.size() != k)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(k) + " cells, got " +
                       std::to_string(cells.size()));
    for (std::size_t col = 0; col < k; ++col) {
      double value = 0.0;
      if (!detail::parse_double(detail::trim(cells[col]), value))
        throw ParseError(path + ":" + std::to_string(line_no) + ": cell " +
                         std::to_string(col + 1) + " ('" +
                         std::string(detail::trim(cells[col])) +
                         "') is not a number");
      if (value < 0.0)
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": negative coefficient in column " +
                        std::to_string(col + 1));
      table.coefficients(static_cast<Eigen::Index>(row),
                         static_cast<Eigen::Index>(col)) = value;
    }
    ++row;
  }
  if (row != k)
    throw ParseError("'" + path + "': expected " + std::to_string(k) +
                     " body rows, got " + std::to_string(row));
  return table;
}

// L = (I - A)^-1 via LU with partial pivoting. Refuses tables whose
// spectral radius reaches 1 and verifies the residual ||(I-A)L - I||_max.
inline Eigen::MatrixXd leontief_inverse(const IOTable& table,
                                        double residual_tol = 1e-8) {
  const auto n = table.coefficients.rows();
  const double rho = spectral_radius(table.coefficients);
  if (!(rho < 1.0))
    throw DataError("leontief_inverse: spectral radius " +
                    detail::format_g17(rho) + " is not below 1");
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - table.coefficients;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const Eigen::MatrixXd inverse = lu.solve(Eigen::MatrixXd::Identity(n, n));
  const double residual =
      (system * inverse - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (!(residual < residual_tol))
    throw DataError("leontief_inverse: singular system, residual " +
                    detail::format_g17(residual));
  return inverse;
}

// Column sums of the inverse: the standard output multiplier of sector j.
inline std::vector<double> column_multipliers(const Eigen::MatrixXd& l) {
  std::vector<double> out(static_cast<std::size_t>(l.cols()));
  for (Eigen::Index j = 0; j < l.cols(); ++j)
    out[static_cast<std::size_t>(j)] = l.col(j).sum();
  return out;
}

inline std::vector<double> row_multipliers(const Eigen::MatrixXd& l) {
  std::vector<double> out(static_cast<std::size_t>(l.rows()));
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    out[static_cast<std::size_t>(i)] = l.row(i).sum();
  return out;
}

// Mapping file: "IO_SECTOR<TAB>INDUSTRY_CODE" per line, '#' comments.
inline std::vector<std::pair<std::string, std::string>> load_sector_map(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sector map '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = detail::trim(line);
    if (content.empty() || content.front() == '#') continue;
    auto fields = detail::split_fields(content);
    if (fields.size() != 2)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'IO_SECTOR<TAB>INDUSTRY_CODE'");
    out.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return out;
}

}  // namespace socsim
