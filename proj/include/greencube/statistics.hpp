#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "greencube/set_family.hpp"

namespace greencube {

// n observations of an m-dimensional vector, stored column-major.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t n, int m);
  static Dataset from_rows(std::span<const std::vector<double>> rows);

  std::size_t size() const { return n_; }
  int dimension() const { return m_; }
  double operator()(std::size_t i, int j) const { return values_[j * n_ + i]; }
  double& operator()(std::size_t i, int j) { return values_[j * n_ + i]; }
  std::span<const double> column(int j) const { return {values_.data() + j * n_, n_}; }

  // Throws ValidationError if any value leaves [0, 1].
  void require_unit_cube() const;

 private:
  std::size_t n_ = 0;
  int m_ = 0;
  std::vector<double> values_;
};

// Column-wise ranks 1..n, column-major like Dataset.
class RankMatrix {
 public:
  RankMatrix(std::size_t n, int m, std::vector<std::int64_t> ranks);

  std::size_t size() const { return n_; }
  int dimension() const { return m_; }
  std::int64_t operator()(std::size_t i, int j) const { return r_[j * n_ + i]; }

 private:
  std::size_t n_;
  int m_;
  std::vector<std::int64_t> r_;
};

// R_ij = #{k : X_kj <= X_ij}. Ties are an error.
RankMatrix ranks(const Dataset& data);

// Replaces every value by R_ij / (n + 1).
Dataset rank_pit(const Dataset& data);

// sqrt(n) (F_n(x) - prod_{j in V} x_j prod_{j not in V} F_{j,n}(x_j)).
double empirical_process_W(const Dataset& data, SubsetMask known, std::span<const double> x);

// n^{-1/2} sum_i prod_j (1[X_ij <= x_j] - x_j).
double tied_down_process(const Dataset& data, std::span<const double> x);
// Same process written as F_n minus alternating products over the faces.
double tied_down_process_faces(const Dataset& data, std::span<const double> x);

// Integral over I^m of (F_n - F_V F_{V^c,n})^p, with Lebesgue measure on the
// V coordinates and the product of empirical margins on the others. p = 1 is
// exact; p >= 2 uses a midpoint rule with grid_n nodes per V axis (bias
// O(1/grid_n)) and the exact empirical sum on the other axes.
double stat_B(const Dataset& data, SubsetMask known, int p, int grid_n = 0);

// Integral over I^m of (n^{-1} sum_i prod_j (1[X_ij <= x_j] - x_j))^p.
// p = 1 in closed form; p >= 2 by a grid_n^m midpoint rule.
double stat_Bhat(const Dataset& data, int p, int grid_n = 0);

// Default per-axis resolution for the p >= 2 quadratures.
int default_stat_grid(int m);

double spearman_rho(const Dataset& data);
double gini_coefficient(const Dataset& data);
std::int64_t footrule(const Dataset& data);

// One row per observation, comma separated, optional non-numeric header.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

}  // namespace greencube
