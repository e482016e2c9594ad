#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "greencube/green_kernel.hpp"
#include "greencube/point_set.hpp"
#include "greencube/set_family.hpp"
#include "greencube/statistics.hpp"

namespace greencube {

// Generator for replication `index` of a run seeded with `seed`. Depends only
// on the pair, so replications can run on any worker in any order.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

// Uniform on [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& gen);

// n iid uniform vectors on I^m.
Dataset uniform_sample(std::mt19937_64& gen, std::size_t n, int m);

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t n = 100;
  std::size_t R = 1000;
  int m = 2;
  PointSet grid;                     // empty: interior_grid(m, grid_n)
  int grid_n = 4;
  std::optional<SubsetMask> known;   // V; defaults to M
  int threads = 1;

  SubsetMask known_margins() const;
  PointSet resolved_grid() const;
};

// Checks R >= 100, n >= 1, grid strictly interior without duplicates.
void validate(const SimConfig& cfg);

struct CovarianceReport {
  Eigen::MatrixXd empirical;
  Eigen::MatrixXd theoretical;
  Eigen::MatrixXd standard_error;  // per entry, from replication-level products
  double max_abs_dev = 0.0;
  double max_dev_in_se = 0.0;
};

// Covariance of W_{V,n} on the grid over R replications, against the Green
// kernel of family_for_known_margins(V).
CovarianceReport simulate_null_covariance(const SimConfig& cfg);

// Covariance of the tied-down process against the pillow kernel.
CovarianceReport simulate_tied_down_covariance(const SimConfig& cfg);

// count x grid.size() draws from N(0, Gram + ridge I). Points may lie on the
// closed cube; the ridge starts at 1e-12 trace / dim and grows tenfold on
// each failed Cholesky, at most three times.
Eigen::MatrixXd sample_gaussian_field(const GreenKernel& kernel, const PointSet& grid,
                                      std::size_t count, std::uint64_t seed, int threads = 1);

struct NullDistribution {
  std::string statistic;
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
  std::vector<double> probabilities;  // 0.9, 0.95, 0.99
  std::vector<double> quantiles;
  std::vector<double> values;         // one per replication, in order
};

// Names: "Bhat" (sqrt(n) Bhat^1), "B" (sqrt(n) B^1_V), "rho", "gini", "footrule".
NullDistribution null_distribution(const std::string& statistic, const SimConfig& cfg);

// Sample quantile, linear interpolation between order statistics (type 7).
double quantile(std::vector<double> values, double prob);

}  // namespace greencube
