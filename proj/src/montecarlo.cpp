#include "greencube/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "greencube/error.hpp"
#include "greencube/parallel.hpp"

namespace greencube {

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& gen) { return double(gen() >> 11) * 0x1.0p-53; }

Dataset uniform_sample(std::mt19937_64& gen, std::size_t n, int m) {
  Dataset d(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) d(i, j) = uniform01(gen);
  }
  return d;
}

SubsetMask SimConfig::known_margins() const { return known ? *known : SubsetMask::full(m); }

PointSet SimConfig::resolved_grid() const {
  return grid.size() > 0 ? grid : interior_grid(m, grid_n);
}

void validate(const SimConfig& cfg) {
  check_dimension(cfg.m);
  if (cfg.R < 100) throw ValidationError("R must be at least 100, got " + std::to_string(cfg.R));
  if (cfg.n < 1) throw ValidationError("n must be positive");
  if (cfg.known && cfg.known->dimension() != cfg.m) {
    throw ValidationError("V has dimension " + std::to_string(cfg.known->dimension()) +
                          ", expected " + std::to_string(cfg.m));
  }
  const PointSet grid = cfg.resolved_grid();
  if (grid.dimension() != cfg.m) throw ValidationError("grid dimension does not match m");
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto x = grid.point(i);
    for (double v : x) {
      if (!(v > 0.0 && v < 1.0)) {
        throw ValidationError("grid point coordinate " + std::to_string(v) +
                              " is not strictly inside (0,1)");
      }
    }
    if (!seen.insert(x).second) throw ValidationError("degenerate grid: duplicate point");
  }
}

namespace {

// rows[r * g + k] holds replication r at grid point k.
CovarianceReport summarize(const std::vector<double>& rows, std::size_t reps, std::size_t g,
                           Eigen::MatrixXd theoretical) {
  std::vector<double> mean(g, 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t k = 0; k < g; ++k) mean[k] += rows[r * g + k];
  }
  for (double& v : mean) v /= double(reps);

  CovarianceReport rep;
  rep.empirical.resize(g, g);
  rep.standard_error.resize(g, g);
  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = a; b < g; ++b) {
      double s = 0.0, s2 = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const double z = (rows[r * g + a] - mean[a]) * (rows[r * g + b] - mean[b]);
        s += z;
        s2 += z * z;
      }
      const double zbar = s / double(reps);
      const double var_z = std::max(0.0, (s2 - double(reps) * zbar * zbar) / double(reps - 1));
      rep.empirical(a, b) = rep.empirical(b, a) = s / double(reps - 1);
      rep.standard_error(a, b) = rep.standard_error(b, a) = std::sqrt(var_z / double(reps));
    }
  }
  rep.theoretical = std::move(theoretical);
  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = 0; b < g; ++b) {
      const double dev = std::abs(rep.empirical(a, b) - rep.theoretical(a, b));
      rep.max_abs_dev = std::max(rep.max_abs_dev, dev);
      const double se = rep.standard_error(a, b);
      if (se > 0.0) rep.max_dev_in_se = std::max(rep.max_dev_in_se, dev / se);
    }
  }
  return rep;
}

template <class Process>
CovarianceReport simulate(const SimConfig& cfg, const GreenKernel& kernel, Process process) {
  validate(cfg);
  const PointSet grid = cfg.resolved_grid();
  const std::size_t g = grid.size();
  std::vector<double> rows(cfg.R * g);
  parallel_for(cfg.R, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto gen = substream(cfg.seed, r);
      const Dataset sample = uniform_sample(gen, cfg.n, cfg.m);
      for (std::size_t k = 0; k < g; ++k) rows[r * g + k] = process(sample, grid.point(k));
    }
  });
  return summarize(rows, cfg.R, g, gram_matrix(kernel, grid));
}

}  // namespace

CovarianceReport simulate_null_covariance(const SimConfig& cfg) {
  check_dimension(cfg.m);
  const SubsetMask v = cfg.known_margins();
  const GreenKernel kernel(family_for_known_margins(v, cfg.m));
  return simulate(cfg, kernel, [&](const Dataset& d, const std::vector<double>& x) {
    return empirical_process_W(d, v, x);
  });
}

CovarianceReport simulate_tied_down_covariance(const SimConfig& cfg) {
  check_dimension(cfg.m);
  const GreenKernel kernel(MonotoneFamily::all_nonempty(cfg.m));
  return simulate(cfg, kernel, [](const Dataset& d, const std::vector<double>& x) {
    return tied_down_process(d, x);
  });
}

Eigen::MatrixXd sample_gaussian_field(const GreenKernel& kernel, const PointSet& grid,
                                      std::size_t count, std::uint64_t seed, int threads) {
  if (grid.dimension() != kernel.dimension()) {
    throw ValidationError("grid dimension does not match the kernel");
  }
  if (grid.size() == 0) throw ValidationError("empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) check_cube_point(grid.point(i), grid.dimension());
  const Eigen::MatrixXd gram = gram_matrix(kernel, grid, threads);
  const Eigen::Index dim = gram.rows();
  const double base = std::max(gram.trace(), 1e-300) / double(dim);
  Eigen::MatrixXd lower;
  double ridge = 1e-12 * base;
  bool ok = false;
  for (int attempt = 0; attempt <= 3 && !ok; ++attempt, ridge *= 10.0) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      lower = llt.matrixL();
      ok = true;
    }
  }
  if (!ok) throw NumericalError("Cholesky factorization failed after ridge escalation");

  Eigen::MatrixXd out(count, dim);
  parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd z(dim);
    for (std::size_t d = begin; d < end; ++d) {
      auto gen = substream(seed, d);
      std::normal_distribution<double> normal;
      for (Eigen::Index k = 0; k < dim; ++k) z(k) = normal(gen);
      out.row(d) = (lower * z).transpose();
    }
  });
  return out;
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw ValidationError("probability outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (double(values.size()) - 1.0) * prob;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - double(lo)) * (values[hi] - values[lo]);
}

NullDistribution null_distribution(const std::string& statistic, const SimConfig& cfg) {
  std::function<double(const Dataset&)> stat;
  const double root_n = std::sqrt(double(cfg.n));
  if (statistic == "Bhat") {
    stat = [root_n](const Dataset& d) { return root_n * stat_Bhat(d, 1); };
  } else if (statistic == "B") {
    stat = [root_n, v = cfg.known_margins()](const Dataset& d) { return root_n * stat_B(d, v, 1); };
  } else if (statistic == "rho") {
    stat = [](const Dataset& d) { return spearman_rho(d); };
  } else if (statistic == "gini") {
    stat = [](const Dataset& d) { return gini_coefficient(d); };
  } else if (statistic == "footrule") {
    stat = [](const Dataset& d) { return double(footrule(d)); };
  } else {
    throw ValidationError("unknown statistic '" + statistic +
                          "' (expected Bhat, B, rho, gini, footrule)");
  }
  validate(cfg);

  NullDistribution out;
  out.statistic = statistic;
  out.values.resize(cfg.R);
  parallel_for(cfg.R, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto gen = substream(cfg.seed, r);
      out.values[r] = stat(uniform_sample(gen, cfg.n, cfg.m));
    }
  });

  const double reps = double(cfg.R);
  double sum = 0.0;
  for (double v : out.values) sum += v;
  out.mean = sum / reps;
  double m2 = 0.0, m4 = 0.0;
  for (double v : out.values) {
    const double d2 = (v - out.mean) * (v - out.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  out.variance = m2 / (reps - 1.0);
  out.mean_se = std::sqrt(out.variance / reps);
  const double central2 = m2 / reps;
  out.variance_se = std::sqrt(std::max(0.0, m4 / reps - central2 * central2) / reps);
  out.probabilities = {0.9, 0.95, 0.99};
  for (double p : out.probabilities) out.quantiles.push_back(quantile(out.values, p));
  return out;
}

}  // namespace greencube
