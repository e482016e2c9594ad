#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "greencube/error.hpp"
#include "greencube/montecarlo.hpp"

using namespace greencube;

namespace {

SimConfig base(int m, std::size_t n, std::size_t R, std::uint64_t seed = 7) {
  SimConfig c;
  c.m = m;
  c.n = n;
  c.R = R;
  c.seed = seed;
  return c;
}

PointSet single(std::vector<double> x) {
  const std::vector<std::vector<double>> rows{x};
  return PointSet::from_rows(rows, int(x.size()));
}

bool identical(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

TEST(Substream, DeterministicAndDistinct) {
  auto a = substream(5, 3), b = substream(5, 3), c = substream(5, 4), d = substream(6, 3);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  auto g = substream(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(g);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Substream, ReplicationsUncorrelated) {
  // Correlation between statistics of adjacent replications.
  const std::size_t R = 4000;
  std::vector<double> s(R);
  for (std::size_t r = 0; r < R; ++r) {
    auto g = substream(11, r);
    const auto d = uniform_sample(g, 20, 2);
    double sum = 0.0;
    for (std::size_t i = 0; i < 20; ++i) sum += d(i, 0) * d(i, 1);
    s[r] = sum;
  }
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / R;
  double num = 0.0, den = 0.0;
  for (std::size_t r = 0; r + 1 < R; ++r) num += (s[r] - mean) * (s[r + 1] - mean);
  for (double v : s) den += (v - mean) * (v - mean);
  EXPECT_LT(std::abs(num / den), 4.0 / std::sqrt(double(R)));
}

TEST(Validate, Errors) {
  auto c = base(2, 50, 99);
  EXPECT_THROW(validate(c), ValidationError);
  c.R = 100;
  EXPECT_NO_THROW(validate(c));
  c.n = 0;
  EXPECT_THROW(validate(c), ValidationError);
  c.n = 10;
  c.grid = single({0.0, 0.5});
  EXPECT_THROW(validate(c), ValidationError);
  const std::vector<std::vector<double>> dup{{0.3, 0.3}, {0.3, 0.3}};
  c.grid = PointSet::from_rows(dup, 2);
  EXPECT_THROW(simulate_null_covariance(c), ValidationError);
  EXPECT_THROW(null_distribution("tau", base(2, 10, 100)), ValidationError);
}

TEST(NullCovariance, KnownMargins) {
  auto c = base(2, 400, 5000);
  const auto r = simulate_null_covariance(c);
  EXPECT_EQ(r.empirical.rows(), 16);
  EXPECT_LE(r.max_dev_in_se, 4.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.theoretical);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(NullCovariance, EstimatedMargins) {
  auto c = base(2, 400, 5000, 8);
  c.known = SubsetMask::empty(2);
  const auto r = simulate_null_covariance(c);
  EXPECT_LE(r.max_dev_in_se, 4.0);
  // Theoretical entries come from the kernel with estimated margins.
  const GreenKernel k(family_for_known_margins(SubsetMask::empty(2), 2));
  const auto grid = c.resolved_grid();
  EXPECT_NEAR(r.theoretical(0, 5), k(grid.point(0), grid.point(5)), 1e-15);
}

TEST(NullCovariance, VanishingNearTheTopCorner) {
  auto c = base(2, 10, 100);
  c.grid = single({1 - 1e-6, 1 - 1e-6});
  EXPECT_LT(simulate_null_covariance(c).theoretical(0, 0), 1e-5);
}

TEST(NullCovariance, ThreadInvariant) {
  auto c = base(3, 60, 300);
  c.grid_n = 2;
  c.known = SubsetMask(0b101u, 3);
  const auto one = simulate_null_covariance(c);
  c.threads = 4;
  const auto four = simulate_null_covariance(c);
  EXPECT_TRUE(identical(one.empirical, four.empirical));
  EXPECT_EQ(one.max_dev_in_se, four.max_dev_in_se);
}

TEST(NullCovariance, ApproachesTheLimit) {
  // Estimated margins: the finite-n covariance carries an O(1/n) bias of
  // about 1e-3 at n = 50, so R must push the noise below that.
  int wins = 0;
  for (std::uint64_t batch = 0; batch < 10; ++batch) {
    auto small = base(2, 50, 40000, 100 + batch);
    small.known = SubsetMask::empty(2);
    auto large = small;
    large.n = 800;
    wins += simulate_null_covariance(large).max_abs_dev <=
            simulate_null_covariance(small).max_abs_dev;
  }
  EXPECT_GE(wins, 8);
}

TEST(TiedDownCovariance, Pillow) {
  const auto two = simulate_tied_down_covariance(base(2, 400, 5000, 9));
  EXPECT_LE(two.max_dev_in_se, 4.0);
  auto c = base(3, 200, 5000, 10);
  c.grid_n = 2;
  const auto three = simulate_tied_down_covariance(c);
  EXPECT_EQ(three.empirical.rows(), 8);
  EXPECT_LE(three.max_dev_in_se, 4.0);

  auto center = base(2, 400, 5000, 12);
  center.grid = single({0.5, 0.5});
  const auto r = simulate_tied_down_covariance(center);
  EXPECT_DOUBLE_EQ(r.theoretical(0, 0), 0.0625);
  EXPECT_LE(std::abs(r.empirical(0, 0) - 0.0625), 4.0 * r.standard_error(0, 0));
}

TEST(TiedDownCovariance, Reproducible) {
  const auto a = simulate_tied_down_covariance(base(2, 50, 200, 3));
  const auto b = simulate_tied_down_covariance(base(2, 50, 200, 3));
  const auto c = simulate_tied_down_covariance(base(2, 50, 200, 4));
  EXPECT_TRUE(identical(a.empirical, b.empirical));
  EXPECT_FALSE(identical(a.empirical, c.empirical));
}

TEST(GaussianField, Moments) {
  const std::size_t count = 10000;
  const auto pillow = sample_gaussian_field(GreenKernel(MonotoneFamily::all_nonempty(2)),
                                            single({0.5, 0.5}), count, 1);
  const double mean = pillow.col(0).mean();
  const double var = (pillow.col(0).array() - mean).square().sum() / double(count - 1);
  // Var of a sample variance of normals: 2 sigma^4 / (count - 1).
  EXPECT_LE(std::abs(var - 0.0625), 4.0 * 0.0625 * std::sqrt(2.0 / (count - 1)));
  EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(0.0625 / count));

  const auto sheet = sample_gaussian_field(GreenKernel(MonotoneFamily::empty(2)),
                                           single({1.0, 1.0}), count, 2);
  const double v1 = sheet.col(0).squaredNorm() / double(count);
  EXPECT_LE(std::abs(v1 - 1.0), 4.0 * std::sqrt(2.0 / count));
}

TEST(GaussianField, ReproducibleAndThreadInvariant) {
  const GreenKernel k(MonotoneFamily::top(2));
  const auto grid = interior_grid(2, 3);
  const auto a = sample_gaussian_field(k, grid, 50, 5, 1);
  const auto b = sample_gaussian_field(k, grid, 50, 5, 4);
  EXPECT_EQ(a.rows(), 50);
  EXPECT_EQ(a.cols(), 9);
  EXPECT_TRUE(identical(a, b));
}

TEST(NullDistribution, BhatVariance) {
  for (int m = 2; m <= 3; ++m) {
    const auto d = null_distribution("Bhat", base(m, 100, 20000, 20 + m));
    const double target = std::pow(12.0, -m);
    EXPECT_LE(std::abs(d.variance - target), 4.0 * d.variance_se) << "m=" << m;
    EXPECT_LE(std::abs(d.mean), 4.0 * d.mean_se);
    EXPECT_EQ(d.values.size(), 20000u);
    ASSERT_EQ(d.quantiles.size(), 3u);
    EXPECT_LE(d.quantiles[0], d.quantiles[1]);
    EXPECT_LE(d.quantiles[1], d.quantiles[2]);
  }
}

TEST(NullDistribution, FootruleSmallSample) {
  const auto d = null_distribution("footrule", base(2, 3, 6000, 31));
  std::set<double> support(d.values.begin(), d.values.end());
  for (double v : support) EXPECT_TRUE(v == 0.0 || v == 2.0 || v == 4.0) << v;
  // Over the six permutations of three ranks: displacements 0, 2, 2, 4, 4, 4.
  EXPECT_LE(std::abs(d.mean - 8.0 / 3.0), 4.0 * d.mean_se);
}

TEST(NullDistribution, OtherStatistics) {
  for (const char* name : {"B", "rho", "gini"}) {
    const auto a = null_distribution(name, base(2, 30, 500, 40));
    const auto b = null_distribution(name, base(2, 30, 500, 40));
    EXPECT_EQ(a.values, b.values) << name;
    EXPECT_LE(std::abs(a.mean), 4.0 * a.mean_se) << name;
  }
}

TEST(Quantile, Type7) {
  EXPECT_DOUBLE_EQ(quantile({3.0, 1.0, 2.0, 4.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.9), 4.6);
  EXPECT_DOUBLE_EQ(quantile({7.0}, 0.99), 7.0);
}
