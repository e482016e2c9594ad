#include "greencube/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "greencube/error.hpp"
#include "greencube/quadrature.hpp"
#include "greencube/simd/kernels.hpp"

namespace greencube {

Dataset::Dataset(std::size_t n, int m) : n_(n), m_(m), values_(n * static_cast<std::size_t>(m)) {
  if (m < 1) throw ValidationError("dataset dimension must be positive");
}

Dataset Dataset::from_rows(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw ValidationError("dataset has no observations");
  const int m = static_cast<int>(rows[0].size());
  Dataset d(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != m) {
      throw ValidationError("row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " values, expected " +
                            std::to_string(m));
    }
    for (int j = 0; j < m; ++j) d(i, j) = rows[i][j];
  }
  return d;
}

void Dataset::require_unit_cube() const {
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("value " + std::to_string(v) +
                            " outside [0,1]; uniform margins are assumed (see --rank-pit)");
    }
  }
}

RankMatrix::RankMatrix(std::size_t n, int m, std::vector<std::int64_t> ranks)
    : n_(n), m_(m), r_(std::move(ranks)) {}

namespace {

void require_points(const Dataset& data) {
  if (data.size() == 0) throw ValidationError("dataset has no observations");
}

void require_matching(const Dataset& data, std::span<const double> x) {
  if (static_cast<int>(x.size()) != data.dimension()) {
    throw ValidationError("point has " + std::to_string(x.size()) +
                          " coordinates, dataset has dimension " +
                          std::to_string(data.dimension()));
  }
}

void require_mask(const Dataset& data, SubsetMask known) {
  if (known.dimension() != data.dimension()) {
    throw ValidationError("known-margins set has dimension " +
                          std::to_string(known.dimension()) + ", dataset has " +
                          std::to_string(data.dimension()));
  }
}

void require_bivariate(const Dataset& data, const char* name) {
  if (data.dimension() != 2) {
    throw ValidationError(std::string(name) + " needs m = 2, got m = " +
                          std::to_string(data.dimension()));
  }
}

// Count of observations with X_ij <= x_j for every j where mask has a bit.
std::size_t count_below(const Dataset& data, std::span<const double> x, std::uint32_t mask) {
  return simd::active().count_dominated(data.column(0).data(), data.size(), data.size(), mask,
                                        x.data());
}

double marginal_edf(const Dataset& data, int j, double t) {
  std::size_t c = 0;
  for (double v : data.column(j)) c += v <= t;
  return double(c) / double(data.size());
}

constexpr double kMaxEvaluations = 2e8;

void check_work(double work, const char* what) {
  if (work > kMaxEvaluations) {
    throw ValidationError(std::string(what) + " needs about " + std::to_string(work) +
                          " evaluations (limit " + std::to_string(kMaxEvaluations) +
                          "); lower grid_n or use p = 1");
  }
}

}  // namespace

RankMatrix ranks(const Dataset& data) {
  require_points(data);
  const std::size_t n = data.size();
  const int m = data.dimension();
  std::vector<std::int64_t> r(n * m);
  std::vector<std::size_t> order(n);
  for (int j = 0; j < m; ++j) {
    const auto col = data.column(j);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0 && !(col[order[k - 1]] < col[order[k]])) {
        throw ValidationError("tie or NaN in column " + std::to_string(j + 1) + " at value " +
                              std::to_string(col[order[k]]));
      }
      r[j * n + order[k]] = static_cast<std::int64_t>(k + 1);
    }
  }
  return RankMatrix(n, m, std::move(r));
}

Dataset rank_pit(const Dataset& data) {
  const RankMatrix r = ranks(data);
  Dataset out(data.size(), data.dimension());
  const double scale = 1.0 / double(data.size() + 1);
  for (int j = 0; j < data.dimension(); ++j) {
    for (std::size_t i = 0; i < data.size(); ++i) out(i, j) = double(r(i, j)) * scale;
  }
  return out;
}

double empirical_process_W(const Dataset& data, SubsetMask known, std::span<const double> x) {
  require_points(data);
  require_matching(data, x);
  require_mask(data, known);
  const int m = data.dimension();
  const double n = double(data.size());
  const double joint = double(count_below(data, x, (1u << m) - 1u)) / n;
  double product = 1.0;
  for (int j = 0; j < m; ++j) product *= known.contains(j) ? x[j] : marginal_edf(data, j, x[j]);
  return std::sqrt(n) * (joint - product);
}

double tied_down_process(const Dataset& data, std::span<const double> x) {
  require_points(data);
  require_matching(data, x);
  const double s = simd::active().tied_down_sum(data.column(0).data(), data.size(), data.size(),
                                                 data.dimension(), x.data());
  return s / std::sqrt(double(data.size()));
}

double tied_down_process_faces(const Dataset& data, std::span<const double> x) {
  require_points(data);
  require_matching(data, x);
  const int m = data.dimension();
  const double n = double(data.size());
  // sum over U of (-1)^{|U^c|} x_{U^c} F_{U,n}(x_U); U = M is the joint edf.
  CompensatedSum acc;
  for (std::uint32_t u = 0; u < (1u << m); ++u) {
    double w = 1.0;
    for (int j = 0; j < m; ++j) {
      if (!((u >> j) & 1u)) w *= -x[j];
    }
    acc.add(w * double(count_below(data, x, u)) / n);
  }
  return std::sqrt(n) * acc.value();
}

int default_stat_grid(int m) {
  if (m <= 2) return 64;
  if (m == 3) return 24;
  return 8;
}

double stat_B(const Dataset& data, SubsetMask known, int p, int grid_n) {
  require_points(data);
  require_mask(data, known);
  if (p < 1) throw ValidationError("p must be a positive integer");
  data.require_unit_cube();
  const int m = data.dimension();
  const std::size_t n = data.size();
  const double nd = double(n);

  if (p == 1) {
    // Integrating the joint edf over Lebesgue on V and the empirical margins
    // elsewhere: 1 - X_ij on V, (n + 1 - R_ij) / n off V.
    const bool all_known = known.size() == m;
    const RankMatrix r = all_known ? RankMatrix(0, m, {}) : ranks(data);
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
      double t = 1.0;
      for (int j = 0; j < m; ++j) {
        t *= known.contains(j) ? 1.0 - data(i, j) : double(nd + 1 - r(i, j)) / nd;
      }
      acc.add(t);
    }
    const int free = m - known.size();
    const double centre = std::pow(0.5, known.size()) * std::pow((nd + 1.0) / (2.0 * nd), free);
    return acc.value() / nd - centre;
  }

  if (grid_n <= 0) grid_n = default_stat_grid(m);
  std::vector<int> on, off;
  for (int j = 0; j < m; ++j) (known.contains(j) ? on : off).push_back(j);
  check_work(std::pow(double(grid_n), on.size()) * std::pow(nd, off.size()) * nd * m,
             "B^p quadrature");

  const RankMatrix r = off.empty() ? RankMatrix(0, m, {}) : ranks(data);
  const std::size_t grid_points = static_cast<std::size_t>(std::pow(double(grid_n), on.size()));
  const std::size_t atoms = static_cast<std::size_t>(std::pow(nd, off.size()));
  std::vector<double> x(m);
  CompensatedSum acc;
  for (std::size_t g = 0; g < grid_points; ++g) {
    std::size_t rem = g;
    double lebesgue_part = 1.0;
    for (int j : on) {
      x[j] = (double(rem % grid_n) + 0.5) / grid_n;
      lebesgue_part *= x[j];
      rem /= grid_n;
    }
    for (std::size_t a = 0; a < atoms; ++a) {
      std::size_t ra = a;
      double margins = 1.0;
      for (int j : off) {
        const std::size_t k = ra % n;
        x[j] = data(k, j);
        margins *= double(r(k, j)) / nd;
        ra /= n;
      }
      const double f = double(count_below(data, x, (1u << m) - 1u)) / nd - lebesgue_part * margins;
      acc.add(std::pow(f, p));
    }
  }
  return acc.value() / (double(grid_points) * double(atoms));
}

double stat_Bhat(const Dataset& data, int p, int grid_n) {
  require_points(data);
  if (p < 1) throw ValidationError("p must be a positive integer");
  data.require_unit_cube();
  const int m = data.dimension();
  const double nd = double(data.size());
  if (p == 1) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < data.size(); ++i) {
      double t = 1.0;
      for (int j = 0; j < m; ++j) t *= 0.5 - data(i, j);
      acc.add(t);
    }
    return acc.value() / nd;
  }
  if (grid_n <= 0) grid_n = default_stat_grid(m);
  const double points = std::pow(double(grid_n), m);
  check_work(points * nd * m, "Bhat^p quadrature");
  std::vector<double> x(m);
  CompensatedSum acc;
  const double scale = 1.0 / std::sqrt(nd);
  for (std::size_t g = 0; g < static_cast<std::size_t>(points); ++g) {
    std::size_t rem = g;
    for (int j = 0; j < m; ++j) {
      x[j] = (double(rem % grid_n) + 0.5) / grid_n;
      rem /= grid_n;
    }
    acc.add(std::pow(tied_down_process(data, x) * scale, p));
  }
  return acc.value() / points;
}

double spearman_rho(const Dataset& data) {
  require_points(data);
  const int m = data.dimension();
  check_dimension(m);
  const std::size_t n = data.size();
  if (n < 2) throw ValidationError("Spearman rho needs n >= 2");
  const RankMatrix r = ranks(data);
  // (2^m sum_i prod_j (n+1-R_ij) - n (n+1)^m) / (2^m sum_i i^m - n (n+1)^m),
  // exact in 128-bit integers while the magnitudes allow it.
  const double bits = m * std::log2(double(n) + 1.0) + std::log2(double(n)) + m + 2.0;
  if (bits < 125.0) {
    using i128 = __int128;
    i128 prod_sum = 0, power_sum = 0, top = 1;
    for (std::size_t i = 0; i < n; ++i) {
      i128 t = 1, q = 1;
      for (int j = 0; j < m; ++j) {
        t *= i128(n + 1) - r(i, j);
        q *= i128(i + 1);
      }
      prod_sum += t;
      power_sum += q;
    }
    for (int j = 0; j < m; ++j) top *= i128(n + 1);
    const i128 num = (prod_sum << m) - i128(n) * top;
    const i128 den = (power_sum << m) - i128(n) * top;
    return double(static_cast<long double>(num) / static_cast<long double>(den));
  }
  long double prod_sum = 0, power_sum = 0;
  const long double nl = static_cast<long double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double t = 1, q = 1;
    for (int j = 0; j < m; ++j) {
      t *= (nl + 1 - r(i, j)) / (nl + 1);
      q *= (static_cast<long double>(i) + 1) / (nl + 1);
    }
    prod_sum += t;
    power_sum += q;
  }
  const long double half = std::pow(0.5L, m);
  return double((prod_sum / nl - half) / (power_sum / nl - half));
}

double gini_coefficient(const Dataset& data) {
  require_points(data);
  require_bivariate(data, "Gini coefficient");
  const RankMatrix r = ranks(data);
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  std::int64_t s = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    s += std::abs(n + 1 - r(i, 0) - r(i, 1)) - std::abs(r(i, 0) - r(i, 1));
  }
  const std::int64_t d = n % 2 == 0 ? n * n : n * n - 1;
  if (d == 0) throw ValidationError("Gini coefficient needs n >= 2");
  return 2.0 * double(s) / double(d);
}

std::int64_t footrule(const Dataset& data) {
  require_points(data);
  require_bivariate(data, "footrule");
  const RankMatrix r = ranks(data);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < data.size(); ++i) s += std::abs(r(i, 0) - r(i, 1));
  return s;
}

namespace {

bool parse_number(const std::string& token, double& out) {
  std::size_t b = token.find_first_not_of(" \t\r");
  std::size_t e = token.find_last_not_of(" \t\r");
  if (b == std::string::npos) return false;
  const std::string t = token.substr(b, e - b + 1);
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string token;
    bool numeric = true;
    while (std::getline(ss, token, ',')) {
      double v;
      if (!parse_number(token, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw ValidationError("non-numeric value on CSV line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("CSV input has no data rows");
  return Dataset::from_rows(rows);
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_csv(in);
}

}  // namespace greencube
