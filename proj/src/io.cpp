#include "greencube/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "greencube/error.hpp"

namespace greencube {

using nlohmann::json;

namespace {

std::vector<SubsetMask> members_from_json(const json& j, int m) {
  if (!j.is_array()) throw ValidationError("family must be a JSON array of coordinate lists");
  std::vector<SubsetMask> out;
  for (const auto& member : j) {
    if (!member.is_array()) throw ValidationError("family member must be an array of coordinates");
    std::vector<int> coords;
    for (const auto& c : member) {
      if (!c.is_number_integer()) throw ValidationError("coordinates must be integers");
      coords.push_back(c.get<int>());
    }
    if (coords.empty()) throw ValidationError("family members must be nonempty");
    out.push_back(SubsetMask::from_coordinates(coords, m));
  }
  return out;
}

}  // namespace

MonotoneFamily parse_family(const std::string& text, int m, bool close) {
  check_dimension(m);
  if (text == "empty") return MonotoneFamily::empty(m);
  if (text == "pillow" || text == "all") return MonotoneFamily::all_nonempty(m);
  if (text == "top" || text == "tucked") return MonotoneFamily::top(m);
  std::string s = text;
  // Brace form: {1,2} -> [1,2]; {} stays an (invalid) empty member.
  for (char& c : s) {
    if (c == '{') c = '[';
    if (c == '}') c = ']';
  }
  const json j = json::parse(s, nullptr, false);
  if (j.is_discarded()) throw ValidationError("malformed family: " + text);
  const auto members = members_from_json(j, m);
  if (close) {
    if (members.empty()) return MonotoneFamily::empty(m);
    return upward_closure(members, m);
  }
  return MonotoneFamily::from_members(members, m);
}

json family_to_json(const MonotoneFamily& family) {
  json out = json::array();
  for (const auto& u : family.members()) out.push_back(u.coordinates());
  return out;
}

MeasureSpec measure_from_json(const json& j, int m) {
  if (j.is_string()) return parse_measure(j.get<std::string>(), m);
  if (!j.is_object() || !j.contains("variant")) {
    throw ValidationError("measure must be a name or an object with a \"variant\" key");
  }
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "points") {
    std::vector<PointMass> atoms;
    for (const auto& a : j.at("atoms")) {
      PointMass pm;
      pm.x = a.at("x").get<std::vector<double>>();
      pm.weight = a.value("weight", 1.0);
      atoms.push_back(std::move(pm));
    }
    return MeasureSpec::points(m, std::move(atoms));
  }
  if (variant == "sum") {
    std::vector<WeightedTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({measure_from_json(t.at("measure"), m), t.value("weight", 1.0)});
    }
    return MeasureSpec::sum(std::move(terms));
  }
  return parse_measure(variant, m);
}

MeasureSpec parse_measure(const std::string& text, int m) {
  if (text == "lebesgue") return MeasureSpec::lebesgue(m);
  if (text == "diagonal" || text == "diag") return MeasureSpec::diagonal(m);
  if (text == "antidiagonal" || text == "anti") return MeasureSpec::antidiagonal(m);
  if (text == "diag+anti") {
    return MeasureSpec::sum({{MeasureSpec::diagonal(m), 1.0}, {MeasureSpec::antidiagonal(m), 1.0}});
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    throw ValidationError("unknown measure '" + text +
                          "' (expected lebesgue, diagonal, antidiagonal, diag+anti or JSON)");
  }
  try {
    return measure_from_json(j, m);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed measure JSON: ") + e.what());
  }
}

json measure_to_json(const MeasureSpec& mu) {
  return std::visit(
      [&](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LebesgueMeasure>) {
          return "lebesgue";
        } else if constexpr (std::is_same_v<T, DiagonalMeasure>) {
          return "diagonal";
        } else if constexpr (std::is_same_v<T, AntiDiagonalMeasure>) {
          return "antidiagonal";
        } else if constexpr (std::is_same_v<T, PointMasses>) {
          json atoms = json::array();
          for (const auto& a : v.atoms) atoms.push_back({{"x", a.x}, {"weight", a.weight}});
          return {{"variant", "points"}, {"atoms", atoms}};
        } else {
          json terms = json::array();
          for (const auto& t : v.terms) {
            terms.push_back({{"measure", measure_to_json(t.measure)}, {"weight", t.weight}});
          }
          return {{"variant", "sum"}, {"terms", terms}};
        }
      },
      mu.variant());
}

json coefficients_to_json(const GreenKernel& kernel) {
  json out = json::object();
  const auto members = kernel.family().members();
  const auto coeffs = kernel.coefficients();
  for (std::size_t i = 0; i < members.size(); ++i) out[members[i].to_string()] = coeffs[i];
  return out;
}

json kernel_to_json(const GreenKernel& kernel) {
  json coeffs = json::array();
  const auto members = kernel.family().members();
  const auto a = kernel.coefficients();
  for (std::size_t i = 0; i < members.size(); ++i) {
    coeffs.push_back({{"set", members[i].coordinates()}, {"a", a[i]}});
  }
  return {{"m", kernel.dimension()}, {"family", family_to_json(kernel.family())},
          {"coefficients", coeffs}};
}

GreenKernel kernel_from_json(const json& j) {
  try {
    const int m = j.at("m").get<int>();
    GreenKernel kernel(MonotoneFamily::from_members(members_from_json(j.at("family"), m), m));
    if (j.contains("coefficients")) {
      for (const auto& c : j.at("coefficients")) {
        const auto u = SubsetMask::from_coordinates(c.at("set").get<std::vector<int>>(), m);
        if (kernel.coefficient(u) != c.at("a").get<std::int64_t>()) {
          throw ValidationError("coefficient for " + u.to_string() +
                                " does not satisfy the recurrence");
        }
      }
    }
    return kernel;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed kernel JSON: ") + e.what());
  }
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> x;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
      throw ValidationError("malformed coordinate '" + token + "' in point '" + text + "'");
    }
    x.push_back(v);
  }
  if (x.empty()) throw ValidationError("empty point");
  return x;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
  char buf[40];
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", matrix(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace greencube
