#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>

#include "json.hpp"

#include "greencube/green_kernel.hpp"
#include "greencube/measure.hpp"
#include "greencube/set_family.hpp"

namespace greencube {

// Accepts a JSON array of 1-based coordinate lists ("[[1,2],[2]]"), the
// brace form printed by MonotoneFamily::to_string ("[{1,2},{2}]"), or one of
// the names empty, pillow (alias all), top (alias tucked). With `close` the
// members are replaced by their upward closure instead of being rejected.
MonotoneFamily parse_family(const std::string& text, int m, bool close = false);

nlohmann::json family_to_json(const MonotoneFamily& family);

// Names lebesgue, diagonal, antidiagonal, diag+anti, or a JSON object
// {"variant": "points", "atoms": [{"x": [...], "weight": w}, ...]} /
// {"variant": "sum", "terms": [{"measure": ..., "weight": w}, ...]}.
MeasureSpec parse_measure(const std::string& text, int m);
MeasureSpec measure_from_json(const nlohmann::json& j, int m);
nlohmann::json measure_to_json(const MeasureSpec& mu);

// {"{1,2}": a, ...} keyed by the brace form of each member.
nlohmann::json coefficients_to_json(const GreenKernel& kernel);

// {"m": m, "family": [[...]], "coefficients": [{"set": [...], "a": a}, ...]}
nlohmann::json kernel_to_json(const GreenKernel& kernel);
// Coefficients are recomputed and must agree with any that are present.
GreenKernel kernel_from_json(const nlohmann::json& j);

// Comma-separated point, e.g. "0.25,0.5".
std::vector<double> parse_point(const std::string& text);

// Rows of the matrix, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

}  // namespace greencube
