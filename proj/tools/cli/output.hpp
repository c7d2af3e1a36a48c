#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldpustat/kernel.hpp"
#include "ldpustat/matrix.hpp"
#include "ldpustat/motif.hpp"

namespace ldpustat::cli {

using Json = nlohmann::ordered_json;

/// Number rounded to 12 significant digits; infinities and NaN become strings.
Json num(double x);
Json nums(const std::vector<double>& xs);
/// Map key for a norm exponent: "1", "2.5", "inf".
std::string exponent_key(double r);

Json to_json(const AssumptionReport& report);
/// {"vertices": v, "edges": [[a, b], ...]} with 1-based vertices.
Json to_json(const Motif& motif);

void emit(std::ostream& out, const Json& j);
/// Writes `content` to dir/name, creating dir. No-op when dir is empty.
void write_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace ldpustat::cli
