#include "dmlimits/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace dmlimits {

nlohmann::json rounded(const nlohmann::json& value) {
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (!std::isfinite(x)) return nullptr;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", kReportDigits, x);
    return std::strtod(buf, nullptr);
  }
  if (value.is_array()) {
    auto out = nlohmann::json::array();
    for (const auto& v : value) out.push_back(rounded(v));
    return out;
  }
  if (value.is_object()) {
    auto out = nlohmann::json::object();
    for (const auto& [k, v] : value.items()) out[k] = rounded(v);
    return out;
  }
  return value;
}

std::string Report::to_json() const {
  nlohmann::json doc;
  doc["command"] = command;
  doc["inputs"] = rounded(inputs);
  doc["outputs"] = rounded(outputs);
  doc["warnings"] = warnings;
  return doc.dump(2);
}

}  // namespace dmlimits
