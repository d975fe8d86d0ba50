#include "dmlimits/chain_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace dmlimits {

namespace {

using Rows = std::vector<std::vector<double>>;

// Row sums are checked at the looser file tolerance; rows outside the
// in-memory tolerance are renormalized.
FiniteChain build(const Rows& rows, std::vector<std::string> labels) {
  if (rows.empty()) throw ParseError("transition matrix has no rows");
  const std::size_t n = rows.size();
  Eigen::MatrixXd P(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    if (rows[x].size() != n)
      throw ParseError("row " + std::to_string(x) + " has " + std::to_string(rows[x].size()) + " entries, expected " +
                       std::to_string(n));
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double v = rows[x][y];
      if (!std::isfinite(v) || v < 0.0) throw ParseError("row " + std::to_string(x) + " has an invalid entry");
      P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = v;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kLoadRowTolerance) {
      std::ostringstream os;
      os.precision(12);
      os << "row " << x << " sums to " << sum;
      throw ParseError(os.str());
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) P.row(static_cast<Eigen::Index>(x)) /= sum;
  }
  if (!labels.empty() && labels.size() != n) throw ParseError("label count does not match the number of rows");
  return FiniteChain(std::move(P), std::move(labels));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == s.size();
}

}  // namespace

FiniteChain load_chain_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("P") || !doc["P"].is_array())
    throw ParseError("chain JSON must be an object with an array field \"P\"");
  Rows rows;
  for (std::size_t x = 0; x < doc["P"].size(); ++x) {
    const auto& row = doc["P"][x];
    if (!row.is_array()) throw ParseError("row " + std::to_string(x) + " is not an array");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("row " + std::to_string(x) + " has a non-numeric entry");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) throw ParseError("\"labels\" must be an array of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw ParseError("\"labels\" must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return build(rows, std::move(labels));
}

FiniteChain load_chain_csv(std::istream& in) {
  Rows rows;
  std::vector<std::string> labels;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    std::vector<double> r;
    bool numeric = true;
    for (const auto& f : fields) {
      double v;
      if (!parse_double(f, v)) {
        numeric = false;
        break;
      }
      r.push_back(v);
    }
    if (!numeric) {
      if (first) {
        labels = fields;
        first = false;
        continue;
      }
      throw ParseError("row " + std::to_string(rows.size()) + " has a non-numeric entry");
    }
    first = false;
    rows.push_back(std::move(r));
  }
  return build(rows, std::move(labels));
}

FiniteChain load_chain_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  if (path.extension() == ".json") return load_chain_json(in);
  return load_chain_csv(in);
}

std::string chain_to_json(const FiniteChain& chain) {
  nlohmann::json doc;
  doc["P"] = nlohmann::json::array();
  for (std::size_t x = 0; x < chain.size(); ++x) {
    auto row = nlohmann::json::array();
    for (std::size_t y = 0; y < chain.size(); ++y) row.push_back(chain(x, y));
    doc["P"].push_back(std::move(row));
  }
  if (!chain.labels().empty()) doc["labels"] = chain.labels();
  return doc.dump(2);
}

void save_chain_json(const FiniteChain& chain, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << chain_to_json(chain) << '\n';
}

}  // namespace dmlimits
