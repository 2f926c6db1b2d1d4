#include "blocktrace/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "json.hpp"

namespace blocktrace {

void save_matrix(const std::string& path, const BlockMatrix& a) {
  nlohmann::ordered_json doc;
  doc["m"] = a.m;
  doc["n"] = a.n;
  auto& data = doc["data"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    const Complex z = a.data.data()[k];
    data.push_back({z.real(), z.imag()});
  }
  std::ofstream out(path);
  if (!out) throw IoError("save_matrix: cannot open '" + path + "' for writing");
  out << doc.dump() << "\n";
  if (!out) throw IoError("save_matrix: write to '" + path + "' failed");
}

BlockMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_matrix: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw IoError("load_matrix: '" + path + "': " + err.what());
  }
  if (!doc.is_object() || !doc.contains("m") || !doc.contains("n") ||
      !doc.contains("data")) {
    throw IoError("load_matrix: '" + path + "': expected fields m, n, data");
  }
  if (!doc["m"].is_number_integer() || !doc["n"].is_number_integer() ||
      !doc["data"].is_array()) {
    throw IoError("load_matrix: '" + path + "': wrong field types");
  }
  const int m = doc["m"].get<int>();
  const int n = doc["n"].get<int>();
  if (m < 1 || n < 1) {
    throw IoError("load_matrix: '" + path + "': m and n must be positive");
  }
  const std::size_t expected = static_cast<std::size_t>(m) * n * m * n;
  const auto& data = doc["data"];
  if (data.size() != expected) {
    throw IoError("load_matrix: '" + path + "': data has " +
                  std::to_string(data.size()) + " entries, expected " +
                  std::to_string(expected));
  }
  std::vector<Complex> entries;
  entries.reserve(expected);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& pair = data[k];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw IoError("load_matrix: '" + path + "': entry " + std::to_string(k) +
                    " is not an [re, im] pair");
    }
    const double re = pair[0].get<double>();
    const double im = pair[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw IoError("load_matrix: '" + path + "': entry " + std::to_string(k) +
                    " is not finite");
    }
    entries.emplace_back(re, im);
  }
  return BlockMatrix(m, n, ComplexMatrix(m * n, m * n, std::move(entries)));
}

}  // namespace blocktrace
