#include "chi2lab/matrix_json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace chi2lab {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("matrix document must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw ParseError("matrix document needs an integer \"dim\"");
  }
  const auto dim = j["dim"].get<std::int64_t>();
  if (dim < 1 || dim > 1024) throw ParseError("\"dim\" out of range");
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw ParseError("matrix document needs an \"entries\" array");
  }
  const auto& entries = j["entries"];
  if (static_cast<std::int64_t>(entries.size()) != dim * dim) {
    throw ParseError("expected " + std::to_string(dim * dim) + " entries, got " +
                     std::to_string(entries.size()));
  }
  ComplexMatrix m(dim, dim);
  for (std::int64_t k = 0; k < dim * dim; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ParseError("entry " + std::to_string(k) + " must be a [re, im] pair");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw ParseError("entry " + std::to_string(k) + " is not finite");
    }
    m(k / dim, k % dim) = Complex(re, im);
  }
  return m;
}

ComplexMatrix parse_matrix(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << matrix_to_json(m).dump() << '\n';
}

}  // namespace chi2lab
