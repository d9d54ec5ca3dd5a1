#pragma once

// Matrix persistence: {"dim": d, "entries": [[re, im], ...]} in row-major order.

#include <string>

#include <json.hpp>

#include "chi2lab/hermitian.hpp"

namespace chi2lab {

nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Throws ParseError on a malformed document, a wrong entry count or a
/// non-finite value.
ComplexMatrix matrix_from_json(const nlohmann::json& j);

ComplexMatrix parse_matrix(const std::string& text);
ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const ComplexMatrix& m);

}  // namespace chi2lab
