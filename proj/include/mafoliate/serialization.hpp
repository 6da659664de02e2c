#pragma once

// Polynomial interchange format:
//   { "terms": [ { "a": [a1, a2], "b": [b1, b2], "re": x, "im": y }, ... ] }
// Coefficients may be JSON integers, JSON floats (taken as the exact binary
// value of the double) or strings "p/q". Canonical output sorts terms in
// graded lex order and writes integers as integers, doubles as shortest
// round-trip decimals and anything else as "p/q", so parse(serialize(p)) == p.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mafoliate/polynomial.hpp"

namespace mafoliate {

inline constexpr std::string_view kToolkitVersion = "0.3.0";

HermitianPolynomial parse_polynomial(std::string_view json_text, double reality_tol = 1e-12);
HermitianPolynomial polynomial_from_json(const nlohmann::json& doc, double reality_tol = 1e-12);

nlohmann::json to_json(const Polynomial& p);
inline nlohmann::json to_json(const HermitianPolynomial& p) { return to_json(p.poly()); }

std::string serialize(const HermitianPolynomial& p);

/// FNV-1a 64-bit digest of the canonical serialization, as 16 hex digits.
std::string polynomial_hash(const HermitianPolynomial& p);

HermitianPolynomial load_polynomial_file(const std::string& path);

nlohmann::json rational_to_json(const mpq_class& q);
mpq_class rational_from_json(const nlohmann::json& v);

} // namespace mafoliate
