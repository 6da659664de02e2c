#include "mafoliate/serialization.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mafoliate/errors.hpp"

namespace mafoliate {

namespace {

mpq_class exact_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  q.canonicalize();
  return q;
}

bool is_double_exact(const mpq_class& q, double& out) {
  out = q.get_d();
  if (!std::isfinite(out)) return false;
  return exact_from_double(out) == q;
}

int exponent_from_json(const nlohmann::json& v) {
  if (!v.is_number_integer()) throw Error(ErrorKind::InvalidInput, "exponents must be integers");
  const auto e = v.get<long long>();
  if (e < 0) throw Error(ErrorKind::NegativeExponent, "exponent " + std::to_string(e) + " is negative");
  return static_cast<int>(e);
}

} // namespace

mpq_class rational_from_json(const nlohmann::json& v) {
  if (v.is_null()) return 0;
  if (v.is_number_integer()) {
    return mpq_class(mpz_class(v.dump()));
  }
  if (v.is_number_float()) return exact_from_double(v.get<double>());
  if (v.is_string()) {
    try {
      mpq_class q(v.get<std::string>());
      q.canonicalize();
      if (q.get_den() == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
      return q;
    } catch (const std::invalid_argument&) {
      throw Error(ErrorKind::InvalidInput, "malformed rational '" + v.get<std::string>() + "'");
    }
  }
  throw Error(ErrorKind::InvalidInput, "coefficient must be a number or a \"p/q\" string");
}

nlohmann::json rational_to_json(const mpq_class& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  double d = 0.0;
  if (is_double_exact(q, d)) return d;
  return q.get_str();
}

HermitianPolynomial polynomial_from_json(const nlohmann::json& doc, double reality_tol) {
  if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array()) {
    throw Error(ErrorKind::InvalidInput, "expected an object with a \"terms\" array");
  }
  Polynomial::TermMap terms;
  for (const auto& t : doc["terms"]) {
    if (!t.contains("a") || !t.contains("b") || t["a"].size() != 2 || t["b"].size() != 2) {
      throw Error(ErrorKind::InvalidInput, "term needs \"a\": [a1,a2] and \"b\": [b1,b2]");
    }
    MonomialKey key{{exponent_from_json(t["a"][0]), exponent_from_json(t["a"][1])},
                    {exponent_from_json(t["b"][0]), exponent_from_json(t["b"][1])}};
    ComplexRational c{rational_from_json(t.value("re", nlohmann::json{})),
                      rational_from_json(t.value("im", nlohmann::json{}))};
    auto [it, inserted] = terms.try_emplace(key, c);
    if (!inserted) it->second = it->second + c;
  }
  return HermitianPolynomial::from_terms(terms, reality_tol);
}

HermitianPolynomial parse_polynomial(std::string_view json_text, double reality_tol) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
  return polynomial_from_json(doc, reality_tol);
}

nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [key, c] : p.terms()) {
    nlohmann::json t;
    t["a"] = {key.a[0], key.a[1]};
    t["b"] = {key.b[0], key.b[1]};
    t["re"] = rational_to_json(c.re);
    t["im"] = rational_to_json(c.im);
    terms.push_back(std::move(t));
  }
  return nlohmann::json{{"terms", terms}};
}

std::string serialize(const HermitianPolynomial& p) { return to_json(p).dump(); }

std::string polynomial_hash(const HermitianPolynomial& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(p)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

HermitianPolynomial load_polynomial_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open polynomial file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_polynomial(ss.str());
}

} // namespace mafoliate
