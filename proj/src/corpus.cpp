#include "mafoliate/corpus.hpp"

#include "mafoliate/errors.hpp"

namespace mafoliate::corpus {

namespace {

MonomialKey key(int a1, int a2, int b1, int b2) { return {{a1, a2}, {b1, b2}}; }

HermitianPolynomial from(const Polynomial::TermMap& terms) {
  return HermitianPolynomial::from_polynomial(Polynomial(terms));
}

} // namespace

HermitianPolynomial euc() { return from({{key(1, 0, 1, 0), 1}, {key(0, 1, 0, 1), 1}}); }

HermitianPolynomial fub() {
  const HermitianPolynomial e = euc();
  return e * e;
}

HermitianPolynomial quartic() { return from({{key(2, 0, 2, 0), 1}, {key(0, 2, 0, 2), 1}}); }

HermitianPolynomial weighted() { return from({{key(3, 0, 3, 0), 1}, {key(0, 2, 0, 2), 1}}); }

HermitianPolynomial bad() {
  const mpq_class quarter(1, 4);
  return from({{key(2, 0, 2, 0), 1},
               {key(0, 2, 0, 2), 1},
               {key(3, 0, 0, 1), ComplexRational(quarter)},
               {key(0, 1, 3, 0), ComplexRational(quarter)}});
}

std::vector<std::string> names() { return {"euc", "fub", "quartic", "weighted", "bad"}; }

HermitianPolynomial by_name(std::string_view name) {
  if (name == "euc") return euc();
  if (name == "fub") return fub();
  if (name == "quartic") return quartic();
  if (name == "weighted") return weighted();
  if (name == "bad") return bad();
  throw Error(ErrorKind::InvalidInput, "unknown corpus member '" + std::string(name) + "'");
}

} // namespace mafoliate::corpus
