#pragma once

// The five reference exhaustions shipped with the toolkit.

#include <string>
#include <string_view>
#include <vector>

#include "mafoliate/polynomial.hpp"

namespace mafoliate::corpus {

/// |z1|^2 + |z2|^2
HermitianPolynomial euc();
/// (|z1|^2 + |z2|^2)^2
HermitianPolynomial fub();
/// |z1|^4 + |z2|^4
HermitianPolynomial quartic();
/// |z1|^6 + |z2|^4
HermitianPolynomial weighted();
/// |z1|^4 + |z2|^4 + Re(z1^3 zbar2)/2, a positive non-MA exhaustion.
HermitianPolynomial bad();

std::vector<std::string> names();
/// Throws InvalidInput for an unknown name.
HermitianPolynomial by_name(std::string_view name);

} // namespace mafoliate::corpus
