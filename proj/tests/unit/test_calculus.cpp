#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "../support.hpp"
#include "mafoliate/corpus.hpp"
#include "mafoliate/errors.hpp"
#include "mafoliate/jet.hpp"
#include "mafoliate/polynomial.hpp"
#include "mafoliate/serialization.hpp"

using namespace mafoliate;
using Catch::Approx;
using testing_support::random_points;

namespace {

MonomialKey key(int a1, int a2, int b1, int b2) { return {{a1, a2}, {b1, b2}}; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidInput;
}

ComplexRational exact_eval(const Polynomial& p, const std::array<ComplexRational, 2>& z) {
  const std::array<ComplexRational, 4> vars{z[0], z[1], z[0].conj(), z[1].conj()};
  ComplexRational total;
  for (const auto& [k, c] : p.terms()) {
    ComplexRational term = c;
    const std::array<int, 4> e{k.a[0], k.a[1], k.b[0], k.b[1]};
    for (int i = 0; i < 4; ++i) {
      for (int r = 0; r < e[i]; ++r) term = term * vars[i];
    }
    total = total + term;
  }
  return total;
}

} // namespace

TEST_CASE("parse accepts self-conjugate terms") {
  const auto p = parse_polynomial(R"({"terms":[{"a":[1,0],"b":[1,0],"re":1,"im":0},{"a":[0,1],"b":[0,1],"re":1,"im":0}]})");
  CHECK(p == corpus::euc());
  CHECK(p.evaluate(Point{cd{1, 2}, cd{0, 3}}) == 14.0);
}

TEST_CASE("parse rejects an unpaired term") {
  CHECK(kind_of([] { parse_polynomial(R"({"terms":[{"a":[1,0],"b":[0,1],"re":1,"im":0}]})"); }) ==
        ErrorKind::RealityViolation);
}

TEST_CASE("parse rejects negative exponents and bad shapes") {
  CHECK(kind_of([] { parse_polynomial(R"({"terms":[{"a":[-1,0],"b":[-1,0],"re":1,"im":0}]})"); }) ==
        ErrorKind::NegativeExponent);
  CHECK(kind_of([] { parse_polynomial(R"({"terms":[{"a":[1],"b":[1,0],"re":1}]})"); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { parse_polynomial("not json"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("half the real part of z1^3 zbar2 parses to quarter coefficients") {
  const auto p = parse_polynomial(
      R"({"terms":[{"a":[3,0],"b":[0,1],"re":0.25,"im":0},{"a":[0,1],"b":[3,0],"re":"1/4","im":0}]})");
  REQUIRE(p.terms().size() == 2);
  const Point q{cd{0.7, -0.2}, cd{0.3, 1.1}};
  const cd w = q.z1 * q.z1 * q.z1 * std::conj(q.z2);
  CHECK(p.evaluate(q) == Approx(0.5 * w.real()).epsilon(1e-14));
}

TEST_CASE("near-paired decimal coefficients are merged within tolerance") {
  const auto p = parse_polynomial(
      R"({"terms":[{"a":[1,0],"b":[0,1],"re":0.5,"im":0.25},{"a":[0,1],"b":[1,0],"re":0.5000000000001,"im":-0.25}]})");
  for (const auto& [k, c] : p.terms()) CHECK(p.terms().at(k.conjugate()) == c.conj());
  for (const auto& q : random_points(20, 3)) {
    const cd v = p.poly().evaluate(q);
    CHECK(std::abs(v.imag()) < 1e-12 * (1.0 + std::abs(v)));
  }
  CHECK(kind_of([] {
          parse_polynomial(
              R"({"terms":[{"a":[1,0],"b":[0,1],"re":0.5,"im":0},{"a":[0,1],"b":[1,0],"re":0.51,"im":0}]})");
        }) == ErrorKind::RealityViolation);
}

TEST_CASE("canonical serialization round-trips exactly") {
  for (const auto& name : corpus::names()) {
    const auto p = corpus::by_name(name);
    const std::string s = serialize(p);
    const auto back = parse_polynomial(s);
    CHECK(back == p);
    CHECK(serialize(back) == s);
    CHECK(polynomial_hash(back) == polynomial_hash(p));
  }
  const auto odd = parse_polynomial(R"({"terms":[{"a":[1,1],"b":[1,1],"re":"1/3","im":0}]})");
  CHECK(parse_polynomial(serialize(odd)) == odd);
  CHECK(polynomial_hash(corpus::euc()) != polynomial_hash(corpus::fub()));
}

TEST_CASE("corpus data files match the built-in corpus") {
  for (const auto& name : corpus::names()) {
    CHECK(load_polynomial_file(std::string(MAFOLIATE_CORPUS_DIR) + "/" + name + ".json") == corpus::by_name(name));
  }
}

TEST_CASE("Wirtinger derivatives follow the power rule") {
  const auto euc = corpus::euc();
  const auto quartic = corpus::quartic();
  CHECK(wirtinger_derive(euc, Var::z1) == Polynomial::variable(Var::zbar1));
  CHECK(wirtinger_derive(euc, Var::zbar2) == Polynomial::variable(Var::z2));
  const Polynomial expected = Polynomial::monomial(key(1, 0, 2, 0), 2);
  CHECK(wirtinger_derive(quartic, Var::z1) == expected);
}

TEST_CASE("jets of the quartic and euclidean exhaustions") {
  const auto j = eval_jet(corpus::quartic(), Point{1.0, 1.0});
  CHECK(j.rho == 2.0);
  CHECK(j.d1 == cd{2.0});
  CHECK(j.d2 == cd{2.0});
  CHECK(j.levi(0, 0) == cd{4.0});
  CHECK(j.levi(1, 1) == cd{4.0});
  CHECK(j.levi(0, 1) == cd{0.0});
  CHECK(j.D == 16.0);
  CHECK(j.B == 32.0);

  CHECK(eval_jet(corpus::quartic(), Point{1.0, 0.0}).D == 0.0);

  for (const auto& q : random_points(10, 5)) {
    const auto e = eval_jet(corpus::euc(), q);
    CHECK(e.levi.isApprox(Eigen::Matrix2cd::Identity()));
    CHECK(e.D == Approx(1.0));
  }
}

TEST_CASE("bidegree decomposition") {
  auto comps = [](const HermitianPolynomial& p) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [lm, c] : bidegree_decompose(p).components) out.push_back(lm);
    return out;
  };
  using V = std::vector<std::pair<int, int>>;
  CHECK(comps(corpus::fub()) == V{{2, 2}});
  CHECK(comps(corpus::euc()) == V{{1, 1}});
  auto bad = comps(corpus::bad());
  std::sort(bad.begin(), bad.end());
  CHECK(bad == V{{1, 3}, {2, 2}, {3, 1}});
  CHECK(bidegree_decompose(corpus::weighted()).total_degree == std::nullopt);
  CHECK(bidegree_decompose(corpus::fub()).total_degree == 4);
}

TEST_CASE("psh minimum eigenvalue") {
  const auto sphere = random_points(200, 17);
  const auto log_euc = psh_min_eigen(corpus::euc(), sphere, PshTarget::LogRho);
  CHECK(std::abs(log_euc.min_eigenvalue) < 1e-14);
  CHECK(psh_min_eigen(corpus::euc(), sphere, PshTarget::Rho).min_eigenvalue == Approx(1.0));

  std::vector<Point> off_axes;
  for (const auto& q : sphere) {
    if (std::abs(q.z1) > 0.1 && std::abs(q.z2) > 0.1) off_axes.push_back(q);
  }
  CHECK(psh_min_eigen(corpus::quartic(), off_axes, PshTarget::LogRho).min_eigenvalue > -1e-12);

  CHECK(kind_of([] { psh_min_eigen(corpus::euc(), {Point{}}, PshTarget::LogRho); }) == ErrorKind::NonPositiveRho);
}

// ---------------------------------------------------------------- properties

TEST_CASE("property: evaluation is real") {
  for (const auto& name : corpus::names()) {
    const auto p = corpus::by_name(name);
    for (const auto& q : random_points(100, 21)) {
      const cd v = p.poly().evaluate(q);
      CHECK(std::abs(v.imag()) < 1e-12 * (1.0 + std::abs(v.real())));
    }
  }
}

TEST_CASE("property: zbar derivative is the conjugate of the z derivative") {
  for (const auto& name : corpus::names()) {
    const auto p = corpus::by_name(name);
    for (int mu = 0; mu < 2; ++mu) {
      const Polynomial dz = wirtinger_derive(p, mu == 0 ? Var::z1 : Var::z2);
      const Polynomial dzb = wirtinger_derive(p, mu == 0 ? Var::zbar1 : Var::zbar2);
      CHECK(dzb == dz.conjugate());
      for (const auto& q : random_points(20, 23)) {
        CHECK(std::abs(dzb.evaluate(q) - std::conj(dz.evaluate(q))) < 1e-12 * (1.0 + std::abs(dz.evaluate(q))));
      }
    }
  }
}

TEST_CASE("property: jet entries match central differences at second order") {
  // Wirtinger derivatives from real partials: d/dz = (d/dx - i d/dy) / 2,
  // d/dzbar = (d/dx + i d/dy) / 2.
  const std::vector<Point> pts = random_points(5, 29, 0.8);
  for (const auto& name : corpus::names()) {
    const auto p = corpus::by_name(name);
    const Exhaustion ex(p);
    for (const auto& q : pts) {
      const WirtingerJet jet = ex.jet(q);
      auto shifted = [&](int coord, double h) {
        auto x = q.real_coords();
        x[coord] += h;
        return Point::from_real(x[0], x[1], x[2], x[3]);
      };
      auto first_fd = [&](int mu, double h) {
        const double dx = (ex.value(shifted(2 * mu, h)) - ex.value(shifted(2 * mu, -h))) / (2 * h);
        const double dy = (ex.value(shifted(2 * mu + 1, h)) - ex.value(shifted(2 * mu + 1, -h))) / (2 * h);
        return 0.5 * cd{dx, -dy};
      };
      // Orders are measured over h in {1e-3, 1e-4}.
      // Second derivatives: central differences of the exact rho_mu along
      // zbar_nu, so the error is O(h^2) without the eps/h^2 cancellation.
      auto mixed_fd = [&](int mu, int nu, double h) {
        const Polynomial& d = ex.d(mu);
        const cd dx = (d.evaluate(shifted(2 * nu, h)) - d.evaluate(shifted(2 * nu, -h))) / (2 * h);
        const cd dy = (d.evaluate(shifted(2 * nu + 1, h)) - d.evaluate(shifted(2 * nu + 1, -h))) / (2 * h);
        return 0.5 * (dx + cd{0, 1} * dy);
      };
      const std::array<cd, 2> d{jet.d1, jet.d2};
      for (int mu = 0; mu < 2; ++mu) {
        const double e1 = std::abs(first_fd(mu, 1e-3) - d[mu]);
        const double e2 = std::abs(first_fd(mu, 1e-4) - d[mu]);
        CHECK(e2 < 1e-7 * (1.0 + std::abs(d[mu])));
        if (e1 > 1e-9) CHECK(std::log10(e1 / e2) >= 1.8);
        for (int nu = 0; nu < 2; ++nu) {
          const cd exact = jet.levi(mu, nu);
          const double f1 = std::abs(mixed_fd(mu, nu, 1e-3) - exact);
          const double f2 = std::abs(mixed_fd(mu, nu, 1e-4) - exact);
          CHECK(f2 < 1e-7 * (1.0 + std::abs(exact)));
          if (f1 > 1e-9) CHECK(std::log10(f1 / f2) >= 1.8);
        }
      }
    }
  }
}

TEST_CASE("property: bidegree components reassemble the polynomial") {
  for (const auto& name : corpus::names()) {
    const auto p = corpus::by_name(name);
    const BidegreeProfile prof = bidegree_decompose(p);
    CHECK(prof.reassemble() == p.poly());
    // Exact evaluation at rational points, so "equal" means equal.
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> num(-40, 40);
    for (int trial = 0; trial < 100; ++trial) {
      std::array<ComplexRational, 2> z;
      for (auto& zi : z) zi = ComplexRational(mpq_class(num(rng), 17), mpq_class(num(rng), 13));
      ComplexRational sum;
      for (const auto& [lm, c] : prof.components) sum = sum + exact_eval(c, z);
      CHECK(sum == exact_eval(p.poly(), z));
    }
    for (const auto& [lm, c] : prof.components) {
      const auto partner = prof.components.find({lm.second, lm.first});
      REQUIRE(partner != prof.components.end());
      CHECK(partner->second == c.conjugate());
    }
  }
}

TEST_CASE("property: Euler identity on bidegree components") {
  for (const auto& name : corpus::names()) {
    for (const auto& [lm, c] : bidegree_decompose(corpus::by_name(name)).components) {
      const Polynomial lhs = holomorphic_euler(c);
      CHECK(lhs == ComplexRational(lm.first) * c);
      for (const auto& q : random_points(10, 37)) {
        CHECK(std::abs(lhs.evaluate(q) - static_cast<double>(lm.first) * c.evaluate(q)) <
              1e-12 * (1.0 + std::abs(c.evaluate(q))));
      }
    }
  }
}
