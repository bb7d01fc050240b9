#include "doctest.h"
#include "msk/error.hpp"
#include "test_support.hpp"

using namespace msk;
using msk::test::F;
using msk::test::S;
using msk::test::V;

TEST_CASE("wedge examples") {
  auto c = test::chart_of({"x", "y", "z"});
  CHECK(wedge(F("d(x)", c), F("d(y)", c)) == -wedge(F("d(y)", c), F("d(x)", c)));
  CHECK(wedge(F("d(x)", c), F("d(x)", c)).is_zero());
  CHECK(wedge(F("x*d(x)", c), F("d(y)", c)) == F("x*d(x)^d(y)", c));
  auto other = test::chart_of({"u"}, "U");
  CHECK_THROWS_AS(wedge(F("d(x)", c), F("d(u)", other)), Error);
}

TEST_CASE("exterior derivative examples") {
  auto qp = test::chart_of({"q", "p"});
  CHECK(exterior_derivative(F("p*d(q)", qp)) == F("d(p)^d(q)", qp));
  auto c = test::chart_of({"x", "y"});
  CHECK(exterior_derivative(F("d(x)", c)).is_zero());
  CHECK(exterior_derivative(F("x*d(y)", c)) == F("d(x)^d(y)", c));
  // top degree collapses to zero
  CHECK(exterior_derivative(F("x*y*d(x)^d(y)", c)).is_zero());
}

TEST_CASE("interior product examples and errors") {
  auto c = test::chart_of({"x", "y", "z"});
  CHECK(interior_product(V("e(x)", c), F("d(x)^d(y)", c)) == F("d(y)", c));
  CHECK(interior_product(V("e(z)", c), F("d(x)^d(y)", c)).is_zero());
  CHECK(interior_product(V("e(x)^e(y)", c), F("d(x)^d(y)^d(z)", c)) == F("d(z)", c));
  CHECK(interior_product(V("e(y)", c), F("d(x)^d(y)", c)) == F("-d(x)", c));
  try {
    (void)interior_product(V("e(x)", c), F("x", c));
    FAIL("expected DegreeUnderflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeUnderflow);
  }
  CHECK_THROWS_AS(interior_product(V("e(x)^e(y)", c), F("d(x)", c)), Error);
}

TEST_CASE("Lie derivative and bracket examples") {
  auto c = test::chart_of({"x", "y"});
  CHECK(lie_derivative(V("e(x)", c), F("x*d(y)", c)) == F("d(y)", c));
  CHECK(lie_derivative(V("e(x)", c), F("d(y)", c)).is_zero());
  CHECK(lie_bracket_vf(V("e(x)", c), V("e(y)", c)).is_zero());
  CHECK(lie_bracket_vf(V("e(x)", c), V("x*e(y)", c)) == V("e(y)", c));
  auto X = V("x*y*e(x) + y**2*e(y)", c);
  CHECK(lie_bracket_vf(X, X).is_zero());
}

TEST_CASE("pullback and differential examples") {
  auto src = test::chart_of({"x"}, "X");
  auto tgt = test::chart_of({"u", "v"}, "UV");
  SmoothMap phi = SmoothMap::parse(src, tgt, {"x", "x**2"});
  CHECK(pullback(phi, F("d(v)", tgt)) == F("2*x*d(x)", src));
  auto a = F("u*v*d(u) + v*d(v)", tgt);
  CHECK(pullback(SmoothMap::identity(tgt), a) == a);
  CHECK(pullback(phi, exterior_derivative(a)) == exterior_derivative(pullback(phi, a)));

  VectorAlong w = differential_apply(phi, V("e(x)", src));
  CHECK(w.components[0] == S("1", src));
  CHECK(w.components[1] == S("2*x", src));
  auto id = differential_apply(SmoothMap::identity(tgt), V("e(u)", tgt));
  CHECK(id.components[0] == S("1", tgt));
  CHECK(id.components[1].is_zero());
  auto zero = differential_apply(phi, MultiVectorField::zero(src, 1));
  CHECK(zero.components[0].is_zero());
  CHECK(zero.components[1].is_zero());
}

TEST_CASE("Poisson jacobiator examples") {
  auto c = test::chart_of({"x", "y"});
  CHECK(poisson_jacobiator(V("e(x)^e(y)", c)).is_zero());
  auto so3 = test::chart_of({"x1", "x2", "x3"});
  CHECK(poisson_jacobiator(V("x1*e(x2)^e(x3) + x2*e(x3)^e(x1) + x3*e(x1)^e(x2)", so3)).is_zero());
  auto c4 = test::chart_of({"x", "y", "z", "w"});
  auto J = poisson_jacobiator(V("e(x)^e(y) + x*e(z)^e(w)", c4));
  REQUIRE_FALSE(J.is_zero());
  // {y,{z,w}} = {y,x} = -1; the other cyclic terms vanish
  CHECK(J.coeff({1, 2, 3}) == S("-1", c4));
  CHECK(J.coeffs().size() == 1);
  CHECK_THROWS_AS(poisson_jacobiator(V("e(x)", c)), Error);
}

TEST_CASE("form grammar round trips and rejects mixed bases") {
  auto c = test::chart_of({"q1", "q2", "q3", "p12"});
  CHECK_THROWS_AS(F("p12*d(q1)^d(q2) + d(q3)", c), SyntaxError);
  CHECK_THROWS_AS(F("d(q1) + d(q1)^d(q2)", c), Error);
  CHECK_THROWS_AS(F("d(q1)^e(q2)", c), Error);
  CHECK_THROWS_AS(F("d(q1)*d(q2)", c), Error);
  auto b = F("p12*d(q1)^d(q2) + (q1 + 1)/q2*d(q3)^d(p12) - 3/2*q3*d(q2)^d(q3)", c);
  CHECK(F(format_form(b).c_str(), c) == b);
  CHECK(format_form(F("-(q1+q2)*d(q1) + d(q2)", c)) == "(-q1 - q2)*d(q1) + d(q2)");
  CHECK(F("0", c, 2).degree() == 2);
}

// ---------------------------------------------------------------------------
// randomized calculus identities

TEST_CASE("property: d o d = 0 and graded commutativity of wedge") {
  std::mt19937_64 rng(1);
  int count = 0;
  for (int trial = 0; trial < 520; ++trial) {
    const int dim = 1 + trial % 5;
    std::vector<std::string> names;
    for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
    auto chart = make_chart("R", names);
    const int deg = static_cast<int>(rng() % static_cast<unsigned>(dim + 1));
    auto a = test::random_form(chart, deg, rng, 3);
    REQUIRE(exterior_derivative(exterior_derivative(a)).is_zero());
    const int deg2 = static_cast<int>(rng() % static_cast<unsigned>(dim + 1));
    auto b = test::random_form(chart, deg2, rng, 2);
    auto ab = wedge(a, b);
    auto ba = wedge(b, a);
    REQUIRE(ab == ((deg * deg2) % 2 ? -ba : ba));
    ++count;
  }
  CHECK(count >= 500);
}

TEST_CASE("property: i_X o i_X = 0 and i_X is a graded derivation") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 2 + trial % 4;
    std::vector<std::string> names;
    for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
    auto chart = make_chart("R", names);
    auto X = test::random_vector_field(chart, rng, 2);
    const int deg = 2 + static_cast<int>(rng() % static_cast<unsigned>(dim - 1));
    auto a = test::random_form(chart, deg, rng, 2);
    REQUIRE(interior_product(X, interior_product(X, a)).is_zero());

    const int pa = 1 + static_cast<int>(rng() % 2);
    const int pb = 1 + static_cast<int>(rng() % 2);
    auto f = test::random_form(chart, pa, rng, 2);
    auto g = test::random_form(chart, pb, rng, 2);
    auto lhs = interior_product(X, wedge(f, g));
    auto rhs = wedge(interior_product(X, f), g) +
               (pa % 2 ? -wedge(f, interior_product(X, g)) : wedge(f, interior_product(X, g)));
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("property: L_X commutes with d and L_[X,Y] = [L_X, L_Y]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int dim = 1 + trial % 4;
    std::vector<std::string> names;
    for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
    auto chart = make_chart("R", names);
    auto X = test::random_vector_field(chart, rng, 2);
    const int deg = static_cast<int>(rng() % static_cast<unsigned>(dim + 1));
    auto a = test::random_form(chart, deg, rng, 3);
    REQUIRE(lie_derivative(X, exterior_derivative(a)) == exterior_derivative(lie_derivative(X, a)));
    if (trial % 5 == 0) {
      auto Y = test::random_vector_field(chart, rng, 1);
      auto lhs = lie_derivative(lie_bracket_vf(X, Y), a);
      auto rhs = lie_derivative(X, lie_derivative(Y, a)) - lie_derivative(Y, lie_derivative(X, a));
      REQUIRE(lhs == rhs);
    }
  }
}

TEST_CASE("property: pullback commutes with d and wedge") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int sdim = 1 + trial % 3;
    const int tdim = 1 + (trial / 3) % 3;
    std::vector<std::string> sn, tn;
    for (int i = 0; i < sdim; ++i) sn.push_back("s" + std::to_string(i));
    for (int i = 0; i < tdim; ++i) tn.push_back("t" + std::to_string(i));
    auto src = make_chart("S", sn);
    auto tgt = make_chart("T", tn);
    std::vector<RationalFunction> comps;
    for (int i = 0; i < tdim; ++i) comps.emplace_back(random_polynomial(src, rng, 2, 2, 3));
    SmoothMap phi(src, tgt, comps);
    const int deg = static_cast<int>(rng() % static_cast<unsigned>(tdim + 1));
    auto a = test::random_form(tgt, deg, rng, 2);
    REQUIRE(pullback(phi, exterior_derivative(a)) == exterior_derivative(pullback(phi, a)));
    if (trial % 4 == 0) {
      auto b = test::random_form(tgt, static_cast<int>(rng() % 2), rng, 1);
      REQUIRE(pullback(phi, wedge(a, b)) == wedge(pullback(phi, a), pullback(phi, b)));
    }
  }
}
