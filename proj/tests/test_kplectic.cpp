#include "dense_oracle.hpp"
#include "doctest.h"
#include "msk/error.hpp"
#include "msk/kplectic.hpp"
#include "test_support.hpp"

using namespace msk;
using msk::test::F;
using msk::test::S;
using msk::test::V;

namespace {

ChartPtr multiphase23() { return test::chart_of({"q1", "q2", "q3", "p12", "p13", "p23"}, "L2R3"); }

DiffForm theta23(const ChartPtr& c) { return F("p12*d(q1)^d(q2) + p13*d(q1)^d(q3) + p23*d(q2)^d(q3)", c); }
DiffForm omega23(const ChartPtr& c) { return exterior_derivative(theta23(c)); }

/// alpha = sum_j a_j(q) dq_j - sum_i c_i i_{d/dq_i} theta: hamiltonian for omega_can.
DiffForm random_hamiltonian(const ChartPtr& c, std::mt19937_64& rng) {
  auto qchart = test::chart_of({"q1", "q2", "q3"}, "Q");
  DiffForm a(c, 1);
  for (int j = 0; j < 3; ++j) {
    Polynomial coeff = random_polynomial(qchart, rng, 2, 2, 3);
    RationalFunction lifted = RationalFunction(coeff).compose(
        {RationalFunction::variable(c, 0), RationalFunction::variable(c, 1), RationalFunction::variable(c, 2)});
    a = a + coordinate_covector(c, static_cast<std::size_t>(j)).scaled(lifted);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    long ci = static_cast<long>(rng() % 5) - 2;
    if (ci) a = a - interior_product(coordinate_vector(c, i), theta23(c)).scaled(RationalFunction(ci));
  }
  return a;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ScenarioError;
}

}  // namespace

TEST_CASE("is_closed examples") {
  auto c = multiphase23();
  CHECK(is_closed(omega23(c)).pass);
  auto xy = test::chart_of({"x", "y"});
  CHECK(is_closed(F("d(x)^d(y)", xy)).pass);
  auto xyz = test::chart_of({"x", "y", "z"});
  Verdict v = is_closed(F("x*d(y)^d(z)", xyz));
  CHECK_FALSE(v.pass);
  CHECK(v.residual == "d(x)^d(y)^d(z)");
}

TEST_CASE("check_nondegenerate examples") {
  auto xy = test::chart_of({"x", "y"});
  Verdict plane = check_nondegenerate({F("d(x)^d(y)", xy), CheckMode::generic_only()});
  CHECK(plane.pass);
  CHECK(plane.detail == "rank 2 of 2");

  auto c = multiphase23();
  auto pts = draw_points(c, 1, 20, 10);
  Verdict can = check_nondegenerate({omega23(c), CheckMode::both(pts)});
  CHECK(can.pass);
  CHECK(can.validity == Validity::GenericAndSampled);

  auto xyz = test::chart_of({"x", "y", "z"});
  Verdict deg = check_nondegenerate({F("d(x)^d(y)", xyz), CheckMode::generic_only()});
  CHECK_FALSE(deg.pass);
  CHECK(deg.residual == "kernel contains e(z)");

  // rank drop only on x = 0: generic pass, sampled fail at the origin
  Verdict drop = check_nondegenerate({F("x*d(x)^d(y)", xy), CheckMode::both({SamplePoint{{"x", 0}, {"y", 1}}})});
  CHECK(drop.item("generic")->pass);
  CHECK(drop.item("generic")->locus == std::vector<std::string>{"x"});
  CHECK_FALSE(drop.item("sampled")->pass);
}

TEST_CASE("hamiltonian_vector_field examples") {
  auto xy = test::chart_of({"x", "y"});
  auto h = hamiltonian_vector_field(F("d(x)^d(y)", xy), F("x", xy));
  REQUIRE(h);
  CHECK(h.pair->X == V("-e(y)", xy));

  auto c = multiphase23();
  auto w = omega23(c);
  auto a = hamiltonian_vector_field(w, F("q1*d(q2)", c));
  REQUIRE(a);
  CHECK(a.pair->X == V("e(p12)", c));

  auto bad = hamiltonian_vector_field(w, F("p12*d(q3)", c));
  REQUIRE_FALSE(bad);
  // certificate annihilates the image of omega-sharp but not d(alpha)
  SymMatrix m = sharp_matrix(w);
  CHECK(is_zero_vector(m.transpose().apply(bad.certificate)));
  auto comps = form_components(exterior_derivative(F("p12*d(q3)", c)));
  RationalFunction pairing;
  for (std::size_t i = 0; i < comps.size(); ++i) pairing += bad.certificate[i] * comps[i];
  CHECK_FALSE(pairing.is_zero());

  auto closed = hamiltonian_vector_field(w, F("d(q1)", c));
  REQUIRE(closed);
  CHECK(closed.pair->X.is_zero());

  auto xyz = test::chart_of({"x", "y", "z"});
  CHECK(kind_of([&] { (void)hamiltonian_vector_field(F("d(x)^d(y)", xyz), F("x", xyz)); }) == ErrorKind::Degenerate);
  CHECK(kind_of([&] { (void)hamiltonian_vector_field(w, F("q1", c)); }) == ErrorKind::DegreeMismatch);
}

TEST_CASE("semibracket examples") {
  auto c = multiphase23();
  auto w = omega23(c);
  auto alpha = F("q3*d(q1)", c);
  auto beta = F("-(p12*d(q2) + p13*d(q3))", c);
  CHECK(hamiltonian_vector_field(w, alpha).pair->X == V("-e(p13)", c));
  CHECK(hamiltonian_vector_field(w, beta).pair->X == V("e(q1)", c));
  CHECK(semibracket(w, alpha, alpha).is_zero());
  CHECK(semibracket(w, alpha, beta) == F("d(q3)", c));
  CHECK(semibracket(w, F("q1*d(q2)", c), alpha).is_zero());
  CHECK(kind_of([&] { (void)semibracket(w, F("p12*d(q3)", c), alpha); }) == ErrorKind::NotHamiltonian);
}


TEST_CASE("jacobiator sign is pinned by the dense-tensor oracle") {
  auto c = multiphase23();
  auto w = omega23(c);
  const DiffForm a = F("q3*d(q1)", c);
  const DiffForm b = F("-(p12*d(q2) + p13*d(q3))", c);
  const DiffForm g = F("q1*d(q2)", c);
  // the explicit triple has two vertical fields, so both sides vanish
  CHECK(oracle::jacobiator_sign(w, a, b, g) == 0);
  CHECK(jacobiator_check(w, a, b, g).pass);

  std::mt19937_64 rng(2024);
  int pinned = 0;
  for (int trial = 0; trial < 8; ++trial) {
    auto x = random_hamiltonian(c, rng);
    auto y = random_hamiltonian(c, rng);
    auto z = random_hamiltonian(c, rng);
    int sign = oracle::jacobiator_sign(w, x, y, z);
    REQUIRE(sign != 2);
    if (sign == 0) continue;
    ++pinned;
    CHECK(sign == kJacobiatorSign);
  }
  CHECK(pinned >= 3);
}

TEST_CASE("jacobiator identity on random hamiltonian triples") {
  auto c = multiphase23();
  auto w = omega23(c);
  std::mt19937_64 rng(31);
  int nontrivial = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto a = random_hamiltonian(c, rng);
    auto b = random_hamiltonian(c, rng);
    auto g = random_hamiltonian(c, rng);
    auto sides = jacobiator_sides(w, a, b, g);
    if (!sides.defect.is_zero()) ++nontrivial;
    CHECK(jacobiator_check(w, a, b, g).pass);
  }
  CHECK(nontrivial > 0);
  CHECK(jacobiator_check(w, F("d(q1)", c), F("d(q2)", c), F("q1*d(q1)", c)).pass);
}

TEST_CASE("jacobiator on a symplectic plane: both sides vanish") {
  auto xy = test::chart_of({"x", "y"});
  auto w = F("d(x)^d(y)", xy);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = F("0", xy);
    auto a = DiffForm::scalar(xy, RationalFunction(random_polynomial(xy, rng, 3, 3)));
    auto b = DiffForm::scalar(xy, RationalFunction(random_polynomial(xy, rng, 3, 3)));
    auto g = DiffForm::scalar(xy, RationalFunction(random_polynomial(xy, rng, 3, 3)));
    auto sides = jacobiator_sides(w, a, b, g);
    CHECK(sides.cyclic_sum.is_zero());
    CHECK(sides.defect.is_zero());
    CHECK(jacobiator_check(w, a, b, g).pass);
    (void)f;
  }
}

TEST_CASE("symplectic Poisson bracket") {
  auto xy = test::chart_of({"x", "y"});
  auto w = F("d(x)^d(y)", xy);
  // X_x = -e(y), X_y = e(x): {x,y} = omega(X_y, X_x) = X_x(y) = -1
  CHECK(symplectic_poisson_bracket(w, S("x", xy), S("y", xy)) == S("-1", xy));
  CHECK(symplectic_poisson_bracket(w, S("x**2*y", xy), S("x**2*y", xy)).is_zero());
  auto xyz = test::chart_of({"x", "y", "z"});
  CHECK(kind_of([&] { (void)symplectic_poisson_bracket(F("d(x)^d(y)", xyz), S("x", xyz), S("y", xyz)); }) ==
        ErrorKind::Degenerate);

  std::mt19937_64 rng(12);
  auto c4 = test::chart_of({"q1", "p1", "q2", "p2"});
  auto w4 = F("d(q1)^d(p1) + d(q2)^d(p2)", c4);
  for (int trial = 0; trial < 20; ++trial) {
    RationalFunction f(random_polynomial(c4, rng, 3, 3));
    RationalFunction g(random_polynomial(c4, rng, 3, 3));
    RationalFunction h(random_polynomial(c4, rng, 3, 3));
    auto br = [&](const RationalFunction& u, const RationalFunction& v) { return symplectic_poisson_bracket(w4, u, v); };
    CHECK((br(f, g * h) - br(f, g) * h - br(f, h) * g).is_zero());
    CHECK((br(f, g) + br(g, f)).is_zero());
    // k = 1: the semibracket on 0-forms is the same bracket
    CHECK(semibracket(w4, DiffForm::scalar(c4, f), DiffForm::scalar(c4, g)).coeff({}) == br(f, g));
  }
}

TEST_CASE("property: semibracket antisymmetry and d{a,b} = i_[Xa,Xb] omega") {
  auto c = multiphase23();
  auto w = omega23(c);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_hamiltonian(c, rng);
    auto b = random_hamiltonian(c, rng);
    auto Xa = hamiltonian_vector_field(w, a).pair->X;
    auto Xb = hamiltonian_vector_field(w, b).pair->X;
    CHECK(interior_product(Xa, w) == exterior_derivative(a));
    CHECK((semibracket(w, a, b) + semibracket(w, b, a)).is_zero());
    CHECK(exterior_derivative(semibracket(w, a, b)) == interior_product(lie_bracket_vf(Xa, Xb), w));
  }
}
