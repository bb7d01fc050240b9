#include "doctest.h"
#include "msk/error.hpp"
#include "msk/linalg.hpp"
#include "test_support.hpp"

using namespace msk;
using msk::test::S;

namespace {

SymMatrix mat(const ChartPtr& c, std::vector<std::vector<const char*>> rows) {
  SymMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < rows[r].size(); ++k) m(r, k) = S(rows[r][k], c);
  return m;
}

SymVector vec(const ChartPtr& c, std::vector<const char*> entries) {
  SymVector v;
  for (auto e : entries) v.push_back(S(e, c));
  return v;
}

bool vec_eq(const SymVector& a, const SymVector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("rref examples") {
  auto c = test::chart_of({"x", "y"});
  auto id = rref(SymMatrix::identity(3));
  CHECK(id.rank == 3);
  CHECK(id.kernel_basis.empty());

  auto e = rref(mat(c, {{"x", "x"}, {"1", "1"}}));
  CHECK(e.rank == 1);
  REQUIRE(e.kernel_basis.size() == 1);
  CHECK(vec_eq(e.kernel_basis[0], vec(c, {"-1", "1"})));  // proportional to (1, -1)
  CHECK(format_loci(e.pivot_denominators) == std::vector<std::string>{"x"});

  auto z = rref(SymMatrix(2, 3));
  CHECK(z.rank == 0);
  CHECK(z.kernel_basis.size() == 3);
}

TEST_CASE("solve_linear examples") {
  auto c = test::chart_of({"x", "y"});
  auto s = solve_linear(SymMatrix::identity(2), vec(c, {"x", "y"}));
  REQUIRE(s.consistent);
  CHECK(vec_eq(s.solution, vec(c, {"x", "y"})));

  auto bad = solve_linear(mat(c, {{"1"}, {"1"}}), vec(c, {"1", "0"}));
  REQUIRE_FALSE(bad.consistent);
  // certificate y: yM = 0, yb != 0; proportional to (1, -1)
  CHECK(bad.certificate[0] == -bad.certificate[1]);
  CHECK_FALSE(bad.certificate[0].is_zero());

  auto div = solve_linear(mat(c, {{"x"}}), vec(c, {"x**2"}));
  REQUIRE(div.consistent);
  CHECK(div.solution[0] == S("x", c));
}

TEST_CASE("in_span examples") {
  auto c = test::chart_of({"x", "y"});
  auto a = in_span({vec(c, {"1", "0"})}, vec(c, {"x", "0"}), 2);
  REQUIRE(a.member);
  CHECK(a.coefficients[0] == S("x", c));
  auto b = in_span({vec(c, {"1", "0"})}, vec(c, {"0", "1"}), 2);
  REQUIRE_FALSE(b.member);
  CHECK(vec_eq(b.residual, vec(c, {"0", "1"})));
  auto d = in_span({vec(c, {"1", "x"})}, vec(c, {"y", "x*y"}), 2);
  REQUIRE(d.member);
  CHECK(d.coefficients[0] == S("y", c));
}

TEST_CASE("rank_at_points examples") {
  auto c = test::chart_of({"x"});
  auto r = rank_at_points(mat(c, {{"x"}}), {SamplePoint{{"x", 0}}, SamplePoint{{"x", 1}}});
  CHECK(r == std::vector<std::size_t>{0, 1});
  auto full = rank_at_points(SymMatrix::identity(4), {SamplePoint{{"x", 5}}});
  CHECK(full == std::vector<std::size_t>{4});

  auto c2 = test::chart_of({"x", "y"});
  SymMatrix sharp(2, 2);  // X -> i_X(dx^dy): columns i_{dx} = dy, i_{dy} = -dx
  sharp(1, 0) = 1;
  sharp(0, 1) = -1;
  auto pts = draw_points(c2, 3, 5, 10);
  for (auto rk : rank_at_points(sharp, pts)) CHECK(rk == 2);

  CHECK_THROWS_AS(rank_at_points(mat(c, {{"1/x"}}), {SamplePoint{{"x", 0}}}), Error);
}

TEST_CASE("property: rref kernel, solve substitution, generic vs sampled rank") {
  std::mt19937_64 rng(99);
  auto c = test::chart_of({"x", "y", "z"});
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    SymMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t k = 0; k < cols; ++k)
        if (rng() % 3) m(r, k) = RationalFunction(random_polynomial(c, rng, 2, 2, 3));
    // force occasional rank deficiency
    if (rows > 1 && trial % 3 == 0)
      for (std::size_t k = 0; k < cols; ++k) m(rows - 1, k) = m(0, k) * S("x+1", c);

    auto e = rref(m);
    CHECK(e.kernel_basis.size() == cols - e.rank);
    for (const auto& v : e.kernel_basis) CHECK(is_zero_vector(m.apply(v)));

    SymVector b;
    for (std::size_t r = 0; r < rows; ++r) b.emplace_back(random_polynomial(c, rng, 1, 2, 3));
    auto s = solve_linear(m, b);
    if (s.consistent) {
      auto mb = m.apply(s.solution);
      for (std::size_t r = 0; r < rows; ++r) CHECK((mb[r] - b[r]).is_zero());
    } else {
      // certificate: yM = 0 and yb != 0
      RationalFunction yb;
      for (std::size_t r = 0; r < rows; ++r) yb += s.certificate[r] * b[r];
      CHECK_FALSE(yb.is_zero());
      auto yM = m.transpose().apply(s.certificate);
      CHECK(is_zero_vector(yM));
    }

    auto pts = draw_points(c, derive_seed(5, static_cast<unsigned>(trial)), 1, 10, e.pivot_denominators);
    CHECK(rank_at_points(m, pts, Exec::Serial)[0] == e.rank);
  }
}

TEST_CASE("parallel rank kernel matches serial reference") {
  std::mt19937_64 rng(4);
  auto c = test::chart_of({"x", "y"});
  SymMatrix m(3, 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < 3; ++k) m(r, k) = RationalFunction(random_polynomial(c, rng, 2, 3, 3));
  auto pts = draw_points(c, 8, 64, 4);
  pts.push_back(SamplePoint{{"x", 0}, {"y", 0}});
  CHECK(rank_at_points(m, pts, Exec::Serial) == rank_at_points(m, pts, Exec::Parallel));
}
