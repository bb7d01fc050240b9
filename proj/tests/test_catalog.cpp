#include "doctest.h"
#include "msk/catalog.hpp"
#include "msk/error.hpp"
#include "test_support.hpp"

using namespace msk;
using msk::test::F;
using msk::test::V;

namespace {

bool nondegenerate(const DiffForm& w) { return check_nondegenerate(PlecticCandidate{w, CheckMode::generic_only()}).pass; }

std::vector<SamplePoint> pts(const ChartPtr& c, std::size_t n, std::uint64_t seed = 5) { return draw_points(c, seed, n, 10); }

CEComplex::Constants constants(std::size_t n) {
  return CEComplex::Constants(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
}

std::vector<std::vector<Rational>> id_pairing(std::size_t n) {
  std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1;
  return p;
}

}  // namespace

TEST_CASE("canonical multiphase spaces") {
  auto c11 = canonical_multiphase(1, 1);
  CHECK(c11.chart->coords() == std::vector<std::string>{"q", "p"});
  CHECK(c11.theta == F("p*d(q)", c11.chart));
  CHECK(c11.omega == F("d(p)^d(q)", c11.chart));

  auto c32 = canonical_multiphase(3, 2);
  CHECK(c32.chart->dim() == 6);
  CHECK(c32.chart->coords()[3] == "p12");
  CHECK(c32.omega == F("d(p12)^d(q1)^d(q2) + d(p13)^d(q1)^d(q3) + d(p23)^d(q2)^d(q3)", c32.chart));
  CHECK(is_closed(c32.omega).pass);
  CHECK(nondegenerate(c32.omega));
  CHECK(c32.omega == exterior_derivative(c32.theta));

  auto c22 = canonical_multiphase(2, 2);
  CHECK(c22.chart->dim() == 3);
  CHECK(c22.omega == F("d(p12)^d(q1)^d(q2)", c22.chart));
  CHECK(nondegenerate(c22.omega));

  for (auto [n, k] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 3}, std::pair{4, 2}}) {
    auto cm = canonical_multiphase(n, k);
    CHECK(is_closed(cm.omega).pass);
    CHECK(nondegenerate(cm.omega));
    CHECK(check_tautological(cm, pts(cm.chart, 10)).pass);
  }
  CHECK_THROWS_AS(canonical_multiphase(1, 3), Error);
  try {
    canonical_multiphase(2, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadDegree);
  }
}

TEST_CASE("tautological identity detects a wrong theta") {
  auto cm = canonical_multiphase(3, 2);
  CHECK(check_tautological(cm, pts(cm.chart, 10)).pass);
  cm.theta = cm.theta + F("q1*d(q2)^d(q3)", cm.chart);
  auto v = check_tautological(cm, pts(cm.chart, 10));
  CHECK_FALSE(v.pass);
  CHECK(v.residual.find("theta gives") != std::string::npos);
}

TEST_CASE("volume forms and the flat hyperkahler 4-form") {
  for (int n : {2, 3, 4}) {
    auto w = volume_plectic(n);
    CHECK(is_closed(w).pass);
    CHECK(nondegenerate(w));
  }
  auto ws = volume_plectic(3, true);
  CHECK(ws == F("(1 + x1**2)*d(x1)^d(x2)^d(x3)", ws.chart()));
  CHECK(nondegenerate(ws));
  CHECK_THROWS_AS(volume_plectic(1), Error);

  auto h = flat_hyperkahler();
  for (const auto* w : {&h.omega1, &h.omega2, &h.omega3}) {
    CHECK(nondegenerate(*w));
    CHECK(is_closed(*w).pass);
  }
  // hand expansion: each omega_i ^ omega_i is 2 dx0^dx1^dx2^dx3
  CHECK(h.sum == F("6*d(x0)^d(x1)^d(x2)^d(x3)", h.chart));
  CHECK(wedge(h.omega1, h.omega2).is_zero());
  CHECK(wedge(h.omega1, h.omega3).is_zero());
  CHECK(is_closed(h.sum).pass);
  CHECK(nondegenerate(h.sum));
}

TEST_CASE("Chevalley-Eilenberg differential") {
  auto g = so3_algebra();
  auto e1 = coordinate_covector(g.chart, 0);
  CHECK(ce_differential(g, e1) == F("-d(e2)^d(e3)", g.chart));
  CHECK(ce_differential(g, coordinate_covector(g.chart, 1)) == F("-d(e3)^d(e1)", g.chart));
  CHECK(ce_d_squared(g).pass);
  CHECK(ce_jacobi(g).pass);
  CHECK(ce_differential(g, F("d(e1)^d(e2)^d(e3)", g.chart)).is_zero());

  CEComplex abelian(constants(3), id_pairing(3));
  CHECK(ce_differential(abelian, F("d(e1)", abelian.chart)).is_zero());
  CHECK(ce_differential(abelian, F("d(e1)^d(e2)", abelian.chart)).is_zero());

  CHECK_THROWS_AS(ce_differential(g, F("e1*d(e2)", g.chart)), Error);

  auto bad = constants(2);
  bad[0][0][1] = 1;
  CHECK_THROWS_AS(CEComplex(bad, id_pairing(2)), Error);
}

TEST_CASE("d squared vanishes exactly when Jacobi holds") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-1, 1);
  int lie = 0, non_lie = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = t % 2 == 0 ? 3 : 4;
    auto c = constants(n);
    // sparse random constants, half of them drawn from scaled so(3)-like patterns
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng() % 4 == 0) {
            c[l][i][j] = coef(rng);
            c[l][j][i] = -c[l][i][j];
          }
    CEComplex g(c, id_pairing(n));
    bool j = ce_jacobi(g).pass, d2 = ce_d_squared(g).pass;
    CHECK(j == d2);
    (j ? lie : non_lie)++;
  }
  CHECK(lie > 0);
  CHECK(non_lie > 0);
}

TEST_CASE("Cartan 3-form") {
  auto g = so3_algebra();
  auto cf = ce_cartan(g);
  CHECK(cf.H == F("d(e1)^d(e2)^d(e3)", g.chart));
  CHECK(cf.dH.is_zero());
  CHECK(cf.nondegenerate.pass);

  // Killing form of so(3) is -2 times the identity; the Cartan form scales with it
  auto K = killing_form(g.c);
  CHECK(K[0][0] == -2);
  CHECK(K[0][1] == 0);
  auto gk = CEComplex(g.c, K, "so3k");
  CHECK(ce_invariance(gk).pass);
  CHECK(ce_cartan(gk).H == F("-2*d(e1)^d(e2)^d(e3)", gk.chart));

  CEComplex abelian(constants(3), id_pairing(3));
  auto ca = ce_cartan(abelian);
  CHECK(ca.H.is_zero());
  CHECK_FALSE(ca.nondegenerate.pass);

  auto corrupt = g.c;
  corrupt[0][0][1] += 1;
  corrupt[0][1][0] -= 1;
  CEComplex gc(corrupt, id_pairing(3));
  CHECK_FALSE(ce_jacobi(gc).pass);
  auto d2 = ce_d_squared(gc);
  CHECK_FALSE(d2.pass);
  CHECK(d2.residual.rfind("d(d(e", 0) == 0);
  try {
    ce_cartan(gc);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::JacobiFails);
  }
}

TEST_CASE("two-dimensional solvable algebra") {
  auto g = solvable2_algebra();
  // ad_e1 = [[0,1],[0,0]], ad_e2 = [[-1,0],[0,0]] by hand
  CHECK(g.pairing[0][0] == 0);
  CHECK(g.pairing[0][1] == 0);
  CHECK(g.pairing[1][1] == 1);
  CHECK(ce_jacobi(g).pass);
  CHECK(ce_invariance(g).pass);
  auto cf = ce_cartan(g);
  CHECK(cf.H.is_zero());

  CEComplex gi(g.c, id_pairing(2));
  auto inv = ce_invariance(gi);
  CHECK_FALSE(inv.pass);
  CHECK(inv.residual == "<[e1,e1],e2> + <e1,[e1,e2]> = 1");
  try {
    ce_cartan(gi);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PairingNotInvariant);
  }
}

TEST_CASE("graph of a form") {
  auto cm = canonical_multiphase(3, 2);
  auto L = graph_frame(cm.omega);
  CHECK(is_isotropic(L).pass);
  CHECK(is_involutive(L).pass);
  CHECK(check_nondeg_L(L, CheckMode::both(pts(L.chart, 5))).pass);
  auto prof = orthogonal_profile(L, pts(L.chart, 3));
  CHECK(prof.generic_lagrangian);

  auto c = test::chart_of({"x", "y", "z"});
  auto open = graph_frame(F("x*d(y)^d(z)", c));
  CHECK(is_isotropic(open).pass);
  CHECK_FALSE(is_involutive(open).pass);

  auto zero = graph_frame(DiffForm::zero(c, 2));
  CHECK_FALSE(check_nondeg_L(zero, CheckMode::generic_only()).pass);
}

TEST_CASE("graph of a top multivector") {
  auto c = test::chart_of({"x", "y", "z"});
  auto L = graph_of_top_multivector(V("e(x)^e(y)^e(z)", c));
  CHECK(L.k == 2);
  CHECK(is_isotropic(L).pass);
  CHECK(is_involutive(L).pass);
  CHECK(check_nondeg_L(L, CheckMode::generic_only()).pass);
  CHECK(check_dl(to_dl(L), CheckMode::generic_only()).pass);
  CHECK(L.sections[0].X == V("e(z)", c));   // i_{dx^dy}
  CHECK(L.sections[1].X == V("-e(y)", c));  // i_{dx^dz}

  auto L0 = graph_of_top_multivector(MultiVectorField::zero(c, 3));
  CHECK(same_subbundle(L0, full_vertical_frame(c, 2)).pass);
  CHECK(is_involutive(L0).pass);

  auto c2 = test::chart_of({"x", "y"});
  auto Lp = graph_of_top_multivector(V("x*e(x)^e(y)", c2));
  CHECK(same_subbundle(Lp, bivector_graph_frame(V("x*e(x)^e(y)", c2))).pass);
  SymMatrix tangents(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    auto comps = vector_components(Lp.sections[i].X);
    for (std::size_t j = 0; j < 2; ++j) tangents(i, j) = comps[j];
  }
  std::vector<SamplePoint> sample = {{{"x", 0}, {"y", 1}}, {{"x", 2}, {"y", 3}}, {{"x", Rational(-1, 3)}, {"y", 0}}};
  CHECK(rank_at_points(tangents, sample) == std::vector<std::size_t>{0, 2, 2});

  CHECK_THROWS_AS(graph_of_top_multivector(V("e(x)^e(y)", c)), Error);
}

TEST_CASE("vertical subbundles and the line bundle") {
  auto c = test::chart_of({"x", "y", "z"});
  auto full = full_vertical_frame(c, 2);
  CHECK(is_isotropic(full).pass);
  CHECK(is_involutive(full).pass);
  CHECK(check_nondeg_L(full, CheckMode::generic_only()).pass);

  auto thin = vertical_frame(c, 2, {F("d(x)^d(y)", c)});
  auto nd = check_nondeg_L(thin, CheckMode::generic_only());
  CHECK_FALSE(nd.pass);
  CHECK(nd.residual.find("e(z)") != std::string::npos);
  auto prof = orthogonal_profile(thin, {});
  CHECK(prof.generic_dim_perp > prof.generic_dim_L);

  auto lb = line_bundle();
  CHECK(lb.frame.rank() == 1);
  CHECK(is_isotropic(lb.frame).pass);
  CHECK(is_involutive(lb.frame).pass);
  CHECK(check_nondeg_L(lb.frame, CheckMode::both(pts(lb.chart, 5))).pass);
}

TEST_CASE("scaled family and the rigidity of the graph") {
  auto cm = canonical_multiphase(3, 2);
  auto N = test::chart_of({"t1", "t2"}, "N");
  for (long s : {1L, 5L}) {
    auto L = scaled_family(N, RationalFunction(s), cm.omega);
    CHECK(is_isotropic(L).pass);
    CHECK(is_involutive(L).pass);
  }
  auto t1 = RationalFunction::variable(N, 0);
  auto L = scaled_family(N, t1, cm.omega);
  CHECK(L.chart->dim() == 8);
  CHECK(L.sections.size() == 7);
  CHECK(is_isotropic(L).pass);
  auto inv = is_involutive(L);
  CHECK_FALSE(inv.pass);
  CHECK_FALSE(inv.residual.empty());

  // [[s_i, s_j]] has form part dt1 ^ i_{d_j} i_{d_i} omega, which L does not contain
  auto dt1 = coordinate_covector(L.chart, 6);
  int witnessed = 0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      auto b = dorfman_bracket(L.sections[i], L.sections[j]);
      auto ii = interior_product(coordinate_vector(cm.chart, j), interior_product(coordinate_vector(cm.chart, i), cm.omega));
      CHECK(b.X.is_zero());
      CHECK(b.alpha == wedge(dt1, lift_to_chart(ii, L.chart)));
      if (!ii.is_zero()) ++witnessed;
    }
  CHECK(witnessed > 0);
}

TEST_CASE("wedge product structure") {
  auto w1 = volume_plectic(2, false, "x"), w2 = volume_plectic(2, false, "y");
  auto L = wedge_product_structure(w1, w2);
  CHECK(L.k == 3);
  CHECK(L.chart->coords() == std::vector<std::string>{"x1", "x2", "y1", "y2"});
  CHECK(is_isotropic(L).pass);
  CHECK(is_involutive(L).pass);
  CHECK(check_nondeg_L(L, CheckMode::both(pts(L.chart, 5))).pass);
  auto D = distribution_frame(L);
  CHECK(D.generic_rank == 2);
  for (const auto& pt : pts(L.chart, 10)) CHECK(leaf_form_at(L, pt).is_zero());
}

TEST_CASE("groupoid constructors") {
  auto cm = canonical_multiphase(3, 2);
  auto pg = pair_groupoid_form(cm.omega);
  CHECK(check_groupoid_axioms(pg.groupoid).pass);
  CHECK(check_multiplicative(pg.groupoid, pg.omega).pass);
  CHECK(check_unit_inversion(pg.groupoid, pg.omega).pass);
  CHECK(check_right_translation(pg.groupoid, pg.omega).pass);
  auto mu = induced_im_form(pg.groupoid, pg.omega);
  for (std::size_t i = 0; i < 6; ++i) CHECK(mu.mu[i] == interior_product(coordinate_vector(cm.chart, i), cm.omega));

  auto point = make_chart("pt", {});
  auto pp = pair_groupoid_form(DiffForm::zero(point, 2));
  CHECK(pp.omega.is_zero());
  CHECK(pp.groupoid.G->dim() == 0);
  CHECK(check_groupoid_axioms(pp.groupoid).pass);

  auto c = test::chart_of({"x", "y", "z"});
  auto vb = vb_groupoid_form(full_vertical_frame(c, 2));
  CHECK(check_multiplicative(vb.groupoid, vb.omega).pass);
  CHECK(nondegenerate(vb.omega));
  auto vthin = vb_groupoid_form(vertical_frame(c, 2, {F("d(x)^d(y)", c)}));
  CHECK(check_multiplicative(vthin.groupoid, vthin.omega).pass);
  CHECK_FALSE(nondegenerate(vthin.omega));
  try {
    vb_groupoid_form(vertical_frame(c, 2, {F("x*d(x)^d(y)", c)}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConstantFrame);
  }
}

TEST_CASE("renaming charts") {
  auto w = volume_plectic(2, true, "x");
  auto target = make_chart("other", {"u", "v"});
  auto r = rename_chart(w, target);
  CHECK(r == F("(1 + u**2)*d(u)^d(v)", target));
}

TEST_CASE("named instantiation") {
  CHECK(catalog_names().size() == 13);
  for (const auto& name : catalog_names()) {
    auto inst = instantiate(name, {});
    CHECK(inst.catalog == name);
    CHECK_FALSE(inst.objects.empty());
    CHECK_FALSE(inst.checks.empty());
  }
  try {
    instantiate("canonical-multiphase", {{"n", "1"}, {"k", "3"}});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadParameters);
  }
  try {
    instantiate("no-such-thing", {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownCatalogName);
  }
  CHECK_THROWS_AS(instantiate("volume", {{"dim", "3"}}), Error);

  auto pg = instantiate("pair-groupoid", {{"base", "canonical-multiphase(3,2)"}});
  CHECK(std::holds_alternative<GroupoidChart>(pg.objects[1].value));
  CHECK(std::get<GroupoidChart>(pg.objects[1].value).G->dim() == 12);

  auto dp = instantiate_reference("direct-product(graph-form(volume(2)), graph-form(volume(2)))");
  CHECK(dp.primary_frame->chart->coords() == std::vector<std::string>{"x1", "x2", "x1_b", "x2_b"});
  CHECK(is_involutive(*dp.primary_frame).pass);

  auto vf = instantiate("vertical", {{"span", "d(x)^d(y)"}});
  CHECK_FALSE(check_nondeg_L(*vf.primary_frame, CheckMode::generic_only()).pass);
}
