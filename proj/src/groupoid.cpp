#include "msk/groupoid.hpp"

#include "msk/error.hpp"
#include "msk/kplectic.hpp"

namespace msk {

namespace {

std::vector<std::string> suffixed(const ChartPtr& M, const std::string& suffix) {
  std::vector<std::string> out;
  for (const auto& c : M->coords()) out.push_back(c + suffix);
  return out;
}

std::vector<RationalFunction> variables(const ChartPtr& chart, std::size_t from, std::size_t count) {
  std::vector<RationalFunction> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(RationalFunction::variable(chart, from + i));
  return out;
}

std::vector<RationalFunction> concat(std::vector<RationalFunction> a, const std::vector<RationalFunction>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<RationalFunction> negated(std::vector<RationalFunction> a) {
  for (auto& x : a) x = -x;
  return a;
}

RationalFunction zero_on(const ChartPtr& chart) { return RationalFunction(Polynomial::constant(chart, 0)); }
RationalFunction one_on(const ChartPtr& chart) { return RationalFunction(Polynomial::constant(chart, 1)); }

}  // namespace

GroupoidChart pair_groupoid(const ChartPtr& M) {
  const std::size_t n = M->dim();
  GroupoidChart g;
  g.name = "pair(" + M->name() + ")";
  g.M = M;
  auto gc = suffixed(M, "_1"), g2 = suffixed(M, "_2");
  gc.insert(gc.end(), g2.begin(), g2.end());
  g.G = make_chart(M->name() + "x" + M->name(), gc);
  auto pc = gc;
  auto p3 = suffixed(M, "_3");
  pc.insert(pc.end(), p3.begin(), p3.end());
  g.P = make_chart("composable(" + M->name() + ")", pc);

  const auto x = variables(g.G, 0, n), y = variables(g.G, n, n);
  const auto px = variables(g.P, 0, n), py = variables(g.P, n, n), pz = variables(g.P, 2 * n, n);
  const auto mx = variables(M, 0, n);
  g.s = SmoothMap(g.G, M, y);
  g.t = SmoothMap(g.G, M, x);
  g.eps = SmoothMap(M, g.G, concat(mx, mx));
  g.inv = SmoothMap(g.G, g.G, concat(y, x));
  g.pr1 = SmoothMap(g.P, g.G, concat(px, py));
  g.pr2 = SmoothMap(g.P, g.G, concat(py, pz));
  g.m = SmoothMap(g.P, g.G, concat(px, pz));
  g.inv_pair = SmoothMap(g.G, g.P, concat(concat(x, y), x));

  std::vector<VectorAlong> units;
  std::vector<MultiVectorField> right;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<RationalFunction> comps(2 * n, zero_on(M));
    comps[i] = one_on(M);
    units.push_back(VectorAlong{M, g.G, comps});
    right.push_back(coordinate_vector(g.G, i));
  }
  g.unit_complement = std::move(units);
  g.right_ext = std::move(right);
  return g;
}

GroupoidChart vb_groupoid(const ChartPtr& M, int k, std::vector<DiffForm> forms) {
  if (forms.empty())
    for (const auto& idx : combinations(static_cast<int>(M->dim()), k)) forms.push_back(DiffForm::basis(M, idx));
  const std::size_t n = M->dim(), r = forms.size();
  GroupoidChart g;
  g.name = "vb(" + M->name() + ")";
  g.M = M;
  std::vector<std::string> gc = M->coords(), pc = M->coords();
  for (std::size_t j = 0; j < r; ++j) gc.push_back("c" + std::to_string(j + 1));
  for (std::size_t j = 0; j < r; ++j) pc.push_back("a" + std::to_string(j + 1));
  for (std::size_t j = 0; j < r; ++j) pc.push_back("b" + std::to_string(j + 1));
  g.G = make_chart("L(" + M->name() + ")", gc);
  g.P = make_chart("L(" + M->name() + ")^(2)", pc);

  const auto q = variables(g.G, 0, n), c = variables(g.G, n, r);
  const auto pq = variables(g.P, 0, n), a = variables(g.P, n, r), b = variables(g.P, n + r, r);
  std::vector<RationalFunction> sum;
  for (std::size_t j = 0; j < r; ++j) sum.push_back(a[j] + b[j]);
  g.s = SmoothMap(g.G, M, q);
  g.t = SmoothMap(g.G, M, q);
  g.eps = SmoothMap(M, g.G, concat(variables(M, 0, n), std::vector<RationalFunction>(r, zero_on(M))));
  g.inv = SmoothMap(g.G, g.G, concat(q, negated(c)));
  g.pr1 = SmoothMap(g.P, g.G, concat(pq, a));
  g.pr2 = SmoothMap(g.P, g.G, concat(pq, b));
  g.m = SmoothMap(g.P, g.G, concat(pq, sum));
  g.inv_pair = SmoothMap(g.G, g.P, concat(concat(q, c), negated(c)));

  std::vector<VectorAlong> units;
  std::vector<MultiVectorField> right;
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<RationalFunction> comps(n + r, zero_on(M));
    comps[n + j] = one_on(M);
    units.push_back(VectorAlong{M, g.G, comps});
    right.push_back(coordinate_vector(g.G, n + j));
  }
  g.unit_complement = std::move(units);
  g.right_ext = std::move(right);
  return g;
}

DiffForm vb_tautological_form(const GroupoidChart& g, int k, const std::vector<DiffForm>& forms) {
  const std::size_t n = g.M->dim();
  DiffForm theta(g.G, k);
  for (std::size_t j = 0; j < forms.size(); ++j)
    theta = theta + lift_to_chart(forms[j], g.G).scaled(RationalFunction::variable(g.G, n + j));
  return theta;
}

GroupoidChart trivial_groupoid(const ChartPtr& M) {
  GroupoidChart g;
  g.name = "trivial(" + M->name() + ")";
  g.G = g.M = g.P = M;
  g.s = g.t = g.eps = g.inv = g.pr1 = g.pr2 = g.m = SmoothMap::identity(M);
  g.inv_pair = SmoothMap::identity(M);
  g.unit_complement = std::vector<VectorAlong>{};
  g.right_ext = std::vector<MultiVectorField>{};
  return g;
}

namespace {

Verdict map_identity(const std::string& name, const SmoothMap& a, const SmoothMap& b, const std::string& label) {
  Verdict v = Verdict::identity(name, true);
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    RationalFunction d = a.components[i] - b.components[i];
    if (!d.is_zero()) {
      v.pass = false;
      v.residual = label + " differs in " + a.target->coords()[i] + " by " + d.to_string();
      break;
    }
  }
  return v;
}

}  // namespace

Verdict check_groupoid_axioms(const GroupoidChart& g) {
  std::vector<Verdict> items;
  items.push_back(map_identity("s_eps", compose(g.s, g.eps), SmoothMap::identity(g.M), "s o eps - id"));
  items.push_back(map_identity("t_eps", compose(g.t, g.eps), SmoothMap::identity(g.M), "t o eps - id"));
  items.push_back(map_identity("composable", compose(g.s, g.pr1), compose(g.t, g.pr2), "s o pr1 - t o pr2"));
  items.push_back(map_identity("s_m", compose(g.s, g.m), compose(g.s, g.pr2), "s o m - s o pr2"));
  items.push_back(map_identity("t_m", compose(g.t, g.m), compose(g.t, g.pr1), "t o m - t o pr1"));
  items.push_back(map_identity("s_inv", compose(g.s, g.inv), g.t, "s o inv - t"));
  items.push_back(map_identity("t_inv", compose(g.t, g.inv), g.s, "t o inv - s"));
  if (g.inv_pair) {
    const SmoothMap& ip = *g.inv_pair;
    Verdict a = map_identity("inversion", compose(g.pr1, ip), SmoothMap::identity(g.G), "pr1 o (id, inv) - id");
    Verdict b = map_identity("inversion", compose(g.pr2, ip), g.inv, "pr2 o (id, inv) - inv");
    Verdict c = map_identity("inversion", compose(g.m, ip), compose(g.eps, g.t), "m(g, inv g) - eps(t g)");
    items.push_back(!a.pass ? a : !b.pass ? b : c);
  }
  return Verdict::itemized("check_groupoid_axioms", std::move(items));
}

Verdict check_multiplicative(const GroupoidChart& g, const DiffForm& omega) {
  DiffForm r = pullback(g.m, omega) - pullback(g.pr1, omega) - pullback(g.pr2, omega);
  return Verdict::identity("check_multiplicative", r.is_zero(), format_form(r));
}

Verdict check_unit_inversion(const GroupoidChart& g, const DiffForm& omega) {
  DiffForm u = pullback(g.eps, omega);
  DiffForm i = pullback(g.inv, omega) + omega;
  Verdict unit = Verdict::identity("unit", u.is_zero(), "eps^*omega = " + format_form(u));
  Verdict inv = Verdict::identity("inversion", i.is_zero(), "inv^*omega + omega = " + format_form(i));
  return Verdict::itemized("check_unit_inversion", {unit, inv});
}

namespace {

const std::vector<VectorAlong>& require_units(const GroupoidChart& g) {
  if (!g.unit_complement) throw Error(ErrorKind::MissingUnitComplement, g.name);
  for (const auto& u : *g.unit_complement)
    if (u.components.size() != g.G->dim())
      throw Error(ErrorKind::BadParameters, "unit complement vectors need one component per groupoid coordinate");
  return *g.unit_complement;
}

/// (d phi along eps)(u) for phi: G -> M.
SymVector differential_along_units(const GroupoidChart& g, const SmoothMap& phi, const VectorAlong& u) {
  const auto J = phi.jacobian();
  SymVector out;
  for (const auto& row : J) {
    RationalFunction s = zero_on(g.M);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!u.components[j].is_zero() && !row[j].is_zero())
        s += row[j].compose(g.eps.components) * u.components[j].with_chart(g.M);
    out.push_back(s);
  }
  return out;
}

SymVector restrict_to_units(const GroupoidChart& g, const MultiVectorField& X) {
  SymVector out;
  for (const auto& c : vector_components(X)) out.push_back(c.compose(g.eps.components).with_chart(g.M));
  return out;
}

std::vector<DiffForm> induced_forms(const GroupoidChart& g, const DiffForm& omega) {
  require_same_chart(g.G, omega.chart(), "induced IM form");
  if (omega.degree() < 1) throw Error(ErrorKind::DegreeUnderflow, "induced IM form of a function");
  std::vector<DiffForm> out;
  for (const auto& u : require_units(g)) {
    std::vector<RationalFunction> ext;
    for (const auto& c : u.components) ext.push_back(c.with_chart(g.M).compose(g.t.components).with_chart(g.G));
    DiffForm contracted = interior_product(vector_field(g.G, ext), omega);
    out.push_back(DiffForm(g.M, omega.degree() - 1, pullback(g.eps, contracted).coeffs()));
  }
  return out;
}

}  // namespace

LieAlgebroid extract_algebroid(const GroupoidChart& g) {
  const auto& units = require_units(g);
  const std::size_t n = g.M->dim(), r = units.size();
  SymMatrix anchor(n, r);
  SymMatrix frame(g.G->dim(), r);
  for (std::size_t i = 0; i < r; ++i) {
    SymVector ds = differential_along_units(g, g.s, units[i]);
    if (!is_zero_vector(ds))
      throw Error(ErrorKind::ComplementNotInKernel, "ds(u" + std::to_string(i + 1) + ") = " + format_vector(ds));
    SymVector dt = differential_along_units(g, g.t, units[i]);
    for (std::size_t a = 0; a < n; ++a) anchor(a, i) = dt[a];
    for (std::size_t a = 0; a < g.G->dim(); ++a) frame(a, i) = units[i].components[a].with_chart(g.M);
  }

  LieAlgebroid::Structure st(r, std::vector<std::vector<RationalFunction>>(r, std::vector<RationalFunction>(r)));
  if (g.right_ext) {
    const auto& right = *g.right_ext;
    if (right.size() != r) throw Error(ErrorKind::BadParameters, "one right extension per unit complement vector");
    for (std::size_t i = 0; i < r; ++i) {
      if (!is_zero_vector([&] {
            SymVector d = restrict_to_units(g, right[i]);
            for (std::size_t a = 0; a < d.size(); ++a) d[a] = d[a] - frame(a, i);
            return d;
          }()))
        throw Error(ErrorKind::BadParameters, "right extension " + std::to_string(i + 1) + " does not restrict to u" +
                                                  std::to_string(i + 1) + " along the units");
    }
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        SolveResult s = solve_linear(frame, restrict_to_units(g, lie_bracket_vf(right[i], right[j])));
        if (!s.consistent)
          throw Error(ErrorKind::BadParameters, "bracket of right extensions " + std::to_string(i + 1) + ", " +
                                                    std::to_string(j + 1) + " leaves the frame along the units");
        for (std::size_t l = 0; l < r; ++l) {
          st[l][i][j] = s.solution[l];
          st[l][j][i] = -s.solution[l];
        }
      }
    }
    if (g.structure) {
      LieAlgebroid declared(g.M, anchor, *g.structure);
      for (std::size_t l = 0; l < r; ++l)
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j)
            if (declared.c(l, i, j) != st[l][i][j])
              throw Error(ErrorKind::BadParameters, "declared structure functions disagree with the right extensions");
    }
  } else if (g.structure) {
    st = *g.structure;
  } else if (r > 0) {
    throw Error(ErrorKind::MissingRightExtension, g.name + ": no right extensions or structure functions");
  }
  return LieAlgebroid(g.M, anchor, st);
}

IMFormMap induced_im_form(const GroupoidChart& g, const DiffForm& omega) {
  std::vector<DiffForm> mu = induced_forms(g, omega);
  return IMFormMap{extract_algebroid(g), omega.degree() - 1, std::move(mu)};
}

MultiVectorField left_extension(const GroupoidChart& g, const MultiVectorField& right) {
  VectorAlong pushed = differential_apply(g.inv, right);
  std::vector<RationalFunction> comps;
  for (const auto& c : pushed.components) comps.push_back(c.compose(g.inv.components).with_chart(g.G));
  return vector_field(g.G, comps);
}

Verdict check_right_translation(const GroupoidChart& g, const DiffForm& omega) {
  if (!g.right_ext) throw Error(ErrorKind::MissingRightExtension, g.name);
  const auto& units = require_units(g);
  const auto& right = *g.right_ext;
  if (right.size() != units.size()) throw Error(ErrorKind::BadParameters, "one right extension per unit complement vector");
  const std::vector<DiffForm> mu = induced_forms(g, omega);
  Verdict on_units = Verdict::identity("units", true);
  Verdict rv = Verdict::identity("right", true);
  Verdict lv = Verdict::identity("left", true);
  for (std::size_t i = 0; i < units.size(); ++i) {
    const std::string u = "u" + std::to_string(i + 1);
    SymVector d = restrict_to_units(g, right[i]);
    for (std::size_t a = 0; a < d.size(); ++a) d[a] = d[a] - units[i].components[a].with_chart(g.M);
    if (!is_zero_vector(d) && on_units.pass) {
      on_units.pass = false;
      on_units.residual = u + "^r o eps - " + u + " = " + format_vector(d);
    }
    DiffForm r = interior_product(right[i], omega) - pullback(g.t, mu[i]);
    if (!r.is_zero() && rv.pass) {
      rv.pass = false;
      rv.residual = "i_{" + u + "^r} omega - t^*mu(" + u + ") = " + format_form(r);
    }
    DiffForm l = interior_product(left_extension(g, right[i]), omega) + pullback(g.s, mu[i]);
    if (!l.is_zero() && lv.pass) {
      lv.pass = false;
      lv.residual = "i_{" + u + "^l} omega + s^*mu(" + u + ") = " + format_form(l);
    }
  }
  return Verdict::itemized("check_right_translation", {on_units, rv, lv});
}

}  // namespace msk
