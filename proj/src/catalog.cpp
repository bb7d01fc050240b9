#include "msk/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "msk/error.hpp"
#include "msk/sampling.hpp"
#include "msk/scalar_parse.hpp"

namespace msk {

namespace {

std::string index_label(const IndexTuple& idx, int n) {
  std::string out;
  for (int i : idx) {
    if (n >= 10) out += "_";
    out += std::to_string(i + 1);
  }
  return out;
}

std::vector<RationalFunction> variables_of(const ChartPtr& chart) {
  std::vector<RationalFunction> out;
  for (std::size_t i = 0; i < chart->dim(); ++i) out.push_back(RationalFunction::variable(chart, i));
  return out;
}

Rational det(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational out = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      out = -out;
    }
    out *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return out;
}

std::string format_ce_vector(const std::vector<Rational>& v) {
  SymVector s;
  for (const auto& q : v) s.emplace_back(q);
  std::string out = format_section(s);
  return out.empty() ? "0" : out;
}

template <class T>
T rename_field(const T& a, const ChartPtr& chart) {
  if (a.chart()->dim() != chart->dim()) throw Error(ErrorKind::ChartMismatch, "renaming onto a chart of another dimension");
  const auto sub = variables_of(chart);
  typename T::Coeffs out;
  for (const auto& [idx, c] : a.coeffs()) out.emplace(idx, c.compose(sub).with_chart(chart));
  return T(chart, a.degree(), std::move(out));
}

}  // namespace

CanonicalMultiphase canonical_multiphase(int n, int k) {
  if (k < 1 || k > n) throw Error(ErrorKind::BadDegree, "canonical multiphase space needs 1 <= k <= n");
  std::vector<std::string> coords;
  const auto tuples = combinations(n, k);
  if (n == 1) {
    coords = {"q", "p"};
  } else {
    for (int i = 0; i < n; ++i) coords.push_back("q" + std::to_string(i + 1));
    for (const auto& I : tuples) coords.push_back("p" + index_label(I, n));
  }
  CanonicalMultiphase cm;
  cm.n = n;
  cm.k = k;
  cm.chart = make_chart("mp" + std::to_string(n) + std::to_string(k), coords);
  cm.theta = DiffForm::zero(cm.chart, k);
  for (std::size_t j = 0; j < tuples.size(); ++j)
    cm.theta = cm.theta + DiffForm::basis(cm.chart, tuples[j], RationalFunction::variable(cm.chart, n + j));
  cm.omega = exterior_derivative(cm.theta);
  return cm;
}

Verdict check_tautological(const CanonicalMultiphase& cm, const std::vector<SamplePoint>& pts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t dim = cm.chart->dim();
  const auto tuples = combinations(cm.n, cm.k);
  Verdict v = Verdict::identity("tautological", true);
  v.validity = Validity::Sampled;
  v.points = pts;
  for (const auto& pt : pts) {
    std::vector<std::vector<Rational>> X(static_cast<std::size_t>(cm.k), std::vector<Rational>(dim));
    for (auto& x : X)
      for (auto& c : x) c = random_rational(rng, 5);
    // theta(X1..Xk) through contractions
    DiffForm a = cm.theta;
    for (const auto& x : X) {
      std::vector<RationalFunction> comps(x.begin(), x.end());
      a = interior_product(vector_field(cm.chart, comps), a);
    }
    Rational lhs = a.coeff({}).evaluate(pt);
    // xi(dp X1, ..., dp Xk) as a sum of minors
    Rational rhs = 0;
    for (std::size_t j = 0; j < tuples.size(); ++j) {
      std::vector<std::vector<Rational>> minor(static_cast<std::size_t>(cm.k), std::vector<Rational>(static_cast<std::size_t>(cm.k)));
      for (std::size_t r = 0; r < minor.size(); ++r)
        for (std::size_t c = 0; c < minor.size(); ++c) minor[r][c] = X[r][static_cast<std::size_t>(tuples[j][c])];
      rhs += pt.at(cm.chart->coords()[static_cast<std::size_t>(cm.n) + j]) * det(minor);
    }
    if (lhs != rhs) {
      v.pass = false;
      v.residual = "at " + format_point(pt) + ": theta gives " + format_rational(lhs) + ", xi gives " + format_rational(rhs);
      break;
    }
  }
  return v;
}

DiffForm volume_plectic(int n, bool scaled, const std::string& var) {
  if (n < 2) throw Error(ErrorKind::BadDegree, "volume form needs n >= 2");
  std::vector<std::string> coords;
  for (int i = 0; i < n; ++i) coords.push_back(var + std::to_string(i + 1));
  auto chart = make_chart("vol" + var + std::to_string(n), coords);
  IndexTuple all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  RationalFunction c = 1;
  if (scaled) c = RationalFunction(Polynomial::constant(chart, 1)) + RationalFunction::variable(chart, 0).pow(2);
  return DiffForm::basis(chart, all, c);
}

FlatHyperkahler flat_hyperkahler() {
  FlatHyperkahler h;
  h.chart = make_chart("H4", {"x0", "x1", "x2", "x3"});
  auto e = [&](int i, int j) { return DiffForm::basis(h.chart, {i, j}); };
  h.omega1 = e(0, 1) + e(2, 3);
  h.omega2 = e(0, 2) - e(1, 3);
  h.omega3 = e(0, 3) + e(1, 2);
  h.sum = wedge(h.omega1, h.omega1) + wedge(h.omega2, h.omega2) + wedge(h.omega3, h.omega3);
  return h;
}

// --- Chevalley-Eilenberg ---

CEComplex::CEComplex(Constants constants, std::vector<std::vector<Rational>> pair, const std::string& chart_name)
    : rank(constants.size()), c(std::move(constants)), pairing(std::move(pair)) {
  for (const auto& layer : c) {
    if (layer.size() != rank) throw Error(ErrorKind::BadParameters, "structure constants have the wrong shape");
    for (const auto& row : layer)
      if (row.size() != rank) throw Error(ErrorKind::BadParameters, "structure constants have the wrong shape");
  }
  for (std::size_t l = 0; l < rank; ++l)
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j)
        if (c[l][i][j] != -c[l][j][i]) throw Error(ErrorKind::BadParameters, "structure constants are not antisymmetric");
  if (pairing.size() != rank) throw Error(ErrorKind::BadParameters, "pairing has the wrong shape");
  for (std::size_t i = 0; i < rank; ++i) {
    if (pairing[i].size() != rank) throw Error(ErrorKind::BadParameters, "pairing has the wrong shape");
    for (std::size_t j = 0; j < i; ++j)
      if (pairing[i][j] != pairing[j][i]) throw Error(ErrorKind::BadParameters, "pairing is not symmetric");
  }
  std::vector<std::string> coords;
  for (std::size_t i = 0; i < rank; ++i) coords.push_back("e" + std::to_string(i + 1));
  chart = make_chart(chart_name, coords);
}

std::vector<Rational> CEComplex::bracket(const std::vector<Rational>& u, const std::vector<Rational>& v) const {
  std::vector<Rational> out(rank, Rational(0));
  for (std::size_t l = 0; l < rank; ++l)
    for (std::size_t i = 0; i < rank; ++i) {
      if (u[i] == 0) continue;
      for (std::size_t j = 0; j < rank; ++j)
        if (v[j] != 0) out[l] += u[i] * v[j] * c[l][i][j];
    }
  return out;
}

namespace {

CEComplex::Constants zero_constants(std::size_t n) {
  return CEComplex::Constants(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
}

std::vector<std::vector<Rational>> identity_pairing(std::size_t n) {
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

std::vector<Rational> unit(std::size_t n, std::size_t i) {
  std::vector<Rational> out(n, Rational(0));
  out[i] = 1;
  return out;
}

Rational pair_with(const CEComplex& g, const std::vector<Rational>& u, const std::vector<Rational>& v) {
  Rational out = 0;
  for (std::size_t i = 0; i < g.rank; ++i)
    for (std::size_t j = 0; j < g.rank; ++j) out += u[i] * g.pairing[i][j] * v[j];
  return out;
}

std::string e_label(std::size_t i) { return "e" + std::to_string(i + 1); }

}  // namespace

CEComplex so3_algebra() {
  auto c = zero_constants(3);
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t j = (i + 1) % 3, l = (i + 2) % 3;
    c[l][i][j] = 1;
    c[l][j][i] = -1;
  }
  return CEComplex(c, identity_pairing(3), "so3");
}

CEComplex solvable2_algebra() {
  auto c = zero_constants(2);
  c[0][0][1] = 1;
  c[0][1][0] = -1;
  return CEComplex(c, killing_form(c), "aff1");
}

std::vector<std::vector<Rational>> killing_form(const CEComplex::Constants& c) {
  const std::size_t n = c.size();
  std::vector<std::vector<Rational>> K(n, std::vector<Rational>(n, Rational(0)));
  // (ad_a)^l_m = c^l_am
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) K[a][b] += c[l][a][m] * c[m][b][l];
  return K;
}

DiffForm ce_differential(const CEComplex& g, const DiffForm& a) {
  require_same_chart(g.chart, a.chart(), "Chevalley-Eilenberg differential");
  std::vector<DiffForm> de;
  for (std::size_t l = 0; l < g.rank; ++l) {
    DiffForm d = DiffForm::zero(g.chart, 2);
    for (std::size_t i = 0; i < g.rank; ++i)
      for (std::size_t j = i + 1; j < g.rank; ++j)
        if (g.c[l][i][j] != 0)
          d = d - DiffForm::basis(g.chart, {static_cast<int>(i), static_cast<int>(j)}, RationalFunction(g.c[l][i][j]));
    de.push_back(d);
  }
  DiffForm out = DiffForm::zero(g.chart, a.degree() + 1);
  for (const auto& [idx, coeff] : a.coeffs()) {
    if (!coeff.is_constant()) throw Error(ErrorKind::BadParameters, "Chevalley-Eilenberg differential of a non-constant form");
    for (std::size_t p = 0; p < idx.size(); ++p) {
      IndexTuple before(idx.begin(), idx.begin() + static_cast<long>(p));
      IndexTuple after(idx.begin() + static_cast<long>(p) + 1, idx.end());
      DiffForm term = wedge(wedge(DiffForm::basis(g.chart, before), de[static_cast<std::size_t>(idx[p])]),
                            DiffForm::basis(g.chart, after));
      term = term.scaled(coeff);
      out = (p % 2 == 0) ? out + term : out - term;
    }
  }
  return out;
}

Verdict ce_jacobi(const CEComplex& g) {
  const std::size_t n = g.rank;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        auto ei = unit(n, i), ej = unit(n, j), ek = unit(n, k);
        auto a = g.bracket(ei, g.bracket(ej, ek)), b = g.bracket(ej, g.bracket(ek, ei)), c = g.bracket(ek, g.bracket(ei, ej));
        std::vector<Rational> sum(n);
        for (std::size_t l = 0; l < n; ++l) sum[l] = a[l] + b[l] + c[l];
        if (std::any_of(sum.begin(), sum.end(), [](const Rational& q) { return q != 0; }))
          return Verdict::identity("jacobi", false,
                                   "[" + e_label(i) + ",[" + e_label(j) + "," + e_label(k) + "]] + cyclic = " + format_ce_vector(sum));
      }
  return Verdict::identity("jacobi", true);
}

Verdict ce_d_squared(const CEComplex& g) {
  for (std::size_t l = 0; l < g.rank; ++l) {
    DiffForm dd = ce_differential(g, ce_differential(g, coordinate_covector(g.chart, l)));
    if (!dd.is_zero()) return Verdict::identity("d_squared", false, "d(d(" + e_label(l) + ")) = " + format_form(dd));
  }
  return Verdict::identity("d_squared", true);
}

Verdict ce_invariance(const CEComplex& g) {
  const std::size_t n = g.rank;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        auto ei = unit(n, i), ej = unit(n, j), ek = unit(n, k);
        Rational v = pair_with(g, g.bracket(ei, ej), ek) + pair_with(g, ej, g.bracket(ei, ek));
        if (v != 0)
          return Verdict::identity("invariance", false,
                                   "<[" + e_label(i) + "," + e_label(j) + "]," + e_label(k) + "> + <" + e_label(j) + ",[" +
                                       e_label(i) + "," + e_label(k) + "]> = " + format_rational(v));
      }
  return Verdict::identity("invariance", true);
}

CartanForm ce_cartan(const CEComplex& g) {
  if (auto j = ce_jacobi(g); !j) throw Error(ErrorKind::JacobiFails, j.residual);
  if (auto inv = ce_invariance(g); !inv) throw Error(ErrorKind::PairingNotInvariant, inv.residual);
  const std::size_t n = g.rank;
  CartanForm out;
  out.H = DiffForm::zero(g.chart, 3);
  for (const auto& t : combinations(static_cast<int>(n), 3)) {
    auto i = static_cast<std::size_t>(t[0]), j = static_cast<std::size_t>(t[1]), k = static_cast<std::size_t>(t[2]);
    Rational h = pair_with(g, unit(n, i), g.bracket(unit(n, j), unit(n, k)));
    if (h != 0) out.H = out.H + DiffForm::basis(g.chart, t, RationalFunction(h));
  }
  out.dH = ce_differential(g, out.H);
  out.nondegenerate = check_nondegenerate(PlecticCandidate{out.H, CheckMode::generic_only()});
  return out;
}

// --- frames ---

MultiVectorField contract_multivector(const DiffForm& alpha, const MultiVectorField& pi) {
  require_same_chart(alpha.chart(), pi.chart(), "contraction");
  if (alpha.degree() > pi.degree()) throw Error(ErrorKind::DegreeUnderflow, "form degree exceeds multivector degree");
  MultiVectorField::Coeffs out;
  for (const auto& [I, ac] : alpha.coeffs())
    for (const auto& [P, pc] : pi.coeffs()) {
      if (!std::includes(P.begin(), P.end(), I.begin(), I.end())) continue;
      IndexTuple rest;
      std::set_difference(P.begin(), P.end(), I.begin(), I.end(), std::back_inserter(rest));
      IndexTuple concat = I;
      concat.insert(concat.end(), rest.begin(), rest.end());
      auto sorted = sort_indices(std::move(concat));
      RationalFunction c = ac * pc;
      if (sorted->sign < 0) c = -c;
      auto [it, fresh] = out.emplace(rest, c);
      if (!fresh) it->second += c;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return MultiVectorField(pi.chart(), pi.degree() - alpha.degree(), std::move(out));
}

SubbundleFrame graph_of_top_multivector(const MultiVectorField& pi) {
  const int n = static_cast<int>(pi.chart()->dim());
  if (pi.degree() != n || n < 2) throw Error(ErrorKind::DegreeMismatch, "graph of a top multivector needs degree = dim >= 2");
  std::vector<CourantSection> sections;
  for (const auto& I : combinations(n, n - 1)) {
    DiffForm a = DiffForm::basis(pi.chart(), I);
    sections.emplace_back(pi.chart(), n - 1, contract_multivector(a, pi), a);
  }
  return SubbundleFrame(pi.chart(), n - 1, std::move(sections));
}

LineBundle line_bundle() {
  LineBundle lb;
  lb.chart = make_chart("R4", {"x1", "x2", "x3", "x4"});
  lb.xi = DiffForm::basis(lb.chart, {0, 1}) + DiffForm::basis(lb.chart, {2, 3});
  lb.frame = vertical_frame(lb.chart, 2, {lb.xi});
  return lb;
}

SubbundleFrame scaled_family(const ChartPtr& N, const RationalFunction& f, const DiffForm& omega, const std::string& chart_name) {
  const auto& M = omega.chart();
  const int k = omega.degree() - 1;
  auto P = product_chart(M, N, chart_name);
  RationalFunction fl = lift_to_chart(DiffForm::scalar(N, f.with_chart(N)), P).coeff({});
  std::vector<CourantSection> sections;
  for (std::size_t i = 0; i < M->dim(); ++i) {
    DiffForm a = lift_to_chart(interior_product(coordinate_vector(M, i), omega), P).scaled(fl);
    sections.emplace_back(P, k, coordinate_vector(P, i), a);
  }
  for (const auto& I : combinations(static_cast<int>(N->dim()), k))
    sections.push_back(CourantSection::form(lift_to_chart(DiffForm::basis(N, I), P)));
  return SubbundleFrame(P, k, std::move(sections));
}

SubbundleFrame wedge_product_structure(const DiffForm& omega1, const DiffForm& omega2, const std::string& chart_name) {
  const auto& M1 = omega1.chart();
  auto P = product_chart(M1, omega2.chart(), chart_name);
  const int k = omega1.degree() + omega2.degree() - 1;
  DiffForm w2 = lift_to_chart(omega2, P);
  std::vector<CourantSection> sections;
  for (std::size_t i = 0; i < M1->dim(); ++i) {
    DiffForm a = wedge(lift_to_chart(interior_product(coordinate_vector(M1, i), omega1), P), w2);
    sections.emplace_back(P, k, coordinate_vector(P, i), a);
  }
  return SubbundleFrame(P, k, std::move(sections));
}

GroupoidWithForm pair_groupoid_form(const DiffForm& omega0) {
  GroupoidWithForm out;
  out.groupoid = pair_groupoid(omega0.chart());
  out.omega = pullback(out.groupoid.t, omega0) - pullback(out.groupoid.s, omega0);
  return out;
}

GroupoidWithForm vb_groupoid_form(const SubbundleFrame& vertical) {
  std::vector<DiffForm> forms;
  for (const auto& s : vertical.sections) {
    if (!s.X.is_zero()) throw Error(ErrorKind::NonConstantFrame, "frame has tangent parts");
    for (const auto& [idx, c] : s.alpha.coeffs())
      if (!c.is_constant()) throw Error(ErrorKind::NonConstantFrame, "frame form " + format_form(s.alpha) + " is not constant");
    forms.push_back(s.alpha);
  }
  GroupoidWithForm out;
  out.groupoid = vb_groupoid(vertical.chart, vertical.k, forms);
  out.omega = exterior_derivative(vb_tautological_form(out.groupoid, vertical.k, forms));
  return out;
}

DiffForm rename_chart(const DiffForm& a, const ChartPtr& chart) { return rename_field(a, chart); }
MultiVectorField rename_chart(const MultiVectorField& a, const ChartPtr& chart) { return rename_field(a, chart); }

SubbundleFrame rename_chart(const SubbundleFrame& L, const ChartPtr& chart) {
  std::vector<CourantSection> sections;
  for (const auto& s : L.sections) sections.emplace_back(chart, L.k, rename_chart(s.X, chart), rename_chart(s.alpha, chart));
  return SubbundleFrame(chart, L.k, std::move(sections));
}

// --- named instantiation ---

namespace {

using Params = std::map<std::string, std::string>;

struct Entry {
  std::vector<std::pair<std::string, std::string>> params;  // name, default
  std::function<CatalogInstance(const Params&)> build;
};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::BadParameters, what); }

int get_int(const Params& p, const std::string& key) {
  const std::string& s = p.at(key);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad(key + " must be an integer, got '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0) bad("unbalanced parentheses in '" + s + "'");
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> default_coords(int n) {
  std::vector<std::string> out;
  if (n <= 3) {
    const char* names[] = {"x", "y", "z"};
    for (int i = 0; i < n; ++i) out.emplace_back(names[i]);
  } else {
    for (int i = 0; i < n; ++i) out.push_back("x" + std::to_string(i + 1));
  }
  return out;
}

ChartPtr chart_from_params(const Params& p, const std::string& name, int n) {
  if (n < 1) bad("n must be positive");
  auto coords = p.at("coords").empty() ? default_coords(n) : split_top_level(p.at("coords"), ',');
  if (static_cast<int>(coords.size()) != n) bad("coords must list exactly n names");
  return make_chart(name, coords);
}

CheckSpec chk(std::string name, std::string op, std::vector<std::string> args, std::string mode = {}) {
  return CheckSpec{std::move(name), std::move(op), std::move(args), std::move(mode)};
}

const std::string kBoth = "generic+sampled";

void add_frame_checks(CatalogInstance& c, const std::string& L, bool lagrangian, bool dl) {
  c.checks.push_back(chk("isotropic", "is_isotropic", {L}));
  c.checks.push_back(chk("involutive", "is_involutive", {L}));
  c.checks.push_back(chk("nondegenerate", "check_nondeg_L", {L}, kBoth));
  if (lagrangian) c.checks.push_back(chk("lagrangian", "is_lagrangian", {L}));
  if (dl) c.checks.push_back(chk("dl", "check_dl", {L}, kBoth));
}

void add_groupoid_checks(CatalogInstance& c) {
  c.checks.push_back(chk("axioms", "groupoid_axioms", {"G"}));
  c.checks.push_back(chk("multiplicative", "multiplicative", {"G", "omega"}));
  c.checks.push_back(chk("unit_inversion", "unit_inversion", {"G", "omega"}));
  c.checks.push_back(chk("right_translation", "right_translation", {"G", "omega"}));
  c.checks.push_back(chk("algebroid", "groupoid_algebroid", {"G"}));
  c.checks.push_back(chk("im_form", "induced_im_form", {"G", "omega"}));
  c.checks.push_back(chk("nondegenerate", "check_nondegenerate", {"omega"}, kBoth));
  c.checks.push_back(chk("im_nondegenerate", "induced_im_nondeg", {"G", "omega"}, kBoth));
}

DiffForm form_of(const CatalogInstance& c, const std::string& role) {
  if (!c.primary_form) bad(role + " instance '" + c.catalog + "' does not provide a form");
  return *c.primary_form;
}

SubbundleFrame frame_of(const CatalogInstance& c, const std::string& role) {
  if (!c.primary_frame) bad(role + " instance '" + c.catalog + "' does not provide a frame");
  return *c.primary_frame;
}

bool clashes(const ChartPtr& a, const ChartPtr& b) {
  std::set<std::string> names(a->coords().begin(), a->coords().end());
  return std::any_of(b->coords().begin(), b->coords().end(), [&](const auto& c) { return names.count(c) > 0; });
}

ChartPtr suffixed_chart(const ChartPtr& c) {
  std::vector<std::string> coords;
  for (const auto& x : c->coords()) coords.push_back(x + "_b");
  return make_chart(c->name() + "_b", coords);
}

std::vector<DiffForm> span_forms(const Params& p, const ChartPtr& chart, int k) {
  std::vector<DiffForm> forms;
  if (p.at("span") == "full") {
    for (const auto& I : combinations(static_cast<int>(chart->dim()), k)) forms.push_back(DiffForm::basis(chart, I));
    return forms;
  }
  for (const auto& text : split_top_level(p.at("span"), ';')) {
    DiffForm a = parse_form(text, chart, k);
    if (a.degree() != k) bad("span form '" + text + "' does not have degree k");
    forms.push_back(a);
  }
  return forms;
}

SubbundleFrame vertical_from_params(const Params& p) {
  const int n = get_int(p, "n"), k = get_int(p, "k");
  if (k < 1 || k > n) bad("vertical subbundle needs 1 <= k <= n");
  auto chart = chart_from_params(p, "M", n);
  return vertical_frame(chart, k, span_forms(p, chart, k));
}

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> entries = {
      {"canonical-multiphase",
       {{{"n", "3"}, {"k", "2"}},
        [](const Params& p) {
          const int n = get_int(p, "n"), k = get_int(p, "k");
          if (n < 1) bad("n must be positive");
          if (k < 1 || k > n) bad("canonical-multiphase needs 1 <= k <= n, got n=" + p.at("n") + " k=" + p.at("k"));
          auto cm = canonical_multiphase(n, k);
          CatalogInstance c;
          c.objects = {{"theta", cm.theta}, {"omega", cm.omega}};
          c.checks = {chk("exact", "is_d_of", {"omega", "theta"}), chk("closed", "is_closed", {"omega"}),
                      chk("nondegenerate", "check_nondegenerate", {"omega"}, kBoth)};
          c.primary_form = cm.omega;
          return c;
        }}},
      {"volume",
       {{{"n", "3"}, {"var", "x"}, {"scaled", "0"}},
        [](const Params& p) {
          const int n = get_int(p, "n");
          if (n < 2) bad("volume needs n >= 2");
          if (p.at("var").empty()) bad("var must be nonempty");
          DiffForm w = volume_plectic(n, get_int(p, "scaled") != 0, p.at("var"));
          CatalogInstance c;
          c.objects = {{"omega", w}};
          c.checks = {chk("closed", "is_closed", {"omega"}), chk("nondegenerate", "check_nondegenerate", {"omega"}, kBoth)};
          c.primary_form = w;
          return c;
        }}},
      {"flat-hyperkahler",
       {{},
        [](const Params&) {
          auto h = flat_hyperkahler();
          CatalogInstance c;
          c.objects = {{"omega1", h.omega1}, {"omega2", h.omega2}, {"omega3", h.omega3}, {"omega", h.sum}};
          c.checks = {chk("omega1_nondegenerate", "check_nondegenerate", {"omega1"}),
                      chk("omega2_nondegenerate", "check_nondegenerate", {"omega2"}),
                      chk("omega3_nondegenerate", "check_nondegenerate", {"omega3"}),
                      chk("closed", "is_closed", {"omega"}),
                      chk("nondegenerate", "check_nondegenerate", {"omega"}, kBoth)};
          c.primary_form = h.sum;
          return c;
        }}},
      {"cartan-so3",
       {{{"corrupt", "0"}},
        [](const Params& p) {
          CEComplex g = so3_algebra();
          if (get_int(p, "corrupt") != 0) {
            auto cc = g.c;
            cc[0][0][1] += 1;
            cc[0][1][0] -= 1;
            g = CEComplex(cc, g.pairing, "so3c");
          }
          CatalogInstance c;
          c.objects = {{"g", g}};
          c.checks = {chk("jacobi", "ce_jacobi", {"g"}), chk("d_squared", "ce_d_squared", {"g"}),
                      chk("invariance", "ce_invariance", {"g"}), chk("cartan", "ce_cartan", {"g"})};
          return c;
        }}},
      {"graph-form",
       {{{"base", "canonical-multiphase(3,2)"}, {"omega", ""}, {"coords", ""}},
        [](const Params& p) {
          DiffForm w;
          if (!p.at("omega").empty()) {
            if (p.at("coords").empty()) bad("graph-form with omega= needs coords=");
            auto chart = make_chart("M", split_top_level(p.at("coords"), ','));
            w = parse_form(p.at("omega"), chart);
          } else {
            w = form_of(instantiate_reference(p.at("base")), "base");
          }
          if (w.degree() < 2) bad("graph-form needs a form of degree >= 2");
          auto L = graph_frame(w);
          CatalogInstance c;
          c.objects = {{"omega", w}, {"L", L}};
          add_frame_checks(c, "L", true, true);
          c.checks.push_back(chk("algebroid", "algebroid_from_L", {"L"}, kBoth));
          c.primary_form = w;
          c.primary_frame = L;
          return c;
        }}},
      {"graph-top-multivector",
       {{{"n", "3"}, {"coeff", "1"}, {"coords", ""}},
        [](const Params& p) {
          const int n = get_int(p, "n");
          if (n < 2) bad("graph-top-multivector needs n >= 2");
          auto chart = chart_from_params(p, "M", n);
          IndexTuple all(static_cast<std::size_t>(n));
          std::iota(all.begin(), all.end(), 0);
          auto pi = MultiVectorField::basis(chart, all, parse_scalar(p.at("coeff"), chart));
          auto L = graph_of_top_multivector(pi);
          CatalogInstance c;
          c.objects = {{"pi", pi}, {"L", L}};
          add_frame_checks(c, "L", true, true);
          c.checks.push_back(chk("algebroid", "algebroid_from_L", {"L"}, kBoth));
          c.checks.push_back(chk("frame_rank", "frame_rank", {"L"}));
          c.primary_frame = L;
          return c;
        }}},
      {"vertical",
       {{{"n", "3"}, {"k", "2"}, {"span", "full"}, {"coords", ""}},
        [](const Params& p) {
          auto L = vertical_from_params(p);
          CatalogInstance c;
          c.objects = {{"L", L}};
          add_frame_checks(c, "L", true, false);
          c.primary_frame = L;
          return c;
        }}},
      {"line-bundle",
       {{},
        [](const Params&) {
          auto lb = line_bundle();
          CatalogInstance c;
          c.objects = {{"xi", lb.xi}, {"L", lb.frame}};
          add_frame_checks(c, "L", false, false);
          c.primary_frame = lb.frame;
          return c;
        }}},
      {"scaled-family",
       {{{"f", "t1"}, {"m", "2"}, {"base", "canonical-multiphase(3,2)"}},
        [](const Params& p) {
          const int m = get_int(p, "m");
          if (m < 1) bad("m must be positive");
          std::vector<std::string> tc;
          for (int i = 0; i < m; ++i) tc.push_back("t" + std::to_string(i + 1));
          auto N = make_chart("N", tc);
          DiffForm w = form_of(instantiate_reference(p.at("base")), "base");
          if (clashes(w.chart(), N)) bad("base coordinates clash with t1..tm");
          auto f = parse_scalar(p.at("f"), N);
          auto L = scaled_family(N, f, w);
          CatalogInstance c;
          c.objects = {{"f", DiffForm::scalar(N, f.with_chart(N))}, {"omega", w}, {"L", L}};
          add_frame_checks(c, "L", false, false);
          c.primary_frame = L;
          return c;
        }}},
      {"wedge-product",
       {{{"left", "volume(2,x)"}, {"right", "volume(2,y)"}},
        [](const Params& p) {
          DiffForm w1 = form_of(instantiate_reference(p.at("left")), "left");
          DiffForm w2 = form_of(instantiate_reference(p.at("right")), "right");
          if (clashes(w1.chart(), w2.chart())) w2 = rename_chart(w2, suffixed_chart(w2.chart()));
          auto L = wedge_product_structure(w1, w2);
          CatalogInstance c;
          c.objects = {{"omega1", w1}, {"omega2", w2}, {"L", L}};
          add_frame_checks(c, "L", false, true);
          c.checks.push_back(chk("leaf_forms", "leaf_forms_zero", {"L"}));
          c.primary_frame = L;
          return c;
        }}},
      {"pair-groupoid",
       {{{"base", "canonical-multiphase(3,2)"}},
        [](const Params& p) {
          DiffForm w0 = form_of(instantiate_reference(p.at("base")), "base");
          auto gw = pair_groupoid_form(w0);
          CatalogInstance c;
          c.objects = {{"omega0", w0}, {"G", gw.groupoid}, {"omega", gw.omega}};
          add_groupoid_checks(c);
          c.primary_form = gw.omega;
          return c;
        }}},
      {"vb-groupoid",
       {{{"n", "3"}, {"k", "2"}, {"span", "full"}, {"coords", ""}},
        [](const Params& p) {
          auto L = vertical_from_params(p);
          auto gw = vb_groupoid_form(L);
          CatalogInstance c;
          c.objects = {{"L", L}, {"G", gw.groupoid}, {"omega", gw.omega}};
          add_groupoid_checks(c);
          c.primary_form = gw.omega;
          c.primary_frame = L;
          return c;
        }}},
      {"direct-product",
       {{{"left", "graph-form(volume(2,x))"}, {"right", "graph-form(volume(2,y))"}},
        [](const Params& p) {
          auto a = frame_of(instantiate_reference(p.at("left")), "left");
          auto b = frame_of(instantiate_reference(p.at("right")), "right");
          if (a.k != b.k) bad("direct-product factors have different k");
          if (clashes(a.chart, b.chart)) b = rename_chart(b, suffixed_chart(b.chart));
          auto L = direct_product(a, b);
          CatalogInstance c;
          c.objects = {{"L1", a}, {"L2", b}, {"L", L}};
          add_frame_checks(c, "L", false, true);
          c.primary_frame = L;
          return c;
        }}},
  };
  return entries;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "canonical-multiphase", "volume",       "flat-hyperkahler", "cartan-so3",  "graph-form",
      "graph-top-multivector", "vertical",    "line-bundle",      "scaled-family", "wedge-product",
      "pair-groupoid",        "vb-groupoid", "direct-product"};
  return names;
}

CatalogInstance instantiate(const std::string& name, const std::map<std::string, std::string>& params) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw Error(ErrorKind::UnknownCatalogName, "'" + name + "'");
  Params full;
  for (const auto& [key, def] : it->second.params) full[key] = def;
  for (const auto& [key, value] : params) {
    if (!full.count(key)) bad("'" + name + "' has no parameter '" + key + "'");
    full[key] = value;
  }
  CatalogInstance c = it->second.build(full);
  c.catalog = name;
  return c;
}

CatalogInstance instantiate_reference(const std::string& reference) {
  const std::string ref = trim(reference);
  auto open = ref.find('(');
  if (open == std::string::npos) return instantiate(ref, {});
  if (ref.back() != ')') bad("malformed reference '" + ref + "'");
  const std::string name = trim(ref.substr(0, open));
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw Error(ErrorKind::UnknownCatalogName, "'" + name + "'");
  std::map<std::string, std::string> params;
  const std::string inner = ref.substr(open + 1, ref.size() - open - 2);
  if (!trim(inner).empty()) {
    auto args = split_top_level(inner, ',');
    if (args.size() > it->second.params.size()) bad("too many arguments in '" + ref + "'");
    for (std::size_t i = 0; i < args.size(); ++i) params[it->second.params[i].first] = args[i];
  }
  return instantiate(name, params);
}

}  // namespace msk
