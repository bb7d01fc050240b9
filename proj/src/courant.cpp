#include "msk/courant.hpp"

#include "msk/error.hpp"
#include "msk/kplectic.hpp"

namespace msk {

CourantSection::CourantSection(ChartPtr c, int deg, MultiVectorField x, DiffForm a)
    : chart(std::move(c)), k(deg), X(std::move(x)), alpha(std::move(a)) {
  if (k < 1) throw Error(ErrorKind::BadDegree, "sections of TM + ^k T*M need k >= 1");
  if (X.is_zero()) X = MultiVectorField(chart, 1);
  if (alpha.is_zero()) alpha = DiffForm(chart, k);
  require_same_chart(chart, X.chart(), "section tangent part");
  require_same_chart(chart, alpha.chart(), "section form part");
  if (X.degree() != 1) throw Error(ErrorKind::DegreeMismatch, "tangent part must be a vector field");
  if (alpha.degree() != k) throw Error(ErrorKind::DegreeMismatch, "form part must have degree k");
}

CourantSection CourantSection::tangent(const MultiVectorField& X, int k) {
  return CourantSection(X.chart(), k, X, DiffForm(X.chart(), k));
}

CourantSection CourantSection::form(const DiffForm& alpha) {
  return CourantSection(alpha.chart(), alpha.degree(), MultiVectorField(alpha.chart(), 1), alpha);
}

CourantSection CourantSection::operator+(const CourantSection& b) const {
  if (k != b.k) throw Error(ErrorKind::DegreeMismatch, "sections of different k");
  return CourantSection(chart, k, X + b.X, alpha + b.alpha);
}

CourantSection CourantSection::operator-(const CourantSection& b) const {
  if (k != b.k) throw Error(ErrorKind::DegreeMismatch, "sections of different k");
  return CourantSection(chart, k, X - b.X, alpha - b.alpha);
}

CourantSection CourantSection::scaled(const RationalFunction& f) const {
  return CourantSection(chart, k, X.scaled(f), alpha.scaled(f));
}

bool CourantSection::operator==(const CourantSection& b) const { return k == b.k && X == b.X && alpha == b.alpha; }

std::string CourantSection::to_string() const {
  return "(" + format_multivector(X) + ", " + format_form(alpha) + ")";
}

SymVector section_components(const CourantSection& s) {
  SymVector v = vector_components(s.X);
  SymVector a = form_components(s.alpha);
  v.insert(v.end(), a.begin(), a.end());
  return v;
}

CourantSection section_from_components(const ChartPtr& chart, int k, const SymVector& v) {
  const std::size_t n = chart->dim();
  SymVector x(v.begin(), v.begin() + static_cast<long>(n));
  SymVector a(v.begin() + static_cast<long>(n), v.end());
  return CourantSection(chart, k, vector_field(chart, x), form_from_components(chart, k, a));
}

SubbundleFrame::SubbundleFrame(ChartPtr c, int deg, std::vector<CourantSection> s)
    : chart(std::move(c)), k(deg), sections(std::move(s)), declared_rank(sections.size()) {
  for (const auto& sec : sections) {
    require_same_chart(chart, sec.chart, "frame section");
    if (sec.k != k) throw Error(ErrorKind::DegreeMismatch, "frame sections of different k");
  }
  if (sections.empty()) return;
  EchelonData e = rref(SymMatrix::from_rows(rows(), width()));
  if (e.rank != sections.size())
    throw Error(ErrorKind::Degenerate, "frame sections are generically dependent (rank " + std::to_string(e.rank) +
                                           " of " + std::to_string(sections.size()) + ")");
}

std::size_t SubbundleFrame::width() const {
  return chart->dim() + static_cast<std::size_t>(binomial(static_cast<int>(chart->dim()), k));
}

std::vector<SymVector> SubbundleFrame::rows() const {
  std::vector<SymVector> out;
  out.reserve(sections.size());
  for (const auto& s : sections) out.push_back(section_components(s));
  return out;
}

SubbundleFrame graph_frame(const DiffForm& omega) {
  const ChartPtr& chart = omega.chart();
  const int k = omega.degree() - 1;
  std::vector<CourantSection> s;
  for (std::size_t j = 0; j < chart->dim(); ++j) {
    auto X = coordinate_vector(chart, j);
    s.emplace_back(chart, k, X, interior_product(X, omega));
  }
  return SubbundleFrame(chart, k, std::move(s));
}

SubbundleFrame bivector_graph_frame(const MultiVectorField& pi) {
  if (pi.degree() != 2) throw Error(ErrorKind::DegreeMismatch, "bivector graph needs a bivector");
  const ChartPtr& chart = pi.chart();
  std::vector<CourantSection> s;
  for (std::size_t j = 0; j < chart->dim(); ++j) {
    auto a = coordinate_covector(chart, j);
    s.emplace_back(chart, 1, bivector_sharp(pi, a), a);
  }
  return SubbundleFrame(chart, 1, std::move(s));
}

SubbundleFrame vertical_frame(const ChartPtr& chart, int k, const std::vector<DiffForm>& forms) {
  std::vector<CourantSection> s;
  for (const auto& a : forms) s.emplace_back(chart, k, MultiVectorField(chart, 1), a);
  return SubbundleFrame(chart, k, std::move(s));
}

SubbundleFrame full_vertical_frame(const ChartPtr& chart, int k) {
  std::vector<DiffForm> forms;
  for (const auto& idx : combinations(static_cast<int>(chart->dim()), k)) forms.push_back(DiffForm::basis(chart, idx));
  return vertical_frame(chart, k, forms);
}

MultiVectorField DLPair::lambda_of_frame(std::size_t j) const { return vector_field(chart, lambda.column(j)); }

DiffForm pairing(const CourantSection& a, const CourantSection& b) {
  require_same_chart(a.chart, b.chart, "pairing");
  if (a.k != b.k) throw Error(ErrorKind::DegreeMismatch, "pairing of sections with different k");
  return interior_product(a.X, b.alpha) + interior_product(b.X, a.alpha);
}

CourantSection dorfman_bracket(const CourantSection& a, const CourantSection& b) {
  require_same_chart(a.chart, b.chart, "Dorfman bracket");
  if (a.k != b.k) throw Error(ErrorKind::DegreeMismatch, "bracket of sections with different k");
  DiffForm form = lie_derivative(a.X, b.alpha) - interior_product(b.X, exterior_derivative(a.alpha));
  return CourantSection(a.chart, a.k, lie_bracket_vf(a.X, b.X), form);
}

Verdict check_frame_rank(const SubbundleFrame& L, const std::vector<SamplePoint>& pts, Exec exec) {
  Verdict v;
  v.name = "check_frame_rank";
  v.validity = Validity::Sampled;
  v.points = pts;
  v.pass = true;
  if (L.sections.empty()) return v;
  auto ranks = rank_at_points(SymMatrix::from_rows(L.rows(), L.width()), pts, exec);
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] != L.rank()) {
      v.pass = false;
      v.residual = "rank " + std::to_string(ranks[i]) + " < " + std::to_string(L.rank()) + " at " + format_point(pts[i]);
      break;
    }
  }
  return v;
}

namespace {

std::string pair_label(std::size_t i, std::size_t j) {
  return "s" + std::to_string(i) + ", s" + std::to_string(j);
}

}  // namespace

Verdict is_isotropic(const SubbundleFrame& L, Exec exec) {
  const std::size_t r = L.sections.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) pairs.emplace_back(i, j);
  std::vector<DiffForm> values(pairs.size());
  parallel_for(pairs.size(), exec, [&](std::size_t p) {
    values[p] = pairing(L.sections[pairs[p].first], L.sections[pairs[p].second]);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!values[p].is_zero()) {
      return Verdict::identity("is_isotropic", false,
                               "<" + pair_label(pairs[p].first, pairs[p].second) + "> = " + format_form(values[p]));
    }
  }
  return Verdict::identity("is_isotropic", true);
}

Verdict is_involutive(const SubbundleFrame& L, Exec exec) {
  const std::size_t r = L.sections.size();
  Verdict anomaly = is_isotropic(L, exec);
  anomaly.name = "isotropy_anomaly";
  if (!anomaly.pass) anomaly.residual = "df^" + anomaly.residual;

  const auto rows = L.rows();
  std::vector<CourantSection> brackets(r * r);
  std::vector<SpanResult> spans(r * r);
  parallel_for(r * r, exec, [&](std::size_t p) {
    brackets[p] = dorfman_bracket(L.sections[p / r], L.sections[p % r]);
    spans[p] = in_span(rows, section_components(brackets[p]), L.width());
  });
  Verdict pairs;
  pairs.name = "pairs";
  pairs.pass = true;
  std::vector<Polynomial> loci;
  std::size_t failures = 0;
  for (std::size_t p = 0; p < r * r; ++p) {
    merge_loci(loci, spans[p].loci);
    if (spans[p].member) continue;
    ++failures;
    if (pairs.pass) {
      pairs.residual = "[[" + pair_label(p / r, p % r) + "]] = " +
                       section_from_components(L.chart, L.k, spans[p].residual).to_string() + " mod L";
    }
    pairs.pass = false;
  }
  pairs.locus = format_loci(loci);
  pairs.validity = pairs.locus.empty() ? Validity::Identical : Validity::Generic;
  pairs.detail = std::to_string(r * r - failures) + " of " + std::to_string(r * r) + " frame brackets in L";
  return Verdict::itemized("is_involutive", {anomaly, pairs});
}

SymMatrix annihilator_matrix(const ChartPtr& chart, const std::vector<DiffForm>& forms) {
  std::vector<SymVector> rows;
  for (const auto& a : forms) {
    SymMatrix m = sharp_matrix(a);
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  }
  return SymMatrix::from_rows(rows, chart->dim());
}

namespace {

std::vector<DiffForm> form_parts(const SubbundleFrame& L) {
  std::vector<DiffForm> out;
  for (const auto& s : L.sections) out.push_back(s.alpha);
  return out;
}

std::string describe_vector(const ChartPtr& chart, const SymVector& v) { return format_multivector(vector_field(chart, v)); }

}  // namespace

Verdict check_nondeg_L(const SubbundleFrame& L, const CheckMode& mode, Exec exec) {
  const ChartPtr chart = L.chart;
  return injectivity_verdict("check_nondeg_L", annihilator_matrix(chart, form_parts(L)), mode,
                             [&](const SymVector& v) { return describe_vector(chart, v); }, exec);
}

SymMatrix orthogonal_matrix(const SubbundleFrame& L) {
  const ChartPtr& chart = L.chart;
  const std::size_t n = chart->dim();
  const auto forms = combinations(static_cast<int>(n), L.k);
  const std::size_t block = static_cast<std::size_t>(binomial(static_cast<int>(n), L.k - 1));
  SymMatrix m(L.sections.size() * block, L.width());
  for (std::size_t i = 0; i < L.sections.size(); ++i) {
    const auto& s = L.sections[i];
    for (std::size_t j = 0; j < n; ++j) {
      SymVector col = form_components(interior_product(coordinate_vector(chart, j), s.alpha));
      for (std::size_t r = 0; r < block; ++r) m(i * block + r, j) = col[r];
    }
    for (std::size_t f = 0; f < forms.size(); ++f) {
      SymVector col = form_components(interior_product(s.X, DiffForm::basis(chart, forms[f])));
      for (std::size_t r = 0; r < block; ++r) m(i * block + r, n + f) = col[r];
    }
  }
  return m;
}

OrthogonalProfile orthogonal_profile(const SubbundleFrame& L, const std::vector<SamplePoint>& pts, Exec exec) {
  const std::size_t n = L.chart->dim();
  const std::size_t width = L.width();
  const SymMatrix perp = orthogonal_matrix(L);
  const SymMatrix ann = annihilator_matrix(L.chart, form_parts(L));
  const SymMatrix frame = SymMatrix::from_rows(L.rows(), width);

  OrthogonalProfile out;
  EchelonData ep = rref(perp), ea = rref(ann);
  std::vector<Polynomial> loci = ep.pivot_denominators;
  merge_loci(loci, ea.pivot_denominators);
  out.locus = format_loci(loci);
  out.generic_dim_L = L.rank();
  out.generic_dim_perp = width - ep.rank;
  out.generic_dim_perp_tangent = n - ea.rank;
  out.isotropic = is_isotropic(L, exec).pass;
  out.generic_lagrangian = out.isotropic && out.generic_dim_perp == out.generic_dim_L;

  auto rp = rank_at_points(perp, pts, exec);
  auto ra = rank_at_points(ann, pts, exec);
  std::vector<std::size_t> rl(pts.size(), 0);
  if (!L.sections.empty()) rl = rank_at_points(frame, pts, exec);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    OrthogonalPoint p;
    p.point = pts[i];
    p.dim_L = rl[i];
    p.dim_perp = width - rp[i];
    p.dim_perp_tangent = n - ra[i];
    p.lagrangian = out.isotropic && p.dim_perp == p.dim_L;
    out.points.push_back(std::move(p));
  }
  return out;
}

DLPair to_dl(const SubbundleFrame& L) {
  const std::size_t n = L.chart->dim();
  DLPair p{L.chart, L.k, form_parts(L), SymMatrix(n, L.sections.size())};
  if (!L.sections.empty()) {
    std::vector<SymVector> rows;
    for (const auto& a : p.D_frame) rows.push_back(form_components(a));
    EchelonData e = rref(SymMatrix::from_rows(rows, static_cast<std::size_t>(binomial(static_cast<int>(n), L.k))));
    if (e.rank != rows.size())
      throw Error(ErrorKind::ProjectionNotInjective, "form parts of the frame are dependent (rank " +
                                                         std::to_string(e.rank) + " of " + std::to_string(rows.size()) + ")");
  }
  for (std::size_t j = 0; j < L.sections.size(); ++j) {
    SymVector x = vector_components(L.sections[j].X);
    for (std::size_t i = 0; i < n; ++i) p.lambda(i, j) = x[i];
  }
  return p;
}

SubbundleFrame from_dl(const DLPair& p) {
  std::vector<CourantSection> s;
  for (std::size_t j = 0; j < p.D_frame.size(); ++j) s.emplace_back(p.chart, p.k, p.lambda_of_frame(j), p.D_frame[j]);
  return SubbundleFrame(p.chart, p.k, std::move(s));
}

Verdict same_subbundle(const SubbundleFrame& a, const SubbundleFrame& b) {
  require_same_chart(a.chart, b.chart, "same_subbundle");
  if (a.k != b.k) throw Error(ErrorKind::DegreeMismatch, "frames with different k");
  Verdict v;
  v.name = "same_subbundle";
  v.pass = true;
  std::vector<Polynomial> loci;
  auto contained = [&](const SubbundleFrame& small, const SubbundleFrame& big, const char* label) {
    const auto rows = big.rows();
    for (std::size_t i = 0; i < small.sections.size(); ++i) {
      SpanResult s = in_span(rows, section_components(small.sections[i]), big.width());
      merge_loci(loci, s.loci);
      if (!s.member && v.pass) {
        v.pass = false;
        v.residual = std::string(label) + " section " + std::to_string(i) + " leaves the span: " +
                     section_from_components(big.chart, big.k, s.residual).to_string();
      }
    }
  };
  if (a.rank() != b.rank()) {
    v.pass = false;
    v.residual = "ranks differ: " + std::to_string(a.rank()) + " vs " + std::to_string(b.rank());
  }
  contained(a, b, "first");
  contained(b, a, "second");
  v.locus = format_loci(loci);
  v.validity = v.locus.empty() ? Validity::Identical : Validity::Generic;
  return v;
}

namespace {

std::vector<SymVector> d_rows(const DLPair& p) {
  std::vector<SymVector> rows;
  for (const auto& a : p.D_frame) rows.push_back(form_components(a));
  return rows;
}

std::size_t d_width(const DLPair& p) {
  return static_cast<std::size_t>(binomial(static_cast<int>(p.chart->dim()), p.k));
}

MultiVectorField combine_lambda(const DLPair& p, const SymVector& coeffs) {
  MultiVectorField X(p.chart, 1);
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    if (!coeffs[j].is_zero()) X = X + p.lambda_of_frame(j).scaled(coeffs[j]);
  return X;
}

}  // namespace

MultiVectorField lambda_apply(const DLPair& p, const DiffForm& alpha) {
  require_same_chart(p.chart, alpha.chart(), "lambda");
  if (alpha.is_zero()) return MultiVectorField(p.chart, 1);
  if (alpha.degree() != p.k) throw Error(ErrorKind::DegreeMismatch, "lambda is defined on k-forms");
  SpanResult s = in_span(d_rows(p), form_components(alpha), d_width(p));
  if (!s.member) throw Error(ErrorKind::NotInD, format_form(alpha));
  return combine_lambda(p, s.coefficients);
}

LambdaBracket lambda_bracket(const DLPair& p, const DiffForm& alpha, const DiffForm& beta) {
  const MultiVectorField la = lambda_apply(p, alpha);
  const MultiVectorField lb = lambda_apply(p, beta);
  LambdaBracket out;
  out.value = lie_derivative(la, beta) - interior_product(lb, exterior_derivative(alpha));
  out.second_form = lie_derivative(la, beta) - lie_derivative(lb, alpha) -
                    exterior_derivative(interior_product(la, beta));
  out.forms_agree = out.value == out.second_form;
  return out;
}

Verdict check_dl(const DLPair& p, const CheckMode& mode, Exec exec) {
  const ChartPtr chart = p.chart;
  const std::size_t r = p.D_frame.size();
  Verdict a = injectivity_verdict("(a)", annihilator_matrix(chart, p.D_frame), mode,
                                  [&](const SymVector& v) { return "D annihilated by " + describe_vector(chart, v); }, exec);

  std::vector<std::pair<std::size_t, std::size_t>> sym;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) sym.emplace_back(i, j);
  std::vector<DiffForm> bvals(sym.size());
  parallel_for(sym.size(), exec, [&](std::size_t q) {
    auto [i, j] = sym[q];
    bvals[q] = interior_product(p.lambda_of_frame(i), p.D_frame[j]) + interior_product(p.lambda_of_frame(j), p.D_frame[i]);
  });
  Verdict b = Verdict::identity("(b)", true);
  for (std::size_t q = 0; q < sym.size(); ++q) {
    if (!bvals[q].is_zero()) {
      b.pass = false;
      b.residual = "i_{lambda D" + std::to_string(sym[q].first) + "} D" + std::to_string(sym[q].second) + " + i_{lambda D" +
                   std::to_string(sym[q].second) + "} D" + std::to_string(sym[q].first) + " = " + format_form(bvals[q]);
      break;
    }
  }

  const auto rows = d_rows(p);
  struct PairResult {
    bool closed = true;
    bool preserved = true;
    std::string residual;
    std::vector<Polynomial> loci;
  };
  std::vector<PairResult> res(r * r);
  parallel_for(r * r, exec, [&](std::size_t q) {
    const std::size_t i = q / r, j = q % r;
    const MultiVectorField li = p.lambda_of_frame(i), lj = p.lambda_of_frame(j);
    DiffForm br = lie_derivative(li, p.D_frame[j]) - interior_product(lj, exterior_derivative(p.D_frame[i]));
    SpanResult s = in_span(rows, form_components(br), d_width(p));
    PairResult& out = res[q];
    out.loci = s.loci;
    if (!s.member) {
      out.closed = false;
      out.residual = "[D" + std::to_string(i) + ", D" + std::to_string(j) + "]_lambda leaves D: " +
                     format_form(form_from_components(chart, p.k, s.residual));
      return;
    }
    MultiVectorField diff = combine_lambda(p, s.coefficients) - lie_bracket_vf(li, lj);
    if (!diff.is_zero()) {
      out.preserved = false;
      out.residual = "lambda[D" + std::to_string(i) + ", D" + std::to_string(j) + "]_lambda - [lambda D" + std::to_string(i) +
                     ", lambda D" + std::to_string(j) + "] = " + format_multivector(diff);
    }
  });
  Verdict c;
  c.name = "(c)";
  c.pass = true;
  std::vector<Polynomial> loci;
  for (const auto& q : res) {
    merge_loci(loci, q.loci);
    if ((!q.closed || !q.preserved) && c.pass) {
      c.pass = false;
      c.residual = q.residual;
    }
  }
  c.locus = format_loci(loci);
  c.validity = c.locus.empty() ? Validity::Identical : Validity::Generic;
  return Verdict::itemized("check_dl", {a, b, c});
}

Distribution distribution_frame(const SubbundleFrame& L) {
  Distribution d;
  std::vector<SymVector> rows;
  for (const auto& s : L.sections) {
    if (s.X.is_zero()) continue;
    d.fields.push_back(s.X);
    rows.push_back(vector_components(s.X));
  }
  if (!rows.empty()) d.generic_rank = rref(SymMatrix::from_rows(rows, L.chart->dim())).rank;
  return d;
}

namespace {

using NumVec = std::vector<Rational>;

struct PointFrame {
  std::vector<NumVec> X;          // tangent parts at the point
  std::vector<DiffForm> alpha;    // constant-coefficient form parts at the point
};

PointFrame frame_at(const SubbundleFrame& L, const SamplePoint& pt) {
  PointFrame f;
  for (const auto& s : L.sections) {
    NumVec x;
    for (const auto& c : vector_components(s.X)) x.push_back(c.evaluate(pt));
    f.X.push_back(std::move(x));
    DiffForm::Coeffs coeffs;
    for (const auto& [idx, v] : evaluate_form(s.alpha, pt)) coeffs.emplace(idx, RationalFunction(v));
    f.alpha.emplace_back(L.chart, L.k, std::move(coeffs));
  }
  return f;
}

MultiVectorField constant_field(const ChartPtr& chart, const NumVec& v) {
  SymVector c;
  for (const auto& x : v) c.emplace_back(x);
  return vector_field(chart, c);
}

SymMatrix tangent_matrix(const PointFrame& f, std::size_t n) {
  SymMatrix m(n, f.X.size());
  for (std::size_t j = 0; j < f.X.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = f.X[j][i];
  return m;
}

Rational contract_all(const ChartPtr& chart, DiffForm a, const std::vector<NumVec>& Y) {
  for (std::size_t t = 1; t < Y.size(); ++t) a = interior_product(constant_field(chart, Y[t]), a);
  return a.coeff({}).is_zero() ? Rational(0) : a.coeff({}).constant_value();
}

Rational leaf_eval(const SubbundleFrame& L, const PointFrame& f, const SymMatrix& tm, const std::vector<NumVec>& Y,
                   bool* well_defined) {
  const std::size_t n = L.chart->dim();
  for (std::size_t t = 0; t < Y.size(); ++t) {
    if (Y[t].size() != n) throw Error(ErrorKind::BadParameters, "tangent vector has the wrong length");
    SymVector y(Y[t].begin(), Y[t].end());
    if (f.X.empty() ? !is_zero_vector(y) : !solve_linear(tm, y).consistent)
      throw Error(ErrorKind::PointNotOnLeafSpan, "vector " + std::to_string(t) + " is not tangent to the leaf");
  }
  DiffForm alpha(L.chart, L.k);
  EchelonData e;
  if (!f.X.empty()) {
    SolveResult s = solve_linear(tm, SymVector(Y[0].begin(), Y[0].end()));
    for (std::size_t j = 0; j < f.alpha.size(); ++j)
      if (!s.solution[j].is_zero()) alpha = alpha + f.alpha[j].scaled(s.solution[j]);
    e = rref(tm);
  }
  Rational value = contract_all(L.chart, alpha, Y);
  if (well_defined) {
    *well_defined = true;
    for (const auto& kv : e.kernel_basis) {
      DiffForm other = alpha;
      for (std::size_t j = 0; j < f.alpha.size(); ++j)
        if (!kv[j].is_zero()) other = other + f.alpha[j].scaled(kv[j]);
      if (contract_all(L.chart, other, Y) != value) *well_defined = false;
    }
  }
  return value;
}

}  // namespace

Rational leaf_form_eval(const SubbundleFrame& L, const SamplePoint& pt, const std::vector<std::vector<Rational>>& Y,
                        bool* well_defined) {
  if (Y.size() != static_cast<std::size_t>(L.k + 1))
    throw Error(ErrorKind::BadParameters, "the leaf form takes k+1 vectors");
  PointFrame f = frame_at(L, pt);
  return leaf_eval(L, f, tangent_matrix(f, L.chart->dim()), Y, well_defined);
}

bool LeafTensor::is_zero() const {
  for (const auto& [idx, v] : values)
    if (v != 0) return false;
  return true;
}

LeafTensor leaf_form_at(const SubbundleFrame& L, const SamplePoint& pt) {
  PointFrame f = frame_at(L, pt);
  const SymMatrix tm = tangent_matrix(f, L.chart->dim());
  LeafTensor out;
  out.point = pt;
  out.degree = L.k + 1;
  std::vector<NumVec> chosen;
  for (const auto& x : f.X) {
    std::vector<NumVec> trial = chosen;
    trial.push_back(x);
    if (numeric_rank(trial) > chosen.size()) chosen = std::move(trial);
  }
  out.basis = chosen;
  for (const auto& idx : combinations(static_cast<int>(chosen.size()), out.degree)) {
    std::vector<NumVec> Y;
    for (int b : idx) Y.push_back(chosen[static_cast<std::size_t>(b)]);
    bool ok = true;
    Rational v = leaf_eval(L, f, tm, Y, &ok);
    out.well_defined = out.well_defined && ok;
    if (v != 0) out.values.emplace(idx, v);
  }
  return out;
}

Verdict check_morphism(const SmoothMap& phi, const DLPair& p1, const DLPair& p2) {
  require_same_chart(phi.source, p1.chart, "morphism source");
  require_same_chart(phi.target, p2.chart, "morphism target");
  if (p1.k != p2.k) throw Error(ErrorKind::DegreeMismatch, "k-Poisson morphism between different k");
  const auto rows = d_rows(p1);
  Verdict pull;
  pull.name = "pullback";
  pull.pass = true;
  Verdict lam;
  lam.name = "lambda";
  lam.pass = true;
  std::vector<Polynomial> loci;
  for (std::size_t j = 0; j < p2.D_frame.size(); ++j) {
    DiffForm pa = pullback(phi, p2.D_frame[j]);
    SpanResult s = in_span(rows, form_components(pa), d_width(p1));
    merge_loci(loci, s.loci);
    if (!s.member) {
      if (pull.pass) pull.residual = "phi^*D" + std::to_string(j) + " = " + format_form(pa) + " is not in D1";
      pull.pass = false;
      continue;
    }
    VectorAlong pushed = differential_apply(phi, combine_lambda(p1, s.coefficients));
    SymVector l2 = p2.lambda.column(j);
    for (std::size_t i = 0; i < l2.size(); ++i) {
      RationalFunction diff = pushed.components[i] - l2[i].with_chart(p2.chart).compose(phi.components);
      if (!diff.is_zero() && lam.pass) {
        lam.pass = false;
        lam.residual = "dphi(lambda1(phi^*D" + std::to_string(j) + ")) - lambda2(D" + std::to_string(j) +
                       ") o phi has component " + diff.to_string() + " along " + phi.target->coords()[i];
      }
    }
  }
  for (Verdict* v : {&pull, &lam}) {
    v->locus = format_loci(loci);
    v->validity = v->locus.empty() ? Validity::Identical : Validity::Generic;
  }
  return Verdict::itemized("check_morphism", {pull, lam});
}

SubbundleFrame direct_product(const SubbundleFrame& a, const SubbundleFrame& b, const std::string& chart_name) {
  if (a.k != b.k) throw Error(ErrorKind::DegreeMismatch, "direct product of frames with different k");
  ChartPtr chart = product_chart(a.chart, b.chart, chart_name);
  std::vector<CourantSection> s;
  for (const auto* f : {&a, &b})
    for (const auto& sec : f->sections)
      s.emplace_back(chart, a.k, lift_to_chart(sec.X, chart), lift_to_chart(sec.alpha, chart));
  return SubbundleFrame(chart, a.k, std::move(s));
}

}  // namespace msk
