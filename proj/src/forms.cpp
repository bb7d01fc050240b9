#include "msk/forms.hpp"

#include <algorithm>

#include "msk/error.hpp"
#include "msk/scalar_parse.hpp"

namespace msk {

// ---------------------------------------------------------------------------
// index combinatorics

std::optional<SortedIndices> sort_indices(IndexTuple idx) {
  int sign = 1;
  // insertion sort, counting transpositions
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return std::nullopt;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return std::nullopt;
  return SortedIndices{std::move(idx), sign};
}

std::vector<IndexTuple> combinations(int n, int k) {
  std::vector<IndexTuple> out;
  if (k < 0 || k > n) return out;
  IndexTuple cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::map<IndexTuple, std::size_t> combination_positions(int n, int k) {
  std::map<IndexTuple, std::size_t> pos;
  auto all = combinations(n, k);
  for (std::size_t i = 0; i < all.size(); ++i) pos.emplace(all[i], i);
  return pos;
}

unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
  return r;
}

// ---------------------------------------------------------------------------
// AltField

namespace {

void accumulate(std::map<IndexTuple, RationalFunction>& coeffs, const IndexTuple& idx, const RationalFunction& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs.try_emplace(idx, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) coeffs.erase(it);
  }
}

template <FieldKind K>
const char* basis_name() {
  return K == FieldKind::Form ? "d" : "e";
}

}  // namespace

template <FieldKind K>
AltField<K>::AltField(ChartPtr chart, int degree, Coeffs coeffs) : chart_(std::move(chart)), degree_(degree) {
  if (!chart_) throw Error(ErrorKind::ChartMismatch, "field without a chart");
  if (degree < 0) throw Error(ErrorKind::BadDegree, "negative degree");
  if (K == FieldKind::Multivector && degree < 1) throw Error(ErrorKind::BadDegree, "multivector degree must be >= 1");
  const int n = static_cast<int>(chart_->dim());
  for (auto& [idx, c] : coeffs) {
    if (c.is_zero()) continue;
    if (static_cast<int>(idx.size()) != degree) throw Error(ErrorKind::DegreeMismatch, "index tuple length != degree");
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0 || idx[i] >= n) throw Error(ErrorKind::UnknownCoordinate, "index out of range");
      if (i > 0 && idx[i - 1] >= idx[i]) throw Error(ErrorKind::BadParameters, "indices must be strictly increasing");
    }
    coeffs_.emplace(idx, c.with_chart(chart_));
  }
}

template <FieldKind K>
AltField<K> AltField<K>::basis(ChartPtr chart, const IndexTuple& indices, const RationalFunction& coeff) {
  const int degree = static_cast<int>(indices.size());
  auto sorted = sort_indices(indices);
  Coeffs c;
  if (sorted) c.emplace(sorted->indices, sorted->sign < 0 ? -coeff : coeff);
  return AltField(std::move(chart), degree, std::move(c));
}

template <FieldKind K>
AltField<K> AltField<K>::scalar(ChartPtr chart, const RationalFunction& f) {
  Coeffs c;
  c.emplace(IndexTuple{}, f);
  return AltField(std::move(chart), 0, std::move(c));
}

template <FieldKind K>
RationalFunction AltField<K>::coeff(const IndexTuple& idx) const {
  auto it = coeffs_.find(idx);
  if (it == coeffs_.end()) return RationalFunction(Polynomial::constant(chart_, 0));
  return it->second;
}

template <FieldKind K>
AltField<K> AltField<K>::operator-() const {
  AltField r = *this;
  for (auto& [idx, c] : r.coeffs_) c = -c;
  return r;
}

template <FieldKind K>
AltField<K> AltField<K>::operator+(const AltField& b) const {
  require_same_chart(chart_, b.chart_, "addition");
  if (b.is_zero()) return *this;
  if (is_zero()) return b;
  if (degree_ != b.degree_) throw Error(ErrorKind::DegreeMismatch, "adding fields of different degree");
  AltField r = *this;
  for (const auto& [idx, c] : b.coeffs_) accumulate(r.coeffs_, idx, c);
  return r;
}

template <FieldKind K>
AltField<K> AltField<K>::operator-(const AltField& b) const {
  return *this + (-b);
}

template <FieldKind K>
AltField<K> AltField<K>::scaled(const RationalFunction& f) const {
  AltField r(chart_, degree_);
  if (f.is_zero()) return r;
  for (const auto& [idx, c] : coeffs_) accumulate(r.coeffs_, idx, c * f);
  return r;
}

template <FieldKind K>
bool AltField<K>::operator==(const AltField& b) const {
  if (!same_chart(chart_, b.chart_)) return false;
  if (is_zero() && b.is_zero()) return true;
  if (degree_ != b.degree_) return false;
  return (*this - b).is_zero();
}

template <FieldKind K>
std::string AltField<K>::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [idx, c] : coeffs_) {
    std::string basis;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) basis += "^";
      basis += std::string(basis_name<K>()) + "(" + chart_->coords()[idx[i]] + ")";
    }
    std::string coef = c.to_string();
    std::string term;
    if (basis.empty()) {
      term = coef;
    } else if (c == RationalFunction(1)) {
      term = basis;
    } else if (c == RationalFunction(-1)) {
      term = "-" + basis;
    } else {
      if (c.is_polynomial() && c.num().term_count() > 1) coef = "(" + coef + ")";
      term = coef + "*" + basis;
    }
    if (basis.empty() && c.is_polynomial() && c.num().term_count() > 1 && coeffs_.size() > 1) term = "(" + term + ")";
    if (first) {
      out = term;
      first = false;
    } else if (term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

template class AltField<FieldKind::Form>;
template class AltField<FieldKind::Multivector>;

// ---------------------------------------------------------------------------
// maps

SmoothMap::SmoothMap(ChartPtr src, ChartPtr tgt, std::vector<RationalFunction> comps)
    : source(std::move(src)), target(std::move(tgt)), components(std::move(comps)) {
  if (!source || !target) throw Error(ErrorKind::ChartMismatch, "map without charts");
  if (components.size() != target->dim())
    throw Error(ErrorKind::DegreeMismatch, "map needs one component per target coordinate");
  for (auto& c : components) {
    if (c.chart()) require_same_chart(c.chart(), source, "map component");
    c = c.with_chart(source);
  }
}

SmoothMap SmoothMap::identity(const ChartPtr& chart) {
  std::vector<RationalFunction> comps;
  for (std::size_t i = 0; i < chart->dim(); ++i) comps.push_back(RationalFunction::variable(chart, i));
  return SmoothMap(chart, chart, std::move(comps));
}

SmoothMap SmoothMap::parse(const ChartPtr& source, const ChartPtr& target, const std::vector<std::string>& exprs) {
  std::vector<RationalFunction> comps;
  comps.reserve(exprs.size());
  for (const auto& e : exprs) comps.push_back(parse_scalar(e, source));
  return SmoothMap(source, target, std::move(comps));
}

std::vector<std::vector<RationalFunction>> SmoothMap::jacobian() const {
  std::vector<std::vector<RationalFunction>> J(target->dim());
  for (std::size_t i = 0; i < target->dim(); ++i)
    for (std::size_t j = 0; j < source->dim(); ++j) J[i].push_back(components[i].derive(j));
  return J;
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  require_same_chart(outer.source, inner.target, "map composition");
  std::vector<RationalFunction> comps;
  comps.reserve(outer.components.size());
  for (const auto& c : outer.components) comps.push_back(c.compose(inner.components).with_chart(inner.source));
  return SmoothMap(inner.source, outer.target, std::move(comps));
}

bool maps_equal(const SmoothMap& a, const SmoothMap& b) {
  if (!same_chart(a.source, b.source) || !same_chart(a.target, b.target)) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    if (a.components[i] != b.components[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// calculus

MultiVectorField vector_field(const ChartPtr& chart, const std::vector<RationalFunction>& components) {
  if (components.size() != chart->dim()) throw Error(ErrorKind::DegreeMismatch, "vector field component count");
  MultiVectorField::Coeffs c;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (!components[i].is_zero()) c.emplace(IndexTuple{static_cast<int>(i)}, components[i]);
  return MultiVectorField(chart, 1, std::move(c));
}

std::vector<RationalFunction> vector_components(const MultiVectorField& X) {
  if (X.degree() != 1) throw Error(ErrorKind::DegreeMismatch, "expected a vector field");
  std::vector<RationalFunction> out(X.chart()->dim(), RationalFunction(Polynomial::constant(X.chart(), 0)));
  for (const auto& [idx, c] : X.coeffs()) out[idx[0]] = c;
  return out;
}

MultiVectorField coordinate_vector(const ChartPtr& chart, std::size_t index) {
  return MultiVectorField::basis(chart, {static_cast<int>(index)});
}

DiffForm coordinate_covector(const ChartPtr& chart, std::size_t index) {
  return DiffForm::basis(chart, {static_cast<int>(index)});
}

RationalFunction apply_vector(const MultiVectorField& X, const RationalFunction& f) {
  if (X.degree() != 1) throw Error(ErrorKind::DegreeMismatch, "expected a vector field");
  if (f.chart()) require_same_chart(X.chart(), f.chart(), "directional derivative");
  RationalFunction sum(Polynomial::constant(X.chart(), 0));
  for (const auto& [idx, c] : X.coeffs()) sum += c * f.with_chart(X.chart()).derive(static_cast<std::size_t>(idx[0]));
  return sum;
}

namespace {

template <FieldKind K>
AltField<K> wedge_impl(const AltField<K>& a, const AltField<K>& b) {
  require_same_chart(a.chart(), b.chart(), "wedge");
  typename AltField<K>::Coeffs out;
  for (const auto& [ia, ca] : a.coeffs()) {
    for (const auto& [ib, cb] : b.coeffs()) {
      IndexTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      auto sorted = sort_indices(std::move(idx));
      if (!sorted) continue;
      RationalFunction c = ca * cb;
      accumulate(out, sorted->indices, sorted->sign < 0 ? -c : c);
    }
  }
  return AltField<K>(a.chart(), a.degree() + b.degree(), std::move(out));
}

}  // namespace

DiffForm wedge(const DiffForm& a, const DiffForm& b) { return wedge_impl(a, b); }
MultiVectorField wedge(const MultiVectorField& a, const MultiVectorField& b) { return wedge_impl(a, b); }

DiffForm exterior_derivative(const DiffForm& a) {
  const int n = static_cast<int>(a.chart()->dim());
  DiffForm::Coeffs out;
  for (const auto& [idx, c] : a.coeffs()) {
    for (int j = 0; j < n; ++j) {
      if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      RationalFunction dc = c.derive(static_cast<std::size_t>(j));
      if (dc.is_zero()) continue;
      IndexTuple full{j};
      full.insert(full.end(), idx.begin(), idx.end());
      auto sorted = sort_indices(std::move(full));
      accumulate(out, sorted->indices, sorted->sign < 0 ? -dc : dc);
    }
  }
  return DiffForm(a.chart(), a.degree() + 1, std::move(out));
}

DiffForm interior_product(const MultiVectorField& X, const DiffForm& a) {
  require_same_chart(X.chart(), a.chart(), "interior product");
  if (a.degree() == 0) throw Error(ErrorKind::DegreeUnderflow, "interior product into a degree-0 form");
  if (X.degree() > a.degree()) throw Error(ErrorKind::DegreeUnderflow, "multivector degree exceeds form degree");
  DiffForm::Coeffs out;
  for (const auto& [J, xc] : X.coeffs()) {
    for (const auto& [I, ac] : a.coeffs()) {
      if (!std::includes(I.begin(), I.end(), J.begin(), J.end())) continue;
      IndexTuple rest;
      std::set_difference(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(rest));
      IndexTuple concat = J;
      concat.insert(concat.end(), rest.begin(), rest.end());
      auto sorted = sort_indices(std::move(concat));
      RationalFunction c = xc * ac;
      accumulate(out, rest, sorted->sign < 0 ? -c : c);
    }
  }
  return DiffForm(a.chart(), a.degree() - X.degree(), std::move(out));
}

DiffForm lie_derivative(const MultiVectorField& X, const DiffForm& a) {
  require_same_chart(X.chart(), a.chart(), "Lie derivative");
  if (X.degree() != 1) throw Error(ErrorKind::DegreeMismatch, "Lie derivative along a non-vector");
  DiffForm second = interior_product(X, exterior_derivative(a));
  if (a.degree() == 0) return second;
  return exterior_derivative(interior_product(X, a)) + second;
}

MultiVectorField lie_bracket_vf(const MultiVectorField& X, const MultiVectorField& Y) {
  require_same_chart(X.chart(), Y.chart(), "Lie bracket");
  auto xs = vector_components(X);
  auto ys = vector_components(Y);
  std::vector<RationalFunction> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(apply_vector(X, ys[i]) - apply_vector(Y, xs[i]));
  return vector_field(X.chart(), out);
}

DiffForm pullback(const SmoothMap& phi, const DiffForm& a) {
  require_same_chart(phi.target, a.chart(), "pullback");
  const auto J = phi.jacobian();
  std::vector<DiffForm> pulled_basis;
  for (std::size_t i = 0; i < J.size(); ++i) {
    DiffForm::Coeffs c;
    for (std::size_t j = 0; j < J[i].size(); ++j)
      if (!J[i][j].is_zero()) c.emplace(IndexTuple{static_cast<int>(j)}, J[i][j]);
    pulled_basis.emplace_back(phi.source, 1, std::move(c));
  }
  DiffForm result(phi.source, a.degree());
  std::map<IndexTuple, DiffForm> cache;
  for (const auto& [idx, c] : a.coeffs()) {
    auto it = cache.find(idx);
    if (it == cache.end()) {
      DiffForm w = DiffForm::scalar(phi.source, 1);
      for (int i : idx) w = wedge(w, pulled_basis[static_cast<std::size_t>(i)]);
      it = cache.emplace(idx, std::move(w)).first;
    }
    if (it->second.is_zero()) continue;
    result = result + it->second.scaled(c.compose(phi.components));
  }
  return DiffForm(phi.source, a.degree(), result.coeffs());
}

VectorAlong differential_apply(const SmoothMap& phi, const MultiVectorField& X) {
  require_same_chart(phi.source, X.chart(), "differential");
  auto xs = vector_components(X);
  VectorAlong out{phi.source, phi.target, {}};
  for (const auto& comp : phi.components) {
    RationalFunction s(Polynomial::constant(phi.source, 0));
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (!xs[j].is_zero()) s += comp.derive(j) * xs[j];
    out.components.push_back(s);
  }
  return out;
}

namespace {

std::vector<std::vector<RationalFunction>> bivector_matrix(const MultiVectorField& pi) {
  if (pi.degree() != 2) throw Error(ErrorKind::DegreeMismatch, "expected a bivector");
  const std::size_t n = pi.chart()->dim();
  std::vector<std::vector<RationalFunction>> P(n, std::vector<RationalFunction>(n, RationalFunction(Polynomial::constant(pi.chart(), 0))));
  for (const auto& [idx, c] : pi.coeffs()) {
    P[idx[0]][idx[1]] = c;
    P[idx[1]][idx[0]] = -c;
  }
  return P;
}

}  // namespace

RationalFunction bivector_pair(const MultiVectorField& pi, const DiffForm& alpha, const DiffForm& beta) {
  if (alpha.degree() != 1 || beta.degree() != 1) throw Error(ErrorKind::DegreeMismatch, "bivector pairing needs 1-forms");
  require_same_chart(pi.chart(), alpha.chart(), "bivector pairing");
  require_same_chart(pi.chart(), beta.chart(), "bivector pairing");
  auto P = bivector_matrix(pi);
  RationalFunction s(Polynomial::constant(pi.chart(), 0));
  for (const auto& [ia, ca] : alpha.coeffs())
    for (const auto& [ib, cb] : beta.coeffs()) s += P[ia[0]][ib[0]] * ca * cb;
  return s;
}

MultiVectorField bivector_sharp(const MultiVectorField& pi, const DiffForm& alpha) {
  if (alpha.degree() != 1) throw Error(ErrorKind::DegreeMismatch, "sharp needs a 1-form");
  require_same_chart(pi.chart(), alpha.chart(), "sharp");
  auto P = bivector_matrix(pi);
  const std::size_t n = pi.chart()->dim();
  std::vector<RationalFunction> out(n, RationalFunction(Polynomial::constant(pi.chart(), 0)));
  for (const auto& [ia, ca] : alpha.coeffs())
    for (std::size_t b = 0; b < n; ++b) out[b] += ca * P[ia[0]][b];
  return vector_field(pi.chart(), out);
}

MultiVectorField poisson_jacobiator(const MultiVectorField& pi) {
  auto P = bivector_matrix(pi);
  const int n = static_cast<int>(pi.chart()->dim());
  // {x_a, g} = sum_m P[a][m] d_m g
  auto hbracket = [&](int a, const RationalFunction& g) {
    RationalFunction s(Polynomial::constant(pi.chart(), 0));
    for (int m = 0; m < n; ++m)
      if (!P[a][m].is_zero()) s += P[a][m] * g.derive(static_cast<std::size_t>(m));
    return s;
  };
  MultiVectorField::Coeffs out;
  for (const auto& idx : combinations(n, 3)) {
    const int i = idx[0], j = idx[1], l = idx[2];
    RationalFunction J = hbracket(i, P[j][l]) + hbracket(j, P[l][i]) + hbracket(l, P[i][j]);
    if (!J.is_zero()) out.emplace(idx, J);
  }
  return MultiVectorField(pi.chart(), 3, std::move(out));
}

namespace {

std::vector<RationalFunction> embedding_substitution(const ChartPtr& factor, const ChartPtr& chart) {
  std::vector<RationalFunction> sub;
  for (const auto& name : factor->coords()) sub.push_back(RationalFunction::variable(chart, chart->index_of(name)));
  return sub;
}

template <FieldKind K>
AltField<K> lift_impl(const AltField<K>& a, const ChartPtr& chart) {
  auto sub = embedding_substitution(a.chart(), chart);
  typename AltField<K>::Coeffs out;
  for (const auto& [idx, c] : a.coeffs()) {
    IndexTuple mapped;
    for (int i : idx) mapped.push_back(static_cast<int>(chart->index_of(a.chart()->coords()[static_cast<std::size_t>(i)])));
    auto sorted = sort_indices(std::move(mapped));
    RationalFunction lc = c.compose(sub).with_chart(chart);
    accumulate(out, sorted->indices, sorted->sign < 0 ? -lc : lc);
  }
  return AltField<K>(chart, a.degree(), std::move(out));
}

}  // namespace

DiffForm lift_to_chart(const DiffForm& a, const ChartPtr& chart) { return lift_impl(a, chart); }
MultiVectorField lift_to_chart(const MultiVectorField& X, const ChartPtr& chart) { return lift_impl(X, chart); }

std::map<IndexTuple, Rational> evaluate_form(const DiffForm& a, const SamplePoint& pt) {
  std::map<IndexTuple, Rational> out;
  for (const auto& [idx, c] : a.coeffs()) {
    Rational v = c.evaluate(pt);
    if (v != 0) out.emplace(idx, v);
  }
  return out;
}

}  // namespace msk
