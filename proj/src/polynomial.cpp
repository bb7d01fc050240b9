#include "msk/polynomial.hpp"

#include <algorithm>
#include <numeric>

#include "msk/error.hpp"

namespace msk {

bool GrlexGreater::operator()(const Exponent& a, const Exponent& b) const {
  const auto da = total_degree(a);
  const auto db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::uint32_t total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

ChartPtr unify_chart(const ChartPtr& a, const ChartPtr& b) {
  if (!a) return b;
  if (!b) return a;
  require_same_chart(a, b, "polynomial arithmetic");
  return a;
}

namespace {

Exponent zero_exponent(const ChartPtr& chart) { return Exponent(chart ? chart->dim() : 0, 0); }

void add_term(Polynomial::Terms& terms, const Exponent& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Polynomial::Terms promote(const Polynomial& p, const ChartPtr& chart) {
  if (same_chart(p.chart(), chart) && p.chart()) return p.terms();
  Polynomial::Terms out;
  if (!p.is_zero()) out.emplace(zero_exponent(chart), p.constant_term());
  return out;
}

}  // namespace

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Exponent{}, c);
}

Polynomial Polynomial::constant(ChartPtr chart, const Rational& c) {
  Terms t;
  if (c != 0) t.emplace(zero_exponent(chart), c);
  return Polynomial(std::move(chart), std::move(t));
}

Polynomial Polynomial::variable(ChartPtr chart, std::size_t index) {
  if (!chart || index >= chart->dim()) throw Error(ErrorKind::UnknownCoordinate, "variable index out of range");
  Exponent e(chart->dim(), 0);
  e[index] = 1;
  Terms t;
  t.emplace(std::move(e), Rational(1));
  return Polynomial(std::move(chart), std::move(t));
}

Polynomial Polynomial::monomial(ChartPtr chart, Exponent exp, const Rational& c) {
  Terms t;
  if (c != 0) t.emplace(std::move(exp), c);
  return Polynomial(std::move(chart), std::move(t));
}

Polynomial Polynomial::from_terms(ChartPtr chart, Terms terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (it->second == 0)
      it = terms.erase(it);
    else
      ++it;
  }
  return Polynomial(std::move(chart), std::move(terms));
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

Rational Polynomial::constant_term() const {
  if (terms_.empty()) return 0;
  // the constant term is the grlex-smallest
  const auto& last = *terms_.rbegin();
  return total_degree(last.first) == 0 ? last.second : Rational(0);
}

std::uint32_t Polynomial::degree() const { return terms_.empty() ? 0 : total_degree(leading_exponent()); }

Polynomial Polynomial::with_chart(const ChartPtr& chart) const {
  if (chart_) {
    require_same_chart(chart_, chart, "with_chart");
    return *this;
  }
  return Polynomial(chart, promote(*this, chart));
}

Polynomial Polynomial::operator-() const {
  Terms t = terms_;
  for (auto& [e, c] : t) c = -c;
  return Polynomial(chart_, std::move(t));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  ChartPtr chart = unify_chart(a.chart_, b.chart_);
  if (a.is_zero()) return b.with_chart(chart);
  if (b.is_zero()) return a.with_chart(chart);
  Polynomial::Terms t = promote(a, chart);
  for (const auto& [e, c] : promote(b, chart)) add_term(t, e, c);
  return Polynomial(chart, std::move(t));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  ChartPtr chart = unify_chart(a.chart_, b.chart_);
  if (a.is_zero() || b.is_zero()) return Polynomial::constant(chart, 0);
  const auto ta = promote(a, chart);
  const auto tb = promote(b, chart);
  Polynomial::Terms t;
  Exponent e;
  for (const auto& [ea, ca] : ta) {
    for (const auto& [eb, cb] : tb) {
      e.resize(ea.size());
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] = ea[i] + eb[i];
      add_term(t, e, ca * cb);
    }
  }
  return Polynomial(chart, std::move(t));
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return constant(chart_, 0);
  Terms t = terms_;
  for (auto& [e, v] : t) v *= c;
  return Polynomial(chart_, std::move(t));
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial result = constant(chart_, 1);
  Polynomial base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derive(std::size_t coord) const {
  if (!chart_) return constant(nullptr, 0);
  if (coord >= chart_->dim()) throw Error(ErrorKind::UnknownCoordinate, "derivative index out of range");
  Terms t;
  for (const auto& [e, c] : terms_) {
    if (e[coord] == 0) continue;
    Exponent d = e;
    --d[coord];
    add_term(t, d, c * e[coord]);
  }
  return Polynomial(chart_, std::move(t));
}

Rational Polynomial::evaluate(const std::vector<Rational>& values) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::uint32_t k = 0; k < e[i]; ++k) term *= values.at(i);
    }
    sum += term;
  }
  return sum;
}

namespace {

bool divides(const Exponent& d, const Exponent& e) {
  for (std::size_t i = 0; i < e.size(); ++i)
    if (d[i] > e[i]) return false;
  return true;
}

}  // namespace

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  ChartPtr chart = unify_chart(chart_, divisor.chart_);
  Polynomial rem = with_chart(chart);
  const Polynomial div = divisor.with_chart(chart);
  if (rem.is_zero()) return rem;
  const Exponent& lead = div.leading_exponent();
  const Rational& lc = div.leading_coefficient();
  Terms quotient;
  while (!rem.is_zero()) {
    const Exponent& re = rem.leading_exponent();
    if (!divides(lead, re)) return std::nullopt;
    Exponent qe(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) qe[i] = re[i] - lead[i];
    Rational qc = rem.leading_coefficient() / lc;
    Polynomial step = monomial(chart, qe, qc);
    add_term(quotient, qe, qc);
    rem = rem - step * div;
  }
  return Polynomial(chart, std::move(quotient));
}

Exponent Polynomial::monomial_content() const {
  if (terms_.empty()) return zero_exponent(chart_);
  Exponent m = terms_.begin()->first;
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
  return m;
}

Polynomial Polynomial::divide_monomial(const Exponent& m) const {
  if (std::all_of(m.begin(), m.end(), [](auto v) { return v == 0; })) return *this;
  Terms t;
  for (const auto& [e, c] : terms_) {
    Exponent d = e;
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= m[i];
    t.emplace(std::move(d), c);
  }
  return Polynomial(chart_, std::move(t));
}

Rational Polynomial::rational_content() const {
  if (terms_.empty()) return 1;
  mpz_class num_gcd = 0;
  mpz_class den_lcm = 1;
  for (const auto& [e, c] : terms_) {
    mpz_class n = abs(c.get_num());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational r(num_gcd, den_lcm);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += chart_->coords()[i];
      if (e[i] > 1) mono += "**" + std::to_string(e[i]);
    }
    std::string term;
    if (mono.empty())
      term = format_rational(c);
    else if (c == 1)
      term = mono;
    else if (c == -1)
      term = "-" + mono;
    else
      term = format_rational(c) + "*" + mono;
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

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.chart_ && b.chart_ && !same_chart(a.chart_, b.chart_)) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.chart_ || !b.chart_) {
    // compare after promotion
    ChartPtr chart = a.chart_ ? a.chart_ : b.chart_;
    return promote(a, chart) == promote(b, chart);
  }
  return a.terms_ == b.terms_;
}

}  // namespace msk
