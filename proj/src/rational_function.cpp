#include "msk/rational_function.hpp"

#include "msk/error.hpp"

namespace msk {

std::string format_point(const SamplePoint& pt) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : pt) {
    if (!first) out += ", ";
    first = false;
    out += name + "=" + format_rational(value);
  }
  return out + "}";
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  ChartPtr chart = unify_chart(num_.chart(), den_.chart());
  if (num_.is_zero()) {
    num_ = Polynomial::constant(chart, 0);
    den_ = Polynomial::constant(chart, 1);
    return;
  }
  if (den_.is_constant()) {
    num_ = num_.scaled(1 / den_.constant_term()).with_chart(chart ? chart : num_.chart());
    den_ = Polynomial::constant(chart, 1);
    return;
  }
  // common monomial factor
  Exponent mn = num_.with_chart(chart).monomial_content();
  Exponent md = den_.with_chart(chart).monomial_content();
  for (std::size_t i = 0; i < mn.size(); ++i) mn[i] = std::min(mn[i], md[i]);
  num_ = num_.with_chart(chart).divide_monomial(mn);
  den_ = den_.with_chart(chart).divide_monomial(mn);

  // exact division either way
  if (auto q = num_.divide_exact(den_)) {
    num_ = std::move(*q);
    den_ = Polynomial::constant(chart, 1);
    return;
  }
  if (auto q = den_.divide_exact(num_); q && !q->is_constant()) {
    num_ = Polynomial::constant(chart, 1);
    den_ = std::move(*q);
  }
  // primitive denominator with positive leading coefficient
  Rational c = den_.rational_content();
  if (den_.leading_coefficient() < 0) c = -c;
  if (c != 1) {
    Rational inv = 1 / c;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
  if (den_.is_constant()) {
    num_ = num_.scaled(1 / den_.constant_term());
    den_ = Polynomial::constant(chart, 1);
  }
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) throw Error(ErrorKind::BadParameters, "expected a constant, got " + to_string());
  return num_.constant_term() / den_.constant_term();
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_, Raw{}); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b.with_chart(unify_chart(a.chart(), b.chart()));
  if (b.is_zero()) return a.with_chart(unify_chart(a.chart(), b.chart()));
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) {
    ChartPtr chart = unify_chart(a.chart(), b.chart());
    return RationalFunction(Polynomial::constant(chart, 0));
  }
  if (a.is_polynomial() && b.is_polynomial()) {
    return RationalFunction((a.num_ * b.num_), Polynomial::constant(unify_chart(a.chart(), b.chart()), 1),
                            RationalFunction::Raw{});
  }
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::pow(unsigned n) const {
  return RationalFunction(num_.pow(n), den_.pow(n), Raw{});
}

RationalFunction RationalFunction::derive(std::size_t index) const {
  if (is_polynomial()) return RationalFunction(num_.derive(index), den_, Raw{});
  return RationalFunction(num_.derive(index) * den_ - num_ * den_.derive(index), den_ * den_);
}

RationalFunction RationalFunction::derive(const std::string& coord) const {
  ChartPtr c = chart();
  if (!c) throw Error(ErrorKind::UnknownCoordinate, "'" + coord + "' (constant has no chart)");
  return derive(c->index_of(coord));
}

Rational RationalFunction::evaluate(const std::vector<Rational>& values) const {
  Rational d = den_.evaluate(values);
  if (d == 0) throw Error(ErrorKind::PoleAtPoint, "denominator " + den_.to_string() + " vanishes");
  return num_.evaluate(values) / d;
}

Rational RationalFunction::evaluate(const SamplePoint& pt) const {
  ChartPtr c = chart();
  std::vector<Rational> values;
  if (c) {
    values.reserve(c->dim());
    for (const auto& name : c->coords()) {
      auto it = pt.find(name);
      if (it == pt.end()) throw Error(ErrorKind::UnknownCoordinate, "sample point does not assign '" + name + "'");
      values.push_back(it->second);
    }
  }
  Rational d = den_.evaluate(values);
  if (d == 0) throw Error(ErrorKind::PoleAtPoint, to_string() + " at " + format_point(pt));
  return num_.evaluate(values) / d;
}

namespace {

RationalFunction compose_poly(const Polynomial& p, const std::vector<RationalFunction>& subs) {
  RationalFunction sum;
  if (p.is_zero()) return sum;
  if (p.chart() && subs.size() != p.chart()->dim())
    throw Error(ErrorKind::DegreeMismatch, "substitution has wrong number of components");
  // cache powers per coordinate
  std::vector<std::vector<RationalFunction>> powers(subs.size());
  for (const auto& [e, c] : p.terms()) {
    RationalFunction term(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(RationalFunction(1));
      while (cache.size() <= e[i]) cache.push_back(cache.back() * subs[i]);
      term = term * cache[e[i]];
    }
    sum = sum + term;
  }
  return sum;
}

}  // namespace

RationalFunction RationalFunction::compose(const std::vector<RationalFunction>& substitution) const {
  RationalFunction n = compose_poly(num_, substitution);
  if (is_polynomial()) return n / RationalFunction(den_.constant_term());
  return n / compose_poly(den_, substitution);
}

RationalFunction RationalFunction::with_chart(const ChartPtr& chart) const {
  if (!chart) return *this;
  return RationalFunction(num_.with_chart(chart), den_.with_chart(chart), Raw{});
}

namespace {

bool is_plain_power(const Polynomial& p) {
  if (p.term_count() != 1 || p.leading_coefficient() != 1) return false;
  int vars = 0;
  for (auto v : p.leading_exponent())
    if (v) ++vars;
  return vars == 1;
}

}  // namespace

std::string RationalFunction::to_string() const {
  if (is_polynomial()) return num_.to_string();
  mpz_class l = 1;
  for (const auto& [e, c] : num_.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  Polynomial top = num_.scaled(Rational(l)), bottom = den_.scaled(Rational(l));
  std::string n = top.to_string();
  if (top.term_count() > 1) n = "(" + n + ")";
  std::string d = bottom.to_string();
  if (!is_plain_power(bottom)) d = "(" + d + ")";
  return n + "/" + d;
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return (a.num_ * b.den_ - b.num_ * a.den_).is_zero();
}

bool is_identically_zero(const RationalFunction& f) { return f.is_zero(); }

}  // namespace msk
