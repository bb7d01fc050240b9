#include "msk/scalar_parse.hpp"

#include <cctype>

#include "expression_parser.hpp"
#include "msk/alternating.hpp"
#include "msk/error.hpp"

namespace msk {
namespace detail {
namespace {

class Parser {
 public:
  Parser(std::string_view text, ChartPtr chart, bool allow_basis)
      : text_(text), chart_(std::move(chart)), allow_basis_(allow_basis) {}

  GradedValue run() {
    GradedValue v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  GradedValue scalar(const RationalFunction& f) const {
    GradedValue v;
    if (!f.is_zero()) v.coeffs.emplace(std::vector<int>{}, f.with_chart(chart_));
    return v;
  }

  static bool is_zero_value(const GradedValue& v) { return v.coeffs.empty(); }

  GradedValue add(GradedValue a, const GradedValue& b, bool subtract, std::size_t at) const {
    if (is_zero_value(b)) return a;
    if (is_zero_value(a)) {
      GradedValue r = b;
      if (subtract)
        for (auto& [k, c] : r.coeffs) c = -c;
      return r;
    }
    if (a.degree != b.degree || a.basis != b.basis) throw SyntaxError(at, "adding terms of different degree");
    for (const auto& [k, c] : b.coeffs) {
      auto it = a.coeffs.find(k);
      RationalFunction term = subtract ? -c : c;
      if (it == a.coeffs.end()) {
        a.coeffs.emplace(k, term);
      } else {
        it->second = it->second + term;
        if (it->second.is_zero()) a.coeffs.erase(it);
      }
    }
    if (a.coeffs.empty()) {
      a.degree = 0;
      a.basis = Basis::None;
    }
    return a;
  }

  GradedValue product(const GradedValue& a, const GradedValue& b, bool wedge, std::size_t at) const {
    if (a.basis != Basis::None && b.basis != Basis::None && a.basis != b.basis)
      throw SyntaxError(at, "cannot combine d(...) and e(...) elements");
    if (!wedge && a.degree > 0 && b.degree > 0) throw SyntaxError(at, "'*' needs a scalar operand; use '^'");
    GradedValue r;
    r.basis = a.basis != Basis::None ? a.basis : b.basis;
    r.degree = a.degree + b.degree;
    for (const auto& [ka, ca] : a.coeffs) {
      for (const auto& [kb, cb] : b.coeffs) {
        std::vector<int> idx = ka;
        idx.insert(idx.end(), kb.begin(), kb.end());
        auto sorted = sort_indices(idx);
        if (!sorted) continue;
        RationalFunction c = ca * cb;
        if (sorted->sign < 0) c = -c;
        auto it = r.coeffs.find(sorted->indices);
        if (it == r.coeffs.end()) {
          if (!c.is_zero()) r.coeffs.emplace(sorted->indices, c);
        } else {
          it->second = it->second + c;
          if (it->second.is_zero()) r.coeffs.erase(it);
        }
      }
    }
    if (r.coeffs.empty()) {
      r.degree = 0;
      r.basis = Basis::None;
    }
    return r;
  }

  GradedValue expr() {
    GradedValue v = term();
    for (;;) {
      std::size_t at = pos_;
      if (accept("+")) {
        v = add(std::move(v), term(), false, at);
      } else if (accept("-")) {
        v = add(std::move(v), term(), true, at);
      } else {
        return v;
      }
    }
  }

  GradedValue term() {
    GradedValue v = unary();
    for (;;) {
      skip();
      std::size_t at = pos_;
      if (peek("**")) return v;  // handled in power()
      if (accept("*")) {
        v = product(v, unary(), false, at);
      } else if (accept("^")) {
        v = product(v, unary(), true, at);
      } else if (accept("/")) {
        GradedValue d = unary();
        if (d.degree != 0) throw SyntaxError(at, "division by a non-scalar");
        if (is_zero_value(d)) throw SyntaxError(at, "division by zero");
        RationalFunction inv = RationalFunction(1) / d.coeffs.begin()->second;
        for (auto& [k, c] : v.coeffs) c = c * inv;
      } else {
        return v;
      }
    }
  }

  GradedValue unary() {
    if (accept("-")) {
      GradedValue v = unary();
      for (auto& [k, c] : v.coeffs) c = -c;
      return v;
    }
    if (accept("+")) return unary();
    return power();
  }

  GradedValue power() {
    GradedValue base = atom();
    skip();
    std::size_t at = pos_;
    if (!accept("**")) return base;
    skip();
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
      fail("exponent must be a nonnegative integer literal (negative powers only via explicit division)");
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("exponent must be a nonnegative integer literal");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    unsigned long n = std::stoul(std::string(text_.substr(start, pos_ - start)));
    if (base.degree != 0) throw SyntaxError(at, "power of a non-scalar");
    RationalFunction b = is_zero_value(base) ? RationalFunction(Polynomial::constant(chart_, 0))
                                             : base.coeffs.begin()->second;
    return scalar(n == 0 ? RationalFunction(Polynomial::constant(chart_, 1)) : b.pow(static_cast<unsigned>(n)));
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  GradedValue atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      GradedValue v = expr();
      expect(")");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      mpz_class n(std::string(text_.substr(start, pos_ - start)));
      return scalar(RationalFunction(Polynomial::constant(chart_, Rational(n))));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      std::string name = identifier();
      if ((name == "d" || name == "e") && peek("(")) {
        if (!allow_basis_) throw SyntaxError(start, "basis element '" + name + "(...)' in a scalar expression");
        expect("(");
        skip();
        std::size_t at = pos_;
        std::string coord = identifier();
        auto idx = chart_ ? chart_->find(coord) : std::nullopt;
        if (!idx) throw SyntaxError(at, "unknown coordinate '" + coord + "'");
        expect(")");
        GradedValue v;
        v.basis = name == "d" ? Basis::Covector : Basis::Vector;
        v.degree = 1;
        v.coeffs.emplace(std::vector<int>{static_cast<int>(*idx)}, RationalFunction(Polynomial::constant(chart_, 1)));
        return v;
      }
      auto idx = chart_ ? chart_->find(name) : std::nullopt;
      if (!idx) throw SyntaxError(start, "unknown coordinate '" + name + "'");
      return scalar(RationalFunction::variable(chart_, *idx));
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  std::string_view text_;
  ChartPtr chart_;
  bool allow_basis_;
  std::size_t pos_ = 0;
};

}  // namespace

GradedValue parse_expression(std::string_view text, const ChartPtr& chart, bool allow_basis) {
  return Parser(text, chart, allow_basis).run();
}

}  // namespace detail

RationalFunction parse_scalar(std::string_view text, const ChartPtr& chart) {
  auto v = detail::parse_expression(text, chart, false);
  if (v.coeffs.empty()) return RationalFunction(Polynomial::constant(chart, 0));
  return v.coeffs.begin()->second.with_chart(chart);
}

std::string format_scalar(const RationalFunction& f) { return f.to_string(); }

}  // namespace msk
