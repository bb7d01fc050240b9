#include "msk/linalg.hpp"

#include <algorithm>

#include "msk/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace msk {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

SymMatrix::SymMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<SymVector>& rows, std::size_t cols) {
  SymMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorKind::DegreeMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

SymVector SymMatrix::row(std::size_t r) const {
  return SymVector(data_.begin() + static_cast<long>(r * cols_), data_.begin() + static_cast<long>((r + 1) * cols_));
}

SymVector SymMatrix::column(std::size_t c) const {
  SymVector out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
  return out;
}

SymMatrix SymMatrix::transpose() const {
  SymMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

SymVector SymMatrix::apply(const SymVector& v) const {
  if (v.size() != cols_) throw Error(ErrorKind::DegreeMismatch, "matrix-vector size mismatch");
  SymVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    RationalFunction s;
    for (std::size_t c = 0; c < cols_; ++c)
      if (!(*this)(r, c).is_zero() && !v[c].is_zero()) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

std::string SymMatrix::to_string() const {
  std::string out = "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) out += ", ";
    out += format_vector(row(r));
  }
  return out + "]";
}

SymMatrix operator*(const SymMatrix& a, const SymMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DegreeMismatch, "matrix product size mismatch");
  SymMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) m(i, j) += a(i, k) * b(k, j);
    }
  return m;
}

bool is_zero_vector(const SymVector& v) {
  return std::all_of(v.begin(), v.end(), [](const RationalFunction& f) { return f.is_zero(); });
}

std::string format_vector(const SymVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i].to_string();
  }
  return out + ")";
}

namespace {

Polynomial locus_key(const Polynomial& p) {
  Rational c = p.rational_content();
  if (p.leading_coefficient() < 0) c = -c;
  return p.scaled(1 / c);
}

void add_locus(std::vector<Polynomial>& loci, const Polynomial& p) {
  if (p.is_constant()) return;
  Polynomial key = locus_key(p);
  for (const auto& q : loci)
    if (q == key) return;
  loci.push_back(std::move(key));
}

/// Gauss-Jordan on m, pivoting only in the first `pivot_cols` columns.
EchelonData eliminate(SymMatrix m, std::size_t pivot_cols) {
  EchelonData data;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) add_locus(data.pivot_denominators, m(r, c).den());

  std::size_t row = 0;
  for (std::size_t col = 0; col < pivot_cols && row < m.rows(); ++col) {
    std::size_t pr = row;
    while (pr < m.rows() && m(pr, col).is_zero()) ++pr;
    if (pr == m.rows()) continue;
    if (pr != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pr, c), m(row, c));
    const RationalFunction pivot = m(row, col);
    add_locus(data.pivot_denominators, pivot.num());
    if (pivot != RationalFunction(1)) {
      const RationalFunction inv = RationalFunction(1) / pivot;
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(row, c) = m(row, c) * inv;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const RationalFunction factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (!m(row, c).is_zero()) m(r, c) = m(r, c) - factor * m(row, c);
    }
    data.pivots.push_back(col);
    ++row;
  }
  data.rank = data.pivots.size();
  data.reduced = std::move(m);
  return data;
}

}  // namespace

EchelonData rref(const SymMatrix& m) {
  EchelonData data = eliminate(m, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : data.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    SymVector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < data.pivots.size(); ++i) v[data.pivots[i]] = -data.reduced(i, f);
    data.kernel_basis.push_back(std::move(v));
  }
  return data;
}

SolveResult solve_linear(const SymMatrix& m, const SymVector& b) {
  if (b.size() != m.rows()) throw Error(ErrorKind::DegreeMismatch, "right-hand side size mismatch");
  const std::size_t n = m.cols();
  const std::size_t rows = m.rows();
  SymMatrix aug(rows, n + 1 + rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n) = b[r];
    aug(r, n + 1 + r) = 1;
  }
  EchelonData e = eliminate(std::move(aug), n);
  SolveResult out;
  out.loci = e.pivot_denominators;
  for (std::size_t r = e.rank; r < rows; ++r) {
    if (!e.reduced(r, n).is_zero()) {
      out.consistent = false;
      for (std::size_t c = 0; c < rows; ++c) out.certificate.push_back(e.reduced(r, n + 1 + c));
      return out;
    }
  }
  out.consistent = true;
  out.solution.assign(n, RationalFunction());
  for (std::size_t i = 0; i < e.rank; ++i) out.solution[e.pivots[i]] = e.reduced(i, n);
  return out;
}

SpanResult in_span(const std::vector<SymVector>& rows, const SymVector& v, std::size_t width) {
  if (v.size() != width) throw Error(ErrorKind::DegreeMismatch, "span target has wrong length");
  SpanResult out;
  if (rows.empty()) {
    out.member = is_zero_vector(v);
    out.residual = v;
    return out;
  }
  SymMatrix cols = SymMatrix::from_rows(rows, width).transpose();
  SolveResult s = solve_linear(cols, v);
  out.loci = s.loci;
  if (s.consistent) {
    out.member = true;
    out.coefficients = std::move(s.solution);
    return out;
  }
  // residual: reduce v against the row echelon form of the frame
  EchelonData e = rref(SymMatrix::from_rows(rows, width));
  SymVector res = v;
  for (std::size_t i = 0; i < e.rank; ++i) {
    const RationalFunction lead = res[e.pivots[i]];
    if (lead.is_zero()) continue;
    for (std::size_t c = 0; c < width; ++c)
      if (!e.reduced(i, c).is_zero()) res[c] = res[c] - lead * e.reduced(i, c);
  }
  merge_loci(out.loci, e.pivot_denominators);
  out.residual = std::move(res);
  return out;
}

std::size_t numeric_rank(std::vector<std::vector<Rational>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pr = rank;
    while (pr < rows && m[pr][col] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(m[pr], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[rank][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<Rational>> evaluate_matrix(const SymMatrix& m, const SamplePoint& pt) {
  std::vector<std::vector<Rational>> out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero()) out[r][c] = m(r, c).evaluate(pt);
  return out;
}

std::vector<std::size_t> rank_at_points(const SymMatrix& m, const std::vector<SamplePoint>& pts, Exec exec) {
  std::vector<std::size_t> ranks(pts.size());
  parallel_for(pts.size(), exec, [&](std::size_t i) { ranks[i] = numeric_rank(evaluate_matrix(m, pts[i])); });
  return ranks;
}

void merge_loci(std::vector<Polynomial>& into, const std::vector<Polynomial>& more) {
  for (const auto& p : more) add_locus(into, p);
}

std::vector<std::string> format_loci(const std::vector<Polynomial>& loci) {
  std::vector<std::string> out;
  for (const auto& p : loci) out.push_back(p.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace msk
