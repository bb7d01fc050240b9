#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "msk/parallel.hpp"
#include "msk/rational_function.hpp"

namespace msk {

using SymVector = std::vector<RationalFunction>;

/// Dense rectangular matrix over the fraction field.
class SymMatrix {
 public:
  SymMatrix() = default;
  SymMatrix(std::size_t rows, std::size_t cols);

  static SymMatrix identity(std::size_t n);
  static SymMatrix from_rows(const std::vector<SymVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  RationalFunction& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const RationalFunction& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  SymVector row(std::size_t r) const;
  SymVector column(std::size_t c) const;
  SymMatrix transpose() const;

  SymVector apply(const SymVector& v) const;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RationalFunction> data_;
};

SymMatrix operator*(const SymMatrix& a, const SymMatrix& b);

bool is_zero_vector(const SymVector& v);
std::string format_vector(const SymVector& v);

/// Generic-rank elimination result. The result is valid off the zero sets of pivot_denominators.
struct EchelonData {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  std::vector<SymVector> kernel_basis;
  std::vector<Polynomial> pivot_denominators;
  SymMatrix reduced;  // reduced row echelon form
};

EchelonData rref(const SymMatrix& m);

struct SolveResult {
  bool consistent = false;
  SymVector solution;   // particular solution (free variables zero) when consistent
  SymVector certificate;  // y with y M = 0, y b != 0 when inconsistent
  std::vector<Polynomial> loci;
};

SolveResult solve_linear(const SymMatrix& m, const SymVector& b);

struct SpanResult {
  bool member = false;
  SymVector coefficients;  // sum c_i rows_i == v when member
  SymVector residual;      // v reduced against the echelon form of rows otherwise
  std::vector<Polynomial> loci;
};

SpanResult in_span(const std::vector<SymVector>& rows, const SymVector& v, std::size_t width);

/// Exact rank of a numeric matrix.
std::size_t numeric_rank(std::vector<std::vector<Rational>> m);

/// Numeric matrix at a point; throws PoleAtPoint.
std::vector<std::vector<Rational>> evaluate_matrix(const SymMatrix& m, const SamplePoint& pt);

/// Exact rank at each point. Throws PoleAtPoint.
std::vector<std::size_t> rank_at_points(const SymMatrix& m, const std::vector<SamplePoint>& pts,
                                        Exec exec = Exec::Parallel);

/// Merge loci lists, dropping constants and duplicates (up to scalar multiples).
void merge_loci(std::vector<Polynomial>& into, const std::vector<Polynomial>& more);
std::vector<std::string> format_loci(const std::vector<Polynomial>& loci);

}  // namespace msk
