#pragma once

#include <cstdint>
#include <vector>

#include "msk/courant.hpp"
#include "msk/forms.hpp"
#include "msk/verdict.hpp"

namespace msk {

/// Lie algebroid on a frame e_1..e_r over one chart: anchor columns rho(e_i) and structure
/// functions [e_i, e_j] = sum_l c^l_ij e_l. Sections are coefficient vectors of length r.
class LieAlgebroid {
 public:
  using Structure = std::vector<std::vector<std::vector<RationalFunction>>>;  // [l][i][j]

  LieAlgebroid() = default;
  /// Throws BadParameters unless c^l_ij = -c^l_ji and the shapes agree.
  LieAlgebroid(ChartPtr chart, SymMatrix anchor, Structure structure);

  const ChartPtr& chart() const { return chart_; }
  std::size_t rank() const { return rank_; }
  const SymMatrix& anchor() const { return anchor_; }
  const Structure& structure() const { return structure_; }
  const RationalFunction& c(std::size_t l, std::size_t i, std::size_t j) const { return structure_[l][i][j]; }

  MultiVectorField anchor_of(std::size_t i) const;
  MultiVectorField anchor_of(const SymVector& u) const;
  /// [u,v]^l = rho(u)(v^l) - rho(v)(u^l) + u^i v^j c^l_ij
  SymVector bracket(const SymVector& u, const SymVector& v) const;
  SymVector basis(std::size_t i) const;

 private:
  ChartPtr chart_;
  std::size_t rank_ = 0;
  SymMatrix anchor_;
  Structure structure_;
};

/// mu(e_i) for each frame element.
struct IMFormMap {
  LieAlgebroid algebroid;
  int k = 1;
  std::vector<DiffForm> mu;

  DiffForm apply(const SymVector& u) const;
};

LieAlgebroid tangent_algebroid(const ChartPtr& chart);
/// Constant structure constants and zero anchor.
LieAlgebroid lie_algebra_algebroid(const ChartPtr& chart, const LieAlgebroid::Structure& constants);
/// Frame dx_i, anchor pi-sharp, bracket L_{pi# a} b - L_{pi# b} a - d pi(a, b).
LieAlgebroid cotangent_algebroid(const MultiVectorField& pi);
/// mu(e_i) = dx_i on the cotangent algebroid.
IMFormMap identity_im_form(const LieAlgebroid& cotangent);

/// Items antisymmetry, leibniz (with a random polynomial drawn from seed), jacobi, anchor.
Verdict check_algebroid_axioms(const LieAlgebroid& A, std::uint64_t seed = 1, Exec exec = Exec::Parallel);
/// Items IM1, IM2. IM2 is only evaluated once IM1 holds.
Verdict check_im_form(const IMFormMap& m, Exec exec = Exec::Parallel);
/// Items (1) ker mu = 0 and (2) trivial annihilator of the image.
Verdict check_im_nondeg(const IMFormMap& m, const CheckMode& mode, Exec exec = Exec::Parallel);

struct AlgebroidWithIM {
  LieAlgebroid algebroid;
  IMFormMap im;
};
/// Anchor from the tangent parts, structure from frame brackets, mu from the form parts.
/// Throws BadParameters when a frame bracket leaves L.
AlgebroidWithIM algebroid_from_L(const SubbundleFrame& L);

/// phi maps A1 -> A2; column i holds phi(e_i) in the frame of A2. Items invertible, anchor,
/// bracket, mu.
Verdict check_equivalence(const IMFormMap& m1, const IMFormMap& m2, const SymMatrix& phi);

std::string format_section(const SymVector& u);

}  // namespace msk
