#pragma once

#include <optional>

#include "msk/forms.hpp"
#include "msk/verdict.hpp"

namespace msk {

/// Sign relating the cyclic semibracket sum to -d i_{Xa} i_{Xb} i_{Xc} omega under the
/// front-slot contraction convention. Pinned by the dense-tensor oracle in the test suite.
inline constexpr int kJacobiatorSign = 1;

/// A (k+1)-form proposed as k-plectic.
struct PlecticCandidate {
  DiffForm omega;
  CheckMode mode;

  int k() const { return omega.degree() - 1; }
  const ChartPtr& chart() const { return omega.chart(); }
};

/// alpha together with its hamiltonian vector field: i_X omega = d alpha.
struct HamiltonianPair {
  DiffForm alpha;
  MultiVectorField X;
};

struct HamiltonianResult {
  std::optional<HamiltonianPair> pair;
  /// Left-null covector of omega-sharp that does not annihilate d alpha (when not hamiltonian).
  SymVector certificate;
  explicit operator bool() const { return pair.has_value(); }
};

Verdict is_closed(const DiffForm& omega);

/// Matrix of X -> i_X omega: one row per increasing k-tuple, one column per coordinate.
SymMatrix sharp_matrix(const DiffForm& omega);
/// Components of a degree-d form in the lexicographic basis of increasing d-tuples.
SymVector form_components(const DiffForm& a);
DiffForm form_from_components(const ChartPtr& chart, int degree, const SymVector& comps);

Verdict check_nondegenerate(const PlecticCandidate& c, Exec exec = Exec::Parallel);

/// Exact solve of i_X omega = d alpha. Throws Degenerate if omega-sharp has a kernel,
/// DegreeMismatch if deg alpha != deg omega - 2.
HamiltonianResult hamiltonian_vector_field(const DiffForm& omega, const DiffForm& alpha);

/// {alpha, beta} = i_{X_alpha} i_{X_beta} omega. Throws NotHamiltonian.
DiffForm semibracket(const DiffForm& omega, const DiffForm& alpha, const DiffForm& beta);

struct JacobiatorSides {
  DiffForm cyclic_sum;  // {a,{b,c}} + {c,{a,b}} + {b,{c,a}}
  DiffForm defect;      // -d i_{Xa} i_{Xb} i_{Xc} omega (zero when the triple contraction is undefined)
};

JacobiatorSides jacobiator_sides(const DiffForm& omega, const DiffForm& a, const DiffForm& b, const DiffForm& c);

/// Passes iff cyclic_sum == kJacobiatorSign * defect exactly.
Verdict jacobiator_check(const DiffForm& omega, const DiffForm& a, const DiffForm& b, const DiffForm& c);

/// {f,g} = omega(X_g, X_f) with i_{X_f} omega = df. Throws Degenerate.
RationalFunction symplectic_poisson_bracket(const DiffForm& omega, const RationalFunction& f,
                                            const RationalFunction& g);

}  // namespace msk
