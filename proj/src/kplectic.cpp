#include "msk/kplectic.hpp"

#include "msk/error.hpp"

namespace msk {

Verdict is_closed(const DiffForm& omega) {
  DiffForm d = exterior_derivative(omega);
  return Verdict::identity("is_closed", d.is_zero(), format_form(d));
}

SymVector form_components(const DiffForm& a) {
  const int n = static_cast<int>(a.chart()->dim());
  SymVector out;
  for (const auto& idx : combinations(n, a.degree())) out.push_back(a.coeff(idx));
  return out;
}

DiffForm form_from_components(const ChartPtr& chart, int degree, const SymVector& comps) {
  const auto basis = combinations(static_cast<int>(chart->dim()), degree);
  if (basis.size() != comps.size()) throw Error(ErrorKind::DegreeMismatch, "component count does not match degree");
  DiffForm::Coeffs c;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!comps[i].is_zero()) c.emplace(basis[i], comps[i]);
  return DiffForm(chart, degree, std::move(c));
}

SymMatrix sharp_matrix(const DiffForm& omega) {
  if (omega.degree() < 1) throw Error(ErrorKind::DegreeUnderflow, "sharp map of a function");
  const int n = static_cast<int>(omega.chart()->dim());
  const int k = omega.degree() - 1;
  const auto rows = combinations(n, k);
  SymMatrix m(rows.size(), static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    SymVector col = form_components(interior_product(coordinate_vector(omega.chart(), static_cast<std::size_t>(j)), omega));
    for (std::size_t r = 0; r < rows.size(); ++r) m(r, static_cast<std::size_t>(j)) = col[r];
  }
  return m;
}

Verdict check_nondegenerate(const PlecticCandidate& c, Exec exec) {
  const ChartPtr& chart = c.omega.chart();
  return injectivity_verdict("check_nondegenerate", sharp_matrix(c.omega), c.mode,
                             [&](const SymVector& v) { return format_multivector(vector_field(chart, v)); }, exec);
}

HamiltonianResult hamiltonian_vector_field(const DiffForm& omega, const DiffForm& alpha) {
  require_same_chart(omega.chart(), alpha.chart(), "hamiltonian vector field");
  if (alpha.degree() != omega.degree() - 2)
    throw Error(ErrorKind::DegreeMismatch, "hamiltonian forms have degree deg(omega) - 2");
  const SymMatrix m = sharp_matrix(omega);
  EchelonData e = rref(m);
  if (!e.kernel_basis.empty())
    throw Error(ErrorKind::Degenerate, "omega-sharp has kernel " + format_vector(e.kernel_basis.front()));
  const DiffForm da = exterior_derivative(alpha);
  SolveResult s = solve_linear(m, form_components(da));
  HamiltonianResult out;
  if (!s.consistent) {
    out.certificate = std::move(s.certificate);
    return out;
  }
  out.pair = HamiltonianPair{alpha, vector_field(omega.chart(), s.solution)};
  return out;
}

namespace {

MultiVectorField require_hamiltonian(const DiffForm& omega, const DiffForm& alpha) {
  auto h = hamiltonian_vector_field(omega, alpha);
  if (!h) {
    throw Error(ErrorKind::NotHamiltonian,
                format_form(alpha) + " (certificate " + format_vector(h.certificate) + ")");
  }
  return h.pair->X;
}

}  // namespace

DiffForm semibracket(const DiffForm& omega, const DiffForm& alpha, const DiffForm& beta) {
  const auto Xa = require_hamiltonian(omega, alpha);
  const auto Xb = require_hamiltonian(omega, beta);
  return interior_product(Xa, interior_product(Xb, omega));
}

JacobiatorSides jacobiator_sides(const DiffForm& omega, const DiffForm& a, const DiffForm& b, const DiffForm& c) {
  const auto Xa = require_hamiltonian(omega, a);
  const auto Xb = require_hamiltonian(omega, b);
  const auto Xc = require_hamiltonian(omega, c);
  // inner brackets are re-solved, not assumed hamiltonian
  DiffForm cyclic = semibracket(omega, a, semibracket(omega, b, c)) +
                    semibracket(omega, c, semibracket(omega, a, b)) +
                    semibracket(omega, b, semibracket(omega, c, a));
  DiffForm defect(omega.chart(), a.degree());
  if (omega.degree() >= 3) {
    DiffForm triple = interior_product(Xa, interior_product(Xb, interior_product(Xc, omega)));
    defect = -exterior_derivative(triple);
  }
  return {cyclic, defect};
}

Verdict jacobiator_check(const DiffForm& omega, const DiffForm& a, const DiffForm& b, const DiffForm& c) {
  auto sides = jacobiator_sides(omega, a, b, c);
  DiffForm residual = sides.cyclic_sum - sides.defect.scaled(RationalFunction(kJacobiatorSign));
  Verdict v = Verdict::identity("jacobiator_check", residual.is_zero(), format_form(residual));
  v.detail = "cyclic sum = " + format_form(sides.cyclic_sum) + "; -d i i i omega = " + format_form(sides.defect);
  return v;
}

RationalFunction symplectic_poisson_bracket(const DiffForm& omega, const RationalFunction& f,
                                            const RationalFunction& g) {
  if (omega.degree() != 2) throw Error(ErrorKind::DegreeMismatch, "symplectic bracket needs a 2-form");
  const ChartPtr& chart = omega.chart();
  const auto Xf = require_hamiltonian(omega, DiffForm::scalar(chart, f));
  const auto Xg = require_hamiltonian(omega, DiffForm::scalar(chart, g));
  // omega(X_g, X_f) = i_{X_f} i_{X_g} omega
  return interior_product(Xf, interior_product(Xg, omega)).coeff({});
}

}  // namespace msk
