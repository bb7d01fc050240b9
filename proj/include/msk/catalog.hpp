#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msk/algebroid.hpp"
#include "msk/courant.hpp"
#include "msk/groupoid.hpp"
#include "msk/kplectic.hpp"

namespace msk {

struct CanonicalMultiphase {
  ChartPtr chart;
  int n = 0, k = 0;
  DiffForm theta, omega;
};

/// Coordinates q1..qn and p_I (p12, p13, ...) for increasing k-tuples; (q, p) when n = 1.
/// Throws BadDegree unless 1 <= k <= n.
CanonicalMultiphase canonical_multiphase(int n, int k);
/// theta(X1..Xk) = xi(dp X1, ..., dp Xk) with xi = sum p_I dq_I, for random vectors at each point.
Verdict check_tautological(const CanonicalMultiphase& cm, const std::vector<SamplePoint>& pts, std::uint64_t seed = 1);

/// dx1^...^dxn on coordinates <var>1..<var>n, times (1 + x1^2) when scaled. Throws BadDegree for n < 2.
DiffForm volume_plectic(int n, bool scaled = false, const std::string& var = "x");

struct FlatHyperkahler {
  ChartPtr chart;
  DiffForm omega1, omega2, omega3;
  DiffForm sum;  // sum of omega_i ^ omega_i
};
FlatHyperkahler flat_hyperkahler();

/// Constant-coefficient Chevalley-Eilenberg model of a Lie algebra: the dual basis e^i is realized
/// as d(e1)..d(en) on a chart with coordinates e1..en.
struct CEComplex {
  using Constants = std::vector<std::vector<std::vector<Rational>>>;  // [l][i][j]

  ChartPtr chart;
  std::size_t rank = 0;
  Constants c;
  std::vector<std::vector<Rational>> pairing;

  CEComplex() = default;
  /// Throws BadParameters unless c is antisymmetric in (i, j) and the pairing symmetric.
  CEComplex(Constants c, std::vector<std::vector<Rational>> pairing, const std::string& chart_name = "g");

  /// [u, v] on coefficient vectors.
  std::vector<Rational> bracket(const std::vector<Rational>& u, const std::vector<Rational>& v) const;
};

CEComplex so3_algebra();
/// [e1, e2] = e1 with the given pairing (defaults to the Killing form).
CEComplex solvable2_algebra();
std::vector<std::vector<Rational>> killing_form(const CEComplex::Constants& c);

/// d e^l = -1/2 sum c^l_ij e^i ^ e^j extended as a derivation. Throws BadParameters on non-constant input.
DiffForm ce_differential(const CEComplex& g, const DiffForm& a);
Verdict ce_jacobi(const CEComplex& g);
/// d(d e^l) = 0 for every l.
Verdict ce_d_squared(const CEComplex& g);
/// <[u,v],w> + <v,[u,w]> = 0 on basis triples.
Verdict ce_invariance(const CEComplex& g);

struct CartanForm {
  DiffForm H;
  DiffForm dH;
  Verdict nondegenerate;
};
/// H(e_i, e_j, e_k) = <e_i, [e_j, e_k]>. Throws JacobiFails, PairingNotInvariant.
CartanForm ce_cartan(const CEComplex& g);

/// Frame (i_alpha pi, alpha) over the basis of the (dim-1)-th exterior power. Throws DegreeMismatch.
SubbundleFrame graph_of_top_multivector(const MultiVectorField& pi);
/// i_alpha pi with alpha filling the first slots of pi.
MultiVectorField contract_multivector(const DiffForm& alpha, const MultiVectorField& pi);

struct LineBundle {
  ChartPtr chart;
  DiffForm xi;
  SubbundleFrame frame;
};
/// Line spanned by dx1^dx2 + dx3^dx4 on a 4-chart.
LineBundle line_bundle();

/// Frame {(d_i, f i_{d_i} omega)} over M and {(0, beta)} over the k-forms of N on M x N.
SubbundleFrame scaled_family(const ChartPtr& N, const RationalFunction& f, const DiffForm& omega,
                             const std::string& chart_name = {});
/// Frame (X, (i_X omega1) ^ omega2) for X in TM1, on M1 x M2.
SubbundleFrame wedge_product_structure(const DiffForm& omega1, const DiffForm& omega2, const std::string& chart_name = {});

struct GroupoidWithForm {
  GroupoidChart groupoid;
  DiffForm omega;
};
/// t^* omega0 - s^* omega0 on M x M.
GroupoidWithForm pair_groupoid_form(const DiffForm& omega0);
/// vb-groupoid of a vertical frame of constant forms, omega = d(sum c_j beta_j). Throws NonConstantFrame.
GroupoidWithForm vb_groupoid_form(const SubbundleFrame& vertical);

/// The same object on a chart with renamed coordinates (same order).
DiffForm rename_chart(const DiffForm& a, const ChartPtr& chart);
MultiVectorField rename_chart(const MultiVectorField& a, const ChartPtr& chart);
SubbundleFrame rename_chart(const SubbundleFrame& L, const ChartPtr& chart);

// --- named instantiation shared with the scenario runner ---

/// Scalars are carried as degree-0 forms so that every object knows its chart.
using ObjectValue = std::variant<DiffForm, MultiVectorField, SmoothMap, SubbundleFrame,
                                 LieAlgebroid, IMFormMap, GroupoidChart, CEComplex>;

struct NamedObject {
  std::string name;
  ObjectValue value;
};

struct CheckSpec {
  std::string name;
  std::string op;
  std::vector<std::string> args;
  std::string mode;  // "", "generic", "sampled" or "generic+sampled"
};

struct CatalogInstance {
  std::string catalog;
  std::vector<NamedObject> objects;
  std::vector<CheckSpec> checks;
  std::optional<DiffForm> primary_form;
  std::optional<SubbundleFrame> primary_frame;
};

const std::vector<std::string>& catalog_names();

/// Parameters are strings; nested instances are written `name(arg, ...)` with positional
/// parameters. Throws UnknownCatalogName, BadParameters.
CatalogInstance instantiate(const std::string& name, const std::map<std::string, std::string>& params);
/// Parses "name" or "name(a, b, ...)".
CatalogInstance instantiate_reference(const std::string& reference);

}  // namespace msk
