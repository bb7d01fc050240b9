#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msk/forms.hpp"
#include "msk/verdict.hpp"

namespace msk {

/// A section (X, alpha) of TM + the k-th exterior power of T*M.
struct CourantSection {
  ChartPtr chart;
  int k = 1;
  MultiVectorField X;
  DiffForm alpha;

  CourantSection() = default;
  CourantSection(ChartPtr chart, int k, MultiVectorField X, DiffForm alpha);
  static CourantSection tangent(const MultiVectorField& X, int k);
  static CourantSection form(const DiffForm& alpha);

  bool is_zero() const { return X.is_zero() && alpha.is_zero(); }
  CourantSection operator+(const CourantSection& b) const;
  CourantSection operator-(const CourantSection& b) const;
  CourantSection scaled(const RationalFunction& f) const;
  bool operator==(const CourantSection& b) const;

  std::string to_string() const;
};

/// Components (X^1..X^n, alpha_I for increasing k-tuples I in lexicographic order).
SymVector section_components(const CourantSection& s);
CourantSection section_from_components(const ChartPtr& chart, int k, const SymVector& v);

/// Global frame of a subbundle L on one chart.
struct SubbundleFrame {
  ChartPtr chart;
  int k = 1;
  std::vector<CourantSection> sections;
  std::size_t declared_rank = 0;

  SubbundleFrame() = default;
  /// Throws Degenerate unless the sections are generically independent.
  SubbundleFrame(ChartPtr chart, int k, std::vector<CourantSection> sections);

  std::size_t rank() const { return declared_rank; }
  std::size_t width() const;
  std::vector<SymVector> rows() const;
};

/// Frame sections (X, i_X omega) for X running over coordinate vectors.
SubbundleFrame graph_frame(const DiffForm& omega);
/// Frame sections (pi-sharp(dx_i), dx_i) for a bivector (k = 1).
SubbundleFrame bivector_graph_frame(const MultiVectorField& pi);
/// Frame sections (0, alpha_i).
SubbundleFrame vertical_frame(const ChartPtr& chart, int k, const std::vector<DiffForm>& forms);
/// All (0, dx_I).
SubbundleFrame full_vertical_frame(const ChartPtr& chart, int k);

/// (D, lambda) presentation: lambda's column j holds the tangent components of lambda(D_frame[j]).
struct DLPair {
  ChartPtr chart;
  int k = 1;
  std::vector<DiffForm> D_frame;
  SymMatrix lambda;

  MultiVectorField lambda_of_frame(std::size_t j) const;
};

DiffForm pairing(const CourantSection& a, const CourantSection& b);
CourantSection dorfman_bracket(const CourantSection& a, const CourantSection& b);

/// Frame independence at sample points (the constant-rank input contract).
Verdict check_frame_rank(const SubbundleFrame& L, const std::vector<SamplePoint>& pts, Exec exec = Exec::Parallel);
Verdict is_isotropic(const SubbundleFrame& L, Exec exec = Exec::Parallel);
/// Items "isotropy_anomaly" (the df ^ <s_i, s_j> term of the bracket of C-infinity combinations)
/// and "pairs" (every frame bracket lies in the span of the frame, residual = reduced section).
Verdict is_involutive(const SubbundleFrame& L, Exec exec = Exec::Parallel);
/// Matrix of X -> (i_X alpha_i)_i.
SymMatrix annihilator_matrix(const ChartPtr& chart, const std::vector<DiffForm>& forms);
Verdict check_nondeg_L(const SubbundleFrame& L, const CheckMode& mode, Exec exec = Exec::Parallel);

struct OrthogonalPoint {
  SamplePoint point;
  std::size_t dim_L = 0;
  std::size_t dim_perp = 0;
  std::size_t dim_perp_tangent = 0;
  bool lagrangian = false;  // L = L-perp at the point
};

struct OrthogonalProfile {
  std::size_t generic_dim_L = 0;
  std::size_t generic_dim_perp = 0;
  std::size_t generic_dim_perp_tangent = 0;
  bool isotropic = false;
  bool generic_lagrangian = false;
  std::vector<std::string> locus;
  std::vector<OrthogonalPoint> points;
};

/// Matrix of (Y, beta) -> (<(Y, beta), s_i>)_i.
SymMatrix orthogonal_matrix(const SubbundleFrame& L);
OrthogonalProfile orthogonal_profile(const SubbundleFrame& L, const std::vector<SamplePoint>& pts,
                                     Exec exec = Exec::Parallel);

/// Throws ProjectionNotInjective when the form parts are generically dependent.
DLPair to_dl(const SubbundleFrame& L);
SubbundleFrame from_dl(const DLPair& p);
/// Two-sided span membership of frames.
Verdict same_subbundle(const SubbundleFrame& a, const SubbundleFrame& b);

/// lambda(alpha) for alpha in the span of D. Throws NotInD.
MultiVectorField lambda_apply(const DLPair& p, const DiffForm& alpha);

struct LambdaBracket {
  DiffForm value;        // L_{lambda a} b - i_{lambda b} d a
  DiffForm second_form;  // L_{lambda a} b - L_{lambda b} a - d i_{lambda a} b
  bool forms_agree = false;
};
LambdaBracket lambda_bracket(const DLPair& p, const DiffForm& alpha, const DiffForm& beta);

/// Items (a) trivial annihilator, (b) i_{lambda a} b = -i_{lambda b} a, (c) bracket closure and
/// lambda(bracket) = [lambda a, lambda b].
Verdict check_dl(const DLPair& p, const CheckMode& mode, Exec exec = Exec::Parallel);

struct Distribution {
  std::vector<MultiVectorField> fields;
  std::size_t generic_rank = 0;
};
Distribution distribution_frame(const SubbundleFrame& L);

/// Alternating (k+1)-tensor on the distribution at a point, expressed on a basis of tangent
/// vectors chosen among the frame's tangent parts.
struct LeafTensor {
  SamplePoint point;
  int degree = 0;
  std::vector<std::vector<Rational>> basis;  // tangent vectors spanning the distribution
  std::map<IndexTuple, Rational> values;     // increasing tuples over basis indices
  bool well_defined = true;                  // value unchanged under a second preimage

  bool is_zero() const;
};

/// omega(Y0, ..., Yk) = i_{Yk} ... i_{Y1} alpha with lambda(alpha) = Y0.
/// Throws PointNotOnLeafSpan if Y0 is outside the distribution, PoleAtPoint.
Rational leaf_form_eval(const SubbundleFrame& L, const SamplePoint& pt, const std::vector<std::vector<Rational>>& Y,
                        bool* well_defined = nullptr);
LeafTensor leaf_form_at(const SubbundleFrame& L, const SamplePoint& pt);

/// phi^* D2 inside D1 and dphi(lambda1(phi^* a)) = lambda2(a) o phi for each D2 frame element.
Verdict check_morphism(const SmoothMap& phi, const DLPair& p1, const DLPair& p2);

/// Frame on the product chart (coordinate names must be disjoint).
SubbundleFrame direct_product(const SubbundleFrame& a, const SubbundleFrame& b, const std::string& chart_name = {});

}  // namespace msk
