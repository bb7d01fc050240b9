#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msk/algebroid.hpp"
#include "msk/forms.hpp"
#include "msk/verdict.hpp"

namespace msk {

/// Lie groupoid G over M presented by polynomial structure maps. P parametrizes composable
/// pairs (g, h) with s(g) = t(h); pr1, pr2 recover g and h and m their product.
struct GroupoidChart {
  std::string name;
  ChartPtr G, M, P;
  SmoothMap s, t;  // G -> M
  SmoothMap eps;   // M -> G
  SmoothMap inv;   // G -> G
  SmoothMap pr1, pr2, m;  // P -> G
  /// g -> (g, inv g) in P, enabling the inversion laws.
  std::optional<SmoothMap> inv_pair;
  /// Algebroid frame inside TG along the units: components along G, functions on M.
  std::optional<std::vector<VectorAlong>> unit_complement;
  /// Right-invariant extensions u^r of the frame, vector fields on G.
  std::optional<std::vector<MultiVectorField>> right_ext;
  std::optional<LieAlgebroid::Structure> structure;
};

/// Pair groupoid M x M: coordinates suffixed _1 (target) and _2 (source); P uses _1, _2, _3.
/// The unit complement is the first-factor coordinate frame.
GroupoidChart pair_groupoid(const ChartPtr& M);
/// Vector-bundle groupoid of the span of `forms` in the k-th exterior power of T*M, with fibre
/// coordinates c1..cr and fibrewise addition. Empty `forms` means the full coordinate basis.
GroupoidChart vb_groupoid(const ChartPtr& M, int k, std::vector<DiffForm> forms = {});
/// Tautological form sum_j c_j beta_j on the vb-groupoid (omega = d of it).
DiffForm vb_tautological_form(const GroupoidChart& g, int k, const std::vector<DiffForm>& forms);
/// G = M with every structure map the identity; zero algebroid.
GroupoidChart trivial_groupoid(const ChartPtr& M);

/// Items s_eps, t_eps, composable, s_m, t_m, s_inv, t_inv and (when inv_pair is given) inversion.
Verdict check_groupoid_axioms(const GroupoidChart& g);
/// m^* omega = pr1^* omega + pr2^* omega.
Verdict check_multiplicative(const GroupoidChart& g, const DiffForm& omega);
/// Items unit (eps^* omega = 0) and inversion (inv^* omega = -omega).
Verdict check_unit_inversion(const GroupoidChart& g, const DiffForm& omega);

/// Anchor dt(u_i), structure from brackets of right extensions along the units (or the supplied
/// structure, cross-checked when both exist). Throws MissingUnitComplement, ComplementNotInKernel,
/// MissingRightExtension.
LieAlgebroid extract_algebroid(const GroupoidChart& g);
/// mu(u) = eps^*(i_{u o t} omega).
IMFormMap induced_im_form(const GroupoidChart& g, const DiffForm& omega);
/// u-bar^l = inv_*(u^r).
MultiVectorField left_extension(const GroupoidChart& g, const MultiVectorField& right);
/// Items units (u^r o eps = u), right (i_{u^r} omega = t^* mu(u)), left (i_{u^l} omega = -s^* mu(u)).
Verdict check_right_translation(const GroupoidChart& g, const DiffForm& omega);

}  // namespace msk
