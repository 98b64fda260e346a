#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fibrecalc/manifold.hpp"

namespace fibrecalc {

/// One side of a gluing: the manifold, the surface to sum along, an
/// optional dual surface meeting it once, and an optional override of the
/// reference-surface embedding (the images of the 2g standard generators
/// in the free part of H1). Without an override the surface's stored H1
/// map is used.
struct GluingSide {
    Manifold4 manifold;
    std::string surface;
    std::optional<std::string> dual;
    std::optional<IntMatrix> images;
};

/// Gluing data for a generalized fibre sum. The boundary identification is
/// always the fixed trivial framing (fibrewise circle conjugation); the
/// dependence of the smooth structure on other framings is not modeled.
struct GluingSpec {
    GluingSide left;
    GluingSide right;

    std::string label = "X";
    std::string sigma_label;               // default: Sigma_<label>
    std::string b_label;                   // default: B_<label>
    std::vector<std::string> h1_labels;    // names for the free H1 generators
};

/// Common genus of the glued surfaces; validates the spec.
int glued_genus(const GluingSpec& spec);

/// H1 of the sum: cokernel of the stacked (b1(M)+b1(N)) x 2g matrix of the
/// two embeddings (Mayer-Vietoris).
FinAbGroup first_homology(const GluingSpec& spec);

/// Group of rim tori: cokernel of the 2g x (b1(M)+b1(N)) matrix formed by
/// the transposed embeddings side by side (restriction on H^1).
FinAbGroup rim_tori_group(const GluingSpec& spec);

struct BettiData {
    int euler = 0;
    int signature = 0;
    int b2 = 0;
    int b2_plus = 0;
    int b2_minus = 0;
};

/// e(X) = e(M) + e(N) + 4(g-1), sigma(X) = sigma(M) + sigma(N), and the
/// Betti numbers derived from the free rank of H1(X).
BettiData betti_and_signature(const GluingSpec& spec);

struct SewnSurface {
    int genus = 0;
    Int self_intersection;
};

/// The surface obtained by sewing the punctured dual surfaces together:
/// genus adds, self-intersections add.
SewnSurface sew_dual_surfaces(const GluingSpec& spec);

struct CheckResult {
    std::string name;
    std::string status;  // "pass" | "fail" | "skipped"
    std::string detail;
};

struct SplittingRanks {
    int pair_rank = 2;  // the {Sigma_X, B_X} tags
    int p_left = 0;
    int p_right = 0;
    int rim = 0;
    int vanishing = 0;
};

/// Result of a fibre sum: the assembled manifold with its H2 in the
/// adapted basis (Sigma_X, B_X, P(M), P(N), rim, vanishing), the rim and
/// vanishing groups, the side splittings, and the recorded consistency
/// checks. The canonical class is present on the manifold exactly when it
/// could be computed; otherwise canonical_absent_reason says why.
struct FibreSumResult {
    Manifold4 manifold;
    std::string sigma_surface;
    std::string b_surface;
    FinAbGroup rim_tori;
    FinAbGroup vanishing;
    SplitLattice left_split;
    SplitLattice right_split;
    SplittingRanks ranks;
    std::vector<CheckResult> checks;
    std::string canonical_absent_reason;
    GluingSpec spec;

    bool all_checks_pass() const;
};

/// The generalized fibre sum. Requires dual surfaces on both sides (the
/// adapted H2 basis is built from them).
FibreSumResult fibre_sum(const GluingSpec& spec);

/// Canonical class of the sum in the adapted basis:
///   K_X = Kbar_M + Kbar_N + (2g-2) B_X + (eta_M + eta_N) Sigma_X
/// with Kbar = K - (2g-2)B - (K.B - (2g-2)B^2) Sigma in the P part and
/// eta = K.B + 1 - (2g-2)B^2 for each side. Refuses when rim tori exist
/// (the rim contribution depends on the gluing and is not modeled) or
/// when a side has no canonical class.
LatticeVector canonical_class(const GluingSpec& spec, const FibreSumResult& result);

struct FormIsoResult {
    bool pass = false;
    std::string detail;
};

/// Checks that mapping Sigma -> Sigma_X, B -> B_X and the identity on the
/// P part carries the reference manifold's intersection form onto the
/// form of the sum. The reference must be one of the two summands.
FormIsoResult form_isomorphism_check(const FibreSumResult& result, const Manifold4& reference);

}  // namespace fibrecalc
