#pragma once

#include <map>
#include <optional>
#include <string>

#include "fingeo/linset.hpp"

namespace fingeo {

/// A space of linear-form coefficient vectors over some ambient dual
/// coordinate system, stored as a canonical RREF basis.
struct FormSpace {
    enum class Provenance { HodgeDual, Minor, PointEvaluation, DecomposableSpanAnnihilator };

    SubspaceBasis basis;
    Provenance provenance;
    std::string note; // informative tag, e.g. for the h > n-k degenerate case

    std::size_t dim() const { return basis.dim(); }
    std::size_t ambient_dual_dim() const { return basis.ambient(); }
};

/// Basis of the linear forms on the k-th exterior power vanishing on the
/// Schubert variety of k-subspaces meeting a1 nontrivially: hodge duals of
/// (n-k)-subspaces containing a1, generated from deterministic completions
/// of a1 until the rank stabilizes at binom(n-h, k). For h > n-k the space
/// is zero.
FormSpace omega_forms(const SubspaceBasis& a1, int n, int k);

/// Coefficient matrix a of the rt-m-1 trace equations
/// Tr(sum_i a_{ji} x_i) = 0 cutting W out of GF(q^t)^r: the RREF dual of W
/// reassembled into GF(q^t) rows through the trace-dual basis.
Matrix trace_equations(const BlockDecomposition& bd, const SubspaceBasis& W);

/// Solution set of the trace equations back in the GF(q)-model; the
/// round-trip contract is solve_trace_equations(trace_equations(W)) = W.
SubspaceBasis solve_trace_equations(const BlockDecomposition& bd, const Matrix& a);

/// Expansion of every order-t minor of the matrix M = (a_{ji} x_i)^{q^...}
/// over the alpha monomials: one coefficient vector of length r^t per
/// t-subset of rows, reduced to a canonical basis. Empty when a has fewer
/// than t rows (degenerate: every spread element meets the span of W).
FormSpace minor_forms(const BlockDecomposition& bd, const Matrix& a);

struct PipelineOptions {
    bool route_minors = false;
    bool route_points = false;
    int complement_trials = 3; ///< randomized complement + basis-change re-runs of dim_S
    std::uint64_t seed = 0;
    std::uint64_t max_enum = FieldTower::kDefaultEnumCap;
    std::uint64_t max_dual_dim = 10626; ///< binom(24,4)
    bool collect_timings = false;
};

struct InvariantCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CodimReport {
    int q = 0, r = 0, t = 0, rank = 0; ///< rank = m+1
    std::optional<LinearSetReport> linset; ///< absent when point enumeration exceeds the cap
    int h = 0, c = 0;
    bool proper = false;

    int dual_dim = 0;        ///< rt - m - 1 = dim of the complement
    std::uint64_t bound = 0; ///< binom(rt-m-1, t)
    bool injective = false;  ///< m+1 > rt-t-c
    std::uint64_t dim_S = 0; ///< rank of the decomposable wedges: the codimension of record
    std::map<std::pair<int, int>, int> pairwise_dims; ///< dim(Ubar_i meet Ubar_j), i < j
    std::optional<std::uint64_t> t3_closed_form;      ///< when t=3, r>2, m+1 <= 3r-3-c
    std::optional<std::uint64_t> minor_rank;
    std::optional<std::uint64_t> point_deficit;
    std::vector<std::uint64_t> complement_trial_dims;

    std::vector<InvariantCheck> invariants;
    std::map<std::string, double> timings; ///< seconds per route, when requested

    bool all_invariants_pass() const;
};

/// The full pipeline: W, W*, a complement, the projected blocks, the span
/// of decomposable wedges, and the requested cross-check routes.
CodimReport codim_pipeline(const LinearSetSpec& spec, const PipelineOptions& opts = {});

/// r^t minus the rank of the stacked alpha images of the linear set's
/// points: the number of independent linear forms vanishing on the image.
std::uint64_t point_evaluation_route(const LinearSetSpec& spec,
                                     std::uint64_t cap = FieldTower::kDefaultEnumCap);

/// Same deficit for an explicit point list (diagnostic mode).
std::uint64_t alpha_span_deficit(const BlockDecomposition& bd, const std::vector<Vector>& points);

} // namespace fingeo
