#pragma once

#include <utility>
#include <vector>

#include "grassgeo/subspace.hpp"

namespace grassgeo {

class Rng;

/// Finite view of the Grassmann graph: a vertex family in G_k(C^n) with an
/// edge for every adjacent pair. The full graph is a continuum and is never
/// materialized; views are built over apartments, sampled stars/tops or
/// user-supplied vertex lists.
struct GrassmannGraphView {
    Eigen::Index n = 0;
    Eigen::Index k = 0;
    std::vector<Subspace> vertices;
    std::vector<std::pair<int, int>> edges; ///< i < j, symmetric by convention

    std::vector<std::vector<int>> adjacency_lists() const;
};

/// Edge set = all adjacent pairs; deterministic given input order. Throws
/// MixedDimensions for non-uniform (n, k) and DuplicateVertex when two
/// vertices are the same subspace (distance 0).
GrassmannGraphView build_graph(std::vector<Subspace> vertices, const Tolerances& tol = {});

/// BFS distance inside the view; throws Unreachable when no path exists
/// (the view is finite, so this is possible even though the full Grassmann
/// graph is connected).
int graph_distance(const GrassmannGraphView& g, int a, int b);

/// Geodesic X = X_0, X_1, ..., X_d = Y with d = k - dim(intersection):
/// each step swaps one principal direction of X for the matching one of Y,
/// in ascending order of the non-zero principal angles. Consecutive pairs
/// are adjacent and dim(X, X_j) = k - j, dim(Y, X_j) = k - d + j.
std::vector<Subspace> geodesic_between(const Subspace& x, const Subspace& y,
                                       const Tolerances& tol = {});

/// For compatible X != Y: a geodesic from X through Y to a Z orthogonal to
/// X, where Z meets Y precisely in the part of Y orthogonal to the
/// intersection. Throws NotCompatible / InsufficientAmbient (needs 2k <= n).
std::vector<Subspace> geodesic_through_to_orthogonal(const Subspace& x, const Subspace& y,
                                                     const Tolerances& tol = {});

/// Members of the star of S (all k-subspaces containing the (k-1)-subspace
/// S) generated by the given directions: S + span(d - P_S d). Throws
/// DegenerateDirection when a direction lies in S, DuplicateVertex when two
/// directions generate the same member.
std::vector<Subspace> star_family(const Subspace& s, const std::vector<CVector>& directions,
                                  const Tolerances& tol = {});

/// Members of the top of U (all k-subspaces inside the (k+1)-subspace U)
/// obtained by dropping each given vector of U: the orthogonal complement
/// of the vector inside U. Errors mirror star_family.
std::vector<Subspace> top_family(const Subspace& u, const std::vector<CVector>& dropped,
                                 const Tolerances& tol = {});

/// All C(n, k) subspaces spanned by k-subsets of one orthonormal basis; a
/// maximal compatible set whose induced graph is the Johnson graph J(n, k).
struct OrthogonalApartment {
    CMatrix basis; ///< n x n unitary
    Eigen::Index k = 0;
    std::vector<std::vector<int>> subsets; ///< lexicographic k-subsets
    std::vector<Subspace> members;         ///< aligned with subsets
};

/// Throws NotUnitary unless basis^H basis = I within 1e-10. Pairwise
/// compatibility of the members is verified for n <= 8.
OrthogonalApartment orthogonal_apartment(const CMatrix& basis, Eigen::Index k,
                                         const Tolerances& tol = {});

enum class CliqueKind { star, top };

/// A maximal clique of the Grassmann graph: the star of a (k-1)-subspace or
/// the top of a (k+1)-subspace.
struct CliqueDescriptor {
    CliqueKind kind;
    Subspace core;
};

struct MaxCompatibleResult {
    std::vector<Subspace> members;
    Eigen::Index count = 0;
    int extension_probes = 0;    ///< randomized attempts to extend the set
    bool extension_found = false;
};

/// Constructs a maximal compatible subset of the clique explicitly (k+1
/// elements in a top, n-k+1 in a star) and certifies maximality by greedy
/// extension attempts with random clique members. Throws InvalidDescriptor
/// on inconsistent descriptors.
MaxCompatibleResult max_compatible_in_clique(const CliqueDescriptor& clique, Eigen::Index n,
                                             int probes = 200, std::uint64_t seed = 0,
                                             const Tolerances& tol = {});

/// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int n, int k);

} // namespace grassgeo
