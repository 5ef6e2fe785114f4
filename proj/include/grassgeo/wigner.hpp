#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "grassgeo/graph.hpp"
#include "grassgeo/operators.hpp"

namespace grassgeo {

/// Black-box transformation of G_k(C^n), queried by the checkers and the
/// reconstruction engine. Counts queries; validates output dimensions
/// (OracleDimensionError). Finite-domain oracles built from pairing tables
/// throw OracleDomainError for inputs outside the table.
class TransformationOracle {
public:
    using Fn = std::function<Subspace(const Subspace&)>;

    TransformationOracle(Eigen::Index n, Eigen::Index k, Fn fn, bool pure = true);

    /// Oracle induced by an injective operator: X -> span(L X).
    static TransformationOracle from_operator(const SemilinearOperator& op, Eigen::Index k);

    /// Finite-domain oracle: inputs are matched against the table at
    /// distance 0 (projective classes, not frames).
    static TransformationOracle from_pairing_table(
        std::vector<std::pair<Subspace, Subspace>> table, const Tolerances& tol = {});

    Subspace operator()(const Subspace& x) const;

    Eigen::Index ambient_dim() const { return n_; }
    Eigen::Index dim() const { return k_; }
    bool pure() const { return pure_; }
    long long queries_used() const { return *queries_; }
    void reset_queries() const { *queries_ = 0; }

private:
    Eigen::Index n_;
    Eigen::Index k_;
    Fn fn_;
    bool pure_;
    std::shared_ptr<long long> queries_;
};

enum class Relation {
    orthogonality,
    adjacency,
    ortho_adjacency,
    compatibility,
    all_principal_angles,
    transition_probability,
};

enum class Direction { forward, both };

std::string to_string(Relation r);
std::string to_string(Direction d);

struct Violation {
    int pair_index = -1;
    std::string detail;
};

struct PreservationReport {
    Relation relation = Relation::orthogonality;
    Direction direction = Direction::forward;
    long long sampled_pairs = 0;
    std::vector<Violation> violations;
    bool verdict = false; ///< true iff violations is empty
};

/// Evaluates the relation on every pair and its image. Binary relations:
/// forward checks "related implies images related", both checks the
/// equivalence. The two metric relations compare value(s) on the pair and
/// its image: sorted angle spectra elementwise within 1e-7, transition
/// probabilities within 1e-7.
PreservationReport check_preservation(const TransformationOracle& f, Relation relation,
                                      Direction direction,
                                      const std::vector<std::pair<Subspace, Subspace>>& pairs,
                                      const Tolerances& tol = {});

/// The line map f_1 at a ray P (k = 1), recovered from the k-level oracle
/// as the intersection of the images of two k-subspaces that meet exactly
/// in P. Requires n > 2k; throws IntersectionNotALine when the image
/// intersection is not 1-dimensional (the oracle is then not induced by an
/// injective operator) and InsufficientAmbient when 2k >= n.
Subspace extract_line_map(const TransformationOracle& f, const Subspace& p,
                          const Tolerances& tol = {});

struct ReconstructionResult {
    SemilinearOperator op;     ///< isometry inducing the oracle
    double scale = 1.0;        ///< norm factor removed by normalization
    bool certified = false;    ///< all validation subspaces matched
    double max_residual = 0.0; ///< worst validation projector distance
    long long queries_used = 0;
};

/// Recovers the (anti-)unitary behind an oracle on G_k(C^n), n > 2k > 2:
/// extracts the line map on the standard rays, fixes phases through the
/// two-point sums e_1 + e_j, decides the field endomorphism on the rays
/// e_1 + i e_j, normalizes to an isometry and validates on random
/// subspaces. Throws ReconstructionFailed with the failing stage tag.
ReconstructionResult reconstruct_operator(const TransformationOracle& f, Eigen::Index n,
                                          Eigen::Index k, int validation_budget,
                                          std::uint64_t seed = 0, const Tolerances& tol = {});

struct WildMapDemo {
    std::vector<std::pair<Subspace, Subspace>> pairing; ///< explicit map table
    PreservationReport orthogonality_both;
    PreservationReport adjacency_forward;
    int draws_used = 0;
};

/// At n = 2k the complement is the unique orthogonal element, so permuting
/// complementary pairs of an apartment preserves orthogonality in both
/// directions without being induced by any operator. Draws random pair
/// permutations (plus orientation choices) until one also violates
/// adjacency, up to 20 times; throws RetryExhausted when no draw violates
/// adjacency, which happens only at tiny sizes.
WildMapDemo wild_map_demo(const OrthogonalApartment& apartment, std::uint64_t seed = 0,
                          const Tolerances& tol = {});

struct DescentWitness {
    Eigen::Index level = 0; ///< the graded step being verified
    Subspace core;          ///< sampled star core, dimension level-1
    Subspace image_core;    ///< unique core of the star containing the image
};

/// Executable witness of the descent f_k -> f_{k-1} -> ... -> f_1: at every
/// level the images of a sampled star share a unique common core of one
/// dimension less. Lower-level maps are evaluated through the same star
/// construction recursively. Throws StarImageNotInStar when the common
/// intersection has the wrong dimension. Requires n > 2k > 2.
std::vector<DescentWitness> descent_trace(const TransformationOracle& f, Eigen::Index n,
                                          Eigen::Index k, int stars_per_level = 20,
                                          std::uint64_t seed = 0, const Tolerances& tol = {});

/// Composition with the orthocomplement, X -> f(X)^perp. At n = 2k this
/// turns a stars-to-tops transformation into a stars-to-stars one.
TransformationOracle compose_with_orthocomplement(const TransformationOracle& f);

} // namespace grassgeo
