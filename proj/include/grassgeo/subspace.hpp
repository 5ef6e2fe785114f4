#pragma once

#include <cstdint>

#include "grassgeo/linalg.hpp"

namespace grassgeo {

/// A k-dimensional subspace of C^n held as an orthonormal frame (n x k).
/// Frames are coset representatives: equality of subspaces is always
/// decided by distance (intersection dimension), never frame equality.
class Subspace {
public:
    /// Wraps a frame that is already orthonormal; throws InvalidDimension
    /// when the frame is empty, not orthonormal, or k > n.
    explicit Subspace(CMatrix frame);

    /// Orthonormalizes an arbitrary spanning set. Throws RankDeficient when
    /// the columns are dependent.
    static Subspace from_span(const CMatrix& a, double rank_rel = 1e-8);

    Eigen::Index ambient_dim() const { return frame_.rows(); }
    Eigen::Index dim() const { return frame_.cols(); }
    const CMatrix& frame() const { return frame_; }

    /// Orthogonal projector frame * frame^H (n x n).
    CMatrix projector() const { return frame_ * frame_.adjoint(); }

private:
    CMatrix frame_;
};

/// Rotation-invariant random subspace: orthonormalized n x k complex
/// Gaussian matrix. Deterministic per seed.
Subspace random_subspace(Eigen::Index n, Eigen::Index k, std::uint64_t seed);

/// Same distribution, drawing from a live generator.
Subspace random_subspace(Eigen::Index n, Eigen::Index k, class Rng& rng);

/// Principal angles theta_1 <= ... <= theta_k in [0, pi/2] between two
/// k-subspaces, with paired principal vectors: |<x_i, y_i>| = cos theta_i
/// and <x_i, y_j> = 0 for i != j.
struct PrincipalDecomposition {
    RVector angles;        ///< ascending, radians
    CMatrix left_vectors;  ///< columns x_i, inside X
    CMatrix right_vectors; ///< columns y_i, inside Y
};

/// Computed from the SVD of X.frame^H * Y.frame; singular values are
/// clamped to [0,1] before arccos. Throws DimensionMismatch unless both
/// ambient dimension and k agree.
PrincipalDecomposition principal_angles(const Subspace& x, const Subspace& y);

/// Principal angles only, allowing different k (min(kx, ky) angles).
RVector principal_angle_spectrum(const Subspace& x, const Subspace& y);

/// Sum of squared cosines of all principal angles; equals the squared
/// Frobenius norm of the cross-Gram matrix. In [0, k].
double transition_probability(const Subspace& x, const Subspace& y);

/// dim of the intersection, counted as the number of principal angles at
/// zero (theta <= tol.angle). Requires equal ambient dimension.
Eigen::Index intersection_dim(const Subspace& x, const Subspace& y,
                              const Tolerances& tol = {});

/// Grassmann graph distance k - dim(intersection); needs equal k.
Eigen::Index subspace_distance(const Subspace& x, const Subspace& y,
                               const Tolerances& tol = {});

/// Distance-0 test (intersection dimension equals k).
bool same_subspace(const Subspace& x, const Subspace& y, const Tolerances& tol = {});

/// Frobenius norm of the projector difference; 0 iff same subspace.
double projector_distance(const Subspace& x, const Subspace& y);

/// All principal angles equal pi/2. Requires 2k <= n (otherwise no
/// orthogonal pairs exist) and equal k.
bool is_orthogonal(const Subspace& x, const Subspace& y, const Tolerances& tol = {});

/// Intersection has dimension k-1 (exactly one non-zero principal angle).
bool is_adjacent(const Subspace& x, const Subspace& y, const Tolerances& tol = {});

/// Adjacent with the unique non-zero principal angle equal to pi/2.
bool is_ortho_adjacent(const Subspace& x, const Subspace& y, const Tolerances& tol = {});

/// Commuting projectors (equivalently: every principal angle is 0 or pi/2).
/// k may differ; ambient dimension must agree.
bool is_compatible(const Subspace& x, const Subspace& y, const Tolerances& tol = {});

/// The two routes behind is_compatible, exposed for cross-checking.
bool compatible_by_commutator(const Subspace& x, const Subspace& y, double tol);
bool compatible_by_angles(const Subspace& x, const Subspace& y, double angle_tol);

/// The (n-k)-dimensional orthogonal complement. Requires k < n.
Subspace orthocomplement(const Subspace& x);

struct RelationReport {
    bool orthogonal = false;
    bool adjacent = false;
    bool ortho_adjacent = false;
    bool compatible = false;
    Eigen::Index intersection_dim = 0;
    Eigen::Index distance = 0;
};

/// Aggregate of the pairwise relations; consistent with the individual
/// predicates (orthogonal is reported false when 2k > n, where no
/// orthogonal pairs exist).
RelationReport relation_report(const Subspace& x, const Subspace& y,
                               const Tolerances& tol = {});

/// Samplers for pairs in a prescribed relation, used by the verification
/// suites. All draw from the given generator and are deterministic per
/// stream position.
std::pair<Subspace, Subspace> random_orthogonal_pair(Eigen::Index n, Eigen::Index k,
                                                     class Rng& rng); // needs 2k <= n
std::pair<Subspace, Subspace> random_adjacent_pair(Eigen::Index n, Eigen::Index k,
                                                   class Rng& rng); // generic angle
std::pair<Subspace, Subspace> random_ortho_adjacent_pair(Eigen::Index n, Eigen::Index k,
                                                         class Rng& rng);
/// Shares a random-dimension block of one Haar-rotated basis.
std::pair<Subspace, Subspace> random_compatible_pair(Eigen::Index n, Eigen::Index k,
                                                     class Rng& rng);

} // namespace grassgeo
