#pragma once

#include <cstdint>

#include "grassgeo/subspace.hpp"

namespace grassgeo {

/// Field endomorphism of C attached to a semilinear operator. Only the two
/// continuous endomorphisms are representable numerically; non-continuous
/// ones exist but cannot be evaluated.
enum class FieldEndo { identity, conjugation };

/// A semilinear operator v -> matrix * sigma(v), where sigma conjugates
/// every entry when endo == conjugation. Unitary / anti-unitary operators
/// are the bijective isometric cases.
struct SemilinearOperator {
    CMatrix matrix;
    FieldEndo endo = FieldEndo::identity;

    Eigen::Index ambient_dim() const { return matrix.rows(); }

    /// sigma(v): identity or entrywise conjugation.
    CVector twist(const CVector& v) const {
        return endo == FieldEndo::conjugation ? v.conjugate() : v;
    }
    CMatrix twist(const CMatrix& m) const {
        return endo == FieldEndo::conjugation ? m.conjugate() : m;
    }
};

/// matrix * sigma(v). Throws DimensionMismatch.
CVector apply(const SemilinearOperator& op, const CVector& v);

/// Image subspace: orthonormalized span of the columnwise images. Requires
/// an injective operator (throws SingularOperator).
Subspace induced_map(const SemilinearOperator& op, const Subspace& x);

/// Haar-distributed unitary: QR of a complex Gaussian with the R diagonal
/// made real positive. Deterministic per seed.
SemilinearOperator random_unitary(Eigen::Index n, std::uint64_t seed);

/// Same matrix distribution with endo = conjugation.
SemilinearOperator random_antiunitary(Eigen::Index n, std::uint64_t seed);

struct NormalizedIsometry {
    SemilinearOperator isometry; ///< matrix^H matrix = I within 1e-10
    double scale = 0.0;          ///< b > 0 with input = b * isometry
};

/// Splits an injective orthogonality-preserving operator into b * L' with
/// L' an isometry. Orthogonality preservation is tested on the finite
/// witness set that forces the conclusion: basis vectors e_i, the sums
/// e_i +/- e_j and e_i +/- i e_j. Requires ambient dimension >= 3; throws
/// NotOrthogonalityPreserving / SingularOperator / InvalidDimension.
NormalizedIsometry normalize_to_isometry(const SemilinearOperator& op,
                                         const Tolerances& tol = {});

struct ProjectiveMatch {
    bool matched = false;
    Complex phase = 1.0;   ///< unit scalar c minimizing |L1 - c L2|
    double residual = 0.0; ///< Frobenius norm at the optimum
};

/// Projective comparison: c is the phase of trace(L2^H L1); matched iff the
/// residual is at most match_tol * sqrt(n). Operators with different endo
/// flags never match (by contract, not by error).
ProjectiveMatch projective_equal(const SemilinearOperator& a, const SemilinearOperator& b,
                                 double match_tol = 1e-6);

/// Deterministic projective representative: scales by a unit phase so the
/// first non-zero entry of the first column is real positive.
CMatrix canonical_phase(const CMatrix& m);

} // namespace grassgeo
