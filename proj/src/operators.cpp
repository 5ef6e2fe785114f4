#include "grassgeo/operators.hpp"

#include <cmath>

#include "grassgeo/rng.hpp"

namespace grassgeo {

CVector apply(const SemilinearOperator& op, const CVector& v) {
    if (v.size() != op.matrix.cols())
        throw DimensionMismatch("apply: vector has wrong dimension");
    return op.matrix * op.twist(v);
}

Subspace induced_map(const SemilinearOperator& op, const Subspace& x) {
    const Eigen::Index n = op.matrix.rows();
    if (op.matrix.cols() != n)
        throw DimensionMismatch("induced_map: operator must be square");
    if (x.ambient_dim() != n)
        throw DimensionMismatch("induced_map: subspace has wrong ambient dimension");
    if (numerical_rank(op.matrix) < n)
        throw SingularOperator("induced_map: operator is not injective");
    return Subspace::from_span(op.matrix * op.twist(x.frame()));
}

SemilinearOperator random_unitary(Eigen::Index n, std::uint64_t seed) {
    if (n < 1)
        throw InvalidDimension("random_unitary: n must be positive");
    Rng rng(seed);
    return SemilinearOperator{orthonormalize(rng.gaussian_matrix(n, n)), FieldEndo::identity};
}

SemilinearOperator random_antiunitary(Eigen::Index n, std::uint64_t seed) {
    SemilinearOperator op = random_unitary(n, seed);
    op.endo = FieldEndo::conjugation;
    return op;
}

NormalizedIsometry normalize_to_isometry(const SemilinearOperator& op, const Tolerances& tol) {
    const Eigen::Index n = op.matrix.rows();
    if (op.matrix.cols() != n)
        throw DimensionMismatch("normalize_to_isometry: operator must be square");
    if (n < 3)
        throw InvalidDimension("normalize_to_isometry: ambient dimension must be >= 3");
    if (numerical_rank(op.matrix) < n)
        throw SingularOperator("normalize_to_isometry: operator is not injective");

    // Witness set: images of e_i must be mutually orthogonal; the images of
    // the orthogonal pairs (e_i + e_j, e_i - e_j) and (e_i + i e_j,
    // e_i - i e_j) stay orthogonal only if the column norms agree. Together
    // these force op = b * isometry.
    const CMatrix& m = op.matrix;
    const Complex s_i = op.endo == FieldEndo::conjugation ? Complex(0, -1) : Complex(0, 1);
    const double scale2 = m.squaredNorm() / static_cast<double>(n);
    const double gate = tol.match * scale2;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const CVector ci = m.col(i);
            const CVector cj = m.col(j);
            if (std::abs(ci.dot(cj)) > gate)
                throw NotOrthogonalityPreserving(
                    "normalize_to_isometry: basis images not orthogonal");
            const Complex plus_minus = (ci + cj).dot(ci - cj);
            if (std::abs(plus_minus) > gate)
                throw NotOrthogonalityPreserving(
                    "normalize_to_isometry: images of e_i +/- e_j not orthogonal");
            const Complex plus_minus_im = (ci + s_i * cj).dot(ci - s_i * cj);
            if (std::abs(plus_minus_im) > gate)
                throw NotOrthogonalityPreserving(
                    "normalize_to_isometry: images of e_i +/- i e_j not orthogonal");
        }
    }

    const double b = std::sqrt(scale2);
    NormalizedIsometry out;
    out.scale = b;
    out.isometry = SemilinearOperator{m / b, op.endo};
    if ((out.isometry.matrix.adjoint() * out.isometry.matrix - CMatrix::Identity(n, n)).norm() >
        1e-10)
        throw NotOrthogonalityPreserving("normalize_to_isometry: result is not an isometry");
    return out;
}

ProjectiveMatch projective_equal(const SemilinearOperator& a, const SemilinearOperator& b,
                                 double match_tol) {
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
        throw DimensionMismatch("projective_equal: shapes differ");

    ProjectiveMatch out;
    if (a.endo != b.endo) {
        out.matched = false;
        out.residual = (a.matrix - b.matrix).norm();
        return out;
    }
    const Complex t = (b.matrix.adjoint() * a.matrix).trace();
    out.phase = std::abs(t) > 0.0 ? t / std::abs(t) : Complex(1.0);
    out.residual = (a.matrix - out.phase * b.matrix).norm();
    out.matched = out.residual <= match_tol * std::sqrt(static_cast<double>(a.matrix.rows()));
    return out;
}

CMatrix canonical_phase(const CMatrix& m) {
    if (m.cols() == 0) return m;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Complex v = m(i, 0);
        if (std::abs(v) > 1e-8) return m * (std::conj(v) / std::abs(v));
    }
    return m;
}

} // namespace grassgeo
