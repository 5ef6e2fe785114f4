#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "grassgeo/errors.hpp"

namespace grassgeo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Numerical knobs shared across the library. Rank decisions use a single
/// relative threshold so that all predicates built on them (adjacency,
/// orthogonality, compatibility) stay mutually consistent; angle decisions
/// get a looser dedicated knob because arccos amplifies roundoff near 0.
struct Tolerances {
    double rank_rel = 1e-8;  ///< rank threshold, relative to sigma_max
    double angle = 1e-7;     ///< radians, for "theta == 0" / "theta == pi/2"
    double match = 1e-6;     ///< projective / validation residuals
};

struct SvdResult {
    CMatrix U;               ///< orthonormal columns
    RVector singular_values; ///< descending, non-negative
    CMatrix V;               ///< orthonormal columns
};

/// Thin SVD of a non-empty matrix. Throws NoConvergence if the iteration
/// fails (pathological input) and InvalidDimension on empty input.
SvdResult svd(const CMatrix& a);

/// Orthonormal frame with the same column span as `a`. Deterministic:
/// Householder QR with the R diagonal made real positive, so an already
/// orthonormal input is returned unchanged up to roundoff. Throws
/// RankDeficient when the numerical rank of `a` is below its column count.
CMatrix orthonormalize(const CMatrix& a, double rank_rel = 1e-8);

/// Number of singular values above `tol`. When `tol` is not given it
/// defaults to rank_rel * sigma_max with rank_rel = 1e-8.
Eigen::Index numerical_rank(const CMatrix& a, std::optional<double> tol = std::nullopt,
                            double rank_rel = 1e-8);

/// Orthonormal frame of the intersection of span(x) and span(y), for
/// orthonormal frames x, y in the
/// same ambient dimension. Computed from the null space of [x | -y]; returns
/// an ambient x 0 matrix when the intersection is trivial.
CMatrix intersect_spans(const CMatrix& x, const CMatrix& y, double rank_rel = 1e-8);

/// Orthonormal basis of the column space of `a` (any rank).
CMatrix span_basis(const CMatrix& a, double rank_rel = 1e-8);

/// True when every entry is finite (no NaN / Inf).
bool all_finite(const CMatrix& a);

} // namespace grassgeo
