#include "grassgeo/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "grassgeo/rng.hpp"

namespace grassgeo {

namespace {

constexpr double kFrameOrthonormalityTol = 1e-10;
constexpr double kHalfPi = 1.5707963267948966;

void require_same_shape(const Subspace& x, const Subspace& y) {
    if (x.ambient_dim() != y.ambient_dim())
        throw DimensionMismatch("subspaces live in different ambient dimensions");
    if (x.dim() != y.dim())
        throw DimensionMismatch("subspaces have different dimensions");
}

void require_same_ambient(const Subspace& x, const Subspace& y) {
    if (x.ambient_dim() != y.ambient_dim())
        throw DimensionMismatch("subspaces live in different ambient dimensions");
}

} // namespace

Subspace::Subspace(CMatrix frame) : frame_(std::move(frame)) {
    const Eigen::Index n = frame_.rows();
    const Eigen::Index k = frame_.cols();
    if (k < 1 || n < 1 || k > n)
        throw InvalidDimension("subspace needs 1 <= k <= n");
    if (!all_finite(frame_))
        throw InvalidDimension("subspace frame has non-finite entries");
    const CMatrix gram = frame_.adjoint() * frame_;
    if ((gram - CMatrix::Identity(k, k)).norm() > kFrameOrthonormalityTol)
        throw InvalidDimension("subspace frame is not orthonormal");
}

Subspace Subspace::from_span(const CMatrix& a, double rank_rel) {
    return Subspace(orthonormalize(a, rank_rel));
}

Subspace random_subspace(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
    Rng rng(seed);
    return random_subspace(n, k, rng);
}

Subspace random_subspace(Eigen::Index n, Eigen::Index k, Rng& rng) {
    if (k < 1 || k > n)
        throw InvalidDimension("random_subspace needs 1 <= k <= n");
    return Subspace::from_span(rng.gaussian_matrix(n, k));
}

PrincipalDecomposition principal_angles(const Subspace& x, const Subspace& y) {
    require_same_shape(x, y);
    const Eigen::Index k = x.dim();

    const SvdResult dec = svd(x.frame().adjoint() * y.frame());

    // Singular values descend and arccos is decreasing, so the angles come
    // out ascending in the same column order as the singular vectors.
    PrincipalDecomposition out;
    out.angles.resize(k);
    out.left_vectors.resize(x.ambient_dim(), k);
    out.right_vectors.resize(x.ambient_dim(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double c = std::clamp(dec.singular_values(i), 0.0, 1.0);
        out.angles(i) = std::acos(c);
        out.left_vectors.col(i) = x.frame() * dec.U.col(i);
        out.right_vectors.col(i) = y.frame() * dec.V.col(i);
    }
    return out;
}

RVector principal_angle_spectrum(const Subspace& x, const Subspace& y) {
    require_same_ambient(x, y);
    const SvdResult dec = svd(x.frame().adjoint() * y.frame());
    const Eigen::Index m = dec.singular_values.size();
    RVector angles(m);
    for (Eigen::Index i = 0; i < m; ++i)
        angles(i) = std::acos(std::clamp(dec.singular_values(i), 0.0, 1.0));
    return angles;
}

double transition_probability(const Subspace& x, const Subspace& y) {
    require_same_shape(x, y);
    return (x.frame().adjoint() * y.frame()).squaredNorm();
}

Eigen::Index intersection_dim(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    require_same_ambient(x, y);
    const RVector angles = principal_angle_spectrum(x, y);
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < angles.size(); ++i)
        if (angles(i) <= tol.angle) ++m;
    return m;
}

Eigen::Index subspace_distance(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    require_same_shape(x, y);
    return x.dim() - intersection_dim(x, y, tol);
}

bool same_subspace(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    if (x.ambient_dim() != y.ambient_dim() || x.dim() != y.dim()) return false;
    return intersection_dim(x, y, tol) == x.dim();
}

double projector_distance(const Subspace& x, const Subspace& y) {
    require_same_ambient(x, y);
    return (x.projector() - y.projector()).norm();
}

bool is_orthogonal(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    require_same_shape(x, y);
    if (2 * x.dim() > x.ambient_dim())
        throw DimensionMismatch("is_orthogonal requires 2k <= n");
    return (x.frame().adjoint() * y.frame()).norm() <= tol.match;
}

bool is_adjacent(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    require_same_shape(x, y);
    return intersection_dim(x, y, tol) == x.dim() - 1;
}

bool is_ortho_adjacent(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    if (!is_adjacent(x, y, tol)) return false;
    const RVector angles = principal_angle_spectrum(x, y);
    return angles(angles.size() - 1) >= kHalfPi - tol.angle;
}

bool compatible_by_commutator(const Subspace& x, const Subspace& y, double tol) {
    const CMatrix px = x.projector();
    const CMatrix py = y.projector();
    return (px * py - py * px).norm() <= tol;
}

bool compatible_by_angles(const Subspace& x, const Subspace& y, double angle_tol) {
    const RVector angles = principal_angle_spectrum(x, y);
    for (Eigen::Index i = 0; i < angles.size(); ++i)
        if (angles(i) > angle_tol && angles(i) < kHalfPi - angle_tol) return false;
    return true;
}

bool is_compatible(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    require_same_ambient(x, y);
    return compatible_by_commutator(x, y, tol.match);
}

Subspace orthocomplement(const Subspace& x) {
    const Eigen::Index n = x.ambient_dim();
    const Eigen::Index k = x.dim();
    if (k >= n)
        throw InvalidDimension("orthocomplement requires k < n");
    Eigen::HouseholderQR<CMatrix> qr(x.frame());
    const CMatrix full = qr.householderQ() * CMatrix::Identity(n, n);
    return Subspace(full.rightCols(n - k));
}

std::pair<Subspace, Subspace> random_orthogonal_pair(Eigen::Index n, Eigen::Index k, Rng& rng) {
    if (2 * k > n)
        throw InvalidDimension("random_orthogonal_pair needs 2k <= n");
    const Subspace x = random_subspace(n, k, rng);
    const Subspace rest = orthocomplement(x);
    const CMatrix mix = orthonormalize(rng.gaussian_matrix(n - k, k));
    return {x, Subspace(CMatrix(rest.frame() * mix))};
}

std::pair<Subspace, Subspace> random_adjacent_pair(Eigen::Index n, Eigen::Index k, Rng& rng) {
    if (k + 1 > n)
        throw InvalidDimension("random_adjacent_pair needs k < n");
    const Subspace x = random_subspace(n, k, rng);
    const Subspace rest = orthocomplement(x);
    const CMatrix mix = orthonormalize(rng.gaussian_matrix(n - k, 1));
    const CVector outside = rest.frame() * mix;
    // Swing the last frame vector by an angle bounded away from 0 and pi/2
    // so the pair is robustly adjacent but not ortho-adjacent.
    const double angle = 0.3 + 0.9 * rng.uniform();
    const Complex phase = std::polar(1.0, 2.0 * M_PI * rng.uniform());
    CMatrix frame = x.frame();
    frame.col(k - 1) = std::cos(angle) * x.frame().col(k - 1) +
                       phase * std::sin(angle) * outside;
    return {x, Subspace(std::move(frame))};
}

std::pair<Subspace, Subspace> random_ortho_adjacent_pair(Eigen::Index n, Eigen::Index k,
                                                         Rng& rng) {
    if (k + 1 > n)
        throw InvalidDimension("random_ortho_adjacent_pair needs k < n");
    const Subspace x = random_subspace(n, k, rng);
    const Subspace rest = orthocomplement(x);
    const CMatrix mix = orthonormalize(rng.gaussian_matrix(n - k, 1));
    CMatrix frame = x.frame();
    frame.col(k - 1) = rest.frame() * mix;
    return {x, Subspace(std::move(frame))};
}

std::pair<Subspace, Subspace> random_compatible_pair(Eigen::Index n, Eigen::Index k, Rng& rng) {
    if (k >= n)
        throw InvalidDimension("random_compatible_pair needs k < n");
    const CMatrix basis = orthonormalize(rng.gaussian_matrix(n, n));
    const Eigen::Index m_min = std::max<Eigen::Index>(0, 2 * k - n);
    // Shared block size in [m_min, k-1]; keeping it below k makes the pair
    // distinct.
    const Eigen::Index m = m_min + rng.uniform_index(k - m_min);
    const std::vector<int> order = rng.permutation(static_cast<int>(n));

    CMatrix fx(n, k), fy(n, k);
    for (Eigen::Index j = 0; j < k; ++j) fx.col(j) = basis.col(order[j]);
    for (Eigen::Index j = 0; j < m; ++j) fy.col(j) = basis.col(order[j]);
    for (Eigen::Index j = m; j < k; ++j) fy.col(j) = basis.col(order[k + (j - m)]);
    return {Subspace(std::move(fx)), Subspace(std::move(fy))};
}

RelationReport relation_report(const Subspace& x, const Subspace& y, const Tolerances& tol) {
    require_same_shape(x, y);
    const Eigen::Index k = x.dim();
    const RVector angles = principal_angle_spectrum(x, y);

    RelationReport rep;
    for (Eigen::Index i = 0; i < k; ++i)
        if (angles(i) <= tol.angle) ++rep.intersection_dim;
    rep.distance = k - rep.intersection_dim;
    // No orthogonal pairs exist when 2k > n; report false rather than error
    // so the aggregate stays total.
    rep.orthogonal = 2 * k <= x.ambient_dim() &&
                     (x.frame().adjoint() * y.frame()).norm() <= tol.match;
    rep.adjacent = rep.intersection_dim == k - 1;
    rep.ortho_adjacent = rep.adjacent && angles(k - 1) >= kHalfPi - tol.angle;
    rep.compatible = compatible_by_commutator(x, y, tol.match);
    return rep;
}

} // namespace grassgeo
