#include "grassgeo/linalg.hpp"

#include <cmath>

namespace grassgeo {

bool all_finite(const CMatrix& a) {
    return a.allFinite();
}

SvdResult svd(const CMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0)
        throw InvalidDimension("svd: matrix must be non-empty");
    if (!all_finite(a))
        throw InvalidDimension("svd: matrix has non-finite entries");

    Eigen::JacobiSVD<CMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        throw NoConvergence("svd: iteration did not converge");

    return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

Eigen::Index numerical_rank(const CMatrix& a, std::optional<double> tol, double rank_rel) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    const SvdResult dec = svd(a);
    const double smax = dec.singular_values.size() > 0 ? dec.singular_values(0) : 0.0;
    const double threshold = tol.value_or(rank_rel * smax);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < dec.singular_values.size(); ++i)
        if (dec.singular_values(i) > threshold) ++r;
    return r;
}

CMatrix orthonormalize(const CMatrix& a, double rank_rel) {
    const Eigen::Index k = a.cols();
    if (a.rows() == 0 || k == 0)
        throw InvalidDimension("orthonormalize: matrix must be non-empty");
    if (numerical_rank(a, std::nullopt, rank_rel) < k)
        throw RankDeficient("orthonormalize: numerical rank below column count");

    Eigen::HouseholderQR<CMatrix> qr(a);
    CMatrix q = qr.householderQ() * CMatrix::Identity(a.rows(), k);
    const CMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    // Fix column phases so that A = Q R with a real positive R diagonal.
    for (Eigen::Index j = 0; j < k; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

CMatrix span_basis(const CMatrix& a, double rank_rel) {
    if (a.rows() == 0 || a.cols() == 0) return CMatrix(a.rows(), 0);
    const SvdResult dec = svd(a);
    const double threshold = rank_rel * dec.singular_values(0);
    Eigen::Index r = 0;
    while (r < dec.singular_values.size() && dec.singular_values(r) > threshold) ++r;
    return dec.U.leftCols(r);
}

CMatrix intersect_spans(const CMatrix& x, const CMatrix& y, double rank_rel) {
    if (x.rows() != y.rows())
        throw DimensionMismatch("intersect_spans: ambient dimensions differ");
    const Eigen::Index n = x.rows();
    const Eigen::Index kx = x.cols();
    const Eigen::Index ky = y.cols();
    if (kx == 0 || ky == 0) return CMatrix(n, 0);

    CMatrix stacked(n, kx + ky);
    stacked << x, -y;

    Eigen::JacobiSVD<CMatrix> dec(stacked, Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success)
        throw NoConvergence("intersect_spans: SVD did not converge");
    const double threshold = rank_rel * dec.singularValues()(0);

    // Null vectors (u; w) of [x | -y] satisfy x u = y w; each yields the
    // intersection vector x u (norm 1/sqrt(2) for orthonormal frames).
    // Columns of the full V beyond min(n, kx+ky) carry implicit sigma = 0.
    std::vector<Eigen::Index> null_cols;
    for (Eigen::Index i = 0; i < kx + ky; ++i) {
        const double s = i < dec.singularValues().size() ? dec.singularValues()(i) : 0.0;
        if (s <= threshold) null_cols.push_back(i);
    }
    if (null_cols.empty()) return CMatrix(n, 0);

    CMatrix result(n, static_cast<Eigen::Index>(null_cols.size()));
    for (std::size_t j = 0; j < null_cols.size(); ++j)
        result.col(static_cast<Eigen::Index>(j)) =
            x * dec.matrixV().block(0, null_cols[j], kx, 1) * std::sqrt(2.0);
    return orthonormalize(result, rank_rel);
}

} // namespace grassgeo
