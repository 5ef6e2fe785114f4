#include <doctest.h>

#include "grassgeo/linalg.hpp"
#include "grassgeo/rng.hpp"

using namespace grassgeo;

TEST_CASE("orthonormalize keeps an identity frame") {
    const CMatrix eye = CMatrix::Identity(3, 3);
    const CMatrix q = orthonormalize(eye);
    CHECK((q - eye).norm() < 1e-14);
}

TEST_CASE("orthonormalize normalizes a single column") {
    CMatrix a(2, 1);
    a << Complex(3, 0), Complex(0, 4);
    const CMatrix q = orthonormalize(a);
    CHECK(std::abs(q(0, 0) - Complex(0.6, 0)) < 1e-14);
    CHECK(std::abs(q(1, 0) - Complex(0, 0.8)) < 1e-14);
}

TEST_CASE("orthonormalize of a random tall matrix spans the same columns") {
    Rng rng(11);
    const CMatrix a = rng.gaussian_matrix(5, 2);
    const CMatrix q = orthonormalize(a);
    CHECK((q.adjoint() * q - CMatrix::Identity(2, 2)).norm() <= 1e-12);
    CMatrix joint(5, 4);
    joint << a, q;
    CHECK(numerical_rank(joint) == 2); // span unchanged: rank([A|Q]) = cols(A)
}

TEST_CASE("orthonormalize rejects rank-deficient input") {
    CMatrix a(3, 2);
    a.col(0) << 1.0, 2.0, Complex(0, 1);
    a.col(1) = 2.0 * a.col(0);
    CHECK_THROWS_AS(orthonormalize(a), RankDeficient);
}

TEST_CASE("svd of a diagonal matrix") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    const SvdResult dec = svd(a);
    CHECK(dec.singular_values(0) == doctest::Approx(3.0));
    CHECK(dec.singular_values(1) == doctest::Approx(1.0));
}

TEST_CASE("svd of the zero matrix") {
    const SvdResult dec = svd(CMatrix::Zero(2, 2));
    CHECK(dec.singular_values(0) == 0.0);
    CHECK(dec.singular_values(1) == 0.0);
}

TEST_CASE("svd reconstructs a random matrix") {
    Rng rng(3);
    const CMatrix a = rng.gaussian_matrix(4, 3);
    const SvdResult dec = svd(a);
    const CMatrix back = dec.U * dec.singular_values.asDiagonal() * dec.V.adjoint();
    CHECK((a - back).norm() <= 1e-10 * std::max(1.0, a.norm()));
    for (Eigen::Index i = 0; i + 1 < dec.singular_values.size(); ++i)
        CHECK(dec.singular_values(i) >= dec.singular_values(i + 1));
}

TEST_CASE("svd rejects empty input") {
    CHECK_THROWS_AS(svd(CMatrix(0, 0)), InvalidDimension);
}

TEST_CASE("numerical rank basics") {
    CHECK(numerical_rank(CMatrix::Identity(4, 4)) == 4);
    CHECK(numerical_rank(CMatrix::Zero(3, 3)) == 0);
}

TEST_CASE("numerical rank of frames sharing one generator") {
    // Two rank-2 frames in C^6 constructed over an explicit shared column.
    Rng rng(17);
    const CMatrix shared = orthonormalize(rng.gaussian_matrix(6, 1));
    CMatrix x(6, 2), y(6, 2);
    x.col(0) = shared.col(0);
    x.col(1) = rng.gaussian_matrix(6, 1).col(0);
    y.col(0) = shared.col(0);
    y.col(1) = rng.gaussian_matrix(6, 1).col(0);
    CMatrix joint(6, 4);
    joint << orthonormalize(x), orthonormalize(y);
    CHECK(numerical_rank(joint) == 3);
}

TEST_CASE("intersect_spans of identical frames") {
    Rng rng(5);
    const CMatrix x = orthonormalize(rng.gaussian_matrix(5, 2));
    const CMatrix common = intersect_spans(x, x);
    REQUIRE(common.cols() == 2);
    // Columns of the intersection stay inside both spans.
    const CMatrix proj = x * x.adjoint();
    CHECK((proj * common - common).norm() <= 1e-8);
}

TEST_CASE("intersect_spans of orthogonal coordinate planes is empty") {
    CMatrix x = CMatrix::Zero(6, 2), y = CMatrix::Zero(6, 2);
    x(0, 0) = 1.0;
    x(1, 1) = 1.0;
    y(2, 0) = 1.0;
    y(3, 1) = 1.0;
    CHECK(intersect_spans(x, y).cols() == 0);
}

TEST_CASE("intersect_spans recovers a shared coordinate line") {
    CMatrix x = CMatrix::Zero(6, 2), y = CMatrix::Zero(6, 2);
    x(0, 0) = 1.0;
    x(1, 1) = 1.0; // span(e1, e2)
    y(1, 0) = 1.0;
    y(2, 1) = 1.0; // span(e2, e3)
    const CMatrix common = intersect_spans(x, y);
    REQUIRE(common.cols() == 1);
    CHECK(std::abs(std::abs(common(1, 0)) - 1.0) < 1e-10);
}

TEST_CASE("intersection dimension formula holds for random frame pairs") {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const CMatrix x = orthonormalize(rng.gaussian_matrix(6, 2));
        const CMatrix y = orthonormalize(rng.gaussian_matrix(6, 3));
        CMatrix joint(6, 5);
        joint << x, y;
        const Eigen::Index r = numerical_rank(joint);
        const CMatrix common = intersect_spans(x, y);
        CHECK(common.cols() + r == x.cols() + y.cols());
        CHECK((intersect_spans(y, x).cols()) == common.cols());
        for (Eigen::Index c = 0; c < common.cols(); ++c) {
            const CVector v = common.col(c);
            CHECK((x * (x.adjoint() * v) - v).norm() <= 1e-8);
            CHECK((y * (y.adjoint() * v) - v).norm() <= 1e-8);
        }
    }
}

TEST_CASE("orthonormalize is projectively idempotent") {
    Rng rng(29);
    const CMatrix a = rng.gaussian_matrix(7, 3);
    const CMatrix q1 = orthonormalize(a);
    const CMatrix q2 = orthonormalize(q1);
    CHECK(intersect_spans(q1, q2).cols() == 3);
}
