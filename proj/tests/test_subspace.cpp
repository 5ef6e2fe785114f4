#include <doctest.h>

#include <cmath>

#include "grassgeo/rng.hpp"
#include "grassgeo/subspace.hpp"

using namespace grassgeo;

namespace {

constexpr double kPi = 3.141592653589793;

Subspace coordinate_span(Eigen::Index n, std::initializer_list<int> indices) {
    CMatrix frame = CMatrix::Zero(n, static_cast<Eigen::Index>(indices.size()));
    Eigen::Index col = 0;
    for (int i : indices) frame(i, col++) = 1.0;
    return Subspace(std::move(frame));
}

} // namespace

TEST_CASE("random_subspace determinism and degenerate sizes") {
    const Subspace whole = random_subspace(1, 1, 42);
    CHECK(whole.dim() == 1);
    CHECK(std::abs(std::abs(whole.frame()(0, 0)) - 1.0) < 1e-14);

    const Subspace a = random_subspace(5, 2, 7);
    const Subspace b = random_subspace(5, 2, 7);
    CHECK((a.frame() - b.frame()).norm() == 0.0);

    CHECK_THROWS_AS(random_subspace(4, 0, 1), InvalidDimension);
    CHECK_THROWS_AS(random_subspace(4, 5, 1), InvalidDimension);
}

TEST_CASE("random_subspace satisfies the frame invariants over many seeds") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Subspace s = random_subspace(6, 3, seed);
        const double gram_err =
            (s.frame().adjoint() * s.frame() - CMatrix::Identity(3, 3)).norm();
        REQUIRE(gram_err <= 1e-10);
    }
}

TEST_CASE("principal angles of a subspace with itself vanish") {
    const Subspace x = random_subspace(6, 3, 5);
    const PrincipalDecomposition pd = principal_angles(x, x);
    CHECK(pd.angles.maxCoeff() <= 1e-7);
}

TEST_CASE("principal angles of orthogonal coordinate planes are right angles") {
    const Subspace x = coordinate_span(6, {0, 1});
    const Subspace y = coordinate_span(6, {2, 3});
    const PrincipalDecomposition pd = principal_angles(x, y);
    CHECK(pd.angles(0) == doctest::Approx(kPi / 2));
    CHECK(pd.angles(1) == doctest::Approx(kPi / 2));
}

TEST_CASE("block construction forces the angle spectrum (0, alpha)") {
    const double alpha = 0.3;
    CMatrix fy = CMatrix::Zero(6, 2);
    fy(0, 0) = std::cos(alpha);
    fy(2, 0) = std::sin(alpha);
    fy(1, 1) = 1.0;
    const Subspace x = coordinate_span(6, {0, 1});
    const Subspace y{std::move(fy)};
    const PrincipalDecomposition pd = principal_angles(x, y);
    CHECK(pd.angles(0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(pd.angles(1) == doctest::Approx(alpha));
}

TEST_CASE("principal decomposition invariants hold for random pairs") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const Subspace x = random_subspace(7, 3, rng);
        const Subspace y = random_subspace(7, 3, rng);
        const PrincipalDecomposition pd = principal_angles(x, y);
        for (Eigen::Index i = 0; i < 3; ++i) {
            CHECK(pd.angles(i) >= -1e-15);
            CHECK(pd.angles(i) <= kPi / 2 + 1e-15);
            if (i > 0) CHECK(pd.angles(i) >= pd.angles(i - 1) - 1e-12);
            const double pairing = std::abs(pd.left_vectors.col(i).dot(pd.right_vectors.col(i)));
            CHECK(std::abs(pairing - std::cos(pd.angles(i))) <= 1e-8);
            for (Eigen::Index j = 0; j < 3; ++j) {
                if (i == j) continue;
                CHECK(std::abs(pd.left_vectors.col(i).dot(pd.right_vectors.col(j))) <= 1e-8);
            }
        }
        // Left/right vectors are orthonormal inside their subspaces.
        CHECK((pd.left_vectors.adjoint() * pd.left_vectors - CMatrix::Identity(3, 3)).norm() <=
              1e-10);
        CHECK((pd.right_vectors.adjoint() * pd.right_vectors - CMatrix::Identity(3, 3)).norm() <=
              1e-10);
    }
}

TEST_CASE("variational characterization of the two smallest angles") {
    // Monte-Carlo oracle for the recursive minimization that defines the
    // principal angles.
    Rng rng(123);
    const Subspace x = random_subspace(6, 2, rng);
    const Subspace y = random_subspace(6, 2, rng);
    const PrincipalDecomposition pd = principal_angles(x, y);
    const CMatrix cross = x.frame().adjoint() * y.frame();
    const CVector a1 = x.frame().adjoint() * pd.left_vectors.col(0);
    const CVector b1 = y.frame().adjoint() * pd.right_vectors.col(0);

    double max_pairing = 0.0;
    double max_deflated = 0.0;
    for (int s = 0; s < 100000; ++s) {
        CVector a = rng.gaussian_matrix(2, 1).col(0);
        CVector b = rng.gaussian_matrix(2, 1).col(0);
        max_pairing = std::max(max_pairing, std::abs(a.dot(cross * b)) / (a.norm() * b.norm()));
        a -= a1 * a1.dot(a);
        b -= b1 * b1.dot(b);
        if (a.norm() > 1e-12 && b.norm() > 1e-12)
            max_deflated =
                std::max(max_deflated, std::abs(a.dot(cross * b)) / (a.norm() * b.norm()));
    }
    CHECK(max_pairing <= std::cos(pd.angles(0)) + 1e-9);
    CHECK(max_deflated <= std::cos(pd.angles(1)) + 1e-9);
    // The top principal pair attains the bound.
    CHECK(std::abs(pd.left_vectors.col(0).dot(pd.right_vectors.col(0))) ==
          doctest::Approx(std::cos(pd.angles(0))).epsilon(1e-8));
}

TEST_CASE("transition probability extremes and the one-line case") {
    const Subspace x = random_subspace(6, 2, 3);
    CHECK(transition_probability(x, x) == doctest::Approx(2.0));
    CHECK(transition_probability(coordinate_span(6, {0, 1}), coordinate_span(6, {2, 3})) ==
          doctest::Approx(0.0));

    CMatrix fy(2, 1);
    fy << Complex(1 / std::sqrt(2.0), 0), Complex(1 / std::sqrt(2.0), 0);
    const Subspace e1 = coordinate_span(2, {0});
    CHECK(transition_probability(e1, Subspace(std::move(fy))) == doctest::Approx(0.5));
}

TEST_CASE("orthogonality predicate") {
    CHECK(is_orthogonal(coordinate_span(4, {0}), coordinate_span(4, {1})));
    const Subspace x = random_subspace(6, 2, 8);
    CHECK_FALSE(is_orthogonal(x, x));

    // theta_1 = pi/2 - 0.01 is not orthogonal at a tight tolerance.
    const double eps = 0.01;
    CMatrix fy = CMatrix::Zero(6, 2);
    fy(0, 0) = std::sin(eps); // cos(pi/2 - eps)
    fy(2, 0) = std::cos(eps);
    fy(3, 1) = 1.0;
    Tolerances tight;
    tight.match = 1e-8;
    CHECK_FALSE(is_orthogonal(coordinate_span(6, {0, 1}), Subspace(std::move(fy)), tight));

    CHECK_THROWS_AS(is_orthogonal(random_subspace(3, 2, 1), random_subspace(3, 2, 2)),
                    DimensionMismatch);
}

TEST_CASE("adjacency predicate") {
    CHECK(is_adjacent(coordinate_span(6, {0, 1}), coordinate_span(6, {0, 2})));
    CHECK_FALSE(is_adjacent(coordinate_span(6, {0, 1}), coordinate_span(6, {2, 3})));

    // Replacing one frame vector by a fresh orthogonal direction forces
    // intersection dimension k-1.
    Rng rng(31);
    const Subspace x = random_subspace(7, 3, rng);
    const Subspace rest = orthocomplement(x);
    CMatrix frame = x.frame();
    frame.col(2) = rest.frame().col(0);
    CHECK(is_adjacent(x, Subspace(std::move(frame))));
}

TEST_CASE("ortho-adjacency predicate") {
    CHECK(is_ortho_adjacent(coordinate_span(6, {0, 1}), coordinate_span(6, {0, 2})));

    CMatrix fy = CMatrix::Zero(6, 2);
    fy(0, 0) = 1.0;
    fy(1, 1) = 1 / std::sqrt(2.0);
    fy(2, 1) = 1 / std::sqrt(2.0);
    CHECK_FALSE(is_ortho_adjacent(coordinate_span(6, {0, 1}), Subspace(std::move(fy))));
}

TEST_CASE("compatibility: incident, orthogonal and tilted pairs") {
    // Incident-or-orthogonal pairs are compatible.
    CHECK(is_compatible(coordinate_span(6, {0, 1}), coordinate_span(6, {0, 2})));
    CHECK(is_compatible(coordinate_span(6, {0, 1}), coordinate_span(6, {2, 3})));

    CMatrix fy(2, 1);
    fy << Complex(1 / std::sqrt(2.0), 0), Complex(1 / std::sqrt(2.0), 0);
    CHECK_FALSE(is_compatible(coordinate_span(2, {0}), Subspace(std::move(fy))));

    // Different k is allowed.
    CHECK(is_compatible(coordinate_span(6, {0}), coordinate_span(6, {0, 1})));
}

TEST_CASE("the commutator and angle-spectrum compatibility routes agree") {
    Rng rng(77);
    Tolerances tol;
    int checked = 0;
    const auto draw = [&rng](int kind) -> std::pair<Subspace, Subspace> {
        switch (kind) {
            case 0: return random_compatible_pair(6, 2, rng);
            case 1: return random_adjacent_pair(6, 2, rng);
            case 2: return random_ortho_adjacent_pair(6, 2, rng);
            default:
                return {random_subspace(6, 2, rng), random_subspace(6, 2, rng)};
        }
    };
    for (int trial = 0; trial < 2000; ++trial) {
        const std::pair<Subspace, Subspace> p = draw(trial % 4);
        REQUIRE(compatible_by_commutator(p.first, p.second, tol.match) ==
                compatible_by_angles(p.first, p.second, tol.angle));
        ++checked;
    }
    CHECK(checked == 2000);
}

TEST_CASE("compatible pairs admit a common orthogonal basis") {
    Rng rng(55);
    Tolerances tol;
    for (int trial = 0; trial < 50; ++trial) {
        const auto [x, y] = random_compatible_pair(7, 3, rng);
        REQUIRE(is_compatible(x, y, tol));
        const PrincipalDecomposition pd = principal_angles(x, y);
        // Angle-0 pairs give the shared part, pi/2 pairs split; nothing in
        // between may appear for a compatible pair.
        CMatrix x_part(7, 3), y_part(7, 3);
        for (Eigen::Index i = 0; i < 3; ++i) {
            const bool zero = pd.angles(i) <= tol.angle;
            const bool right = pd.angles(i) >= kPi / 2 - tol.angle;
            REQUIRE((zero || right));
            x_part.col(i) = pd.left_vectors.col(i);
            y_part.col(i) = zero ? pd.left_vectors.col(i) : pd.right_vectors.col(i);
        }
        CHECK(projector_distance(x, Subspace(CMatrix(x_part))) <= 1e-7);
        CHECK(projector_distance(y, Subspace(CMatrix(y_part))) <= 1e-7);
    }
}

TEST_CASE("orthocomplement basics") {
    const Subspace line = coordinate_span(3, {0});
    const Subspace perp = orthocomplement(line);
    CHECK(perp.dim() == 2);
    CHECK((line.frame().adjoint() * perp.frame()).norm() <= 1e-10);

    const Subspace x = random_subspace(7, 3, 2);
    CHECK(same_subspace(orthocomplement(orthocomplement(x)), x));

    // At n = 2k the complement is the unique orthogonal element.
    const Subspace h = random_subspace(6, 3, 4);
    CHECK(is_orthogonal(h, orthocomplement(h)));
}

TEST_CASE("relation report aggregates consistently") {
    Tolerances tol;
    const Subspace x = random_subspace(6, 2, 21);
    const RelationReport self = relation_report(x, x, tol);
    CHECK_FALSE(self.orthogonal);
    CHECK_FALSE(self.adjacent);
    CHECK_FALSE(self.ortho_adjacent);
    CHECK(self.compatible);
    CHECK(self.intersection_dim == 2);
    CHECK(self.distance == 0);

    Rng rng(63);
    const auto [ox, oy] = random_orthogonal_pair(6, 2, rng);
    const RelationReport orth = relation_report(ox, oy, tol);
    CHECK(orth.orthogonal);
    CHECK(orth.compatible);
    CHECK(orth.distance == 2);

    const auto [ax, ay] = random_adjacent_pair(6, 2, rng);
    const RelationReport adj = relation_report(ax, ay, tol);
    CHECK(adj.adjacent);
    CHECK(adj.distance == 1);

    // Invariants of the report itself on mixed pairs.
    for (int trial = 0; trial < 200; ++trial) {
        std::pair<Subspace, Subspace> p =
            trial % 2 == 0 ? random_ortho_adjacent_pair(6, 2, rng)
                           : std::pair<Subspace, Subspace>{random_subspace(6, 2, rng),
                                                           random_subspace(6, 2, rng)};
        const RelationReport rep = relation_report(p.first, p.second, tol);
        if (rep.ortho_adjacent) CHECK(rep.adjacent);
        if (rep.orthogonal) CHECK(rep.compatible);
        CHECK(rep.distance == 2 - rep.intersection_dim);
    }
}

TEST_CASE("angle count matches the rank route for intersection dimension") {
    Rng rng(17);
    Tolerances tol;
    for (int trial = 0; trial < 300; ++trial) {
        std::pair<Subspace, Subspace> p =
            trial % 2 == 0 ? random_compatible_pair(7, 3, rng)
                           : random_adjacent_pair(7, 3, rng);
        CMatrix joint(7, 6);
        joint << p.first.frame(), p.second.frame();
        const Eigen::Index by_rank = 6 - numerical_rank(joint);
        CHECK(intersection_dim(p.first, p.second, tol) == by_rank);
    }
}

TEST_CASE("symmetry and unitary invariance of the angle spectrum") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const Subspace x = random_subspace(6, 2, rng);
        const Subspace y = random_subspace(6, 2, rng);
        const RVector xy = principal_angles(x, y).angles;
        const RVector yx = principal_angles(y, x).angles;
        CHECK((xy - yx).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("subspace equality is projective, not frame equality") {
    const Subspace x = random_subspace(5, 2, 9);
    Rng rng(10);
    const CMatrix mix = orthonormalize(rng.gaussian_matrix(2, 2));
    const Subspace same(CMatrix(x.frame() * mix));
    CHECK(same_subspace(x, same));
    CHECK((x.frame() - same.frame()).norm() > 1e-3);
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(principal_angles(random_subspace(5, 2, 0), random_subspace(6, 2, 0)),
                    DimensionMismatch);
    CHECK_THROWS_AS(principal_angles(random_subspace(6, 2, 0), random_subspace(6, 3, 0)),
                    DimensionMismatch);
    CHECK_THROWS_AS(transition_probability(random_subspace(6, 2, 0), random_subspace(6, 3, 0)),
                    DimensionMismatch);
}
