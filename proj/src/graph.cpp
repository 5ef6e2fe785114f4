#include "grassgeo/graph.hpp"

#include <cmath>
#include <deque>

#include "grassgeo/rng.hpp"

namespace grassgeo {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

/// Orthonormal basis of the orthogonal complement of a single unit vector.
CMatrix complement_of_vector(const CVector& v) {
    const Eigen::Index n = v.size();
    Eigen::HouseholderQR<CMatrix> qr{CMatrix(v)};
    const CMatrix full = qr.householderQ() * CMatrix::Identity(n, n);
    return full.rightCols(n - 1);
}

} // namespace

std::vector<std::vector<int>> k_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<std::vector<int>> GrassmannGraphView::adjacency_lists() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (const auto& [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

GrassmannGraphView build_graph(std::vector<Subspace> vertices, const Tolerances& tol) {
    GrassmannGraphView g;
    if (vertices.empty()) return g;
    g.n = vertices.front().ambient_dim();
    g.k = vertices.front().dim();
    for (const auto& v : vertices)
        if (v.ambient_dim() != g.n || v.dim() != g.k)
            throw MixedDimensions("build_graph: vertices must share (n, k)");
    const int m = static_cast<int>(vertices.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            if (same_subspace(vertices[i], vertices[j], tol))
                throw DuplicateVertex("build_graph: vertices " + std::to_string(i) + " and " +
                                      std::to_string(j) + " coincide");
            if (is_adjacent(vertices[i], vertices[j], tol)) g.edges.emplace_back(i, j);
        }
    g.vertices = std::move(vertices);
    return g;
}

int graph_distance(const GrassmannGraphView& g, int a, int b) {
    const int m = static_cast<int>(g.vertices.size());
    if (a < 0 || a >= m || b < 0 || b >= m)
        throw InvalidDimension("graph_distance: vertex index out of range");
    if (a == b) return 0;
    const auto adj = g.adjacency_lists();
    std::vector<int> dist(m, -1);
    std::deque<int> queue{a};
    dist[a] = 0;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : adj[v]) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[v] + 1;
            if (w == b) return dist[w];
            queue.push_back(w);
        }
    }
    throw Unreachable("graph_distance: no path inside this view");
}

std::vector<Subspace> geodesic_between(const Subspace& x, const Subspace& y,
                                       const Tolerances& tol) {
    if (x.ambient_dim() != y.ambient_dim() || x.dim() != y.dim())
        throw DimensionMismatch("geodesic_between: subspaces must share (n, k)");
    if (same_subspace(x, y, tol))
        throw InvalidDimension("geodesic_between: endpoints coincide");

    const PrincipalDecomposition pd = principal_angles(x, y);
    const Eigen::Index k = x.dim();
    std::vector<Eigen::Index> moving; // indices with non-zero angle, ascending
    for (Eigen::Index i = 0; i < k; ++i)
        if (pd.angles(i) > tol.angle) moving.push_back(i);
    const auto d = static_cast<Eigen::Index>(moving.size());

    std::vector<Subspace> path;
    path.reserve(d + 1);
    path.push_back(x);
    // Intermediate vertex j: left principal vectors with the first j moving
    // directions swapped for the matching right ones. Cross-orthogonality of
    // principal vectors keeps every such frame orthonormal.
    for (Eigen::Index j = 1; j < d; ++j) {
        CMatrix frame = pd.left_vectors;
        for (Eigen::Index t = 0; t < j; ++t)
            frame.col(moving[t]) = pd.right_vectors.col(moving[t]);
        path.emplace_back(std::move(frame));
    }
    path.push_back(y);
    return path;
}

std::vector<Subspace> geodesic_through_to_orthogonal(const Subspace& x, const Subspace& y,
                                                     const Tolerances& tol) {
    if (x.ambient_dim() != y.ambient_dim() || x.dim() != y.dim())
        throw DimensionMismatch("geodesic_through_to_orthogonal: subspaces must share (n, k)");
    const Eigen::Index n = x.ambient_dim();
    const Eigen::Index k = x.dim();
    if (2 * k > n)
        throw InsufficientAmbient("geodesic_through_to_orthogonal requires 2k <= n");
    if (same_subspace(x, y, tol))
        throw InvalidDimension("geodesic_through_to_orthogonal: endpoints coincide");
    if (!is_compatible(x, y, tol))
        throw NotCompatible("geodesic_through_to_orthogonal: inputs are not compatible");

    // For a compatible pair the principal angles are 0 or pi/2; the right
    // principal vectors at pi/2 span the part of Y orthogonal to X.
    const PrincipalDecomposition pd = principal_angles(x, y);
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < k; ++i)
        if (pd.angles(i) <= tol.angle) ++m;

    CMatrix y_ortho(n, k - m);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < k; ++i)
        if (pd.angles(i) >= kHalfPi - tol.angle) y_ortho.col(c++) = pd.right_vectors.col(i);
    if (c != k - m)
        throw NotCompatible("geodesic_through_to_orthogonal: mixed principal angles");

    CMatrix z_frame(n, k);
    z_frame.leftCols(k - m) = y_ortho;
    if (m > 0) {
        // Pad with directions orthogonal to X + Y so that Z meets Y exactly
        // in y_ortho and stays orthogonal to X. Needs n >= 2k.
        CMatrix sum(n, 2 * k);
        sum << x.frame(), y.frame();
        const Subspace span_xy(span_basis(sum, tol.rank_rel));
        const Subspace rest = orthocomplement(span_xy);
        z_frame.rightCols(m) = rest.frame().leftCols(m);
    }
    const Subspace z{CMatrix(z_frame)};

    // Re-verify the claimed incidences by rank computations.
    if ((x.frame().adjoint() * z.frame()).norm() > 1e-8)
        throw Error("geodesic_through_to_orthogonal: endpoint not orthogonal to X");
    const CMatrix zy = intersect_spans(z.frame(), y.frame(), tol.rank_rel);
    if (zy.cols() != k - m)
        throw Error("geodesic_through_to_orthogonal: Z meets Y in the wrong dimension");
    if (k - m > 0 && (zy - y_ortho * (y_ortho.adjoint() * zy)).norm() > 1e-8)
        throw Error("geodesic_through_to_orthogonal: Z meets Y outside the orthogonal part");

    std::vector<Subspace> path = geodesic_between(x, y, tol);
    if (!same_subspace(y, z, tol)) {
        std::vector<Subspace> tail = geodesic_between(y, z, tol);
        path.insert(path.end(), tail.begin() + 1, tail.end());
    }
    return path;
}

std::vector<Subspace> star_family(const Subspace& s, const std::vector<CVector>& directions,
                                  const Tolerances& tol) {
    const Eigen::Index n = s.ambient_dim();
    const Eigen::Index k = s.dim() + 1;
    if (k > n)
        throw InvalidDimension("star_family: star core must have dimension < n");

    std::vector<Subspace> members;
    members.reserve(directions.size());
    for (const auto& d : directions) {
        if (d.size() != n)
            throw DimensionMismatch("star_family: direction has wrong ambient dimension");
        CVector residual = d - s.frame() * (s.frame().adjoint() * d);
        if (residual.norm() <= tol.match * d.norm())
            throw DegenerateDirection("star_family: direction lies in the core");
        CMatrix frame(n, k);
        frame.leftCols(k - 1) = s.frame();
        frame.col(k - 1) = residual / residual.norm();
        members.emplace_back(std::move(frame));
    }
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (same_subspace(members[i], members[j], tol))
                throw DuplicateVertex("star_family: two directions generate the same member");
    return members;
}

std::vector<Subspace> top_family(const Subspace& u, const std::vector<CVector>& dropped,
                                 const Tolerances& tol) {
    const Eigen::Index n = u.ambient_dim();
    const Eigen::Index k = u.dim() - 1;
    if (k < 1)
        throw InvalidDimension("top_family: top core must have dimension >= 2");

    std::vector<Subspace> members;
    members.reserve(dropped.size());
    for (const auto& v : dropped) {
        if (v.size() != n)
            throw DimensionMismatch("top_family: vector has wrong ambient dimension");
        if (v.norm() == 0.0)
            throw DegenerateDirection("top_family: zero vector");
        const CVector inside = u.frame() * (u.frame().adjoint() * v);
        if ((v - inside).norm() > tol.match * v.norm())
            throw DegenerateDirection("top_family: vector does not lie in the core");
        // Work in core coordinates: the member is U restricted to the
        // complement of the dropped direction.
        CVector coeff = u.frame().adjoint() * v;
        coeff /= coeff.norm();
        members.emplace_back(CMatrix(u.frame() * complement_of_vector(coeff)));
    }
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (same_subspace(members[i], members[j], tol))
                throw DuplicateVertex("top_family: two vectors generate the same member");
    return members;
}

OrthogonalApartment orthogonal_apartment(const CMatrix& basis, Eigen::Index k,
                                         const Tolerances& tol) {
    const Eigen::Index n = basis.rows();
    if (basis.cols() != n || n < 1)
        throw NotUnitary("orthogonal_apartment: basis must be square");
    if ((basis.adjoint() * basis - CMatrix::Identity(n, n)).norm() > 1e-10)
        throw NotUnitary("orthogonal_apartment: basis is not unitary");
    if (k < 1 || k > n)
        throw InvalidDimension("orthogonal_apartment: need 1 <= k <= n");

    OrthogonalApartment apt;
    apt.basis = basis;
    apt.k = k;
    apt.subsets = k_subsets(static_cast<int>(n), static_cast<int>(k));
    apt.members.reserve(apt.subsets.size());
    for (const auto& subset : apt.subsets) {
        CMatrix frame(n, k);
        for (std::size_t j = 0; j < subset.size(); ++j)
            frame.col(static_cast<Eigen::Index>(j)) = basis.col(subset[j]);
        apt.members.emplace_back(std::move(frame));
    }
    if (n <= 8) {
        for (std::size_t i = 0; i < apt.members.size(); ++i)
            for (std::size_t j = i + 1; j < apt.members.size(); ++j)
                if (!is_compatible(apt.members[i], apt.members[j], tol))
                    throw Error("orthogonal_apartment: members not pairwise compatible");
    }
    return apt;
}

MaxCompatibleResult max_compatible_in_clique(const CliqueDescriptor& clique, Eigen::Index n,
                                             int probes, std::uint64_t seed,
                                             const Tolerances& tol) {
    if (clique.core.ambient_dim() != n)
        throw InvalidDescriptor("max_compatible_in_clique: core has wrong ambient dimension");

    MaxCompatibleResult out;
    Rng rng(seed);

    if (clique.kind == CliqueKind::star) {
        const Subspace& s = clique.core;
        if (s.dim() + 1 > n)
            throw InvalidDescriptor("max_compatible_in_clique: star core too large");
        const Subspace rest = orthocomplement(s);
        std::vector<CVector> dirs;
        for (Eigen::Index j = 0; j < rest.dim(); ++j) dirs.push_back(rest.frame().col(j));
        out.members = star_family(s, dirs, tol);

        for (int p = 0; p < probes; ++p) {
            CVector d = rng.gaussian_matrix(n, 1).col(0);
            d -= s.frame() * (s.frame().adjoint() * d);
            if (d.norm() < 1e-8) continue;
            CMatrix frame(n, s.dim() + 1);
            frame.leftCols(s.dim()) = s.frame();
            frame.col(s.dim()) = d / d.norm();
            const Subspace candidate{std::move(frame)};
            ++out.extension_probes;
            bool extends = true;
            for (const auto& m : out.members) {
                if (same_subspace(candidate, m, tol) || !is_compatible(candidate, m, tol)) {
                    extends = false;
                    break;
                }
            }
            if (extends) out.extension_found = true;
        }
    } else {
        const Subspace& u = clique.core;
        if (u.dim() < 2)
            throw InvalidDescriptor("max_compatible_in_clique: top core too small");
        std::vector<CVector> dropped;
        for (Eigen::Index j = 0; j < u.dim(); ++j) dropped.push_back(u.frame().col(j));
        out.members = top_family(u, dropped, tol);

        for (int p = 0; p < probes; ++p) {
            CVector c = rng.gaussian_matrix(u.dim(), 1).col(0);
            c /= c.norm();
            const Subspace candidate{CMatrix(u.frame() * complement_of_vector(c))};
            ++out.extension_probes;
            bool extends = true;
            for (const auto& m : out.members) {
                if (same_subspace(candidate, m, tol) || !is_compatible(candidate, m, tol)) {
                    extends = false;
                    break;
                }
            }
            if (extends) out.extension_found = true;
        }
    }
    out.count = static_cast<Eigen::Index>(out.members.size());
    return out;
}

} // namespace grassgeo
