#include "grassgeo/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "grassgeo/rng.hpp"

namespace grassgeo {

namespace {

Subspace coordinate_subspace(Eigen::Index n, const std::vector<Eigen::Index>& indices) {
    CMatrix frame = CMatrix::Zero(n, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) frame(indices[j], j) = 1.0;
    return Subspace(std::move(frame));
}

/// sin of the angle between two lines given by (non-zero) vectors.
double line_distance(const CVector& a, const CVector& b) {
    const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

/// Common intersection of a family of frames (folds intersect_spans).
CMatrix common_intersection(const std::vector<CMatrix>& frames, double rank_rel) {
    CMatrix acc = frames.front();
    for (std::size_t i = 1; i < frames.size() && acc.cols() > 0; ++i)
        acc = intersect_spans(acc, frames[i], rank_rel);
    return acc;
}

} // namespace

TransformationOracle::TransformationOracle(Eigen::Index n, Eigen::Index k, Fn fn, bool pure)
    : n_(n), k_(k), fn_(std::move(fn)), pure_(pure),
      queries_(std::make_shared<long long>(0)) {
    if (k < 1 || k > n)
        throw InvalidDimension("oracle needs 1 <= k <= n");
}

TransformationOracle TransformationOracle::from_operator(const SemilinearOperator& op,
                                                         Eigen::Index k) {
    const Eigen::Index n = op.matrix.rows();
    if (numerical_rank(op.matrix) < n)
        throw SingularOperator("oracle operator is not injective");
    return TransformationOracle(
        n, k, [op](const Subspace& x) { return induced_map(op, x); }, true);
}

TransformationOracle TransformationOracle::from_pairing_table(
    std::vector<std::pair<Subspace, Subspace>> table, const Tolerances& tol) {
    if (table.empty())
        throw InvalidDimension("pairing table is empty");
    const Eigen::Index n = table.front().first.ambient_dim();
    const Eigen::Index k = table.front().first.dim();
    for (const auto& [in, out] : table)
        if (in.ambient_dim() != n || in.dim() != k || out.ambient_dim() != n || out.dim() != k)
            throw MixedDimensions("pairing table entries must share (n, k)");
    auto shared = std::make_shared<std::vector<std::pair<Subspace, Subspace>>>(std::move(table));
    return TransformationOracle(
        n, k,
        [shared, tol](const Subspace& x) -> Subspace {
            for (const auto& [in, out] : *shared)
                if (same_subspace(x, in, tol)) return out;
            throw OracleDomainError("pairing table has no entry for this subspace");
        },
        true);
}

Subspace TransformationOracle::operator()(const Subspace& x) const {
    if (x.ambient_dim() != n_ || x.dim() != k_)
        throw DimensionMismatch("oracle queried with wrong (n, k)");
    ++(*queries_);
    Subspace out = fn_(x);
    if (out.ambient_dim() != n_ || out.dim() != k_)
        throw OracleDimensionError("oracle returned a subspace of wrong (n, k)");
    return out;
}

std::string to_string(Relation r) {
    switch (r) {
        case Relation::orthogonality: return "orthogonality";
        case Relation::adjacency: return "adjacency";
        case Relation::ortho_adjacency: return "ortho_adjacency";
        case Relation::compatibility: return "compatibility";
        case Relation::all_principal_angles: return "all_principal_angles";
        case Relation::transition_probability: return "transition_probability";
    }
    return "?";
}

std::string to_string(Direction d) {
    return d == Direction::forward ? "forward" : "both";
}

namespace {

bool holds(Relation r, const Subspace& x, const Subspace& y, const Tolerances& tol) {
    switch (r) {
        case Relation::orthogonality: return is_orthogonal(x, y, tol);
        case Relation::adjacency: return is_adjacent(x, y, tol);
        case Relation::ortho_adjacency: return is_ortho_adjacent(x, y, tol);
        case Relation::compatibility: return is_compatible(x, y, tol);
        default: throw Error("holds: not a binary relation");
    }
}

constexpr double kSpectrumTol = 1e-7;

} // namespace

PreservationReport check_preservation(const TransformationOracle& f, Relation relation,
                                      Direction direction,
                                      const std::vector<std::pair<Subspace, Subspace>>& pairs,
                                      const Tolerances& tol) {
    PreservationReport rep;
    rep.relation = relation;
    rep.direction = direction;
    rep.sampled_pairs = static_cast<long long>(pairs.size());

    for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
        const auto& [x, y] = pairs[idx];
        if (x.ambient_dim() != f.ambient_dim() || x.dim() != f.dim() ||
            y.ambient_dim() != f.ambient_dim() || y.dim() != f.dim())
            throw DimensionMismatch("check_preservation: pair does not match oracle (n, k)");
        const Subspace fx = f(x);
        const Subspace fy = f(y);

        if (relation == Relation::all_principal_angles) {
            const RVector before = principal_angle_spectrum(x, y);
            const RVector after = principal_angle_spectrum(fx, fy);
            const double diff = (before - after).cwiseAbs().maxCoeff();
            if (diff > kSpectrumTol) {
                std::ostringstream os;
                os << "angle spectra differ by " << diff;
                rep.violations.push_back({static_cast<int>(idx), os.str()});
            }
            continue;
        }
        if (relation == Relation::transition_probability) {
            const double before = transition_probability(x, y);
            const double after = transition_probability(fx, fy);
            if (std::abs(before - after) > kSpectrumTol) {
                std::ostringstream os;
                os << "transition probability " << before << " -> " << after;
                rep.violations.push_back({static_cast<int>(idx), os.str()});
            }
            continue;
        }

        const bool before = holds(relation, x, y, tol);
        const bool after = holds(relation, fx, fy, tol);
        if (before && !after)
            rep.violations.push_back(
                {static_cast<int>(idx), to_string(relation) + " lost on image pair"});
        else if (direction == Direction::both && !before && after)
            rep.violations.push_back(
                {static_cast<int>(idx), to_string(relation) + " gained on image pair"});
    }
    rep.verdict = rep.violations.empty();
    return rep;
}

namespace {

/// Deterministic frames through a ray: k-1 standard basis vectors
/// Gram-Schmidt orthogonalized against the ray and previous picks.
std::vector<CVector> basis_directions_avoiding(const CVector& p, Eigen::Index count,
                                               Eigen::Index n) {
    std::vector<CVector> picked;
    CMatrix used(n, 1 + count);
    used.col(0) = p;
    Eigen::Index filled = 1;
    for (Eigen::Index i = 0; i < n && static_cast<Eigen::Index>(picked.size()) < count; ++i) {
        CVector v = CVector::Zero(n);
        v(i) = 1.0;
        for (Eigen::Index j = 0; j < filled; ++j) v -= used.col(j) * used.col(j).dot(v);
        if (v.norm() < 1e-3) continue;
        v /= v.norm();
        used.col(filled++) = v;
        picked.push_back(v);
    }
    if (static_cast<Eigen::Index>(picked.size()) < count)
        throw Error("could not complete directions around the ray");
    return picked;
}

} // namespace

Subspace extract_line_map(const TransformationOracle& f, const Subspace& p,
                          const Tolerances& tol) {
    const Eigen::Index n = f.ambient_dim();
    const Eigen::Index k = f.dim();
    if (2 * k >= n)
        throw InsufficientAmbient("extract_line_map requires n > 2k");
    if (p.ambient_dim() != n || p.dim() != 1)
        throw DimensionMismatch("extract_line_map: p must be a ray of the oracle's space");

    const CVector ray = p.frame().col(0);
    const auto dirs = basis_directions_avoiding(ray, 2 * (k - 1), n);

    CMatrix xa(n, k), xb(n, k);
    xa.col(0) = ray;
    xb.col(0) = ray;
    for (Eigen::Index j = 0; j < k - 1; ++j) {
        xa.col(j + 1) = dirs[j];
        xb.col(j + 1) = dirs[k - 1 + j];
    }
    const Subspace image_a = f(Subspace(std::move(xa)));
    const Subspace image_b = f(Subspace(std::move(xb)));
    const CMatrix common = intersect_spans(image_a.frame(), image_b.frame(), tol.rank_rel);
    if (common.cols() != 1)
        throw IntersectionNotALine("image intersection has dimension " +
                                   std::to_string(common.cols()));
    return Subspace(common);
}

namespace {

struct LinePipeline {
    const TransformationOracle& f;
    Eigen::Index n;
    Eigen::Index k;
    const Tolerances& tol;
    std::map<Eigen::Index, Subspace> window_images; // keyed by window start

    const Subspace& window_image(Eigen::Index start) {
        auto it = window_images.find(start);
        if (it != window_images.end()) return it->second;
        std::vector<Eigen::Index> idx(k);
        for (Eigen::Index j = 0; j < k; ++j) idx[j] = (start + j) % n;
        auto [pos, _] = window_images.emplace(start, f(coordinate_subspace(n, idx)));
        return pos->second;
    }

    /// f_1 at the standard ray e_i from two cyclic coordinate windows that
    /// meet exactly in e_i (their index sets overlap only there since
    /// 2k - 1 <= n).
    CVector ray_image(Eigen::Index i) {
        const Subspace& a = window_image(i);
        const Subspace& b = window_image(((i - k + 1) % n + n) % n);
        const CMatrix common = intersect_spans(a.frame(), b.frame(), tol.rank_rel);
        if (common.cols() != 1)
            throw ReconstructionFailed("line-extraction",
                                       "window image intersection at ray " + std::to_string(i) +
                                           " has dimension " + std::to_string(common.cols()));
        return common.col(0);
    }

    /// f_1 at the line spanned by `v` inside the plane span(e_0, e_j),
    /// using one fresh query: the image of (line + fixed complement of the
    /// plane) intersected with the known image plane span(r0, rj).
    CVector line_image_in_plane(const CVector& v, Eigen::Index j, const CVector& r0,
                                const CVector& rj, const std::string& stage) {
        CMatrix frame(n, k);
        frame.col(0) = v / v.norm();
        Eigen::Index col = 1;
        for (Eigen::Index m = 1; m < n && col < k; ++m) {
            if (m == j) continue;
            frame.col(col) = CVector::Zero(n);
            frame(m, col) = 1.0;
            ++col;
        }
        const Subspace image = f(Subspace(std::move(frame)));
        CMatrix plane(n, 2);
        plane << r0, rj;
        const CMatrix common =
            intersect_spans(image.frame(), orthonormalize(plane, tol.rank_rel), tol.rank_rel);
        if (common.cols() != 1)
            throw ReconstructionFailed(stage, "line image in plane 0," + std::to_string(j) +
                                                  " has dimension " +
                                                  std::to_string(common.cols()));
        return common.col(0);
    }
};

} // namespace

ReconstructionResult reconstruct_operator(const TransformationOracle& f, Eigen::Index n,
                                          Eigen::Index k, int validation_budget,
                                          std::uint64_t seed, const Tolerances& tol) {
    if (!(n > 2 * k && k > 1))
        throw InvalidDimension("reconstruct_operator requires n > 2k > 2");
    if (f.ambient_dim() != n || f.dim() != k)
        throw DimensionMismatch("reconstruct_operator: oracle has different (n, k)");

    const long long queries_before = f.queries_used();
    LinePipeline pipe{f, n, k, tol, {}};

    // Stage 1: the line map on the standard rays (n window queries total).
    std::vector<CVector> rays(n);
    try {
        for (Eigen::Index i = 0; i < n; ++i) rays[i] = pipe.ray_image(i);
    } catch (const OracleDomainError& e) {
        throw ReconstructionFailed("line-extraction", e.what());
    }

    // Stage 2: projective normalization. Fix the image of e_0 by phase
    // convention, then scale each remaining ray so the two-point sums
    // e_0 + e_j map consistently.
    const CVector v0 = canonical_phase(rays[0]).col(0);
    CMatrix matrix(n, n);
    matrix.col(0) = v0;
    try {
        for (Eigen::Index j = 1; j < n; ++j) {
            CVector sum_line = CVector::Zero(n);
            sum_line(0) = 1.0;
            sum_line(j) = 1.0;
            const CVector w =
                pipe.line_image_in_plane(sum_line, j, v0, rays[j], "normalization");
            CMatrix system(n, 2);
            system << w, -rays[j];
            const Eigen::JacobiSVD<CMatrix> solver(system,
                                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
            const CVector coeff = solver.solve(v0);
            const double residual = (system * coeff - v0).norm();
            if (residual > tol.match)
                throw ReconstructionFailed(
                    "normalization", "two-point condition unsolvable at ray " +
                                         std::to_string(j) + " (residual " +
                                         std::to_string(residual) + ")");
            if (std::abs(coeff(1)) < 1e-12)
                throw ReconstructionFailed("normalization",
                                           "degenerate scaling at ray " + std::to_string(j));
            matrix.col(j) = coeff(1) * rays[j];
        }
    } catch (const OracleDomainError& e) {
        throw ReconstructionFailed("normalization", e.what());
    }

    // Stage 3: field endomorphism from the rays e_0 + i e_j. The candidate
    // image lines span(v_0 + i v_j) and span(v_0 - i v_j) are orthogonal,
    // so the decision is sharp; every j must agree.
    FieldEndo endo = FieldEndo::identity;
    try {
        bool decided = false;
        for (Eigen::Index j = 1; j < n; ++j) {
            CVector im_line = CVector::Zero(n);
            im_line(0) = 1.0;
            im_line(j) = Complex(0, 1);
            const CVector w =
                pipe.line_image_in_plane(im_line, j, v0, rays[j], "endo-decision");
            const CVector plus = matrix.col(0) + Complex(0, 1) * matrix.col(j);
            const CVector minus = matrix.col(0) - Complex(0, 1) * matrix.col(j);
            const double d_plus = line_distance(w, plus);
            const double d_minus = line_distance(w, minus);
            FieldEndo vote;
            if (d_plus <= tol.match && d_minus > tol.match)
                vote = FieldEndo::identity;
            else if (d_minus <= tol.match && d_plus > tol.match)
                vote = FieldEndo::conjugation;
            else
                throw ReconstructionFailed("endo-decision",
                                           "ambiguous at ray " + std::to_string(j));
            if (!decided) {
                endo = vote;
                decided = true;
            } else if (vote != endo) {
                throw ReconstructionFailed("endo-decision",
                                           "inconsistent votes across rays");
            }
        }
    } catch (const OracleDomainError& e) {
        throw ReconstructionFailed("endo-decision", e.what());
    }

    // Stage 4: assemble and normalize to an isometry.
    ReconstructionResult out;
    try {
        const NormalizedIsometry norm =
            normalize_to_isometry(SemilinearOperator{matrix, endo}, tol);
        out.op = norm.isometry;
        out.scale = norm.scale;
    } catch (const Error& e) {
        throw ReconstructionFailed("normalization", e.what());
    }

    // Stage 5: validate on random subspaces of G_k.
    Rng rng(seed);
    out.max_residual = 0.0;
    out.certified = true;
    for (int t = 0; t < validation_budget; ++t) {
        const Subspace probe = random_subspace(n, k, rng);
        double residual = 0.0;
        try {
            residual = projector_distance(f(probe), induced_map(out.op, probe));
        } catch (const OracleDomainError&) {
            out.certified = false;
            continue;
        }
        out.max_residual = std::max(out.max_residual, residual);
        if (residual > tol.match) out.certified = false;
    }
    out.queries_used = f.queries_used() - queries_before;
    return out;
}

WildMapDemo wild_map_demo(const OrthogonalApartment& apartment, std::uint64_t seed,
                          const Tolerances& tol) {
    const Eigen::Index n = apartment.basis.rows();
    const Eigen::Index k = apartment.k;
    if (n != 2 * k)
        throw DimensionMismatch("wild_map_demo requires n = 2k");

    const int m = static_cast<int>(apartment.members.size());
    // Complement lookup through the index sets.
    std::map<std::vector<int>, int> index_of;
    for (int i = 0; i < m; ++i) index_of[apartment.subsets[i]] = i;
    std::vector<int> complement(m, -1);
    for (int i = 0; i < m; ++i) {
        std::vector<int> comp;
        std::size_t pos = 0;
        for (int v = 0; v < static_cast<int>(n); ++v) {
            if (pos < apartment.subsets[i].size() && apartment.subsets[i][pos] == v)
                ++pos;
            else
                comp.push_back(v);
        }
        complement[i] = index_of.at(comp);
    }
    std::vector<std::pair<int, int>> pair_list; // representative < complement
    for (int i = 0; i < m; ++i)
        if (i < complement[i]) pair_list.emplace_back(i, complement[i]);
    const int npairs = static_cast<int>(pair_list.size());

    std::vector<std::pair<Subspace, Subspace>> all_pairs;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            all_pairs.emplace_back(apartment.members[i], apartment.members[j]);

    Rng rng(seed);
    WildMapDemo demo;
    for (int attempt = 0; attempt < 20; ++attempt) {
        ++demo.draws_used;
        std::vector<int> perm = rng.permutation(npairs);
        if (npairs > 1) {
            bool identity = true;
            for (int i = 0; i < npairs; ++i) identity = identity && perm[i] == i;
            if (identity) {
                // Force a non-identity permutation of the complementary pairs.
                std::swap(perm[0], perm[1]);
            }
        }

        std::vector<int> dest(m, -1);
        for (int p = 0; p < npairs; ++p) {
            const auto [a, b] = pair_list[p];
            const auto [ta, tb] = pair_list[perm[p]];
            const bool flip = rng.next_u64() & 1u;
            dest[a] = flip ? tb : ta;
            dest[b] = flip ? ta : tb;
        }

        std::vector<std::pair<Subspace, Subspace>> table;
        table.reserve(m);
        for (int i = 0; i < m; ++i)
            table.emplace_back(apartment.members[i], apartment.members[dest[i]]);
        const TransformationOracle oracle =
            TransformationOracle::from_pairing_table(table, tol);

        PreservationReport orth =
            check_preservation(oracle, Relation::orthogonality, Direction::both, all_pairs, tol);
        if (!orth.verdict)
            throw Error("wild_map_demo: pair permutation failed the orthogonality check");
        PreservationReport adj =
            check_preservation(oracle, Relation::adjacency, Direction::forward, all_pairs, tol);
        if (!adj.verdict) {
            demo.pairing = std::move(table);
            demo.orthogonality_both = std::move(orth);
            demo.adjacency_forward = std::move(adj);
            return demo;
        }
    }
    throw RetryExhausted(
        "wild_map_demo: 20 draws produced no adjacency violation (tiny apartment)");
}

namespace {

/// Evaluates the level-i map by descending star intersections: for i < k
/// the value at X is the common core of the images of the star of X one
/// level up.
Subspace eval_level_map(const TransformationOracle& f, Eigen::Index level, const Subspace& x,
                        const Tolerances& tol) {
    const Eigen::Index k = f.dim();
    if (level == k) return f(x);

    const Subspace rest = orthocomplement(x);
    std::vector<CMatrix> images;
    for (Eigen::Index j = 0; j < rest.dim(); ++j) {
        CMatrix frame(x.ambient_dim(), x.dim() + 1);
        frame.leftCols(x.dim()) = x.frame();
        frame.col(x.dim()) = rest.frame().col(j);
        images.push_back(
            eval_level_map(f, level + 1, Subspace(std::move(frame)), tol).frame());
    }
    const CMatrix common = common_intersection(images, tol.rank_rel);
    if (common.cols() != level)
        throw StarImageNotInStar("star images at level " + std::to_string(level + 1) +
                                 " share a core of dimension " + std::to_string(common.cols()));
    return Subspace(common);
}

} // namespace

std::vector<DescentWitness> descent_trace(const TransformationOracle& f, Eigen::Index n,
                                          Eigen::Index k, int stars_per_level,
                                          std::uint64_t seed, const Tolerances& tol) {
    if (!(n > 2 * k && k > 1))
        throw InvalidDimension("descent_trace requires n > 2k > 2");
    if (f.ambient_dim() != n || f.dim() != k)
        throw DimensionMismatch("descent_trace: oracle has different (n, k)");

    Rng rng(seed);
    std::vector<DescentWitness> trace;
    for (Eigen::Index level = k; level >= 2; --level) {
        for (int s = 0; s < stars_per_level; ++s) {
            const Subspace core = random_subspace(n, level - 1, rng);
            const Subspace rest = orthocomplement(core);
            std::vector<CMatrix> images;
            for (Eigen::Index j = 0; j < rest.dim(); ++j) {
                CMatrix frame(n, level);
                frame.leftCols(level - 1) = core.frame();
                frame.col(level - 1) = rest.frame().col(j);
                images.push_back(
                    eval_level_map(f, level, Subspace(std::move(frame)), tol).frame());
            }
            const CMatrix common = common_intersection(images, tol.rank_rel);
            if (common.cols() != level - 1)
                throw StarImageNotInStar(
                    "star images at level " + std::to_string(level) +
                    " share a core of dimension " + std::to_string(common.cols()));
            trace.push_back({level, core, Subspace(common)});
        }
    }
    return trace;
}

TransformationOracle compose_with_orthocomplement(const TransformationOracle& f) {
    if (f.ambient_dim() != 2 * f.dim())
        throw DimensionMismatch("compose_with_orthocomplement needs n = 2k");
    return TransformationOracle(
        f.ambient_dim(), f.dim(),
        [f](const Subspace& x) { return orthocomplement(f(x)); }, f.pure());
}

} // namespace grassgeo
