#include "grassgeo/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "grassgeo/rng.hpp"

namespace grassgeo::cli {

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

Json config_to_json(const RunConfig& c) {
    Json j{{"command", c.command}, {"n", c.n},         {"k", c.k},
           {"seed", c.seed},       {"pairs", c.pairs}, {"format", c.format}};
    if (c.tol_rank) j["tol_rank"] = *c.tol_rank;
    if (c.tol_angle) j["tol_angle"] = *c.tol_angle;
    if (!c.inputs.empty()) j["inputs"] = c.inputs;
    if (c.force_fail) j["force_fail"] = true;
    if (c.command == "reconstruct" && c.inputs.empty()) j["oracle_endo"] = c.oracle_endo;
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    Json j;
    in >> j;
    return j;
}

/// Collects {name, anchor, pass, metric, tolerance} records; the anchor is
/// a fixed statement of the mathematical fact being checked.
class Suite {
public:
    void add(const std::string& name, const std::string& anchor, bool pass, double metric,
             double tolerance, const std::string& note = "") {
        records_.push_back(Json{{"name", name},
                                {"anchor", anchor},
                                {"pass", pass},
                                {"metric", metric},
                                {"tolerance", tolerance},
                                {"note", note}});
        all_pass_ = all_pass_ && pass;
    }

    /// Runs `body` and records an automatic failure if it throws.
    template <typename F>
    void guarded(const std::string& name, const std::string& anchor, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            add(name, anchor, false, -1.0, 0.0, std::string("exception: ") + e.what());
        }
    }

    bool all_pass() const { return all_pass_; }
    Json records() const { return records_; }

private:
    Json records_ = Json::array();
    bool all_pass_ = true;
};

Json finish_report(const std::string& suite_name, const RunConfig& config, Json body,
                   bool pass, std::chrono::steady_clock::time_point start) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    body["schema"] = 1;
    body["suite"] = suite_name;
    body["config"] = config_to_json(config);
    body["pass"] = pass;
    body["timestamp"] = Json{{"generated_at", iso_timestamp()}, {"wall_clock_sec", wall}};
    return body;
}

std::pair<Subspace, Subspace> load_pair(const RunConfig& config, const Tolerances& tol) {
    if (config.inputs.size() == 2) {
        const Subspace x = subspace_from_json(load_json_file(config.inputs[0]), tol.rank_rel);
        const Subspace y = subspace_from_json(load_json_file(config.inputs[1]), tol.rank_rel);
        return {x, y};
    }
    if (!config.inputs.empty())
        throw Error("expected exactly two --in files (or none with --n/--k/--seed)");
    return pair_from_seed(config.n, config.k, config.seed);
}

Json relation_to_json(const RelationReport& rep) {
    return Json{{"orthogonal", rep.orthogonal},
                {"adjacent", rep.adjacent},
                {"ortho_adjacent", rep.ortho_adjacent},
                {"compatible", rep.compatible},
                {"intersection_dim", rep.intersection_dim},
                {"distance", rep.distance}};
}

} // namespace

Tolerances tolerances_from(const RunConfig& config) {
    Tolerances tol;
    if (config.tol_rank) tol.rank_rel = *config.tol_rank;
    if (config.tol_angle) tol.angle = *config.tol_angle;
    if (config.force_fail) {
        tol.rank_rel = 1e-30;
        tol.angle = 1e-30;
        tol.match = 1e-30;
    }
    return tol;
}

std::pair<Subspace, Subspace> pair_from_seed(Eigen::Index n, Eigen::Index k,
                                             std::uint64_t seed) {
    Rng rng(seed);
    Subspace x = random_subspace(n, k, rng);
    Subspace y = random_subspace(n, k, rng);
    return {std::move(x), std::move(y)};
}

CommandResult run_angles(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances tol = tolerances_from(config);
    const auto [x, y] = load_pair(config, tol);

    const PrincipalDecomposition pd = principal_angles(x, y);
    Json angles = Json::array();
    for (Eigen::Index i = 0; i < pd.angles.size(); ++i) angles.push_back(pd.angles(i));

    Json body{{"n", x.ambient_dim()},
              {"k", x.dim()},
              {"angles", angles},
              {"transition_probability", transition_probability(x, y)},
              {"relations", relation_to_json(relation_report(x, y, tol))}};
    return {finish_report("angles", config, std::move(body), true, start), kExitOk};
}

CommandResult run_relations(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances tol = tolerances_from(config);
    const auto [x, y] = load_pair(config, tol);
    Json body{{"n", x.ambient_dim()},
              {"k", x.dim()},
              {"relations", relation_to_json(relation_report(x, y, tol))}};
    return {finish_report("relations", config, std::move(body), true, start), kExitOk};
}

CommandResult run_graph(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const Tolerances tol = tolerances_from(config);

    std::vector<Subspace> vertices;
    if (!config.inputs.empty()) {
        if (config.inputs.size() != 1)
            throw Error("graph expects a single --in file with a vertex list");
        Json j = load_json_file(config.inputs[0]);
        const Json& list = j.is_array() ? j : j.at("vertices");
        for (const auto& entry : list)
            vertices.push_back(subspace_from_json(entry, tol.rank_rel));
    } else {
        // Full apartment over a (seed-rotated) orthonormal basis.
        const CMatrix basis = config.seed == 0
                                  ? CMatrix(CMatrix::Identity(config.n, config.n))
                                  : orthonormalize(Rng(config.seed).gaussian_matrix(config.n,
                                                                                    config.n));
        vertices = orthogonal_apartment(basis, config.k, tol).members;
    }

    const GrassmannGraphView g = build_graph(std::move(vertices), tol);
    Json body = graph_to_json(g);
    body["edge_count"] = g.edges.size();
    body["vertex_count"] = g.vertices.size();
    return {finish_report("graph", config, std::move(body), true, start), kExitOk};
}

namespace {

double max_mc_overshoot(const Subspace& x, const Subspace& y, const RVector& angles,
                        Eigen::Index which, const PrincipalDecomposition& pd, Rng& rng,
                        int samples) {
    // Monte-Carlo pairs constrained (for which == 1) to the deflated
    // problem: coefficients orthogonal to the top principal pair.
    const CMatrix cross = x.frame().adjoint() * y.frame();
    const Eigen::Index k = x.dim();
    const CVector a1 = x.frame().adjoint() * pd.left_vectors.col(0);
    const CVector b1 = y.frame().adjoint() * pd.right_vectors.col(0);
    const double target = std::cos(angles(which));
    double worst = -1.0;
    for (int s = 0; s < samples; ++s) {
        CVector a = rng.gaussian_matrix(k, 1).col(0);
        CVector b = rng.gaussian_matrix(k, 1).col(0);
        if (which == 1) {
            a -= a1 * a1.dot(a);
            b -= b1 * b1.dot(b);
        }
        const double na = a.norm();
        const double nb = b.norm();
        if (na < 1e-12 || nb < 1e-12) continue;
        const double val = std::abs(a.dot(cross * b)) / (na * nb);
        worst = std::max(worst, val - target);
    }
    return worst;
}

} // namespace

CommandResult run_verify_lemmas(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    if (config.n > 10 || config.k > 4)
        throw Error("verify-lemmas is desk scale: n <= 10 and k <= 4");
    if (config.k < 2 || 2 * config.k > config.n)
        throw Error("verify-lemmas needs 2 <= k and 2k <= n");

    const Tolerances tol = tolerances_from(config);
    const Eigen::Index n = config.n;
    const Eigen::Index k = config.k;
    const int pairs = std::max(4, config.pairs);
    Rng rng(config.seed);
    Suite suite;

    suite.guarded("random-subspace-invariants", "random subspaces carry orthonormal frames",
                  [&] {
                      double worst = 0.0;
                      const int count = std::min(pairs * 10, 1000);
                      for (int i = 0; i < count; ++i) {
                          const Subspace s = random_subspace(n, k, rng);
                          worst = std::max(worst, (s.frame().adjoint() * s.frame() -
                                                   CMatrix::Identity(k, k))
                                                      .norm());
                      }
                      suite.add("random-subspace-invariants",
                                "random subspaces carry orthonormal frames", worst <= 1e-10,
                                worst, 1e-10);
                  });

    suite.guarded("principal-angle-symmetry",
                  "principal angles are symmetric in their arguments", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < pairs; ++i) {
                          const Subspace x = random_subspace(n, k, rng);
                          const Subspace y = random_subspace(n, k, rng);
                          worst = std::max(worst, (principal_angles(x, y).angles -
                                                   principal_angles(y, x).angles)
                                                      .cwiseAbs()
                                                      .maxCoeff());
                      }
                      suite.add("principal-angle-symmetry",
                                "principal angles are symmetric in their arguments",
                                worst <= 1e-10, worst, 1e-10);
                  });

    suite.guarded("unitary-invariance",
                  "principal angles are invariant under unitary rotations", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < std::max(2, pairs / 2); ++i) {
                          const Subspace x = random_subspace(n, k, rng);
                          const Subspace y = random_subspace(n, k, rng);
                          const SemilinearOperator u = random_unitary(n, rng.next_u64());
                          const Subspace ux = induced_map(u, x);
                          const Subspace uy = induced_map(u, y);
                          worst = std::max(worst, (principal_angles(x, y).angles -
                                                   principal_angles(ux, uy).angles)
                                                      .cwiseAbs()
                                                      .maxCoeff());
                      }
                      suite.add("unitary-invariance",
                                "principal angles are invariant under unitary rotations",
                                worst <= 1e-8, worst, 1e-8);
                  });

    suite.guarded("variational-minimum",
                  "the smallest principal angle minimizes arccos of the pairing", [&] {
                      double worst = -1.0;
                      double attain = 0.0;
                      for (int i = 0; i < std::min(pairs, 20); ++i) {
                          const Subspace x = random_subspace(n, k, rng);
                          const Subspace y = random_subspace(n, k, rng);
                          const PrincipalDecomposition pd = principal_angles(x, y);
                          worst = std::max(worst, max_mc_overshoot(x, y, pd.angles, 0, pd, rng,
                                                                   2000));
                          attain = std::max(
                              attain, std::abs(std::abs(pd.left_vectors.col(0).dot(
                                                   pd.right_vectors.col(0))) -
                                               std::cos(pd.angles(0))));
                      }
                      suite.add("variational-minimum",
                                "the smallest principal angle minimizes arccos of the pairing",
                                worst <= 1e-9 && attain <= 1e-8, std::max(worst, attain), 1e-8);
                  });

    suite.guarded("variational-deflation",
                  "after removing the top pair the next angle is again minimal", [&] {
                      double worst = -1.0;
                      for (int i = 0; i < std::min(pairs, 20); ++i) {
                          const Subspace x = random_subspace(n, k, rng);
                          const Subspace y = random_subspace(n, k, rng);
                          const PrincipalDecomposition pd = principal_angles(x, y);
                          worst = std::max(worst, max_mc_overshoot(x, y, pd.angles, 1, pd, rng,
                                                                   2000));
                      }
                      suite.add("variational-deflation",
                                "after removing the top pair the next angle is again minimal",
                                worst <= 1e-9, worst, 1e-9);
                  });

    suite.guarded("angle-rank-consistency",
                  "intersection dimension: angle count agrees with the rank formula", [&] {
                      int mismatches = 0;
                      for (int i = 0; i < pairs; ++i) {
                          std::pair<Subspace, Subspace> p =
                              i % 3 == 0   ? random_compatible_pair(n, k, rng)
                              : i % 3 == 1 ? random_adjacent_pair(n, k, rng)
                                           : std::pair<Subspace, Subspace>{
                                                 random_subspace(n, k, rng),
                                                 random_subspace(n, k, rng)};
                          CMatrix joint(n, 2 * k);
                          joint << p.first.frame(), p.second.frame();
                          const Eigen::Index by_rank =
                              2 * k - numerical_rank(joint, std::nullopt, tol.rank_rel);
                          if (intersection_dim(p.first, p.second, tol) != by_rank) ++mismatches;
                      }
                      suite.add("angle-rank-consistency",
                                "intersection dimension: angle count agrees with the rank formula",
                                mismatches == 0, mismatches, 0.0);
                  });

    suite.guarded("compatibility-two-routes",
                  "commuting projectors coincide with principal angles in {0, pi/2}", [&] {
                      int disagreements = 0;
                      for (int i = 0; i < pairs; ++i) {
                          std::pair<Subspace, Subspace> p =
                              i % 2 == 0 ? random_compatible_pair(n, k, rng)
                                         : std::pair<Subspace, Subspace>{
                                               random_subspace(n, k, rng),
                                               random_subspace(n, k, rng)};
                          const bool via_comm =
                              compatible_by_commutator(p.first, p.second, tol.match);
                          const bool via_angle =
                              compatible_by_angles(p.first, p.second, tol.angle);
                          if (via_comm != via_angle) ++disagreements;
                      }
                      suite.add("compatibility-two-routes",
                                "commuting projectors coincide with principal angles in {0, pi/2}",
                                disagreements == 0, disagreements, 0.0);
                  });

    suite.guarded("compatible-common-basis",
                  "compatible pairs are spanned by subsets of one orthogonal basis", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < std::max(2, pairs / 2); ++i) {
                          const auto [x, y] = random_compatible_pair(n, k, rng);
                          const PrincipalDecomposition pd = principal_angles(x, y);
                          std::vector<CVector> basis_vectors;
                          CMatrix x_part(n, k);
                          CMatrix y_part(n, k);
                          Eigen::Index xc = 0, yc = 0;
                          for (Eigen::Index j = 0; j < k; ++j) {
                              if (pd.angles(j) <= tol.angle) {
                                  // Shared directions: one basis vector covers both.
                                  basis_vectors.push_back(pd.left_vectors.col(j));
                                  x_part.col(xc++) = pd.left_vectors.col(j);
                                  y_part.col(yc++) = pd.left_vectors.col(j);
                              } else {
                                  basis_vectors.push_back(pd.left_vectors.col(j));
                                  basis_vectors.push_back(pd.right_vectors.col(j));
                                  x_part.col(xc++) = pd.left_vectors.col(j);
                                  y_part.col(yc++) = pd.right_vectors.col(j);
                              }
                          }
                          CMatrix b(n, static_cast<Eigen::Index>(basis_vectors.size()));
                          for (std::size_t j = 0; j < basis_vectors.size(); ++j)
                              b.col(static_cast<Eigen::Index>(j)) = basis_vectors[j];
                          worst = std::max(worst, (b.adjoint() * b -
                                                   CMatrix::Identity(b.cols(), b.cols()))
                                                      .norm());
                          worst = std::max(worst,
                                           projector_distance(x, Subspace(CMatrix(x_part))));
                          worst = std::max(worst,
                                           projector_distance(y, Subspace(CMatrix(y_part))));
                      }
                      suite.add("compatible-common-basis",
                                "compatible pairs are spanned by subsets of one orthogonal basis",
                                worst <= 1e-7, worst, 1e-7);
                  });

    suite.guarded("transition-probability-range",
                  "transition probability lies in [0, k] and hits the extremes", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < pairs; ++i) {
                          const Subspace x = random_subspace(n, k, rng);
                          const Subspace y = random_subspace(n, k, rng);
                          const double tp = transition_probability(x, y);
                          worst = std::max(worst, std::max(-tp, tp - static_cast<double>(k)));
                          worst = std::max(worst, std::abs(transition_probability(x, x) -
                                                           static_cast<double>(k)));
                      }
                      const auto [ox, oy] = random_orthogonal_pair(n, k, rng);
                      worst = std::max(worst, transition_probability(ox, oy));
                      suite.add("transition-probability-range",
                                "transition probability lies in [0, k] and hits the extremes",
                                worst <= 1e-10, worst, 1e-10);
                  });

    suite.guarded("star-clique-count",
                  "stars are cliques; maximal compatible star subsets have n-k+1 members", [&] {
                      const Subspace core = random_subspace(n, k - 1, rng);
                      const auto result = max_compatible_in_clique(
                          {CliqueKind::star, core}, n, std::min(pairs, 50), rng.next_u64(), tol);
                      bool clique = true;
                      for (std::size_t a = 0; a < result.members.size(); ++a)
                          for (std::size_t b = a + 1; b < result.members.size(); ++b)
                              clique = clique &&
                                       is_ortho_adjacent(result.members[a], result.members[b],
                                                         tol);
                      const bool pass = clique && result.count == n - k + 1;
                      suite.add("star-clique-count",
                                "stars are cliques; maximal compatible star subsets have n-k+1 members",
                                pass, static_cast<double>(result.count),
                                static_cast<double>(n - k + 1));
                  });

    suite.guarded("top-clique-count",
                  "tops are cliques; maximal compatible top subsets have k+1 members", [&] {
                      const Subspace core = random_subspace(n, k + 1, rng);
                      const auto result = max_compatible_in_clique(
                          {CliqueKind::top, core}, n, std::min(pairs, 50), rng.next_u64(), tol);
                      bool clique = true;
                      for (std::size_t a = 0; a < result.members.size(); ++a)
                          for (std::size_t b = a + 1; b < result.members.size(); ++b)
                              clique = clique &&
                                       is_ortho_adjacent(result.members[a], result.members[b],
                                                         tol);
                      const bool pass = clique && result.count == k + 1;
                      suite.add("top-clique-count",
                                "tops are cliques; maximal compatible top subsets have k+1 members",
                                pass, static_cast<double>(result.count),
                                static_cast<double>(k + 1));
                  });

    suite.guarded("clique-extension-probes",
                  "random clique members never extend a maximal compatible subset", [&] {
                      const auto star = max_compatible_in_clique(
                          {CliqueKind::star, random_subspace(n, k - 1, rng)}, n,
                          std::min(4 * pairs, 200), rng.next_u64(), tol);
                      const auto top = max_compatible_in_clique(
                          {CliqueKind::top, random_subspace(n, k + 1, rng)}, n,
                          std::min(4 * pairs, 200), rng.next_u64(), tol);
                      const int extensions =
                          (star.extension_found ? 1 : 0) + (top.extension_found ? 1 : 0);
                      suite.add("clique-extension-probes",
                                "random clique members never extend a maximal compatible subset",
                                extensions == 0, extensions, 0.0);
                  });

    suite.guarded("apartment-distance-law",
                  "apartment graph distance equals k minus the intersection dimension", [&] {
                      const OrthogonalApartment apt =
                          orthogonal_apartment(CMatrix::Identity(n, n), k, tol);
                      const GrassmannGraphView g = build_graph(apt.members, tol);
                      int mismatches = 0;
                      const int m = static_cast<int>(g.vertices.size());
                      for (int a = 0; a < m; ++a)
                          for (int b = a + 1; b < m; ++b) {
                              int overlap = 0;
                              std::size_t pa = 0, pb = 0;
                              while (pa < apt.subsets[a].size() && pb < apt.subsets[b].size()) {
                                  if (apt.subsets[a][pa] == apt.subsets[b][pb]) {
                                      ++overlap, ++pa, ++pb;
                                  } else if (apt.subsets[a][pa] < apt.subsets[b][pb])
                                      ++pa;
                                  else
                                      ++pb;
                              }
                              const int expected = static_cast<int>(k) - overlap;
                              if (graph_distance(g, a, b) != expected) ++mismatches;
                              if (subspace_distance(g.vertices[a], g.vertices[b], tol) !=
                                  expected)
                                  ++mismatches;
                          }
                      suite.add("apartment-distance-law",
                                "apartment graph distance equals k minus the intersection dimension",
                                mismatches == 0, mismatches, 0.0);
                  });

    suite.guarded("geodesic-orthogonal-compat",
                  "geodesics joining orthogonal elements are mutually compatible", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < std::max(2, pairs / 5); ++i) {
                          const auto [x, y] = random_orthogonal_pair(n, k, rng);
                          const auto path = geodesic_between(x, y, tol);
                          for (std::size_t a = 0; a < path.size(); ++a)
                              for (std::size_t b = a + 1; b < path.size(); ++b) {
                                  const CMatrix pa = path[a].projector();
                                  const CMatrix pb = path[b].projector();
                                  worst = std::max(worst, (pa * pb - pb * pa).norm());
                              }
                      }
                      suite.add("geodesic-orthogonal-compat",
                                "geodesics joining orthogonal elements are mutually compatible",
                                worst <= 1e-8, worst, 1e-8);
                  });

    suite.guarded("geodesic-through-orthogonal",
                  "compatible pairs lie on a geodesic reaching an orthogonal element", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < std::max(2, pairs / 5); ++i) {
                          const auto [x, y] = random_compatible_pair(n, k, rng);
                          const auto path = geodesic_through_to_orthogonal(x, y, tol);
                          worst = std::max(
                              worst, (x.frame().adjoint() * path.back().frame()).norm());
                          bool through = false;
                          for (const auto& v : path) through = through || same_subspace(v, y, tol);
                          if (!through) worst = std::max(worst, 1.0);
                      }
                      suite.add("geodesic-through-orthogonal",
                                "compatible pairs lie on a geodesic reaching an orthogonal element",
                                worst <= 1e-8, worst, 1e-8);
                  });

    suite.guarded("geodesic-bookkeeping",
                  "each geodesic step trades one intersection dimension", [&] {
                      int mismatches = 0;
                      for (int i = 0; i < std::max(2, pairs / 5); ++i) {
                          const Subspace x = random_subspace(n, k, rng);
                          const Subspace y = random_subspace(n, k, rng);
                          const auto path = geodesic_between(x, y, tol);
                          const auto d = static_cast<Eigen::Index>(path.size()) - 1;
                          for (Eigen::Index j = 0; j <= d; ++j) {
                              if (intersection_dim(x, path[j], tol) != k - j) ++mismatches;
                              if (intersection_dim(y, path[j], tol) != k - d + j) ++mismatches;
                          }
                      }
                      suite.add("geodesic-bookkeeping",
                                "each geodesic step trades one intersection dimension",
                                mismatches == 0, mismatches, 0.0);
                  });

    suite.guarded("isometry-normalization",
                  "orthogonality-preserving operators split as b times an isometry", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < std::max(2, pairs / 5); ++i) {
                          const double b = 0.5 + 3.0 * rng.uniform();
                          SemilinearOperator u = i % 2 == 0
                                                     ? random_unitary(n, rng.next_u64())
                                                     : random_antiunitary(n, rng.next_u64());
                          const SemilinearOperator scaled{CMatrix(b * u.matrix), u.endo};
                          const NormalizedIsometry norm = normalize_to_isometry(scaled, tol);
                          worst = std::max(worst, std::abs(norm.scale - b) / b);
                          const ProjectiveMatch match =
                              projective_equal(norm.isometry, u, tol.match);
                          if (!match.matched) worst = std::max(worst, 1.0);
                      }
                      // The diagonal stretch is the canonical non-example.
                      CMatrix bad = CMatrix::Identity(n, n);
                      bad(1, 1) = 2.0;
                      bool rejected = false;
                      try {
                          normalize_to_isometry(SemilinearOperator{bad, FieldEndo::identity},
                                                tol);
                      } catch (const NotOrthogonalityPreserving&) {
                          rejected = true;
                      }
                      suite.add("isometry-normalization",
                                "orthogonality-preserving operators split as b times an isometry",
                                worst <= 1e-8 && rejected, worst, 1e-8);
                  });

    suite.guarded("induced-angle-preservation",
                  "isometry-induced maps preserve every principal angle", [&] {
                      double worst = 0.0;
                      for (int i = 0; i < std::max(2, pairs / 5); ++i) {
                          const SemilinearOperator op =
                              i % 2 == 0 ? random_unitary(n, rng.next_u64())
                                         : random_antiunitary(n, rng.next_u64());
                          for (int t = 0; t < 3; ++t) {
                              const Subspace x = random_subspace(n, k, rng);
                              const Subspace y = random_subspace(n, k, rng);
                              worst = std::max(
                                  worst,
                                  (principal_angles(x, y).angles -
                                   principal_angles(induced_map(op, x), induced_map(op, y))
                                       .angles)
                                      .cwiseAbs()
                                      .maxCoeff());
                          }
                      }
                      suite.add("induced-angle-preservation",
                                "isometry-induced maps preserve every principal angle",
                                worst <= 1e-8, worst, 1e-8);
                  });

    suite.guarded("induced-relation-preservation",
                  "isometry-induced maps preserve the relations in both directions", [&] {
                      long long violations = 0;
                      const SemilinearOperator op = random_unitary(n, rng.next_u64());
                      const SemilinearOperator anti = random_antiunitary(n, rng.next_u64());
                      for (const auto* ground : {&op, &anti}) {
                          const TransformationOracle oracle =
                              TransformationOracle::from_operator(*ground, k);
                          std::vector<std::pair<Subspace, Subspace>> sample;
                          const int each = std::max(2, pairs / 10);
                          for (int i = 0; i < each; ++i) {
                              sample.push_back(random_orthogonal_pair(n, k, rng));
                              sample.push_back(random_adjacent_pair(n, k, rng));
                              sample.push_back(random_ortho_adjacent_pair(n, k, rng));
                              sample.push_back(random_compatible_pair(n, k, rng));
                              sample.emplace_back(random_subspace(n, k, rng),
                                                  random_subspace(n, k, rng));
                          }
                          for (const Relation r :
                               {Relation::orthogonality, Relation::adjacency,
                                Relation::ortho_adjacency, Relation::compatibility,
                                Relation::all_principal_angles,
                                Relation::transition_probability}) {
                              const PreservationReport rep = check_preservation(
                                  oracle, r, Direction::both, sample, tol);
                              violations += static_cast<long long>(rep.violations.size());
                          }
                      }
                      suite.add("induced-relation-preservation",
                                "isometry-induced maps preserve the relations in both directions",
                                violations == 0, static_cast<double>(violations), 0.0);
                  });

    suite.guarded("induced-injectivity",
                  "isometry-induced maps send distinct subspaces to distinct images", [&] {
                      const SemilinearOperator op = random_antiunitary(n, rng.next_u64());
                      int collisions = 0;
                      for (int i = 0; i < pairs; ++i) {
                          const Subspace x = random_subspace(n, k, rng);
                          const Subspace y = random_subspace(n, k, rng);
                          if (same_subspace(x, y, tol)) continue;
                          if (same_subspace(induced_map(op, x), induced_map(op, y), tol))
                              ++collisions;
                      }
                      suite.add("induced-injectivity",
                                "isometry-induced maps send distinct subspaces to distinct images",
                                collisions == 0, collisions, 0.0);
                  });

    suite.guarded("span-avoidance",
                  "images of a subspace family cannot swallow an outside element", [&] {
                      const SemilinearOperator op = random_unitary(n, rng.next_u64());
                      int violations = 0;
                      const Eigen::Index s = std::min<Eigen::Index>(2 * k, n - k);
                      for (int i = 0; i < std::max(2, pairs / 5); ++i) {
                          // X2 drawn inside a sum space of dimension <= n-k
                          // that contains X1, so the statement's regime holds.
                          const Subspace x1 = random_subspace(n, k, rng);
                          CMatrix wspan(n, s);
                          wspan.leftCols(k) = x1.frame();
                          wspan.rightCols(s - k) = rng.gaussian_matrix(n, s - k);
                          const CMatrix w = orthonormalize(wspan, tol.rank_rel);
                          const Subspace x2(
                              CMatrix(w * orthonormalize(rng.gaussian_matrix(s, k))));
                          const Subspace y = random_subspace(n, k, rng);
                          CMatrix sum(n, 2 * k);
                          sum << x1.frame(), x2.frame();
                          CMatrix with_y(n, 3 * k);
                          with_y << x1.frame(), x2.frame(), y.frame();
                          const bool outside =
                              numerical_rank(with_y, std::nullopt, tol.rank_rel) >
                              numerical_rank(sum, std::nullopt, tol.rank_rel);
                          if (!outside) continue;
                          CMatrix sum_img(n, 2 * k);
                          sum_img << induced_map(op, x1).frame(), induced_map(op, x2).frame();
                          CMatrix with_y_img(n, 3 * k);
                          with_y_img << sum_img, induced_map(op, y).frame();
                          if (numerical_rank(with_y_img, std::nullopt, tol.rank_rel) <=
                              numerical_rank(sum_img, std::nullopt, tol.rank_rel))
                              ++violations;
                      }
                      suite.add("span-avoidance",
                                "images of a subspace family cannot swallow an outside element",
                                violations == 0, violations, 0.0);
                  });

    suite.guarded("projective-equivalence",
                  "projective equality of operators is an equivalence relation", [&] {
                      double worst = 0.0;
                      const SemilinearOperator u = random_unitary(n, rng.next_u64());
                      const Complex c1 = std::polar(1.0, 2.0 * M_PI * rng.uniform());
                      const Complex c2 = std::polar(1.0, 2.0 * M_PI * rng.uniform());
                      const SemilinearOperator u1{CMatrix(c1 * u.matrix), u.endo};
                      const SemilinearOperator u2{CMatrix(c2 * u.matrix), u.endo};
                      const auto self = projective_equal(u, u, tol.match);
                      const auto ab = projective_equal(u, u1, tol.match);
                      const auto ba = projective_equal(u1, u, tol.match);
                      const auto ac = projective_equal(u, u2, tol.match);
                      const auto bc = projective_equal(u1, u2, tol.match);
                      bool pass = self.matched && ab.matched && ba.matched && ac.matched &&
                                  bc.matched;
                      pass = pass && std::abs(ab.phase * ba.phase - Complex(1.0)) < 1e-8;
                      const SemilinearOperator v = random_unitary(n, rng.next_u64() | 1);
                      pass = pass && !projective_equal(u, v, tol.match).matched;
                      worst = std::max({self.residual, ab.residual, ba.residual, ac.residual,
                                        bc.residual});
                      suite.add("projective-equivalence",
                                "projective equality of operators is an equivalence relation",
                                pass, worst, tol.match);
                  });

    Json body{{"records", suite.records()}};
    Json summary;
    int passed = 0, failed = 0;
    for (const auto& r : body["records"])
        r.at("pass").get<bool>() ? ++passed : ++failed;
    summary["passed"] = passed;
    summary["failed"] = failed;
    summary["total"] = passed + failed;
    body["summary"] = summary;
    const bool ok = suite.all_pass();
    return {finish_report("verify-lemmas", config, std::move(body), ok, start),
            ok ? kExitOk : kExitCheckFailed};
}

CommandResult run_reconstruct(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const Eigen::Index n = config.n;
    const Eigen::Index k = config.k;
    const Tolerances tol = tolerances_from(config);

    Json body;
    try {
        if (!config.inputs.empty()) {
            if (config.inputs.size() != 1)
                throw Error("reconstruct expects one --in pairing-table file");
            const auto table =
                pairing_table_from_json(load_json_file(config.inputs[0]), tol.rank_rel);
            const TransformationOracle oracle =
                TransformationOracle::from_pairing_table(table, tol);
            if (!(oracle.ambient_dim() > 2 * oracle.dim() && oracle.dim() > 1))
                throw Error("reconstruct requires n > 2k > 2");
            const ReconstructionResult res = reconstruct_operator(
                oracle, oracle.ambient_dim(), oracle.dim(), 0, config.seed, tol);
            body["result"] = reconstruction_to_json(res);
            body["descent"] = "skipped (finite-domain oracle)";
            body["oracle"] = "pairing-table";
            const bool ok = res.certified;
            return {finish_report("reconstruct", config, std::move(body), ok, start),
                    ok ? kExitOk : kExitCheckFailed};
        }

        if (!(n > 2 * k && k > 1))
            throw Error("reconstruct requires n > 2k > 2");
        SemilinearOperator truth = config.oracle_endo == "antiunitary"
                                       ? random_antiunitary(n, config.seed)
                                       : random_unitary(n, config.seed);
        const TransformationOracle oracle = TransformationOracle::from_operator(truth, k);
        const int budget = std::max(5, config.pairs / 5);
        const ReconstructionResult res =
            reconstruct_operator(oracle, n, k, budget, config.seed + 1, tol);
        const ProjectiveMatch match = projective_equal(res.op, truth, tol.match);

        const auto witnesses = descent_trace(oracle, n, k, 3, config.seed + 2, tol);
        bool descent_ok = true;
        Json levels = Json::array();
        for (const auto& w : witnesses) {
            const bool core_matches =
                same_subspace(induced_map(truth, w.core), w.image_core, tol);
            descent_ok = descent_ok && core_matches;
            levels.push_back(Json{{"level", w.level}, {"core_matches", core_matches}});
        }

        body["result"] = reconstruction_to_json(res);
        body["ground_truth_match"] =
            Json{{"matched", match.matched}, {"residual", match.residual}};
        body["descent"] = levels;
        body["oracle"] = config.oracle_endo;
        const bool ok = res.certified && match.matched && descent_ok;
        return {finish_report("reconstruct", config, std::move(body), ok, start),
                ok ? kExitOk : kExitCheckFailed};
    } catch (const ReconstructionFailed& e) {
        body["error"] = Json{{"stage", e.stage()}, {"message", e.what()}};
        return {finish_report("reconstruct", config, std::move(body), false, start),
                kExitCheckFailed};
    }
}

CommandResult run_wild_demo(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const Eigen::Index n = config.n;
    const Eigen::Index k = config.k;
    if (n != 2 * k || k < 2 || n > 8)
        throw Error("wild-demo requires n = 2k, k >= 2, n <= 8");
    const Tolerances tol = tolerances_from(config);

    const OrthogonalApartment apt =
        orthogonal_apartment(CMatrix::Identity(n, n), k, tol);
    Json body;
    try {
        const WildMapDemo demo = wild_map_demo(apt, config.seed, tol);
        body["pairing"] = pairing_table_to_json(demo.pairing);
        body["orthogonality_both"] = report_to_json(demo.orthogonality_both);
        body["adjacency_forward"] = report_to_json(demo.adjacency_forward);
        body["draws_used"] = demo.draws_used;
        const bool ok = demo.orthogonality_both.verdict && !demo.adjacency_forward.verdict;
        return {finish_report("wild-demo", config, std::move(body), ok, start),
                ok ? kExitOk : kExitCheckFailed};
    } catch (const RetryExhausted& e) {
        body["error"] = e.what();
        return {finish_report("wild-demo", config, std::move(body), false, start),
                kExitCheckFailed};
    }
}

CommandResult dispatch(const RunConfig& config) {
    try {
        if (config.command == "angles") return run_angles(config);
        if (config.command == "relations") return run_relations(config);
        if (config.command == "graph") return run_graph(config);
        if (config.command == "verify-lemmas") return run_verify_lemmas(config);
        if (config.command == "reconstruct") return run_reconstruct(config);
        if (config.command == "wild-demo") return run_wild_demo(config);
        return {Json{{"error", "unknown command: " + config.command}}, kExitUsage};
    } catch (const DimensionMismatch& e) {
        return {Json{{"error", e.what()}}, kExitDimension};
    } catch (const InvalidDimension& e) {
        return {Json{{"error", e.what()}}, kExitDimension};
    } catch (const MixedDimensions& e) {
        return {Json{{"error", e.what()}}, kExitDimension};
    } catch (const InsufficientAmbient& e) {
        return {Json{{"error", e.what()}}, kExitDimension};
    } catch (const ReconstructionFailed& e) {
        return {Json{{"error", e.what()}, {"stage", e.stage()}}, kExitCheckFailed};
    } catch (const RetryExhausted& e) {
        return {Json{{"error", e.what()}}, kExitCheckFailed};
    } catch (const Error& e) {
        return {Json{{"error", e.what()}}, kExitUsage};
    } catch (const Json::exception& e) {
        return {Json{{"error", std::string("malformed input: ") + e.what()}}, kExitUsage};
    }
}

std::string render(const Json& report, const std::string& format) {
    if (format == "csv") {
        std::ostringstream os;
        if (report.contains("records")) {
            os << "name,anchor,pass,metric,tolerance\n";
            for (const auto& r : report.at("records")) {
                os << r.at("name").get<std::string>() << ",\""
                   << r.at("anchor").get<std::string>() << "\","
                   << (r.at("pass").get<bool>() ? "true" : "false") << ","
                   << r.at("metric").get<double>() << "," << r.at("tolerance").get<double>()
                   << "\n";
            }
            return os.str();
        }
        os << "key,value\n";
        for (const auto& [key, value] : report.items())
            if (value.is_primitive()) os << key << "," << value.dump() << "\n";
        return os.str();
    }
    return report.dump(2) + "\n";
}

} // namespace grassgeo::cli
