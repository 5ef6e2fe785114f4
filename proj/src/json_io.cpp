#include "grassgeo/json_io.hpp"

namespace grassgeo {

Json matrix_to_json(const CMatrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re.push_back(m(i, j).real());
            im.push_back(m(i, j).imag());
        }
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (rows < 0 || cols < 0)
        throw Error("matrix json: negative dimensions");
    if (static_cast<Eigen::Index>(re.size()) != rows * cols ||
        static_cast<Eigen::Index>(im.size()) != rows * cols)
        throw Error("matrix json: re/im length must be rows*cols");
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
            const auto idx = static_cast<std::size_t>(i * cols + j2);
            m(i, j2) = Complex(re[idx].get<double>(), im[idx].get<double>());
        }
    if (!all_finite(m))
        throw Error("matrix json: entries must be finite");
    return m;
}

Json subspace_to_json(const Subspace& s) {
    return Json{{"n", s.ambient_dim()}, {"k", s.dim()}, {"frame", matrix_to_json(s.frame())}};
}

Subspace subspace_from_json(const Json& j, double rank_rel) {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto k = j.at("k").get<Eigen::Index>();
    const CMatrix frame = matrix_from_json(j.at("frame"));
    if (frame.rows() != n || frame.cols() != k)
        throw Error("subspace json: frame shape must be n x k");
    return Subspace::from_span(frame, rank_rel);
}

Json graph_to_json(const GrassmannGraphView& g) {
    Json vertices = Json::array();
    for (const auto& v : g.vertices) vertices.push_back(subspace_to_json(v));
    Json edges = Json::array();
    for (const auto& [i, j] : g.edges) edges.push_back(Json::array({i, j}));
    return Json{{"n", g.n}, {"k", g.k}, {"vertices", vertices}, {"edges", edges}};
}

Json apartment_to_json(const OrthogonalApartment& a) {
    Json subsets = Json::array();
    for (const auto& s : a.subsets) subsets.push_back(s);
    return Json{{"basis", matrix_to_json(a.basis)}, {"k", a.k}, {"subsets", subsets}};
}

Json operator_to_json(const SemilinearOperator& op) {
    return Json{{"n", op.matrix.rows()},
                {"endo", op.endo == FieldEndo::conjugation ? "conjugation" : "identity"},
                {"matrix", matrix_to_json(op.matrix)}};
}

SemilinearOperator operator_from_json(const Json& j) {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto endo_str = j.at("endo").get<std::string>();
    FieldEndo endo;
    if (endo_str == "identity")
        endo = FieldEndo::identity;
    else if (endo_str == "conjugation")
        endo = FieldEndo::conjugation;
    else
        throw Error("operator json: endo must be 'identity' or 'conjugation'");
    const CMatrix m = matrix_from_json(j.at("matrix"));
    if (m.rows() != n || m.cols() != n)
        throw Error("operator json: matrix must be n x n");
    return SemilinearOperator{m, endo};
}

Json pairing_table_to_json(const std::vector<std::pair<Subspace, Subspace>>& table) {
    Json out = Json::array();
    for (const auto& [in, to] : table)
        out.push_back(Json{{"in", subspace_to_json(in)}, {"out", subspace_to_json(to)}});
    return out;
}

std::vector<std::pair<Subspace, Subspace>> pairing_table_from_json(const Json& j,
                                                                   double rank_rel) {
    if (!j.is_array())
        throw Error("pairing table json: expected an array");
    std::vector<std::pair<Subspace, Subspace>> table;
    table.reserve(j.size());
    for (const auto& entry : j)
        table.emplace_back(subspace_from_json(entry.at("in"), rank_rel),
                           subspace_from_json(entry.at("out"), rank_rel));
    return table;
}

Json report_to_json(const PreservationReport& rep) {
    Json violations = Json::array();
    for (const auto& v : rep.violations)
        violations.push_back(Json{{"pair_index", v.pair_index}, {"detail", v.detail}});
    return Json{{"relation", to_string(rep.relation)},
                {"direction", to_string(rep.direction)},
                {"sampled_pairs", rep.sampled_pairs},
                {"violations", violations},
                {"verdict", rep.verdict}};
}

Json reconstruction_to_json(const ReconstructionResult& res) {
    return Json{{"certified", res.certified},
                {"max_residual", res.max_residual},
                {"queries_used", res.queries_used},
                {"scale", res.scale},
                {"operator", operator_to_json(res.op)}};
}

} // namespace grassgeo
