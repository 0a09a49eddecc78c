#pragma once

// JSON documents for matrices, curves, square classes, profiles and reports.
// Polynomials travel as strings in the parser grammar.

#include <quadbundle/brauer.hpp>
#include <quadbundle/coker.hpp>
#include <quadbundle/dominance.hpp>
#include <quadbundle/gallery.hpp>
#include <quadbundle/reduction.hpp>

#include <json.hpp>

namespace quadbundle::io {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

inline json field_json(const FieldSpec& f) {
    if (f.is_rational()) return {{"kind", "rational"}};
    return {{"kind", "prime"}, {"p", f.p}};
}

inline FieldSpec field_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rational") return FieldSpec::rational();
    if (kind == "prime") return FieldSpec::prime(j.at("p").get<std::uint64_t>());
    throw Error("bad_document", "unknown field kind " + kind);
}

/// Header shared by every document.
inline json header(const std::string& kind, const RingPtr& ring) {
    return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"field", field_json(ring->field)},
            {"variables", ring->vars}};
}

inline json report_header(const std::string& kind) { return {{"schema_version", kSchemaVersion}, {"kind", kind}}; }

inline void check_header(const json& doc, const std::string& kind) {
    if (!doc.is_object() || !doc.contains("schema_version")) throw Error("bad_document", "not a document");
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
        throw Error("bad_document", "unsupported schema_version " + doc.at("schema_version").dump());
    }
    if (doc.at("kind").get<std::string>() != kind) {
        throw Error("bad_document", "expected a " + kind + " document, got " + doc.at("kind").get<std::string>());
    }
}

inline RingPtr ring_from_doc(const json& doc) {
    return make_ring(field_from_json(doc.at("field")), doc.at("variables").get<std::vector<std::string>>());
}

template <Coefficient K>
json point_json(const std::vector<K>& pt) {
    json a = json::array();
    for (const auto& v : pt) a.push_back(v.to_string());
    return a;
}

template <Coefficient K>
std::vector<K> point_from_json(const json& j, const RingPtr& ring) {
    std::vector<K> pt;
    for (const auto& s : j) pt.push_back(parse_poly<K>(s.get<std::string>(), ring).constant_value());
    return pt;
}

template <Coefficient K>
json entries_json(const PolyMatrix<K>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Matrix document; "degrees" and "twist" are null for ungraded data.
template <Coefficient K>
json matrix_doc(const PolyMatrix<K>& m, const std::optional<Grading>& g = std::nullopt) {
    auto doc = header("matrix", m.ring());
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    doc["degrees"] = g ? json(g->degrees) : json(nullptr);
    doc["twist"] = g ? json(g->twist) : json(nullptr);
    doc["matrix"] = entries_json(m);
    return doc;
}

template <Coefficient K>
json matrix_doc(const GradedSymMatrix<K>& q) {
    return matrix_doc(q.matrix(), q.maybe_grading());
}

template <Coefficient K>
PolyMatrix<K> matrix_from_doc(const json& doc, const RingPtr& ring) {
    check_header(doc, "matrix");
    const auto& rows = doc.at("matrix");
    const std::size_t r = doc.at("rows").get<std::size_t>(), c = doc.at("cols").get<std::size_t>();
    if (rows.size() != r) throw Error("bad_document", "row count disagrees with the matrix");
    PolyMatrix<K> m(ring, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw Error("bad_document", "ragged matrix row " + std::to_string(i));
        for (std::size_t j = 0; j < c; ++j) m(i, j) = parse_poly<K>(rows[i][j].get<std::string>(), ring);
    }
    return m;
}

/// Graded when the document carries degrees, chart level otherwise.
template <Coefficient K>
GradedSymMatrix<K> form_from_doc(const json& doc, const RingPtr& ring) {
    auto m = matrix_from_doc<K>(doc, ring);
    if (doc.at("degrees").is_null()) return GradedSymMatrix<K>::chart(std::move(m));
    return GradedSymMatrix<K>::validate(doc.at("degrees").get<std::vector<int>>(), doc.at("twist").get<int>(),
                                        std::move(m));
}

template <Coefficient K>
json curve_doc(const PlaneCurve<K>& c) {
    auto doc = header("curve", c.f.ring());
    doc["f"] = to_string(c.f);
    doc["degree"] = c.degree;
    doc["smoothness"] = to_string(c.smooth);
    doc["singular_point"] = c.smooth == Smoothness::RefutedAt ? point_json(c.singular_point) : json(nullptr);
    doc["diagnostic"] = c.diagnostic;
    return doc;
}

inline Smoothness smoothness_from_string(const std::string& s) {
    for (auto v : {Smoothness::Unchecked, Smoothness::Proven, Smoothness::RefutedAt, Smoothness::Unknown}) {
        if (s == to_string(v)) return v;
    }
    throw Error("bad_document", "unknown smoothness verdict " + s);
}

template <Coefficient K>
PlaneCurve<K> curve_from_doc(const json& doc, const RingPtr& ring) {
    check_header(doc, "curve");
    auto c = PlaneCurve<K>::of(parse_poly<K>(doc.at("f").get<std::string>(), ring));
    if (c.degree != doc.at("degree").get<int>()) throw Error("bad_document", "degree disagrees with f");
    c.smooth = smoothness_from_string(doc.at("smoothness").get<std::string>());
    if (!doc.at("singular_point").is_null()) c.singular_point = point_from_json<K>(doc.at("singular_point"), ring);
    c.diagnostic = doc.value("diagnostic", "");
    return c;
}

template <Coefficient K>
json square_class_doc(const SquareClass<K>& s) {
    auto doc = header("square_class", s.g.ring());
    doc["g"] = to_string(s.g);
    doc["line"] = to_string(s.line);
    doc["curve"] = to_string(s.curve.f);
    doc["tries"] = s.tries;
    return doc;
}

template <Coefficient K>
SquareClass<K> square_class_from_doc(const json& doc, const RingPtr& ring) {
    check_header(doc, "square_class");
    SquareClass<K> s{parse_poly<K>(doc.at("g").get<std::string>(), ring),
                     parse_poly<K>(doc.at("line").get<std::string>(), ring),
                     PlaneCurve<K>::of(parse_poly<K>(doc.at("curve").get<std::string>(), ring)),
                     doc.at("tries").get<int>()};
    if (!s.g.is_homogeneous() || s.g.degree() % 2 != 0) {
        throw Error("bad_document", "square class representative must be a form of even degree");
    }
    return s;
}

inline CokerKind coker_kind_from_string(const std::string& s) {
    for (auto v : {CokerKind::HalfPeriod, CokerKind::EvenTheta, CokerKind::OddTheta, CokerKind::TrivialTwist,
                   CokerKind::Undetermined}) {
        if (s == to_string(v)) return v;
    }
    throw Error("bad_document", "unknown cokernel kind " + s);
}

inline json profile_doc(const CokernelProfile& p) {
    auto doc = report_header("profile");
    doc["c"] = p.c;
    doc["delta"] = p.delta;
    doc["kind"] = "profile";
    doc["coker_kind"] = to_string(p.kind);
    doc["normalization"] = p.normalization;
    doc["h0_normalized"] = p.h0_normalized;
    json table = json::object();
    for (const auto& [t, h] : p.h0_table) table[std::to_string(t)] = h;
    doc["h0_table"] = table;
    doc["diagnostic"] = p.diagnostic;
    return doc;
}

inline CokernelProfile profile_from_doc(const json& doc) {
    check_header(doc, "profile");
    CokernelProfile p;
    p.c = doc.at("c").get<int>();
    p.delta = doc.at("delta").get<int>();
    p.kind = coker_kind_from_string(doc.at("coker_kind").get<std::string>());
    p.normalization = doc.at("normalization").get<int>();
    p.h0_normalized = doc.at("h0_normalized").get<long long>();
    for (const auto& [t, h] : doc.at("h0_table").items()) p.h0_table[std::stoi(t)] = h.get<long long>();
    p.diagnostic = doc.at("diagnostic").get<std::string>();
    return p;
}

inline json comparison_doc(const ClassComparison& c) {
    auto doc = report_header("verdict");
    doc["verdict"] = to_string(c.verdict);
    doc["confidence"] = c.confidence;
    doc["valid_samples"] = c.valid_samples;
    doc["primes_used"] = c.primes_used;
    doc["witness"] = c.witness.empty() ? json(nullptr) : point_json(c.witness);
    doc["witness_prime"] = c.witness_prime;
    doc["notes"] = c.notes;
    return doc;
}

inline json dominance_doc(const DominanceInstance& in, const DominanceResult& r) {
    auto doc = report_header("dominance");
    doc["r"] = in.r;
    doc["l"] = in.l;
    doc["k"] = in.k;
    doc["n"] = in.n;
    doc["seed"] = in.seed;
    doc["field"] = r.field;
    doc["rank"] = r.rank;
    doc["target_dim"] = r.target_dim;
    doc["unknowns"] = r.unknowns;
    doc["dominant"] = r.dominant;
    doc["points_tried"] = r.points_tried;
    doc["hypothesis"] = r.hypothesis;
    doc["seconds"] = r.seconds;
    doc["notes"] = r.notes;
    return doc;
}

template <Coefficient K>
json poly_list(const std::vector<Poly<K>>& v) {
    json a = json::array();
    for (const auto& f : v) a.push_back(to_string(f));
    return a;
}

template <Coefficient K>
json ansatz_doc(const RingPtr& ring, const std::vector<AnsatzRecord<K>>& recs) {
    auto doc = header("report", ring);
    doc["report"] = "ansatz";
    json rows = json::array();
    for (const auto& r : recs) {
        json conds = json::array();
        for (const auto& c : r.conditions) conds.push_back({{"text", c.text}, {"indices", c.indices}, {"holds", c.holds}});
        rows.push_back({{"name", r.name},
                        {"curve_degree", r.curve_degree},
                        {"type", r.kind},
                        {"tuple", poly_list(r.tuple)},
                        {"target", poly_list(r.target)},
                        {"degrees", r.degrees},
                        {"actual_degrees", r.actual_degrees},
                        {"degrees_consistent", r.degrees_consistent},
                        {"conditions", conds},
                        {"ambiguous", r.ambiguous},
                        {"similar", r.similar},
                        {"similar_all", r.similar_all}});
    }
    doc["records"] = rows;
    return doc;
}

template <Coefficient K>
json nodal_doc(const NodalChain<K>& c) {
    auto doc = header("report", c.n3.ring());
    doc["report"] = "nodal_gm";
    doc["n3"] = matrix_doc(c.n3);
    doc["n4"] = matrix_doc(c.n4);
    doc["smooth_tries"] = c.smooth_tries;
    doc["discriminants_equal"] = c.discriminants_equal;
    doc["profile3"] = profile_doc(c.profile3);
    doc["profile4"] = profile_doc(c.profile4);
    doc["profile_match"] = c.profile_match;
    doc["residues"] = comparison_doc(c.residues);
    return doc;
}

inline json pattern_doc(const PatternDescriptor& p) {
    auto doc = report_header("report");
    doc["report"] = "cor12";
    doc["family"] = p.family;
    doc["d"] = p.d;
    doc["k"] = p.k;
    doc["source"] = {{"degrees", p.source.degrees}, {"twist", p.source.twist}};
    doc["isotropic"] = p.isotropic;
    doc["bundle"] = p.bundle;
    doc["sequence"] = p.sequence;
    doc["divisors"] = p.divisors;
    doc["bidegrees"] = p.bidegrees;
    doc["fibre_dim"] = p.fibre_dim;
    doc["model"] = p.model;
    return doc;
}

/// The six blocks of a degeneration family.
template <Coefficient K>
json psi_data_doc(const DegenerationData<K>& d) {
    auto doc = header("psi_data", d.a.ring());
    doc["a"] = entries_json(d.a);
    doc["m"] = entries_json(d.m);
    doc["eta"] = entries_json(d.eta);
    doc["theta"] = entries_json(d.theta);
    doc["j"] = entries_json(d.j);
    doc["phi"] = entries_json(d.phi);
    return doc;
}

template <Coefficient K>
PolyMatrix<K> entries_from_json(const json& rows, std::size_t cols, const RingPtr& ring) {
    PolyMatrix<K> m(ring, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw Error("bad_document", "ragged matrix row " + std::to_string(i));
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_poly<K>(rows[i][j].get<std::string>(), ring);
    }
    return m;
}

template <Coefficient K>
DegenerationData<K> psi_data_from_doc(const json& doc, const RingPtr& ring) {
    check_header(doc, "psi_data");
    auto block = [&](const char* key, std::size_t cols) { return entries_from_json<K>(doc.at(key), cols, ring); };
    const std::size_t g = doc.at("a").size(), e = doc.at("phi").size();
    const std::size_t h = g == 0 || doc.at("eta").empty() ? 0 : doc.at("eta")[0].size();
    return {block("a", g), block("m", g), block("eta", h), block("theta", g), block("j", h), block("phi", e)};
}

}  // namespace quadbundle::io
