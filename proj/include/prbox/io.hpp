#pragma once

// Serialization: boxes and certificates as versioned, round-trippable JSON;
// decomposition and word reports as one-way JSON; sweeps as CSV. Exact
// values travel as text, "p/q" for rationals and "[c0, c1, ...]" coefficient
// lists for polynomials. In every input and output index, round one is the
// most significant bit.

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prbox/colgen.hpp"
#include "prbox/localpart.hpp"

namespace prbox {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline Var var_from_name(const std::string& name) {
    if (name.empty() || name == "none") return Var::none;
    if (name == "eps") return Var::eps;
    if (name == "delta") return Var::delta;
    throw std::invalid_argument("unknown variable name '" + name + "'");
}

inline const char* gap_mode_name(GapMode m) {
    switch (m) {
        case GapMode::enumerated: return "enumerated";
        case GapMode::oracle: return "oracle";
        default: return "none";
    }
}

inline GapMode gap_mode_from_name(const std::string& name) {
    if (name == "enumerated") return GapMode::enumerated;
    if (name == "oracle") return GapMode::oracle;
    if (name == "none") return GapMode::none;
    throw std::invalid_argument("unknown gap mode '" + name + "'");
}

// Accepts the two shapes Scalar::str() emits.
inline Scalar scalar_from_text(const std::string& text, Var v = Var::none) {
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t");
        return s.substr(a, b - a + 1);
    };
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("scalar: empty text");
    if (t.front() != '[') return Scalar(Rational::parse(t));
    if (t.back() != ']') throw std::invalid_argument("scalar: unterminated coefficient list");

    std::vector<Rational> coeffs;
    std::string body = t.substr(1, t.size() - 2);
    size_t pos = 0;
    while (pos <= body.size()) {
        const size_t comma = body.find(',', pos);
        const std::string item =
            trim(body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!item.empty())
            coeffs.push_back(Rational::parse(item));
        else if (!body.empty())
            throw std::invalid_argument("scalar: empty coefficient");
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (coeffs.size() > 1 && v == Var::none)
        throw std::invalid_argument("scalar: coefficient list needs a variable");
    return Scalar(Poly(std::move(coeffs), v));
}

inline Json box_to_json(const Box& b) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "box";
    j["inputs"] = Json::array({b.inputs_a(), b.inputs_b()});
    j["outputs"] = Json::array({b.outputs_a(), b.outputs_b()});
    j["var"] = var_name(b.var());
    j["mass"] = b.mass().str();
    Json table = Json::array();  // nested [x][y][u][v]
    for (int x = 0; x < b.outputs_a(); ++x) {
        Json jx = Json::array();
        for (int y = 0; y < b.outputs_b(); ++y) {
            Json jy = Json::array();
            for (int u = 0; u < b.inputs_a(); ++u) {
                Json ju = Json::array();
                for (int v = 0; v < b.inputs_b(); ++v) ju.push_back(b.at(x, y, u, v).str());
                jy.push_back(std::move(ju));
            }
            jx.push_back(std::move(jy));
        }
        table.push_back(std::move(jx));
    }
    j["table"] = std::move(table);
    return j;
}

namespace detail {

inline void require_schema(const Json& j, const char* kind) {
    if (!j.is_object()) throw std::invalid_argument("document is not a JSON object");
    if (!j.contains("schema") || !j["schema"].is_number_integer() ||
        j["schema"].get<int>() != kSchemaVersion)
        throw std::invalid_argument("unsupported schema version");
    if (j.contains("kind") && j["kind"].get<std::string>() != kind)
        throw std::invalid_argument(std::string("expected a ") + kind + " document");
}

inline int positive_int(const Json& j, const char* what) {
    if (!j.is_number_integer() || j.get<int>() <= 0)
        throw std::invalid_argument(std::string(what) + " must be a positive integer");
    return j.get<int>();
}

}  // namespace detail

inline Box box_from_json(const Json& j) {
    detail::require_schema(j, "box");
    if (!j.contains("inputs") || !j.contains("outputs") || !j.contains("table"))
        throw std::invalid_argument("box: missing inputs, outputs, or table");
    const Json& in = j["inputs"];
    const Json& out = j["outputs"];
    if (!in.is_array() || in.size() != 2 || !out.is_array() || out.size() != 2)
        throw std::invalid_argument("box: inputs and outputs must be pairs");
    const int ia = detail::positive_int(in[0], "inputs[0]");
    const int ib = detail::positive_int(in[1], "inputs[1]");
    const int oa = detail::positive_int(out[0], "outputs[0]");
    const int ob = detail::positive_int(out[1], "outputs[1]");
    const Var v = var_from_name(j.value("var", std::string()));

    Box b(ia, ib, oa, ob);
    if (j.contains("mass")) b.set_mass(scalar_from_text(j["mass"].get<std::string>(), v));
    const Json& table = j["table"];
    if (!table.is_array() || static_cast<int>(table.size()) != oa)
        throw std::invalid_argument("box: table has wrong x extent");
    for (int x = 0; x < oa; ++x) {
        const Json& jx = table[x];
        if (!jx.is_array() || static_cast<int>(jx.size()) != ob)
            throw std::invalid_argument("box: table has wrong y extent");
        for (int y = 0; y < ob; ++y) {
            const Json& jy = jx[y];
            if (!jy.is_array() || static_cast<int>(jy.size()) != ia)
                throw std::invalid_argument("box: table has wrong u extent");
            for (int u = 0; u < ia; ++u) {
                const Json& ju = jy[u];
                if (!ju.is_array() || static_cast<int>(ju.size()) != ib)
                    throw std::invalid_argument("box: table has wrong v extent");
                for (int v2 = 0; v2 < ib; ++v2)
                    b.at(x, y, u, v2) = scalar_from_text(ju[v2].get<std::string>(), v);
            }
        }
    }
    return b;
}

inline Json certificate_to_json(const Certificate& c,
                                const std::vector<LocalDetStrategy>& columns) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "certificate";
    j["certified"] = c.certified;
    j["gap_mode"] = gap_mode_name(c.gap_mode);
    j["objective"] = c.solution.objective.str();
    j["pricing_gap"] = c.pricing_gap.str();
    Json cols = Json::array();
    for (const auto& s : columns) cols.push_back(s.str());
    j["columns"] = std::move(cols);
    Json primal = Json::array();
    for (const auto& [col, w] : c.solution.primal) {
        if (col < 0 || static_cast<size_t>(col) >= columns.size())
            throw std::invalid_argument("certificate: primal index outside the column list");
        primal.push_back(Json{{"column", col},
                              {"strategy", columns[static_cast<size_t>(col)].str()},
                              {"weight", w.str()}});
    }
    j["primal"] = std::move(primal);
    Json dual = Json::array();
    for (const auto& [row, y] : c.solution.dual)
        dual.push_back(Json{{"row", row}, {"value", y.str()}});
    j["dual"] = std::move(dual);
    Json slack = Json::array();
    for (const auto& s : c.slack) slack.push_back(s.str());
    j["slack"] = std::move(slack);
    return j;
}

inline std::pair<Certificate, std::vector<LocalDetStrategy>> certificate_from_json(const Json& j) {
    detail::require_schema(j, "certificate");
    Certificate c;
    std::vector<LocalDetStrategy> columns;
    c.certified = j.at("certified").get<bool>();
    c.gap_mode = gap_mode_from_name(j.at("gap_mode").get<std::string>());
    c.solution.objective = Rational::parse(j.at("objective").get<std::string>());
    c.pricing_gap = Rational::parse(j.at("pricing_gap").get<std::string>());
    for (const auto& s : j.at("columns")) columns.push_back(LocalDetStrategy::parse(s.get<std::string>()));
    for (const auto& p : j.at("primal")) {
        const int col = p.at("column").get<int>();
        if (col < 0 || static_cast<size_t>(col) >= columns.size())
            throw std::invalid_argument("certificate: primal index outside the column list");
        if (p.contains("strategy") &&
            LocalDetStrategy::parse(p.at("strategy").get<std::string>()).encode() !=
                columns[static_cast<size_t>(col)].encode())
            throw std::invalid_argument("certificate: primal strategy text disagrees with its column");
        c.solution.primal.emplace_back(col, Rational::parse(p.at("weight").get<std::string>()));
    }
    for (const auto& y : j.at("dual"))
        c.solution.dual.emplace_back(y.at("row").get<int>(),
                                     Rational::parse(y.at("value").get<std::string>()));
    for (const auto& s : j.at("slack")) c.slack.push_back(Rational::parse(s.get<std::string>()));
    return {std::move(c), std::move(columns)};
}

// The master the certificate claims to solve: the box's rows plus one
// column per listed strategy, unit objective.
inline LPProblem certificate_problem(const Box& b, const std::vector<LocalDetStrategy>& columns) {
    LPProblem p = box_lp_rows(b);
    for (const auto& s : columns) {
        p.columns.push_back({strategy_rows(s)});
        p.objective.push_back(Rational(1));
    }
    return p;
}

// Full third-party re-verification: feasibility, duality, and slack checks
// against a freshly built master, then an independent pricing pass over the
// entire strategy space whenever the certificate claims optimality.
inline std::optional<std::string> reverify_certificate(const Box& b, const Certificate& c,
                                                       const std::vector<LocalDetStrategy>& columns,
                                                       int threads = 0) {
    LPProblem p = certificate_problem(b, columns);
    if (auto why = verify_certificate(c, p)) return why;
    if (c.certified) {
        std::vector<Rational> y(p.rhs.size(), Rational(0));
        for (const auto& [row, value] : c.solution.dual) {
            if (row < 0 || static_cast<size_t>(row) >= y.size())
                return "dual entry outside the row range";
            y[static_cast<size_t>(row)] = value;
        }
        PricedStrategy best = price_strategies(y, b.rounds(), threads);
        if (best.reduced_cost.is_positive())
            return "pricing pass found an improving strategy " + best.strategy.str() +
                   " with reduced cost " + best.reduced_cost.str();
    }
    return std::nullopt;
}

inline Json decomposition_to_json(const Decomposition& d, const Box& target) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "decomposition";
    j["target"] = box_to_json(target);
    Json terms = Json::array();
    for (const auto& [w, s] : d.terms)
        terms.push_back(Json{{"weight", w.str()}, {"strategy", s.str()}});
    j["terms"] = std::move(terms);
    j["remainder_weight"] = d.remainder_weight.str();
    j["remainder"] = box_to_json(d.remainder);
    auto why = check_decomposition(d, target);
    j["verified"] = !why.has_value();
    if (why) j["failure"] = *why;
    return j;
}

inline Json localpart_to_json(const LocalPart& lp) {
    Json j;
    j["weight"] = lp.weight.str();
    j["fraction"] = lp.fraction.str();
    j["certified"] = lp.certificate.certified;
    j["gap_mode"] = gap_mode_name(lp.certificate.gap_mode);
    j["upper_bound"] = lp.upper_bound.str();
    j["columns"] = lp.columns.size();
    j["rounds"] = lp.rounds;
    j["pivots"] = lp.pivots;
    return j;
}

inline Json snk_to_json(const SnkReport& r, const std::string& certificate_file = {}) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "word-report";
    j["n"] = r.n;
    j["k"] = r.k;
    j["mass"] = r.mass.str();
    j["local"] = localpart_to_json(r.local);
    if (!certificate_file.empty()) j["certificate_file"] = certificate_file;
    return j;
}

// Piece index per sample; -1 marks samples no fitted piece covers.
inline std::vector<int> sweep_piece_ids(const SweepResult& r) {
    std::vector<int> ids(r.samples.size(), -1);
    for (size_t p = 0; p < r.pieces.size(); ++p)
        for (size_t i = r.pieces[p].first; i <= r.pieces[p].last && i < ids.size(); ++i)
            if (ids[i] < 0) ids[i] = static_cast<int>(p);
    return ids;
}

// One row per sample; the approximation column is for plotting only, every
// exact value is in the rational columns.
inline std::string sweep_csv(const SweepResult& r,
                             const std::vector<std::string>& certificate_files = {}) {
    const std::vector<int> ids = sweep_piece_ids(r);
    std::string csv = std::string(var_name(family_var(r.family))) +
                      ",local_part,piece_id,certificate_file,local_part_approx\n";
    for (size_t i = 0; i < r.samples.size(); ++i) {
        const auto& s = r.samples[i];
        csv += s.param.str() + ',' + s.result.weight.str() + ',';
        csv += ids[i] < 0 ? std::string("-") : std::to_string(ids[i]);
        csv += ',';
        if (i < certificate_files.size()) csv += certificate_files[i];
        char approx[40];
        std::snprintf(approx, sizeof approx, "%.12g", s.result.weight.approx());
        csv += ',';
        csv += approx;
        csv += '\n';
    }
    return csv;
}

inline Json sweep_to_json(const SweepResult& r,
                          const std::vector<std::string>& certificate_files = {}) {
    const std::vector<int> ids = sweep_piece_ids(r);
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "sweep";
    j["family"] = family_name(r.family);
    j["n"] = r.n;
    Json samples = Json::array();
    for (size_t i = 0; i < r.samples.size(); ++i) {
        const auto& s = r.samples[i];
        Json row{{"param", s.param.str()},
                 {"local_part", s.result.weight.str()},
                 {"certified", s.result.certificate.certified},
                 {"piece_id", ids[i]}};
        if (i < certificate_files.size()) row["certificate_file"] = certificate_files[i];
        samples.push_back(std::move(row));
    }
    j["samples"] = std::move(samples);
    Json pieces = Json::array();
    for (const auto& p : r.pieces) {
        Json coeffs = Json::array();
        for (int d = 0; d <= p.poly.degree(); ++d) coeffs.push_back(p.poly.coeff(d).str());
        pieces.push_back(Json{{"first_index", p.first},
                              {"last_index", p.last},
                              {"first", r.samples[p.first].param.str()},
                              {"last", r.samples[p.last].param.str()},
                              {"poly", std::move(coeffs)}});
    }
    j["pieces"] = std::move(pieces);
    Json bounds = Json::array();
    for (const auto& b : r.boundaries)
        bounds.push_back(Json{{"lo", b.lo.str()}, {"hi", b.hi.str()}, {"continuous", b.continuous}});
    j["boundaries"] = std::move(bounds);
    return j;
}

}  // namespace prbox
