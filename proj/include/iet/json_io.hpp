#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "iet/chains.hpp"
#include "iet/first_return.hpp"
#include "iet/roots.hpp"

namespace iet {

using Json = nlohmann::json;

// ---- serialization --------------------------------------------------------
// Rationals travel as strings "p" or "p/q" (lowest terms, q > 0); reals as
// arrays of such strings, one per basis element. No floating point enters
// the persistence layer, so parse(serialize(x)) reproduces x bit-exactly.

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const ExactReal& x) {
    Json a = Json::array();
    for (const Rational& c : x.coeffs()) a.push_back(to_string(c));
    return a;
}

inline Json to_json(const BasisSpec& basis) {
    Json a = Json::array();
    for (const BasisElement& e : basis.elements()) {
        switch (e.kind) {
            case BasisKind::Unit:
                a.push_back({{"kind", "unit"}});
                break;
            case BasisKind::Sqrt:
                a.push_back({{"kind", "sqrt"}, {"radicand", e.radicand.str()}});
                break;
            case BasisKind::Decimal:
                a.push_back({{"kind", "decimal"},
                             {"approx", to_string(e.approx)},
                             {"err", to_string(e.err)}});
                break;
        }
    }
    return a;
}

inline Json to_json(const IET& t) {
    Json lambda = Json::array();
    for (const ExactReal& l : t.lambda()) lambda.push_back(to_json(l));
    return Json{{"version", 1},
                {"basis", to_json(*t.basis())},
                {"L", to_json(t.length())},
                {"lambda", lambda},
                {"perm", t.perm().images()}};
}

inline Json to_json(const ChainSet& cs) {
    Json chains = Json::array();
    for (const Chain& c : cs.chains) {
        Json seeds = Json::array();
        for (const ExactReal& p : c.seeds) seeds.push_back(to_json(p));
        chains.push_back({{"points", seeds}, {"steps", c.gaps}});
    }
    return Json{{"chains", chains},
                {"count", cs.chains.size()},
                {"budget_used", cs.budget_used},
                {"max_iter", cs.max_iter}};
}

inline Json to_json(const Interval& iv) {
    return Json{{"a", to_json(iv.a)}, {"b", to_json(iv.b)}};
}

inline Json to_json(const ReturnSystem& rs) {
    Json pieces = Json::array();
    for (const Interval& p : rs.pieces) pieces.push_back(to_json(p));
    return Json{{"J", to_json(rs.j)},
                {"pieces", pieces},
                {"return_times", rs.return_times},
                {"induced", to_json(rs.induced)}};
}

inline Json to_json(const RootCertificate& c) {
    return Json{{"kind", "root"}, {"n", c.n}, {"S", to_json(c.s)}, {"verified", c.verified}};
}

inline const char* evidence_name(MinimalityEvidence e) {
    switch (e) {
        case MinimalityEvidence::Keane: return "keane";
        case MinimalityEvidence::ThreeIet: return "three_iet";
        case MinimalityEvidence::Asserted: return "asserted";
    }
    return "?";
}

inline Json to_json(const NoRootCertificate& c) {
    Json j{{"kind", "noroot"},
           {"reason", c.reason == NoRootReason::IdocHolds ? "idoc_holds" : "rank_bound"},
           {"evidence", evidence_name(c.evidence)}};
    if (c.reason == NoRootReason::RankBound) {
        j["rank"] = c.rank_value;
        j["intervals"] = c.interval_count;
    }
    return j;
}

inline Json to_json(const TowerForm& f) {
    Json j{{"kind", f.kind == TowerForm::Kind::Rotation ? "rotation" : "constant_height"},
           {"conjugator", to_json(f.g)},
           {"inverted", f.inverted},
           {"model", to_json(f.model())},
           {"alpha", to_json(f.rotation_amount())}};
    if (f.kind == TowerForm::Kind::ConstantHeight) j["d"] = f.d;
    return j;
}

// ---- parsing ---------------------------------------------------------------
// Structural errors carry a JSON pointer to the offending field.

namespace jsondetail {

[[noreturn]] inline void bad(const std::string& pointer, const std::string& what) {
    throw error(errc::invalid_document, what, pointer);
}

inline const Json& member(const Json& j, const char* key, const std::string& pointer) {
    if (!j.is_object() || !j.contains(key)) bad(pointer + "/" + key, "missing field");
    return j.at(key);
}

inline Rational rational_at(const Json& j, const std::string& pointer) {
    if (!j.is_string()) bad(pointer, "rational must be a string \"p\" or \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const error& e) {
        bad(pointer, e.what());
    }
}

} // namespace jsondetail

inline BasisPtr basis_from_json(const Json& j, const std::string& pointer = "/basis") {
    using jsondetail::bad;
    if (!j.is_array() || j.empty()) bad(pointer, "basis must be a nonempty array");
    std::vector<BasisElement> elements;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = pointer + "/" + std::to_string(i);
        const Json& e = j[i];
        if (!e.is_object() || !e.contains("kind")) bad(p, "basis element needs a kind");
        std::string kind = e.at("kind").get<std::string>();
        if (kind == "unit") {
            elements.push_back(unit_element());
        } else if (kind == "sqrt") {
            Rational r = jsondetail::rational_at(jsondetail::member(e, "radicand", p),
                                                 p + "/radicand");
            if (!is_integer(r)) bad(p + "/radicand", "radicand must be an integer");
            elements.push_back(sqrt_element(num(r)));
        } else if (kind == "decimal") {
            elements.push_back(decimal_element(
                jsondetail::rational_at(jsondetail::member(e, "approx", p), p + "/approx"),
                jsondetail::rational_at(jsondetail::member(e, "err", p), p + "/err")));
        } else {
            bad(p + "/kind", "unknown basis element kind '" + kind + "'");
        }
    }
    try {
        return BasisSpec::create(std::move(elements));
    } catch (const error& e) {
        throw error(e.code(), e.what(), pointer);
    }
}

inline ExactReal real_from_json(const Json& j, const BasisPtr& basis,
                                const std::string& pointer) {
    using jsondetail::bad;
    if (!j.is_array()) bad(pointer, "expected a coefficient array");
    if (j.size() != basis->dim()) bad(pointer, "coefficient count does not match basis");
    std::vector<Rational> coeffs;
    for (std::size_t i = 0; i < j.size(); ++i)
        coeffs.push_back(jsondetail::rational_at(j[i], pointer + "/" + std::to_string(i)));
    return ExactReal(basis, std::move(coeffs));
}

inline IET iet_from_json(const Json& j, const std::string& pointer = "") {
    using jsondetail::bad;
    if (!j.is_object()) bad(pointer.empty() ? "/" : pointer, "document must be an object");
    if (j.contains("version") && j.at("version") != 1)
        bad(pointer + "/version", "unsupported document version");
    BasisPtr basis = basis_from_json(jsondetail::member(j, "basis", pointer), pointer + "/basis");
    ExactReal length = real_from_json(jsondetail::member(j, "L", pointer), basis, pointer + "/L");
    const Json& lam = jsondetail::member(j, "lambda", pointer);
    if (!lam.is_array() || lam.empty()) bad(pointer + "/lambda", "lambda must be a nonempty array");
    std::vector<ExactReal> lambda;
    for (std::size_t i = 0; i < lam.size(); ++i)
        lambda.push_back(
            real_from_json(lam[i], basis, pointer + "/lambda/" + std::to_string(i)));
    const Json& perm = jsondetail::member(j, "perm", pointer);
    if (!perm.is_array()) bad(pointer + "/perm", "perm must be an array of integers");
    std::vector<int> images;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (!perm[i].is_number_integer())
            bad(pointer + "/perm/" + std::to_string(i), "perm entries must be integers");
        images.push_back(perm[i].get<int>());
    }
    try {
        return IET::make(Permutation(std::move(images)), std::move(lambda), std::move(length));
    } catch (const error& e) {
        throw error(e.code(), e.what(), pointer.empty() ? "/" : pointer);
    }
}

// ---- result envelopes -------------------------------------------------------

struct Envelope {
    int exit_code = 0;
    Json body;
};

inline Json budget_to_json(const BudgetReport& b) {
    Json j{{"iterations_used", b.iterations_used},
           {"max_iter", b.max_iter > 0 ? b.max_iter : default_options().max_iter},
           {"precision_bits", default_options().precision_bits}};
    j["exhausted"] = b.exhausted ? Json(*b.exhausted) : Json(nullptr);
    return j;
}

inline Envelope ok_envelope(Json payload, const BudgetReport& budget = {}) {
    return {0, Json{{"status", "ok"},
                    {"payload", std::move(payload)},
                    {"budget_report", budget_to_json(budget)}}};
}

inline Envelope inconclusive_envelope(Json payload, const BudgetReport& budget) {
    return {2, Json{{"status", "inconclusive"},
                    {"payload", std::move(payload)},
                    {"budget_report", budget_to_json(budget)}}};
}

inline Envelope error_envelope(const error& e) {
    Json err{{"code", std::string(code_name(e.code()))}, {"message", e.what()}};
    if (e.json_pointer()) err["pointer"] = *e.json_pointer();
    return {1, Json{{"status", "error"}, {"error", std::move(err)}}};
}

} // namespace iet
