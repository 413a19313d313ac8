#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "iet/json_io.hpp"

namespace iet::cli {

// Command bodies shared by the binary and the tests. Each returns a full
// result envelope plus the process exit code: 0 definitive, 2 inconclusive
// (an iteration budget ran out), 1 error.

namespace detail {

template <class F>
Envelope guarded(F&& f) {
    try {
        return f();
    } catch (const error& e) {
        return error_envelope(e);
    } catch (const std::exception& e) {
        return error_envelope(error(errc::invalid_argument, e.what()));
    }
}

// "p/q" (a rational multiple of the unit) or comma-separated coefficients
// "c0,c1,..." over the document's basis.
inline ExactReal parse_real_arg(const BasisPtr& basis, const std::string& s) {
    if (s.find(',') == std::string::npos)
        return ExactReal::rational(basis, parse_rational(s));
    std::vector<Rational> coeffs;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) coeffs.push_back(parse_rational(part));
    if (coeffs.size() != basis->dim())
        fail(errc::invalid_argument, "coefficient count does not match the document basis");
    return ExactReal(basis, std::move(coeffs));
}

inline Json real_with_approx(const ExactReal& x) {
    return Json{{"coeffs", to_json(x)}, {"approx", approx_decimal(x)},
                {"approx_abs_err", "1e-12"}};
}

} // namespace detail

inline Envelope cmd_eval(const Json& doc, const std::string& x_spec, bool inverse = false) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        ExactReal x = detail::parse_real_arg(t.basis(), x_spec);
        ExactReal y = inverse ? t.evaluate_inv(x) : t.evaluate(x);
        return ok_envelope(Json{{"value", detail::real_with_approx(y)}});
    });
}

inline Envelope cmd_compose(const Json& doc_a, const Json& doc_b) {
    return detail::guarded([&] {
        IET a = iet_from_json(doc_a, "/a");
        IET b = iet_from_json(doc_b, "/b");
        return ok_envelope(Json{{"iet", to_json(compose(a, b))}});
    });
}

inline Envelope cmd_power(const Json& doc, std::int64_t n) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        return ok_envelope(Json{{"iet", to_json(power(t, n))}});
    });
}

inline Envelope cmd_canon(const Json& doc) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        CanonicalIET c = canonicalize(t);
        return ok_envelope(Json{{"iet", to_json(c.iet)},
                                {"merge_map", c.merge_map},
                                {"separating", c.iet.perm().is_separating()}});
    });
}

inline Envelope cmd_rank(const Json& doc) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        Json payload{{"rank", rank(t)},
                     {"intervals", canonicalize(t).iet.count()},
                     {"rotation_type", is_rotation_type(t)},
                     {"keane_minimal",
                      keane_minimal_sufficient(t) == Keane::Yes ? "yes" : "unknown"}};
        return ok_envelope(std::move(payload));
    });
}

inline Envelope cmd_chains(const Json& doc, std::int64_t max_iter = 0) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        ChainSet cs = maximal_chains(t, max_iter);
        BudgetReport budget{cs.budget_used, std::nullopt, cs.max_iter};
        return ok_envelope(to_json(cs), budget);
    });
}

inline Envelope cmd_first_return(const Json& doc, const std::string& a_spec,
                                 const std::string& b_spec, std::int64_t max_iter = 0) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        Interval j{detail::parse_real_arg(t.basis(), a_spec),
                   detail::parse_real_arg(t.basis(), b_spec)};
        auto res = first_return(t, j, max_iter);
        if (res.inconclusive())
            return inconclusive_envelope(Json{{"reason", "budget exhausted"}}, res.budget);
        return ok_envelope(to_json(*res.value), res.budget);
    });
}

inline Envelope cmd_tower(const Json& base_doc, const std::vector<std::int64_t>& heights) {
    return detail::guarded([&] {
        IET base = iet_from_json(base_doc);
        TowerShape shape = tower_build(base, heights);
        return ok_envelope(Json{{"iet", to_json(shape.tower)},
                                {"heights", shape.heights},
                                {"canonical_intervals", canonicalize(shape.tower).iet.count()}});
    });
}

inline Envelope cmd_idoc(const Json& doc) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        IdocResult r = idoc_3iet(t);
        Json payload{{"idoc", r.holds}};
        if (r.witness)
            payload["witness"] = Json{{"n", r.witness->first.str()},
                                      {"m", r.witness->second.str()}};
        return ok_envelope(std::move(payload));
    });
}

inline Envelope cmd_find_root(const Json& doc, std::int64_t max_iter = 0) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc);
        RootSearch out = find_root_3iet(t, max_iter);
        if (out.inconclusive())
            return inconclusive_envelope(Json{{"reason", "budget exhausted"}}, out.budget);
        if (out.root) return ok_envelope(to_json(*out.root), out.budget);
        return ok_envelope(to_json(*out.no_root), out.budget);
    });
}

inline Envelope cmd_classify_tower(const Json& base_doc, std::int64_t m, std::int64_t n) {
    return detail::guarded([&] {
        IET base = iet_from_json(base_doc);
        TowerShape shape = tower_build(base, {m, n});
        TowerForm form = tower_classify(shape);
        Json payload = to_json(form);
        payload["tower"] = to_json(shape.tower);
        return ok_envelope(std::move(payload));
    });
}

inline Envelope cmd_examples(int m, const std::vector<std::string>& alpha_specs,
                             const Json& basis_json) {
    return detail::guarded([&] {
        BasisPtr basis = basis_from_json(basis_json);
        std::vector<ExactReal> alphas;
        for (const std::string& s : alpha_specs)
            alphas.push_back(detail::parse_real_arg(basis, s));
        ExampleFamily fam = example_family(m, alphas);
        return ok_envelope(Json{{"T", to_json(fam.t)},
                                {"S", to_json(fam.s)},
                                {"n", fam.n},
                                {"rank", rank(fam.t)}});
    });
}

// Re-derives everything; trusts no field of the certificate. Root
// certificates are checked by recomputing power(S, n) and comparing
// canonical forms; obstruction certificates are checked by re-running the
// decision they cite.
inline Envelope cmd_verify(const Json& cert, const Json& doc) {
    return detail::guarded([&] {
        IET t = iet_from_json(doc, "/iet");
        if (!cert.is_object() || !cert.contains("kind"))
            fail(errc::invalid_document, "certificate needs a kind");
        std::string kind = cert.at("kind").get<std::string>();

        if (kind == "root") {
            IET s = iet_from_json(jsondetail::member(cert, "S", "/certificate"),
                                  "/certificate/S");
            if (!cert.contains("n") || !cert.at("n").is_number_integer())
                fail(errc::invalid_document, "root certificate needs an integer n",
                     "/certificate/n");
            std::int64_t n = cert.at("n").get<std::int64_t>();
            if (n < 2)
                fail(errc::verification_failed, "root order must be at least 2");
            IET lhs = power(s, n);
            if (!equal(lhs, t)) {
                Envelope env = error_envelope(
                    error(errc::verification_failed, "power(S, n) differs from T"));
                env.body["diff"] = Json{{"power_S_n", to_json(canonicalize(lhs).iet)},
                                        {"T", to_json(canonicalize(t).iet)}};
                return env;
            }
            return ok_envelope(Json{{"verified", true}, {"kind", "root"}, {"n", n}});
        }

        if (kind == "noroot") {
            std::string reason = jsondetail::member(cert, "reason", "/certificate")
                                     .get<std::string>();
            if (reason == "idoc_holds") {
                if (!idoc_3iet(t).holds)
                    fail(errc::verification_failed, "IDOC does not hold for this map");
                return ok_envelope(Json{{"verified", true}, {"kind", "noroot"},
                                        {"reason", reason}});
            }
            if (reason == "rank_bound") {
                IET c = canonicalize(t).iet;
                std::size_t r = rank(c);
                std::size_t bound = 1 + static_cast<std::size_t>(c.count()) / 2;
                if (r <= bound)
                    fail(errc::verification_failed, "rank does not exceed the bound");
                if (cert.contains("rank") && cert.at("rank").get<std::size_t>() != r)
                    fail(errc::verification_failed, "certificate rank disagrees");
                std::string ev = jsondetail::member(cert, "evidence", "/certificate")
                                     .get<std::string>();
                if (ev == "keane" && keane_minimal_sufficient(t) != Keane::Yes)
                    fail(errc::verification_failed, "claimed Keane evidence fails");
                if (ev == "three_iet" && !minimal_3iet(t))
                    fail(errc::verification_failed, "claimed 3-exchange minimality fails");
                if (ev != "keane" && ev != "three_iet" && ev != "asserted")
                    fail(errc::invalid_document, "unknown minimality evidence",
                         "/certificate/evidence");
                return ok_envelope(Json{{"verified", true}, {"kind", "noroot"},
                                        {"reason", reason}, {"evidence", ev}});
            }
            fail(errc::invalid_document, "unknown obstruction reason", "/certificate/reason");
        }
        fail(errc::invalid_document, "unknown certificate kind", "/certificate/kind");
    });
}

} // namespace iet::cli
