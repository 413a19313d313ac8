// iet — command-line front end for the exact interval exchange toolkit.
// Documents are JSON (see docs/schema.json); all arithmetic is exact, and
// decimal output is display-only. Exit codes: 0 definitive, 2 inconclusive
// (iteration budget exhausted), 1 error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "iet/cli_core.hpp"

namespace {

using iet::Json;

Json load_doc(const std::string& path, bool use_stdin) {
    std::string text;
    if (use_stdin || path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(path);
        if (!in) iet::fail(iet::errc::invalid_argument, "cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded())
        iet::fail(iet::errc::invalid_document, "input is not valid JSON");
    return j;
}

void render_text(std::ostream& os, const Json& body) {
    os << "status: " << body.value("status", "?") << "\n";
    if (body.contains("payload")) {
        for (auto& [key, value] : body.at("payload").items()) {
            os << key << ": ";
            if (value.is_string())
                os << value.get<std::string>();
            else
                os << value.dump();
            os << "\n";
        }
    }
    if (body.contains("error")) os << "error: " << body.at("error").dump() << "\n";
    if (body.contains("diff")) os << "diff: " << body.at("diff").dump() << "\n";
}

int finish(const iet::Envelope& env, const std::string& output) {
    std::ostream& os = env.exit_code == 1 ? std::cerr : std::cout;
    if (output == "json")
        os << env.body.dump(2) << "\n";
    else
        render_text(os, env.body);
    return env.exit_code;
}

std::int64_t default_max_iter_from_env() {
    if (const char* v = std::getenv("IET_MAX_ITER")) {
        char* end = nullptr;
        long long parsed = std::strtoll(v, &end, 10);
        if (end && *end == '\0' && parsed > 0) return parsed;
    }
    return 100000;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computation in the group of interval exchange transformations"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string output = "text";
    std::int64_t max_iter = default_max_iter_from_env();
    unsigned precision_bits = 4096;
    bool use_stdin = false;
    app.add_option("--output", output, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--max-iter", max_iter, "iteration budget for orbit searches");
    app.add_option("--precision-bits", precision_bits, "precision budget for sign refinement");
    app.add_flag("--stdin", use_stdin, "read the (single) input document from stdin");

    std::string doc_path, a_path, b_path, cert_path, base_path;
    std::string x_spec, from_spec, to_spec, heights_spec, basis_path;
    std::vector<std::string> alpha_specs;
    bool inverse = false;
    std::int64_t power_n = 0, tower_m = 0, tower_n = 0;
    int family_m = 0;

    CLI::App* c_eval = app.add_subcommand("eval", "evaluate T(x) (or T^-1(x))");
    c_eval->add_option("--doc", doc_path, "IET document");
    c_eval->add_option("--x", x_spec, "point: \"p/q\" or coefficients \"c0,c1,...\"")
        ->required();
    c_eval->add_flag("--inverse", inverse, "evaluate the inverse map");

    CLI::App* c_compose = app.add_subcommand("compose", "compose two exchanges: a(b(x))");
    c_compose->add_option("--a", a_path, "outer document")->required();
    c_compose->add_option("--b", b_path, "inner document")->required();

    CLI::App* c_power = app.add_subcommand("power", "n-fold composition");
    c_power->add_option("--doc", doc_path, "IET document");
    c_power->add_option("--n", power_n, "exponent (may be negative)")->required();

    CLI::App* c_canon = app.add_subcommand("canon", "unique separating presentation");
    c_canon->add_option("--doc", doc_path, "IET document");

    CLI::App* c_rank = app.add_subcommand("rank", "rank over Q of the canonical lengths");
    c_rank->add_option("--doc", doc_path, "IET document");

    CLI::App* c_chains = app.add_subcommand("chains", "maximal chains of D(T) u {0}");
    c_chains->add_option("--doc", doc_path, "IET document");

    CLI::App* c_fr = app.add_subcommand("first-return", "first return map to [a, b)");
    c_fr->add_option("--doc", doc_path, "IET document");
    c_fr->add_option("--from", from_spec, "left endpoint")->required();
    c_fr->add_option("--to", to_spec, "right endpoint")->required();

    CLI::App* c_tower = app.add_subcommand("tower", "flatten a tower over a base exchange");
    c_tower->add_option("--base", base_path, "base IET document")->required();
    c_tower->add_option("--heights", heights_spec, "comma-separated positive heights")
        ->required();

    CLI::App* c_root = app.add_subcommand("find-root", "root search for a (321) 3-exchange");
    c_root->add_option("--doc", doc_path, "IET document");

    CLI::App* c_idoc = app.add_subcommand("idoc", "infinite distinct orbit condition");
    c_idoc->add_option("--doc", doc_path, "IET document");

    CLI::App* c_classify = app.add_subcommand("classify-tower",
                                              "classify a type (m, n) tower over a rotation");
    c_classify->add_option("--base", base_path, "rotation document")->required();
    c_classify->add_option("--m", tower_m, "first height")->required();
    c_classify->add_option("--n", tower_n, "second height")->required();

    CLI::App* c_examples = app.add_subcommand("examples", "optimal-rank family (T, S, n)");
    c_examples->add_option("--m", family_m, "interval count m >= 2")->required();
    c_examples->add_option("--alpha", alpha_specs, "rotation parameters (repeatable)");
    c_examples->add_option("--basis", basis_path, "basis document (default: 1, sqrt2, sqrt3)");

    CLI::App* c_verify = app.add_subcommand("verify", "re-check a certificate from scratch");
    c_verify->add_option("--cert", cert_path, "certificate document")->required();
    c_verify->add_option("--doc", doc_path, "IET document the certificate refers to")
        ->required();

    CLI11_PARSE(app, argc, argv);

    iet::OptionsScope scope({max_iter, precision_bits});
    try {
        if (*c_eval)
            return finish(iet::cli::cmd_eval(load_doc(doc_path, use_stdin), x_spec, inverse),
                          output);
        if (*c_compose)
            return finish(iet::cli::cmd_compose(load_doc(a_path, false), load_doc(b_path, false)),
                          output);
        if (*c_power)
            return finish(iet::cli::cmd_power(load_doc(doc_path, use_stdin), power_n), output);
        if (*c_canon)
            return finish(iet::cli::cmd_canon(load_doc(doc_path, use_stdin)), output);
        if (*c_rank)
            return finish(iet::cli::cmd_rank(load_doc(doc_path, use_stdin)), output);
        if (*c_chains)
            return finish(iet::cli::cmd_chains(load_doc(doc_path, use_stdin), max_iter), output);
        if (*c_fr)
            return finish(iet::cli::cmd_first_return(load_doc(doc_path, use_stdin), from_spec,
                                                     to_spec, max_iter),
                          output);
        if (*c_tower) {
            std::vector<std::int64_t> heights;
            std::stringstream ss(heights_spec);
            std::string part;
            while (std::getline(ss, part, ',')) heights.push_back(std::stoll(part));
            return finish(iet::cli::cmd_tower(load_doc(base_path, use_stdin), heights), output);
        }
        if (*c_root)
            return finish(iet::cli::cmd_find_root(load_doc(doc_path, use_stdin), max_iter),
                          output);
        if (*c_idoc)
            return finish(iet::cli::cmd_idoc(load_doc(doc_path, use_stdin)), output);
        if (*c_classify)
            return finish(iet::cli::cmd_classify_tower(load_doc(base_path, use_stdin), tower_m,
                                                       tower_n),
                          output);
        if (*c_examples) {
            int n_params = family_m / 2;
            Json basis;
            if (!basis_path.empty()) basis = load_doc(basis_path, use_stdin);
            if (alpha_specs.empty()) {
                // default parameters sqrt(p_j) - 1 over square roots of primes
                static const int primes[] = {2, 3, 5, 7, 11, 13};
                if (n_params < 1 || n_params > 6)
                    iet::fail(iet::errc::invalid_argument,
                              "supply --alpha parameters explicitly for m > 13");
                if (basis_path.empty()) {
                    basis = Json::array({Json{{"kind", "unit"}}});
                    for (int j = 0; j < n_params; ++j)
                        basis.push_back(Json{{"kind", "sqrt"},
                                             {"radicand", std::to_string(primes[j])}});
                }
                for (int j = 0; j < n_params; ++j) {
                    std::string spec = "-1";
                    for (int k = 0; k < n_params; ++k)
                        spec += (k == j) ? ",1" : ",0";
                    alpha_specs.push_back(spec);
                }
            } else if (basis_path.empty()) {
                basis = Json::array({Json{{"kind", "unit"}},
                                     Json{{"kind", "sqrt"}, {"radicand", "2"}},
                                     Json{{"kind", "sqrt"}, {"radicand", "3"}}});
            }
            return finish(iet::cli::cmd_examples(family_m, alpha_specs, basis), output);
        }
        if (*c_verify)
            return finish(iet::cli::cmd_verify(load_doc(cert_path, false),
                                               load_doc(doc_path, use_stdin)),
                          output);
    } catch (const iet::error& e) {
        return finish(iet::error_envelope(e), output);
    }
    return 1;
}
