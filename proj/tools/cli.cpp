// Command line front end. Computational commands emit exact data only
// (rationals as strings); the numeric-tolerance material lives under
// `verify` and `gauss-sum` prints both exact and numeric values for
// side-by-side inspection.
//
// Exit codes: 0 success, 2 mathematical-precondition failure (domain
// errors from the library), 1 I/O or usage failure.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <primeforms/io.hpp>
#include <primeforms/verify.hpp>

namespace pf = primeforms;

namespace {

/// 0 = auto. Expansion work is currently sequential, which respects any cap;
/// the variable is validated here so misconfiguration fails loudly.
long thread_cap_from_env() {
    const char* env = std::getenv("PRIME_BORCHERDS_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0)
        throw std::runtime_error(
            "PRIME_BORCHERDS_THREADS must be a nonnegative integer");
    return v;
}

struct OutputSink {
    std::string format = "table";  // "table" or "json"
    std::string path;              // empty = stdout

    void emit(const pf::json& j, const std::string& table) const {
        std::string payload = format == "json" ? j.dump(2) + "\n" : table;
        if (path.empty()) {
            std::cout << payload;
            return;
        }
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open " + path + " for writing");
        f << payload;
        if (!f) throw std::runtime_error("write to " + path + " failed");
    }
};

void add_output_flags(CLI::App* cmd, OutputSink& out) {
    cmd->add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", out.path, "write output to this file instead of stdout");
}

std::string qfield_str(const pf::QFieldElem& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

/// "u,v" with rational components, meaning u + v*sqrt(p).
pf::QFieldElem parse_qfield(long p, const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("expected 'u,v' with rational u and v, got '" + s + "'");
    return pf::QFieldElem(p, pf::rat_from_string(s.substr(0, comma)),
                          pf::rat_from_string(s.substr(comma + 1)));
}

std::string scalar_form_table(const pf::ScalarForm& f) {
    std::ostringstream os;
    os << "p           " << f.p << "\n"
       << "weight      " << f.weight << "\n"
       << "sign        " << f.sign << "\n"
       << "holomorphy  " << pf::holomorphy_name(f.hol) << "\n"
       << "series      " << f.series.str() << "\n";
    return os.str();
}

std::string vector_form_table(const pf::VectorForm& F) {
    std::ostringstream os;
    os << "p        " << F.info.p << "\n"
       << "alpha    " << F.info.alpha << "\n"
       << "epsilon  " << F.info.epsilon << "\n"
       << "r mod 8  " << F.info.r_mod8 << "\n"
       << "weight   " << F.weight << "\n";
    for (std::size_t g = 0; g < F.comps.size(); ++g)
        os << "F_" << g << "  " << F.comps[g].str() << "\n";
    return os.str();
}

std::string expansion_table(const pf::HilbertExpansion& e) {
    std::ostringstream os;
    os << "p            " << e.p << "\n"
       << "rho          " << qfield_str(e.rho) << "\n"
       << "direction    " << qfield_str(e.direction) << "\n"
       << "trace bound  " << pf::rat_to_string(e.bound) << "\n"
       << "caveats      ";
    if (e.caveats.empty()) os << "(none)";
    for (std::size_t i = 0; i < e.caveats.size(); ++i)
        os << (i ? ", " : "") << e.caveats[i];
    os << "\n"
       << "terms        " << e.terms.size() << "\n";
    for (const pf::HilbertTerm& t : e.terms)
        os << "  [" << pf::rat_to_string(t.pairing) << "]  (" << qfield_str(t.nu)
           << ")  " << pf::rat_to_string(t.c) << "\n";
    return os.str();
}

/// The normalized pole data of f_m: coefficient 1/s(m) at q^-m.
pf::PrincipalPart fm_principal_part(long p, long m) {
    if (m < 1) throw std::domain_error("m must be positive");
    std::map<long, mpq_class> c;
    c[-m] = pf::rat(1, pf::s_factor(m, p));
    return pf::PrincipalPart(p, 1, std::move(c));
}

pf::ScalarForm build_fm(long p, long m, const std::string& seeds_path,
                        const mpq_class& prec) {
    if (seeds_path.empty()) {
        if (p != 5)
            throw std::domain_error("seed forms (--seeds) are required for p != 5");
        return pf::construct_fm_p5(m, prec);
    }
    std::vector<pf::ScalarForm> seeds =
        pf::form_list_from_json(pf::load_json(seeds_path));
    return pf::reduce_to_principal_part(std::move(seeds), fm_principal_part(p, m),
                                        prec);
}

int cmd_verify(const OutputSink& out) {
    std::vector<pf::CheckResult> results = pf::run_acceptance_checks();
    bool all = true;
    std::ostringstream table;
    pf::json rows = pf::json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const pf::CheckResult& r = results[i];
        all = all && r.pass;
        char line[160];
        std::snprintf(line, sizeof line, "%s %2zu  %-38s (%.3f s)", r.pass ? "PASS" : "FAIL",
                      i + 1, r.name.c_str(), r.seconds);
        table << line;
        if (!r.detail.empty()) table << "  " << r.detail;
        table << "\n";
        pf::json row;
        row["index"] = i + 1;
        row["name"] = r.name;
        row["pass"] = r.pass;
        row["detail"] = r.detail;
        rows.push_back(std::move(row));
    }
    table << (all ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
    pf::json j;
    j["pass"] = all;
    j["checks"] = std::move(rows);
    out.emit(j, table.str());
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact arithmetic for weight-0 plus-space forms at prime level and "
        "their Borcherds products on Hilbert modular surfaces.\n"
        "PRIME_BORCHERDS_THREADS caps internal parallelism (0 = auto)."};
    app.require_subcommand(1);

    long p = 5, m = 1, kappa = 2, trace_bound = 10, alpha = 0, prec = 0;
    int delta = 1;
    bool have_alpha = false;
    std::string in_path, pp_path, basis_path, seeds_path;
    std::string base1_str, base2_str, direction_str;
    OutputSink out;

    CLI::App* fm = app.add_subcommand("fm", "construct f_m, the weight-0 plus-space form with pole 1/s(m) q^-m");
    fm->add_option("--p", p, "prime level")->capture_default_str();
    fm->add_option("--m", m, "pole order")->required();
    fm->add_option("--prec", prec, "truncation bound (default: m + 25)");
    fm->add_option("--seeds", seeds_path, "JSON array of seed forms (required for p != 5)");
    add_output_flags(fm, out);

    CLI::App* eis = app.add_subcommand("eisenstein", "Eisenstein series E_kappa^delta of the plus or minus space");
    eis->add_option("--kappa", kappa, "weight")->required();
    eis->add_option("--delta", delta, "eigenspace sign, +1 or -1")->required();
    eis->add_option("--p", p, "prime level")->capture_default_str();
    eis->add_option("--prec", prec, "truncation bound (default: 25)");
    add_output_flags(eis, out);

    CLI::App* lift = app.add_subcommand("lift", "lift a scalar form to a vector-valued form for the Weil representation");
    lift->add_option("--in", in_path, "scalar form JSON file")->required();
    lift->add_option("--alpha", alpha, "discriminant form parameter (default: smallest residue with chi_p(alpha) = sign)")
        ->each([&](const std::string&) { have_alpha = true; });
    add_output_flags(lift, out);

    CLI::App* project = app.add_subcommand("project", "project a vector-valued form back to its scalar form");
    project->add_option("--in", in_path, "vector form JSON file")->required();
    add_output_flags(project, out);

    CLI::App* wv = app.add_subcommand("weyl-vector", "Weyl chamber data and Weyl vector of f_m");
    wv->add_option("--p", p, "prime level")->capture_default_str();
    wv->add_option("--m", m, "pole order")->required();
    wv->add_option("--base1", base1_str, "chamber base point, first embedding, as 'u,v' (default: -conj(eps0), eps0)");
    wv->add_option("--base2", base2_str, "chamber base point, second embedding, as 'u,v'");
    add_output_flags(wv, out);

    CLI::App* bor = app.add_subcommand("borcherds", "graded Fourier expansion of the Borcherds product of f_m");
    bor->add_option("--p", p, "prime level")->capture_default_str();
    bor->add_option("--m", m, "pole order")->required();
    bor->add_option("--trace-bound", trace_bound, "grading window: keep tr(nu d) <= bound")->capture_default_str();
    bor->add_option("--seeds", seeds_path, "JSON array of seed forms (required for p != 5)");
    bor->add_option("--base1", base1_str, "chamber base point, first embedding, as 'u,v'");
    bor->add_option("--base2", base2_str, "chamber base point, second embedding, as 'u,v'");
    bor->add_option("--direction", direction_str, "grading direction as 'u,v' (default: derived interior point)");
    add_output_flags(bor, out);

    CLI::App* obs = app.add_subcommand("obstructions", "existence test for a form with prescribed principal part");
    obs->add_option("--pp", pp_path, "principal part JSON file")->required();
    obs->add_option("--basis", basis_path, "JSON array of weight-2 cusp forms to pair against");
    add_output_flags(obs, out);

    CLI::App* sig = app.add_subcommand("signature-table", "r mod 8 by (p mod 4, epsilon), derived from the Gauss sum argument");
    add_output_flags(sig, out);

    CLI::App* gauss = app.add_subcommand("gauss-sum", "quadratic Gauss sum: brute-force numeric vs closed form");
    gauss->add_option("--p", p, "odd prime")->required();
    gauss->add_option("--alpha", alpha, "residue prime to p")->required();
    add_output_flags(gauss, out);

    CLI::App* verify = app.add_subcommand("verify", "run the full acceptance suite");
    add_output_flags(verify, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        thread_cap_from_env();

        if (*fm) {
            if (!fm->count("--prec")) prec = m + 25;
            if (prec < 1) throw std::domain_error("prec must be at least 1");
            pf::ScalarForm f = build_fm(p, m, seeds_path, mpq_class(prec));
            out.emit(pf::scalar_form_to_json(f), scalar_form_table(f));
        } else if (*eis) {
            if (!eis->count("--prec")) prec = 25;
            if (prec < 1) throw std::domain_error("prec must be at least 1");
            if (kappa < 2) throw std::domain_error("kappa must be at least 2");
            pf::ScalarForm e = pf::eisenstein_E(static_cast<unsigned>(kappa), delta, p,
                                                mpq_class(prec));
            out.emit(pf::scalar_form_to_json(e), scalar_form_table(e));
        } else if (*lift) {
            pf::ScalarForm f = pf::scalar_form_from_json(pf::load_json(in_path));
            if (!have_alpha) {
                if (f.sign == 0)
                    throw std::domain_error("form has unknown sign; pass --alpha");
                alpha = 1;
                while (pf::legendre_chi(alpha, f.p) != f.sign) ++alpha;
            }
            pf::VectorForm F = pf::lift_scalar_to_vector(f, alpha);
            out.emit(pf::vector_form_to_json(F), vector_form_table(F));
        } else if (*project) {
            pf::VectorForm F = pf::vector_form_from_json(pf::load_json(in_path));
            pf::ScalarForm f = pf::project_vector_to_scalar(F);
            out.emit(pf::scalar_form_to_json(f), scalar_form_table(f));
        } else if (*wv) {
            pf::require_prime_1mod4(p);
            auto [y1, y2] = pf::default_basepoint(p);
            if (!base1_str.empty()) y1 = parse_qfield(p, base1_str);
            if (!base2_str.empty()) y2 = parse_qfield(p, base2_str);
            pf::PrincipalPart pp = fm_principal_part(p, m);
            pf::WeylChamber W = pf::weyl_chamber_of(pp, y1, y2);
            pf::QFieldElem rho = pf::weyl_vector(pp, W);
            std::vector<pf::QFieldElem> reps = pf::R_set(W, -m);
            pf::json j;
            j["p"] = p;
            j["m"] = m;
            j["base1"] = pf::qfield_to_json(W.base1);
            j["base2"] = pf::qfield_to_json(W.base2);
            pf::json walls = pf::json::array();
            for (const pf::QFieldElem& w : W.walls) walls.push_back(pf::qfield_to_json(w));
            j["walls"] = std::move(walls);
            pf::json orbit = pf::json::array();
            for (const pf::QFieldElem& r : reps) orbit.push_back(pf::qfield_to_json(r));
            j["orbit_reps"] = std::move(orbit);
            j["rho"] = pf::qfield_to_json(rho);
            std::ostringstream table;
            table << "p      " << p << "\n"
                  << "m      " << m << "\n"
                  << "base   (" << qfield_str(W.base1) << ", " << qfield_str(W.base2)
                  << ")\n"
                  << "walls  " << W.walls.size() << "\n";
            for (const pf::QFieldElem& w : W.walls)
                table << "  " << qfield_str(w) << "\n";
            table << "R(W, " << -m << ")\n";
            for (const pf::QFieldElem& r : reps) table << "  " << qfield_str(r) << "\n";
            table << "rho    " << qfield_str(rho) << "\n";
            out.emit(j, table.str());
        } else if (*bor) {
            pf::require_prime_1mod4(p);
            if (trace_bound < 1) throw std::domain_error("trace bound must be positive");
            auto [y1, y2] = pf::default_basepoint(p);
            if (!base1_str.empty()) y1 = parse_qfield(p, base1_str);
            if (!base2_str.empty()) y2 = parse_qfield(p, base2_str);
            pf::PrincipalPart pp = fm_principal_part(p, m);
            pf::WeylChamber W = pf::weyl_chamber_of(pp, y1, y2);
            std::optional<pf::QFieldElem> dir;
            if (!direction_str.empty()) dir = parse_qfield(p, direction_str);
            pf::detail::ProductPlan plan =
                pf::detail::plan_product(pp, W, dir, mpq_class(trace_bound));
            pf::ScalarForm f = build_fm(p, m, seeds_path, mpq_class(plan.required));
            pf::HilbertExpansion e =
                dir ? pf::product_expansion(f, W, *dir, mpq_class(trace_bound))
                    : pf::product_expansion(f, W, mpq_class(trace_bound));
            out.emit(pf::expansion_to_json(e), expansion_table(e));
        } else if (*obs) {
            pf::PrincipalPart pp = pf::principal_part_from_json(pf::load_json(pp_path));
            std::vector<pf::ScalarForm> basis;
            if (!basis_path.empty())
                basis = pf::form_list_from_json(pf::load_json(basis_path));
            pf::ObstructionReport rep = pf::obstruction_check(pp, basis);
            pf::json j;
            j["ok"] = rep.ok;
            j["a0"] = pf::rat_to_string(rep.a0);
            pf::json pair = pf::json::array();
            for (const mpq_class& x : rep.pairings) pair.push_back(pf::rat_to_string(x));
            j["pairings"] = std::move(pair);
            std::ostringstream table;
            table << "ok        " << (rep.ok ? "true" : "false") << "\n"
                  << "a0        " << pf::rat_to_string(rep.a0) << "\n"
                  << "pairings  ";
            if (rep.pairings.empty()) table << "(no basis forms)";
            for (std::size_t i = 0; i < rep.pairings.size(); ++i)
                table << (i ? ", " : "") << pf::rat_to_string(rep.pairings[i]);
            table << "\n";
            out.emit(j, table.str());
        } else if (*sig) {
            pf::json rows = pf::json::array();
            std::ostringstream table;
            table << "p mod 4  epsilon  r mod 8\n";
            for (auto [cls, rep] : {std::pair<int, long>{1, 5}, {3, 7}})
                for (int eps : {1, -1}) {
                    int r = pf::signature_mod8(rep, eps);
                    pf::json row;
                    row["p_mod4"] = cls;
                    row["epsilon"] = eps;
                    row["r_mod8"] = r;
                    rows.push_back(std::move(row));
                    char line[64];
                    std::snprintf(line, sizeof line, "%7d  %+7d  %7d\n", cls, eps, r);
                    table << line;
                }
            pf::json j;
            j["rows"] = std::move(rows);
            out.emit(j, table.str());
        } else if (*gauss) {
            std::complex<double> closed = pf::quadratic_gauss_sum_closed(alpha, p);
            std::complex<double> numeric = pf::quadratic_gauss_sum_numeric(alpha, p);
            int chi = pf::legendre_chi(alpha, p);
            std::string closed_form = std::string(chi < 0 ? "-" : "") +
                                      (p % 4 == 1 ? "" : "i*") + "sqrt(" +
                                      std::to_string(p) + ")";
            pf::json j;
            j["p"] = p;
            j["alpha"] = alpha;
            j["chi"] = chi;
            j["eps_p"] = p % 4 == 1 ? "1" : "i";
            j["closed_form"] = closed_form;
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.12g%+.12gi", numeric.real(), numeric.imag());
            j["numeric"] = std::string(buf);
            std::ostringstream table;
            table << "p            " << p << "\n"
                  << "alpha        " << alpha << "\n"
                  << "chi_p(alpha) " << chi << "\n"
                  << "closed form  " << closed_form << "\n"
                  << "numeric      " << buf << "\n";
            std::snprintf(buf, sizeof buf, "%.3e", std::abs(numeric - closed));
            table << "deviation    " << buf << "\n";
            out.emit(j, table.str());
        } else if (*verify) {
            return cmd_verify(out);
        }
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
