#pragma once

// JSON serialization for every value the command line tool reads or writes.
// Conventions, applied uniformly:
//   * rationals travel as canonical strings "p/q" (or "n" when integral),
//     never as floats; readers accept unreduced input and canonicalize,
//   * a series records its truncation as truncation_num/truncation_den,
//     with truncation_den == 0 meaning the series is exact,
//   * term lists are sorted ascending so output is byte deterministic.

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "borcherds.hpp"
#include "weil.hpp"

namespace primeforms {

using json = nlohmann::ordered_json;

inline json series_to_json(const QSeries& s) {
    json j;
    j["exponent_denominator"] = s.exponent_denominator();
    if (s.is_exact()) {
        j["truncation_num"] = 0;
        j["truncation_den"] = 0;
    } else {
        const mpq_class& t = *s.truncation();
        j["truncation_num"] = to_long(t.get_num());
        j["truncation_den"] = to_long(t.get_den());
    }
    json terms = json::array();
    for (const auto& [n, c] : s.terms())
        terms.push_back(json::array({n, rat_to_string(c)}));
    j["terms"] = std::move(terms);
    return j;
}

inline QSeries series_from_json(const json& j) {
    const long ed = j.at("exponent_denominator").get<long>();
    if (ed < 1) throw std::invalid_argument("exponent_denominator must be positive");
    const long tn = j.at("truncation_num").get<long>();
    const long td = j.at("truncation_den").get<long>();
    if (td < 0) throw std::invalid_argument("truncation_den must be nonnegative");

    QSeries s = QSeries::zero();
    if (td != 0) s.set_truncation(rat(tn, td));

    const json& terms = j.at("terms");
    if (!terms.is_array()) throw std::invalid_argument("terms must be an array");
    std::set<long> seen;
    for (const json& t : terms) {
        if (!t.is_array() || t.size() != 2)
            throw std::invalid_argument("each term must be [exponent_num, coefficient]");
        const long num = t.at(0).get<long>();
        if (!seen.insert(num).second)
            throw std::invalid_argument("duplicate exponent in series terms");
        s.add_term(rat_from_string(t.at(1).get<std::string>()), num, ed);
    }
    return s;
}

inline json scalar_form_to_json(const ScalarForm& f) {
    json j;
    j["p"] = f.p;
    j["weight"] = f.weight;
    j["sign"] = f.sign;
    j["holomorphy"] = holomorphy_name(f.hol);
    j["series"] = series_to_json(f.series);
    return j;
}

inline ScalarForm scalar_form_from_json(const json& j) {
    ScalarForm f;
    f.p = j.at("p").get<long>();
    require_odd_prime(f.p);
    f.weight = j.at("weight").get<long>();
    f.sign = j.at("sign").get<int>();
    if (f.sign != 1 && f.sign != -1 && f.sign != 0)
        throw std::invalid_argument("sign must be 1, -1, or 0");
    f.hol = holomorphy_from_name(j.at("holomorphy").get<std::string>());
    f.series = series_from_json(j.at("series"));
    return f;
}

inline json vector_form_to_json(const VectorForm& F) {
    json j;
    j["p"] = F.info.p;
    j["alpha"] = F.info.alpha;
    j["epsilon"] = F.info.epsilon;
    j["r_mod8"] = F.info.r_mod8;
    j["weight"] = F.weight;
    json comps = json::array();
    for (const QSeries& c : F.comps) comps.push_back(series_to_json(c));
    j["components"] = std::move(comps);
    return j;
}

inline VectorForm vector_form_from_json(const json& j) {
    const long p = j.at("p").get<long>();
    const long alpha = j.at("alpha").get<long>();
    VectorForm F;
    F.info = make_discriminant_form(p, alpha);
    if (j.at("epsilon").get<int>() != F.info.epsilon)
        throw std::invalid_argument("epsilon field disagrees with chi_p(alpha)");
    if (j.at("r_mod8").get<int>() != F.info.r_mod8)
        throw std::invalid_argument("r_mod8 field disagrees with the derived signature");
    F.weight = j.at("weight").get<long>();
    const json& comps = j.at("components");
    if (!comps.is_array())
        throw std::invalid_argument("components must be an array");
    for (const json& c : comps) F.comps.push_back(series_from_json(c));
    validate_vector_form(F);
    return F;
}

inline json qfield_to_json(const QFieldElem& x) {
    json j;
    j["u"] = rat_to_string(x.u());
    j["v"] = rat_to_string(x.v());
    return j;
}

inline QFieldElem qfield_from_json(long p, const json& j) {
    return QFieldElem(p,
                      rat_from_string(j.at("u").get<std::string>()),
                      rat_from_string(j.at("v").get<std::string>()));
}

inline json principal_part_to_json(const PrincipalPart& pp) {
    json j;
    j["p"] = pp.p;
    j["sign"] = pp.eps;
    json terms = json::array();
    for (const auto& [n, c] : pp.coeffs)
        terms.push_back(json::array({n, rat_to_string(c)}));
    j["terms"] = std::move(terms);
    return j;
}

inline PrincipalPart principal_part_from_json(const json& j) {
    const long p = j.at("p").get<long>();
    const int sign = j.at("sign").get<int>();
    const json& terms = j.at("terms");
    if (!terms.is_array()) throw std::invalid_argument("terms must be an array");
    std::map<long, mpq_class> coeffs;
    for (const json& t : terms) {
        if (!t.is_array() || t.size() != 2)
            throw std::invalid_argument("each term must be [exponent, coefficient]");
        const long n = t.at(0).get<long>();
        if (!coeffs.emplace(n, rat_from_string(t.at(1).get<std::string>())).second)
            throw std::invalid_argument("duplicate exponent in principal part");
    }
    return PrincipalPart(p, sign, std::move(coeffs));
}

inline json expansion_to_json(const HilbertExpansion& e) {
    json j;
    j["p"] = e.p;
    j["rho"] = qfield_to_json(e.rho);
    j["grading_direction"] = qfield_to_json(e.direction);
    j["grading_bound"] = rat_to_string(e.bound);
    j["caveats"] = e.caveats;
    json terms = json::array();
    for (const HilbertTerm& t : e.terms) {
        json jt;
        jt["nu"] = qfield_to_json(t.nu);
        jt["c"] = rat_to_string(t.c);
        terms.push_back(std::move(jt));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline HilbertExpansion expansion_from_json(const json& j) {
    const long p = j.at("p").get<long>();
    require_prime_1mod4(p);
    HilbertExpansion e{p,
                       qfield_from_json(p, j.at("rho")),
                       qfield_from_json(p, j.at("grading_direction")),
                       rat_from_string(j.at("grading_bound").get<std::string>()),
                       j.at("caveats").get<std::vector<std::string>>(),
                       {}};
    if (!e.direction.is_totally_positive())
        throw std::invalid_argument("grading direction must be totally positive");
    for (const json& jt : j.at("terms")) {
        QFieldElem nu = qfield_from_json(p, jt.at("nu"));
        mpq_class pairing = (nu * e.direction).trace();
        if (pairing < 0 || pairing > e.bound)
            throw std::invalid_argument("expansion term outside the grading window");
        e.terms.push_back({std::move(nu), std::move(pairing),
                           rat_from_string(jt.at("c").get<std::string>())});
    }
    for (std::size_t i = 1; i < e.terms.size(); ++i) {
        const HilbertTerm& a = e.terms[i - 1];
        const HilbertTerm& b = e.terms[i];
        const auto ka = std::make_tuple(a.pairing, a.nu.u(), a.nu.v());
        const auto kb = std::make_tuple(b.pairing, b.nu.u(), b.nu.v());
        if (!(ka < kb))
            throw std::invalid_argument("expansion terms must be sorted and distinct");
    }
    return e;
}

/// Seed and basis files hold a JSON array of scalar forms.
inline std::vector<ScalarForm> form_list_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected a JSON array of forms");
    std::vector<ScalarForm> out;
    for (const json& f : j) out.push_back(scalar_form_from_json(f));
    return out;
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace primeforms
