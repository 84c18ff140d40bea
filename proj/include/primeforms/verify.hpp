#pragma once

// Batch checks for the headline computations, shared by the test binary and
// the command line tool. Each check is independent, timed, and reports a
// short diagnostic on failure instead of aborting the batch.
//
// This header also hosts a second, slow product-expansion engine used to
// cross-check the production one. The two share only the factor enumeration;
// the slow engine multiplies plain polynomials (powers by repeated squaring,
// negative exponents by powering the geometric series) and never touches the
// binomial-row convolution of the fast path.

#include <array>
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "borcherds.hpp"
#include "weil.hpp"

namespace primeforms {

namespace oracle {

using Key = std::pair<long, long>;
using Poly = std::map<Key, mpq_class>;

struct Grading {
    mpq_class du, dv, bound;
    mpq_class pairing(const Key& k) const { return k.first * dv + k.second * du; }
};

/// Naive product with pruning. Sound because every retained monomial has
/// strictly positive pairing, so dropped keys can never re-enter the window.
inline Poly mul(const Poly& a, const Poly& b, const Grading& g) {
    Poly out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            Key k{ka.first + kb.first, ka.second + kb.second};
            if (g.pairing(k) > g.bound) continue;
            auto [it, fresh] = out.try_emplace(k, ca * cb);
            if (!fresh) it->second += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

inline Poly pow_sq(Poly base, mpz_class e, const Grading& g) {
    Poly acc{{{0, 0}, mpq_class(1)}};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, base, g);
        e >>= 1;
        if (e > 0) base = mul(base, base, g);
    }
    return acc;
}

inline HilbertExpansion product_expansion_slow(const ScalarForm& f,
                                               const WeylChamber& W,
                                               std::optional<QFieldElem> direction,
                                               const mpq_class& bound) {
    PrincipalPart pp = principal_part_of(f);
    detail::ProductPlan plan = detail::plan_product(pp, W, std::move(direction), bound);
    std::vector<detail::BorcherdsFactor> factors = detail::borcherds_factors(f, plan);
    Grading g{plan.direction.u(), plan.direction.v(), bound};
    Poly acc{{{0, 0}, mpq_class(1)}};
    bool region_restricted = false;
    for (const detail::BorcherdsFactor& fac : factors) {
        Key step = detail::nu_key(fac.nu);
        Poly piece;
        if (fac.c >= 0) {
            Poly lin{{{0, 0}, mpq_class(1)}, {step, mpq_class(-1)}};
            piece = pow_sq(std::move(lin), fac.c, g);
        } else {
            region_restricted = true;
            Poly geo;  // 1/(1 - X) within the window
            for (Key k{0, 0}; g.pairing(k) <= g.bound;
                 k.first += step.first, k.second += step.second)
                geo[k] = 1;
            piece = pow_sq(std::move(geo), -fac.c, g);
        }
        acc = mul(acc, piece, g);
    }
    HilbertExpansion out{f.p, plan.rho, plan.direction, bound, {}, {}};
    if (region_restricted) out.caveats.push_back("region-restricted");
    for (const auto& [k, c] : acc)
        out.terms.push_back({QFieldElem(f.p, rat(k.second, 2), rat(k.first, 2 * f.p)),
                             g.pairing(k), c});
    std::sort(out.terms.begin(), out.terms.end(),
              [](const HilbertTerm& a, const HilbertTerm& b) {
                  if (a.pairing != b.pairing) return a.pairing < b.pairing;
                  if (a.nu.u() != b.nu.u()) return a.nu.u() < b.nu.u();
                  return a.nu.v() < b.nu.v();
              });
    return out;
}

}  // namespace oracle

struct CheckResult {
    std::string name;
    bool pass;
    double seconds;
    std::string detail;  // empty on success
};

namespace checks {

inline bool same_expansion(const HilbertExpansion& a, const HilbertExpansion& b,
                           std::string& why) {
    std::ostringstream os;
    if (a.p != b.p || !(a.rho == b.rho) || !(a.direction == b.direction) ||
        a.bound != b.bound || a.caveats != b.caveats) {
        why = "expansion metadata differs";
        return false;
    }
    if (a.terms.size() != b.terms.size()) {
        os << "term counts differ: " << a.terms.size() << " vs " << b.terms.size();
        why = os.str();
        return false;
    }
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const HilbertTerm& s = a.terms[i];
        const HilbertTerm& t = b.terms[i];
        if (!(s.nu == t.nu) || s.pairing != t.pairing || s.c != t.c) {
            os << "term " << i << " differs: (" << s.nu << ") " << s.c << " vs ("
               << t.nu << ") " << t.c;
            why = os.str();
            return false;
        }
    }
    return true;
}

inline bool f1_digits(std::string& why) {
    ScalarForm f1 = construct_fm_p5(1, 15);
    QSeries want = QSeries::zero(TruncBound(mpq_class(15)));
    const std::pair<long, long> table[] = {{-1, 1},  {0, 5},    {1, 11},
                                           {4, -54}, {5, 55},   {6, 44},
                                           {9, -395}, {10, 340}, {11, 296},
                                           {14, -1836}};
    for (auto [n, c] : table) want.add_term(mpq_class(c), n);
    if (f1.series != want) {
        why = "f1 = " + f1.series.str();
        return false;
    }
    return f1.weight == 0 && f1.sign == 1;
}

inline bool fm_digits(std::string& why) {
    struct Entry {
        long n, num, den;
    };
    struct Row {
        long m;
        std::vector<Entry> digits;
    };
    const std::vector<Row> rows = {
        {4, {{-4, 1, 1}, {0, 15, 1}, {1, -216, 1}, {4, 4959, 1}, {5, 22040, 1},
             {6, -90984, 1}, {9, 409944, 1}, {10, 1388520, 1}}},
        {5, {{-5, 1, 2}, {0, 15, 1}, {1, 275, 1}, {4, 27550, 1}, {5, 43893, 1},
             {6, 255300, 1}, {9, 4173825, 1}}},
        {6, {{-6, 1, 1}, {0, 10, 1}, {1, 264, 1}, {4, -136476, 1}, {5, 306360, 1},
             {6, 616220, 1}, {9, -35408776, 1}}},
        {9, {{-9, 1, 1}, {0, 35, 1}, {1, -3555, 1}, {4, 922374, 1},
             {5, 7512885, 1}, {6, -53113164, 1}, {9, 953960075, 1}}},
        {10, {{-10, 1, 2}, {0, 10, 1}, {1, 3400, 1}, {4, 3471300, 1},
              {5, 9614200, 1}, {6, 91620925, 1}, {9, 5391558200, 1}}}};
    for (const Row& row : rows) {
        ScalarForm f = construct_fm_p5(row.m, 11);
        for (const Entry& e : row.digits)
            if (f.series.coeff(e.n) != rat(e.num, e.den)) {
                std::ostringstream os;
                os << "f" << row.m << " coefficient at q^" << e.n << " is "
                   << rat_to_string(f.series.coeff(e.n));
                why = os.str();
                return false;
            }
    }
    return true;
}

inline bool constant_term_law(std::string& why) {
    ScalarForm e2 = eisenstein_E(2, 1, 5, 21);
    const std::map<long, long> frozen = {{1, 5},  {4, 15}, {5, 15},
                                         {6, 10}, {9, 35}, {10, 10}};
    for (long m = 1; m <= 20; ++m) {
        if (legendre_chi(m, 5) == -1) continue;
        mpq_class direct = construct_fm_p5(m, 1).a(0);
        mpq_class from_eisenstein = -e2.a(m) / 2;
        if (direct != from_eisenstein) {
            why = "paths disagree at m = " + std::to_string(m);
            return false;
        }
        auto it = frozen.find(m);
        if (it != frozen.end() && direct != it->second) {
            why = "frozen constant differs at m = " + std::to_string(m);
            return false;
        }
    }
    return true;
}

inline bool cusp_dimensions(std::string& why) {
    const std::array<std::pair<long, long>, 5> want = {
        {{5, 0}, {13, 0}, {17, 0}, {29, 2}, {53, 4}}};
    for (auto [p, d] : want)
        if (dim_s2_chi(p) != d || dim_s2_plus(p) != d / 2) {
            why = "dimension wrong at p = " + std::to_string(p);
            return false;
        }
    return true;
}

inline bool weyl_vector_example(std::string& why) {
    PrincipalPart pp = principal_part_of(construct_f1_p5(2));
    auto [y1, y2] = default_basepoint(5);
    WeylChamber W = weyl_chamber_of(pp, y1, y2);
    std::vector<QFieldElem> R = R_set(W, -1);
    if (R.size() != 1 || !(R[0] == QFieldElem(5, 0, rat(1, 5)))) {
        why = "orbit set R(W, -1) is wrong";
        return false;
    }
    QFieldElem rho = weyl_vector(pp, W);
    if (!(rho == QFieldElem(5, rat(1, 2), rat(1, 10)))) {
        std::ostringstream os;
        os << "rho = " << rho;
        why = os.str();
        return false;
    }
    return true;
}

inline bool lift_project_round_trip(std::string& why) {
    for (long m : {1L, 4L, 6L}) {
        ScalarForm f = construct_fm_p5(m, 25);
        VectorForm F = lift_scalar_to_vector(f, -1);
        ScalarForm g = project_vector_to_scalar(F);
        if (g.series != f.series || g.p != f.p || g.weight != f.weight ||
            g.sign != f.sign) {
            why = "project(lift(f)) != f at m = " + std::to_string(m);
            return false;
        }
        VectorForm G = lift_scalar_to_vector(g, -1);
        for (long gamma = 0; gamma < f.p; ++gamma)
            if (G.comps[gamma] != F.comps[gamma]) {
                why = "lift(project(F)) != F at m = " + std::to_string(m);
                return false;
            }
    }
    return true;
}

inline bool weil_relations_table(std::string& why) {
    struct Row {
        long p;
        int eps;
        long alpha;
        int r;
    };
    const Row rows[] = {{5, 1, 1, 0}, {5, -1, 2, 4}, {7, 1, 1, 2}, {7, -1, 3, 6}};
    for (const Row& row : rows) {
        DiscriminantFormInfo info = make_discriminant_form(row.p, row.alpha);
        if (info.epsilon != row.eps || info.r_mod8 != row.r) {
            std::ostringstream os;
            os << "signature at (p, eps) = (" << row.p << ", " << row.eps
               << "): got r = " << info.r_mod8;
            why = os.str();
            return false;
        }
        WeilRelationReport rep = verify_weil_relations(info);
        if (!rep.pass(1e-9)) {
            std::ostringstream os;
            os << "relations at (p, eps) = (" << row.p << ", " << row.eps
               << "): deviations " << rep.dev_s_squared << " " << rep.dev_st_cubed
               << " " << rep.dev_s_unitary << " " << rep.dev_milgram;
            why = os.str();
            return false;
        }
    }
    return true;
}

inline bool up_identity(std::string& why) {
    ScalarForm u5 = hecke_up(construct_f1_p5(56));
    detail::Level5Basics b = detail::level5_basics(12);
    ScalarForm e2 = eisenstein_e2_level5(12);
    QSeries rhs = mpq_class(25) * (e2.series * b.g2.inverse(12));
    if (u5.series.coeff(0) != 25) {
        why = "constant term of U5 f1 is " + rat_to_string(u5.series.coeff(0));
        return false;
    }
    if (!QSeries::agree_below(u5.series, rhs, 11)) {
        why = "series disagree below 11";
        return false;
    }
    return true;
}

inline bool product_vs_slow_oracle(std::string& why) {
    PrincipalPart pp = principal_part_of(construct_f1_p5(2));
    auto [y1, y2] = default_basepoint(5);
    WeylChamber W = weyl_chamber_of(pp, y1, y2);
    const mpq_class bound(6);
    detail::ProductPlan plan = detail::plan_product(pp, W, std::nullopt, bound);
    ScalarForm f1 = construct_fm_p5(1, plan.required);
    HilbertExpansion fast = product_expansion(f1, W, bound);
    HilbertExpansion slow = oracle::product_expansion_slow(f1, W, std::nullopt, bound);
    if (!same_expansion(fast, slow, why)) return false;
    IntegralityReport rep = integrality_normalize(fast);
    if (rep.c != 1 || rep.gcd != 1) {
        why = "integrality audit: c = " + rep.c.get_str() +
              ", gcd = " + rep.gcd.get_str();
        return false;
    }
    return true;
}

inline bool noncompact_divisor_product(std::string& why) {
    if (is_ideal_norm(6, 5)) {
        why = "6 reported as an ideal norm in Q(sqrt 5)";
        return false;
    }
    PrincipalPart pp = principal_part_of(construct_fm_p5(6, 1));
    auto [y1, y2] = default_basepoint(5);
    WeylChamber W = weyl_chamber_of(pp, y1, y2);
    if (!W.walls.empty()) {
        why = "chamber has walls but the pole norm is not represented";
        return false;
    }
    const mpq_class bound(5);
    detail::ProductPlan plan = detail::plan_product(pp, W, std::nullopt, bound);
    ScalarForm f6 = construct_fm_p5(6, plan.required);
    HilbertExpansion fast = product_expansion(f6, W, bound);
    if (!fast.rho.is_zero()) {
        std::ostringstream os;
        os << "prefactor exponent should vanish, got " << fast.rho;
        why = os.str();
        return false;
    }
    HilbertExpansion slow = oracle::product_expansion_slow(f6, W, std::nullopt, bound);
    return same_expansion(fast, slow, why);
}

}  // namespace checks

inline CheckResult run_check(const std::string& name, bool (*body)(std::string&),
                             double budget_seconds = 0.0) {
    CheckResult r{name, false, 0.0, ""};
    auto t0 = std::chrono::steady_clock::now();
    try {
        r.pass = body(r.detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    if (r.pass && budget_seconds > 0 && r.seconds > budget_seconds) {
        r.pass = false;
        std::ostringstream os;
        os << "exceeded time budget of " << budget_seconds << " s";
        r.detail = os.str();
    }
    return r;
}

inline std::vector<CheckResult> run_acceptance_checks() {
    std::vector<CheckResult> out;
    out.push_back(run_check("f1 q-expansion digits", checks::f1_digits, 1.0));
    out.push_back(run_check("f4 f5 f6 f9 f10 q-expansion digits", checks::fm_digits, 5.0));
    out.push_back(run_check("constant term law m <= 20", checks::constant_term_law));
    out.push_back(run_check("cusp space dimensions", checks::cusp_dimensions));
    out.push_back(run_check("Weyl vector and wall orbit set", checks::weyl_vector_example));
    out.push_back(run_check("lift/project round trip", checks::lift_project_round_trip));
    out.push_back(run_check("Weil matrices, relations, signature", checks::weil_relations_table));
    out.push_back(run_check("U5 eta-quotient identity", checks::up_identity));
    out.push_back(run_check("product expansion vs slow oracle", checks::product_vs_slow_oracle, 60.0));
    out.push_back(run_check("noncompact divisor product", checks::noncompact_divisor_product));
    return out;
}

}  // namespace primeforms
