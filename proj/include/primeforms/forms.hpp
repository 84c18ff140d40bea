#pragma once

#include <map>
#include <string>
#include <vector>

#include "characters.hpp"
#include "qseries.hpp"

namespace primeforms {

/** Scalar modular forms for Gamma_0(p) with the quadratic character chi_p
 * (and, for the weight-2 helper at level 5, the trivial character).
 *
 * Series live on the integer exponent lattice. "sign" is the eigenvalue
 * split of the coefficient support: +1 means a(n) = 0 whenever
 * chi_p(n) = -1, -1 the reverse, 0 unknown/not applicable.
 */

enum class Holomorphy { weakly_holomorphic, holomorphic, cuspidal };

inline std::string holomorphy_name(Holomorphy h) {
    switch (h) {
        case Holomorphy::weakly_holomorphic: return "weakly_holomorphic";
        case Holomorphy::holomorphic: return "holomorphic";
        case Holomorphy::cuspidal: return "cuspidal";
    }
    throw std::logic_error("unreachable");
}

inline Holomorphy holomorphy_from_name(const std::string& s) {
    if (s == "weakly_holomorphic") return Holomorphy::weakly_holomorphic;
    if (s == "holomorphic") return Holomorphy::holomorphic;
    if (s == "cuspidal") return Holomorphy::cuspidal;
    throw std::invalid_argument("unknown holomorphy tag: " + s);
}

struct ScalarForm {
    long p = 0;
    int weight = 0;
    int sign = 0;  // +1, -1, or 0 for unknown/not applicable
    Holomorphy hol = Holomorphy::holomorphic;
    QSeries series;

    mpq_class a(long n) const { return series.coeff(n); }
};

/// s(n) = 2 if p | n, else 1: the multiplicity weight attached to exponents
/// divisible by p.
inline int s_factor(long n, long p) { return n % p == 0 ? 2 : 1; }

/// Sign split from coefficient support: +1 if no nonzero a(n) has
/// chi_p(n) = -1, -1 if none has chi_p(n) = +1, 0 if both occur. A zero (or
/// constant) series satisfies both patterns and reports +1.
inline int plus_space_sign_check(const QSeries& s, long p) {
    if (s.exponent_denominator() != 1)
        throw std::invalid_argument("scalar form must have integer exponents");
    bool hit_minus = false, hit_plus = false;
    for (const auto& [n, c] : s.terms()) {
        int chi = legendre_chi(n, p);
        if (chi == -1) hit_minus = true;
        if (chi == 1) hit_plus = true;
    }
    if (hit_minus && hit_plus) return 0;
    return hit_minus ? -1 : 1;
}

/// dim S_2(p, chi_p) = 2 floor((p-5)/24) for prime p = 1 mod 4.
inline long dim_s2_chi(long p) {
    require_prime_1mod4(p);
    return 2 * ((p - 5) / 24);
}

/// The plus subspace is exactly half of S_2(p, chi_p).
inline long dim_s2_plus(long p) { return dim_s2_chi(p) / 2; }

/// G_kappa = 1 + (2/L(1-kappa, chi_p)) sum_n (sum_{d|n} d^(kappa-1) chi_p(d)) q^n.
inline ScalarForm eisenstein_G(unsigned kappa, long p, const mpq_class& prec) {
    require_odd_prime(p);
    mpq_class L = l_value_at_one_minus(kappa, p);
    if (L == 0)
        throw std::domain_error("L(1-kappa, chi_p) vanishes; Eisenstein series undefined");
    mpq_class c = mpq_class(2) / L;
    QSeries s = QSeries::zero(TruncBound(prec));
    s.add_term(1, 0);
    long M = to_long(rat_ceil(prec)) - 1;
    for (long n = 1; n <= M; ++n) {
        mpq_class acc(0);
        for (long d = 1; d <= n; ++d) {
            if (n % d) continue;
            mpz_class dk;
            mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), kappa - 1);
            acc += legendre_chi(d, p) * mpq_class(dk);
        }
        s.add_term(c * acc, n);
    }
    return {p, static_cast<int>(kappa), 0, Holomorphy::holomorphic, s};
}

/// H_kappa = sum_n (sum_{d|n} d^(kappa-1) chi_p(n/d)) q^n.
inline ScalarForm eisenstein_H(unsigned kappa, long p, const mpq_class& prec) {
    require_odd_prime(p);
    QSeries s = QSeries::zero(TruncBound(prec));
    long M = to_long(rat_ceil(prec)) - 1;
    for (long n = 1; n <= M; ++n) {
        mpq_class acc(0);
        for (long d = 1; d <= n; ++d) {
            if (n % d) continue;
            mpz_class dk;
            mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), kappa - 1);
            acc += legendre_chi(n / d, p) * mpq_class(dk);
        }
        s.add_term(acc, n);
    }
    return {p, static_cast<int>(kappa), 0, Holomorphy::holomorphic, s};
}

/// E_kappa^delta = G_kappa + delta (2/L) H_kappa
///              = 1 + (2/L) sum_n sum_{d|n} d^(kappa-1) (chi(d) + delta chi(n/d)) q^n,
/// the Eisenstein series spanning the delta eigenspace.
inline ScalarForm eisenstein_E(unsigned kappa, int delta, long p,
                               const mpq_class& prec) {
    if (delta != 1 && delta != -1) throw std::domain_error("delta must be +1 or -1");
    mpq_class L = l_value_at_one_minus(kappa, p);
    if (L == 0)
        throw std::domain_error("L(1-kappa, chi_p) vanishes; Eisenstein series undefined");
    ScalarForm g = eisenstein_G(kappa, p, prec);
    ScalarForm h = eisenstein_H(kappa, p, prec);
    QSeries s = g.series + (mpq_class(2 * delta) / L) * h.series;
    return {p, static_cast<int>(kappa), delta, Holomorphy::holomorphic, s};
}

/// The weight-2 Eisenstein series for Gamma_0(5) with trivial character:
/// 1 + 6 sum (sigma_1(n) - 5 sigma_1(n/5)) q^n.
inline ScalarForm eisenstein_e2_level5(const mpq_class& prec) {
    QSeries s = QSeries::zero(TruncBound(prec));
    s.add_term(1, 0);
    long M = to_long(rat_ceil(prec)) - 1;
    for (long n = 1; n <= M; ++n) {
        mpz_class t = divisor_power_sum(n, 1);
        if (n % 5 == 0) t -= 5 * divisor_power_sum(n / 5, 1);
        s.add_term(mpq_class(6 * t), n);
    }
    return {5, 2, 0, Holomorphy::holomorphic, s};
}

/// U_p: f |U_p = p^(1 - k/2) sum_{n = 0 mod p} a(n) q^(n/p). Requires even
/// weight so the normalization stays rational. Preserves the eigenspace.
inline ScalarForm hecke_up(const ScalarForm& f) {
    require_odd_prime(f.p);
    if (f.weight % 2 != 0)
        throw std::domain_error("U_p normalization needs even weight");
    if (f.series.exponent_denominator() != 1)
        throw std::invalid_argument("scalar form must have integer exponents");
    long e = 1 - f.weight / 2;  // p^e, possibly a negative power
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(f.p),
                  static_cast<unsigned long>(e >= 0 ? e : -e));
    mpq_class factor = e >= 0 ? mpq_class(pe) : mpq_class(1) / mpq_class(pe);
    QSeries s;
    TruncBound t = f.series.truncation();
    s.set_truncation(t ? TruncBound(*t / f.p) : t);
    for (const auto& [n, c] : f.series.terms())
        if (n % f.p == 0) s.add_term(factor * c, n / f.p);
    return {f.p, f.weight, f.sign, f.hol, s};
}

/** PrincipalPart: the pole data sum_{n<0} a(n) q^n of a weakly holomorphic
 * form in the eps eigenspace; coefficients at chi_p(n) = -eps must vanish. */
struct PrincipalPart {
    long p;
    int eps;
    std::map<long, mpq_class> coeffs;  // n < 0 only, nonzero values

    PrincipalPart(long p_in, int eps_in, std::map<long, mpq_class> c)
        : p(p_in), eps(eps_in), coeffs(std::move(c)) {
        require_prime_1mod4(p);
        if (eps != 1 && eps != -1) throw std::domain_error("eps must be +1 or -1");
        for (auto it = coeffs.begin(); it != coeffs.end();) {
            if (it->first >= 0)
                throw std::domain_error("principal part exponents must be negative");
            if (it->second == 0) {
                it = coeffs.erase(it);
                continue;
            }
            if (legendre_chi(it->first, p) == -eps)
                throw std::domain_error(
                    "principal part has support where chi_p(n) = -eps");
            ++it;
        }
    }

    long pole_depth() const {
        return coeffs.empty() ? 0 : -coeffs.begin()->first;
    }
};

/// The pole data of a weakly holomorphic form: its negative-exponent terms.
/// Empty principal parts are legal here (holomorphic input).
inline PrincipalPart principal_part_of(const ScalarForm& f) {
    if (f.sign != 1 && f.sign != -1)
        throw std::domain_error("scalar form sign is unknown; run the sign check");
    if (f.series.exponent_denominator() != 1)
        throw std::invalid_argument("scalar form must have integer exponents");
    std::map<long, mpq_class> c;
    for (const auto& [n, v] : f.series.terms()) {
        if (n >= 0) break;
        c.emplace(n, v);
    }
    return PrincipalPart(f.p, f.sign, std::move(c));
}

namespace detail {

/// Shared level-5 ingredients at working truncation >= w.
struct Level5Basics {
    QSeries eta1, eta5, h2, g2;
};

inline Level5Basics level5_basics(const mpq_class& w) {
    Level5Basics b;
    b.eta1 = dedekind_eta(w + 2);
    b.eta5 = dedekind_eta(w / 5 + 2).rescaled(5);
    // G_2 = eta(tau)^5 / eta(5 tau), H_2 = eta(5 tau)^5 / eta(tau)
    b.g2 = b.eta1.pow(5) * b.eta5.inverse(w);
    b.h2 = b.eta5.pow(5) * b.eta1.inverse(w);
    return b;
}

}  // namespace detail

/// f_1 = E2(level 5, trivial character) / H_2: principal part q^-1.
inline ScalarForm construct_f1_p5(const mpq_class& prec) {
    mpq_class w = prec + 4;
    detail::Level5Basics b = detail::level5_basics(w);
    ScalarForm e2 = eisenstein_e2_level5(w);
    QSeries f1 = e2.series * b.h2.inverse(w - 3);
    return {5, 0, 1, Holomorphy::weakly_holomorphic, f1.truncated(prec)};
}

/// f_4 = (G_2/H_2)(f_1^3 + 108 f_1) - 9 f_1^3 + 1128 f_1.
inline ScalarForm construct_f4_p5(const mpq_class& prec) {
    mpq_class w = prec + 8;
    detail::Level5Basics b = detail::level5_basics(w);
    QSeries f1 = construct_f1_p5(w).series;
    QSeries g2h2 = b.g2 * b.h2.inverse(w - 3);
    QSeries f13 = f1.pow(3);
    QSeries f4 = g2h2 * (f13 + mpq_class(108) * f1) - mpq_class(9) * f13 +
                 mpq_class(1128) * f1;
    return {5, 0, 1, Holomorphy::weakly_holomorphic, f4.truncated(prec)};
}

/// f_5 = (1/2) E_2^+(tau) J(5 tau), reduced: the raw product carries
/// spurious principal-part terms at q^-4 and q^-1, cleared against f_4 and
/// f_1. The surviving principal part is (1/2) q^-5 = s(5)^-1 q^-5.
inline ScalarForm construct_f5_p5(const mpq_class& prec) {
    mpq_class w = prec + 8;
    ScalarForm eplus = eisenstein_E(2, 1, 5, w);
    QSeries j5 = weight_minus2_j(w / 5 + 2).rescaled(5);
    QSeries f5 = mpq_class(1, 2) * (eplus.series * j5);
    QSeries f4 = construct_f4_p5(w - 6).series;
    QSeries f1 = construct_f1_p5(w - 6).series;
    for (long e : {3, 2}) {
        if (f5.coeff(-e) != 0)
            throw std::logic_error("unexpected principal part in E_2^+ J(5 tau)");
    }
    f5 = f5 - f5.coeff(-4) * f4;  // s(4) = 1
    f5 = f5 - f5.coeff(-1) * f1;  // s(1) = 1
    return {5, 0, 1, Holomorphy::weakly_holomorphic, f5.truncated(prec)};
}

namespace detail {

/// Validates that a seed has principal part exactly s(d)^-1 q^-d and returns d.
inline long seed_pole_depth(const ScalarForm& f) {
    if (f.weight != 0 || f.sign != 1)
        throw std::domain_error("seed must be a weight-0 plus-space form");
    auto mn = f.series.min_exponent();
    if (!mn || *mn >= 0) throw std::domain_error("seed has no pole");
    if (!is_integer(*mn)) throw std::domain_error("seed exponents must be integers");
    long d = -to_long(mn->get_num());
    for (const auto& [n, c] : f.series.terms()) {
        if (n >= 0) break;
        if (n != -d || c != mpq_class(1, s_factor(d, f.p)))
            throw std::domain_error("seed principal part is not s(d)^-1 q^-d");
    }
    return d;
}

/** Inductive pole-deepening: starting from seed forms f_d with principal
 * parts s(d)^-1 q^-d, produces f_m for every m <= M with chi_p(m) != -1 that
 * is reachable as m = d + k p, by multiplying with j(p tau) and eliminating
 * the shallower poles in decreasing order. The leading coefficient needs no
 * correction (s(m) = s(m - p)), but is normalized defensively.
 */
inline std::map<long, ScalarForm> build_fm_table(
    long p, const std::vector<ScalarForm>& seeds, long M,
    const mpq_class& prec) {
    require_prime_1mod4(p);
    if (dim_s2_plus(p) > 0)
        throw std::domain_error(
            "obstruction space is nonzero for this p; pole-deepening alone "
            "cannot prescribe principal parts (see obstruction_check)");
    std::map<long, ScalarForm> table;
    for (const ScalarForm& f : seeds) {
        if (f.p != p) throw std::invalid_argument("seed at the wrong level");
        table.emplace(seed_pole_depth(f), f);
    }
    QSeries jp = klein_j((prec + M) / p + 2).rescaled(p);
    for (long m = 1; m <= M; ++m) {
        if (legendre_chi(m, p) == -1 || table.count(m)) continue;
        auto prev = table.find(m - p);
        if (prev == table.end())
            throw std::domain_error("index " + std::to_string(m) +
                                    " is not reachable from the supplied seeds");
        QSeries g = prev->second.series * jp;
        for (long e = m - 1; e >= 1; --e) {
            mpq_class c = g.coeff(-e);
            if (c == 0) continue;
            auto it = table.find(e);
            if (it == table.end())
                throw std::domain_error(
                    "elimination needs f_" + std::to_string(e) +
                    ", which is not reachable from the supplied seeds");
            g = g - (c * s_factor(e, p)) * it->second.series;
        }
        mpq_class lead = g.coeff(-m);
        if (lead == 0) throw std::logic_error("pole deepening lost the leading term");
        mpq_class want(1, s_factor(m, p));
        if (lead != want) g = want / lead * g;
        table.emplace(m, ScalarForm{p, 0, 1, Holomorphy::weakly_holomorphic, g});
    }
    return table;
}

inline std::vector<ScalarForm> default_seeds_p5(const mpq_class& w) {
    return {construct_f1_p5(w), construct_f4_p5(w), construct_f5_p5(w)};
}

}  // namespace detail

/// f_m for p = 5: the unique element of the weight-0 plus space with
/// principal part s(m)^-1 q^-m. Errors when chi_5(m) = -1 (no such form).
inline ScalarForm construct_fm_p5(long m, const mpq_class& prec) {
    if (m < 1) throw std::domain_error("m must be positive");
    if (legendre_chi(m, 5) == -1)
        throw std::domain_error("no f_m exists for chi_5(m) = -1");
    mpq_class w = prec + m + 8;
    auto table = detail::build_fm_table(5, detail::default_seeds_p5(w), m, prec);
    ScalarForm f = table.at(m);
    const TruncBound& t = f.series.truncation();
    if (t && *t < prec)
        throw std::logic_error("working precision failed to reach the request");
    f.series = f.series.truncated(prec);
    return f;
}

/// Assembles the weakly holomorphic form with the prescribed principal part
/// as an exact linear combination of the f_m built from the seeds. For p = 5
/// the built-in seeds are used when none are given.
inline ScalarForm reduce_to_principal_part(std::vector<ScalarForm> seeds,
                                           const PrincipalPart& target,
                                           const mpq_class& prec) {
    long p = target.p;
    if (target.eps != 1)
        throw std::domain_error("only the plus space is spanned by the f_m");
    if (target.coeffs.empty())
        throw std::domain_error("empty principal part prescribes the zero form");
    long M = target.pole_depth();
    if (seeds.empty()) {
        if (p == 5)
            seeds = detail::default_seeds_p5(prec + M + 8);
        else
            throw std::domain_error("seed forms are required for p != 5");
    }
    auto table = detail::build_fm_table(p, seeds, M, prec);
    QSeries acc = QSeries::zero(TruncBound(prec));
    for (const auto& [n, c] : target.coeffs) {
        auto it = table.find(-n);
        if (it == table.end())
            throw std::domain_error("no f_m available for pole order " +
                                    std::to_string(-n));
        acc = acc + (c * s_factor(-n, p)) * it->second.series;
    }
    return {p, 0, 1, Holomorphy::weakly_holomorphic, acc.truncated(prec)};
}

}  // namespace primeforms
