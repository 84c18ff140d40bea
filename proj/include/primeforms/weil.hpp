#pragma once

#include <complex>
#include <vector>

#include "forms.hpp"

namespace primeforms {

/** The rank-1 discriminant form (Z/pZ, q) with q(x) = alpha x^2 / p, and the
 * dictionary between vector-valued forms for its Weil representation and
 * scalar forms in the eigenspace components.
 *
 * epsilon = chi_p(alpha) tags the representation; r_mod8 is its signature;
 * delta = chi_p(-1) epsilon tags the eigenspace of the dual weight side.
 */
struct DiscriminantFormInfo {
    long p;
    long alpha;  // reduced to 1..p-1
    int epsilon;
    int r_mod8;
    int delta;
};

inline DiscriminantFormInfo make_discriminant_form(long p, long alpha) {
    require_odd_prime(p);
    long a = alpha % p;
    if (a < 0) a += p;
    if (a == 0) throw std::domain_error("alpha must be prime to p");
    int eps = legendre_chi(a, p);
    return {p, a, eps, signature_mod8(p, eps), legendre_chi(-1, p) * eps};
}

/// p * q(gamma) mod p, i.e. the residue class alpha gamma^2 of the exponent
/// numerators supported on component gamma.
inline long support_residue(const DiscriminantFormInfo& info, long gamma) {
    return (info.alpha % info.p) * ((gamma * gamma) % info.p) % info.p;
}

/** VectorForm: a form for the Weil representation, stored as p component
 * series indexed by gamma = 0..p-1 on the exponent lattice (1/p)Z.
 * Components satisfy F_gamma = F_{-gamma} and the support law
 * (exponents of F_gamma lie in Z + q(gamma)). */
struct VectorForm {
    DiscriminantFormInfo info;
    int weight = 0;
    std::vector<QSeries> comps;
};

inline void validate_vector_form(const VectorForm& F) {
    long p = F.info.p;
    if (F.comps.size() != static_cast<std::size_t>(p))
        throw std::domain_error("expected one component per residue class");
    for (long g = 0; g < p; ++g) {
        const QSeries& s = F.comps[static_cast<std::size_t>(g)];
        long d = s.exponent_denominator();
        if (p % d != 0)
            throw std::domain_error("component exponents must lie in (1/p)Z");
        long res = support_residue(F.info, g);
        for (const auto& [num, c] : s.terms()) {
            long scaled = num * (p / d) % p;
            if (scaled < 0) scaled += p;
            if (scaled != res)
                throw std::domain_error("component support violates q(gamma) mod 1");
        }
        if (F.comps[static_cast<std::size_t>(g)] !=
            F.comps[static_cast<std::size_t>((p - g) % p)])
            throw std::domain_error("components must satisfy F_gamma = F_{-gamma}");
    }
}

/// Scalar -> vector direction of the dictionary:
/// F_0 = 2 sum_{n = 0 mod p} a(n) q^(n/p), and for gamma != 0
/// F_gamma = sum_{n = alpha gamma^2 mod p} a(n) q^(n/p).
inline VectorForm lift_scalar_to_vector(const ScalarForm& f, long alpha) {
    DiscriminantFormInfo info = make_discriminant_form(f.p, alpha);
    if (f.sign == 0)
        throw std::domain_error("scalar form sign is unknown; run the sign check");
    if (f.sign != info.epsilon)
        throw std::domain_error("scalar form sign does not match epsilon of the lift");
    if ((f.weight - info.r_mod8 / 2) % 2 != 0)
        throw std::domain_error("weight parity does not match the representation");
    if (f.series.exponent_denominator() != 1)
        throw std::invalid_argument("scalar form must have integer exponents");
    long p = f.p;
    TruncBound t = f.series.truncation();
    TruncBound tp = t ? TruncBound(*t / p) : t;
    VectorForm F{info, f.weight, {}};
    F.comps.reserve(static_cast<std::size_t>(p));
    for (long g = 0; g < p; ++g) {
        long res = support_residue(info, g);
        QSeries comp = QSeries::zero(tp);
        for (const auto& [n, c] : f.series.terms()) {
            long r = n % p;
            if (r < 0) r += p;
            if (r != res) continue;
            comp.add_term(g == 0 ? 2 * c : c, n, p);
        }
        F.comps.push_back(comp);
    }
    return F;
}

/// Vector -> scalar direction: f = (1/2) sum_gamma F_gamma(p tau). Each
/// coefficient is hit twice (components gamma and -gamma), F_0's doubling
/// cancels against the half.
inline ScalarForm project_vector_to_scalar(const VectorForm& F) {
    validate_vector_form(F);
    QSeries acc;
    bool first = true;
    for (const QSeries& comp : F.comps) {
        QSeries r = comp.rescaled(F.info.p);
        acc = first ? r : acc + r;
        first = false;
    }
    acc = mpq_class(1, 2) * acc;
    if (acc.exponent_denominator() != 1)
        throw std::domain_error("projection produced non-integer exponents");
    bool has_pole = acc.min_exponent() && *acc.min_exponent() < 0;
    return {F.info.p, F.weight, F.info.epsilon,
            has_pole ? Holomorphy::weakly_holomorphic : Holomorphy::holomorphic, acc};
}

using CMat = std::vector<std::vector<std::complex<double>>>;

inline CMat cmat_zero(std::size_t n) {
    return CMat(n, std::vector<std::complex<double>>(n));
}

inline CMat cmat_mul(const CMat& a, const CMat& b) {
    std::size_t n = a.size();
    CMat r = cmat_zero(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> aik = a[i][k];
            if (aik == std::complex<double>(0, 0)) continue;
            for (std::size_t j = 0; j < n; ++j) r[i][j] += aik * b[k][j];
        }
    return r;
}

inline double cmat_max_diff(const CMat& a, const CMat& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
}

/// rho(T) = diag(e(q(gamma))).
inline CMat weil_rho_T(const DiscriminantFormInfo& info) {
    std::size_t n = static_cast<std::size_t>(info.p);
    CMat m = cmat_zero(n);
    for (long g = 0; g < info.p; ++g)
        m[static_cast<std::size_t>(g)][static_cast<std::size_t>(g)] =
            unit_e(static_cast<double>(support_residue(info, g)) /
                   static_cast<double>(info.p));
    return m;
}

/// rho(S) e_gamma = i^(-r/2) / sqrt(p) * sum_delta e(-(gamma, delta)) e_delta,
/// with bilinear form (gamma, delta) = 2 alpha gamma delta / p.
inline CMat weil_rho_S(const DiscriminantFormInfo& info) {
    std::size_t n = static_cast<std::size_t>(info.p);
    std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> front =
        std::conj(i_pow[(info.r_mod8 / 2) % 4]) / std::sqrt(static_cast<double>(info.p));
    CMat m = cmat_zero(n);
    for (long g = 0; g < info.p; ++g)
        for (long d = 0; d < info.p; ++d) {
            long b = (2 * info.alpha % info.p) * (g * d % info.p) % info.p;
            m[static_cast<std::size_t>(d)][static_cast<std::size_t>(g)] =
                front * unit_e(-static_cast<double>(b) / static_cast<double>(info.p));
        }
    return m;
}

/// rho(-E) e_gamma = (-1)^(r/2) e_{-gamma}.
inline CMat weil_rho_negE(long p, int r_mod8) {
    std::size_t n = static_cast<std::size_t>(p);
    CMat m = cmat_zero(n);
    double sign = r_mod8 % 4 == 0 ? 1.0 : -1.0;  // (-1)^(r/2)
    for (long g = 0; g < p; ++g)
        m[static_cast<std::size_t>((p - g) % p)][static_cast<std::size_t>(g)] = sign;
    return m;
}

inline CMat weil_rho_negE(const DiscriminantFormInfo& info) {
    return weil_rho_negE(info.p, info.r_mod8);
}

struct WeilRepMatrices {
    long p;
    long alpha;
    int r_mod8;
    CMat rhoT, rhoS;
};

inline WeilRepMatrices weil_matrices(const DiscriminantFormInfo& info) {
    return {info.p, info.alpha, info.r_mod8, weil_rho_T(info), weil_rho_S(info)};
}

struct WeilRelationReport {
    double dev_s_squared;    // || rho(S)^2 - rho(-E) ||
    double dev_st_cubed;     // || (rho(S) rho(T))^3 - rho(S)^2 ||
    double dev_s_unitary;    // || rho(S) rho(S)* - 1 ||
    double dev_milgram;      // Milgram sum vs sqrt(p) e(r/8)

    bool pass(double tol = 1e-9) const {
        return dev_s_squared < tol && dev_st_cubed < tol && dev_s_unitary < tol &&
               dev_milgram < tol;
    }
};

inline WeilRelationReport verify_weil_relations(const WeilRepMatrices& m) {
    const CMat &S = m.rhoS, &T = m.rhoT;
    CMat S2 = cmat_mul(S, S);
    CMat ST = cmat_mul(S, T);
    CMat ST3 = cmat_mul(cmat_mul(ST, ST), ST);
    std::size_t n = S.size();
    CMat Sdag = cmat_zero(n), I = cmat_zero(n);
    for (std::size_t i = 0; i < n; ++i) {
        I[i][i] = 1;
        for (std::size_t j = 0; j < n; ++j) Sdag[i][j] = std::conj(S[j][i]);
    }
    WeilRelationReport r{};
    r.dev_s_squared = cmat_max_diff(S2, weil_rho_negE(m.p, m.r_mod8));
    r.dev_st_cubed = cmat_max_diff(ST3, S2);
    r.dev_s_unitary = cmat_max_diff(cmat_mul(S, Sdag), I);
    r.dev_milgram = milgram_deviation(m.p, m.alpha);
    return r;
}

inline WeilRelationReport verify_weil_relations(const DiscriminantFormInfo& info) {
    return verify_weil_relations(weil_matrices(info));
}

}  // namespace primeforms
