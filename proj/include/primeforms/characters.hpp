#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "rational.hpp"

namespace primeforms {

/** Quadratic character arithmetic mod an odd prime, quadratic Gauss sums,
 * and the exact special L-values that normalize the Eisenstein series.
 *
 * Exact quantities (characters, Bernoulli data, L-values) never touch
 * floating point. The root-of-unity identities (Gauss sum evaluation,
 * discriminant-form signature) are checked numerically in double precision;
 * callers compare against a 1e-9 tolerance.
 */

inline void require_odd_prime(long p) {
    if (p < 3 || !is_prime(p)) throw std::domain_error("p must be an odd prime");
}

/// Legendre symbol (n|p) via Euler's criterion; 0 when p | n.
inline int legendre_chi(long n, long p) {
    require_odd_prime(p);
    long a = n % p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    long r = 1, b = a, e = (p - 1) / 2;
    while (e > 0) {
        if (e & 1) r = (r * b) % p;
        b = (b * b) % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

/// e(x) = exp(2 pi i x)
inline std::complex<double> unit_e(double x) {
    const double tau = 6.283185307179586476925286766559;
    return {std::cos(tau * x), std::sin(tau * x)};
}

/// eps_p = 1 for p = 1 mod 4, i for p = 3 mod 4 (the sign of the quadratic
/// Gauss sum g(1; p) = eps_p sqrt(p)).
inline std::complex<double> eps_p(long p) {
    require_odd_prime(p);
    return p % 4 == 1 ? std::complex<double>(1, 0) : std::complex<double>(0, 1);
}

/// g(alpha; p) = sum_{x mod p} e(alpha x^2 / p), evaluated term by term.
inline std::complex<double> quadratic_gauss_sum_numeric(long alpha, long p) {
    require_odd_prime(p);
    std::complex<double> s(0, 0);
    for (long x = 0; x < p; ++x) {
        long r = (((alpha % p) * ((x * x) % p)) % p + p) % p;
        s += unit_e(static_cast<double>(r) / static_cast<double>(p));
    }
    return s;
}

/// Closed form chi_p(alpha) * eps_p * sqrt(p).
inline std::complex<double> quadratic_gauss_sum_closed(long alpha, long p) {
    int chi = legendre_chi(alpha, p);
    if (chi == 0) throw std::domain_error("alpha must be prime to p");
    return static_cast<double>(chi) * eps_p(p) * std::sqrt(static_cast<double>(p));
}

/// Signature r mod 8 of the rank-1 discriminant form (Z/pZ, alpha x^2/p)
/// with eps = chi_p(alpha): solves e(r/8) = eps * eps_p among the fourth
/// roots of unity i^(r/2). Not a table: the two factors each contribute a
/// quarter turn count.
inline int signature_mod8(long p, int eps) {
    require_odd_prime(p);
    if (eps != 1 && eps != -1) throw std::domain_error("eps must be +1 or -1");
    int quarter_turns = (p % 4 == 1) ? 0 : 1;  // eps_p = i^quarter_turns
    if (eps == -1) quarter_turns += 2;         // -1 = i^2
    return (2 * quarter_turns) % 8;
}

/// Milgram: sum_{gamma mod p} e(q(gamma)) = sqrt(p) * e(r/8). Returns the
/// absolute deviation; the suite checks it against 1e-9.
inline double milgram_deviation(long p, long alpha) {
    int eps = legendre_chi(alpha, p);
    if (eps == 0) throw std::domain_error("alpha must be prime to p");
    std::complex<double> lhs = quadratic_gauss_sum_numeric(alpha, p);
    std::complex<double> rhs =
        std::sqrt(static_cast<double>(p)) * unit_e(signature_mod8(p, eps) / 8.0);
    return std::abs(lhs - rhs);
}

inline bool milgram_check(long p, long alpha, double tol = 1e-9) {
    return milgram_deviation(p, alpha) < tol;
}

/// B_0 .. B_n with the B_1 = -1/2 convention.
inline std::vector<mpq_class> bernoulli_numbers(unsigned n) {
    std::vector<mpq_class> b(n + 1);
    b[0] = 1;
    for (unsigned m = 1; m <= n; ++m) {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        mpq_class acc(0);
        for (unsigned j = 0; j < m; ++j)
            acc += mpq_class(binomial(m + 1, j)) * b[j];
        b[m] = -acc / mpq_class(binomial(m + 1, m));
    }
    return b;
}

/// Bernoulli polynomial B_k(x) = sum_i C(k,i) B_i x^(k-i), exact.
inline mpq_class bernoulli_polynomial(unsigned k, const mpq_class& x) {
    std::vector<mpq_class> b = bernoulli_numbers(k);
    mpq_class acc(0), xp(1);
    // accumulate from i = k down to 0 so xp tracks x^(k-i)
    for (unsigned i = 0; i <= k; ++i) {
        acc += mpq_class(binomial(k, k - i)) * b[k - i] * xp;
        xp *= x;
    }
    return acc;
}

/// Generalized Bernoulli number B_{kappa, chi_p} = p^(kappa-1) *
/// sum_{a=1}^{p} chi_p(a) B_kappa(a/p).
inline mpq_class generalized_bernoulli(unsigned kappa, long p) {
    require_odd_prime(p);
    if (kappa == 0) throw std::domain_error("kappa must be positive");
    mpq_class acc(0);
    for (long a = 1; a <= p; ++a) {
        int chi = legendre_chi(a, p);
        if (chi == 0) continue;
        acc += chi * bernoulli_polynomial(kappa, mpq_class(a) / p);
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p), kappa - 1);
    return mpq_class(scale) * acc;
}

/// L(1 - kappa, chi_p) = -B_{kappa, chi_p} / kappa, exact.
inline mpq_class l_value_at_one_minus(unsigned kappa, long p) {
    return -generalized_bernoulli(kappa, p) / mpq_class(kappa);
}

}  // namespace primeforms
