#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace primeforms {

/** Helpers around GMP rationals.
 *
 * Everything downstream stores coefficients as mpq_class in canonical form
 * (reduced, positive denominator). Strings use the canonical GMP format:
 * "-3/4", "7", never "7/1".
 */

inline std::string rat_to_string(const mpq_class& x) { return x.get_str(); }

/// Parses "p", "-p", "p/q". Accepts non-canonical input like "6/4" or "3/1"
/// and canonicalizes. Throws std::invalid_argument on malformed text.
inline mpq_class rat_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t i = 0;
    if (s[i] == '-' || s[i] == '+') ++i;
    bool digits = false, slash = false;
    for (; i < s.size(); ++i) {
        if (s[i] >= '0' && s[i] <= '9') { digits = true; continue; }
        if (s[i] == '/' && !slash && digits) { slash = true; digits = false; continue; }
        throw std::invalid_argument("malformed rational literal: " + s);
    }
    if (!digits) throw std::invalid_argument("malformed rational literal: " + s);
    mpq_class r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline bool is_integer(const mpq_class& x) { return x.get_den() == 1; }

/// num/den in canonical form. The raw two-argument mpq_class constructor
/// does not reduce, which breaks comparisons; always build ratios here.
inline mpq_class rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

/// Largest integer <= x.
inline mpz_class rat_floor(const mpq_class& x) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

/// Smallest integer >= x.
inline mpz_class rat_ceil(const mpq_class& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline long to_long(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer too large for machine word");
    return z.get_si();
}

/// Binomial coefficient C(n, k) for n >= 0; exact.
inline mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// floor(sqrt(n)) for n >= 0.
inline mpz_class isqrt(const mpz_class& n) {
    if (n < 0) throw std::domain_error("isqrt of negative integer");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_perfect_square(const mpz_class& n, mpz_class* root = nullptr) {
    if (n < 0) return false;
    mpz_class r = isqrt(n);
    if (r * r != n) return false;
    if (root) *root = r;
    return true;
}

/// Deterministic trial-division primality test; inputs here are tiny.
inline bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void require_prime_1mod4(long p) {
    if (!is_prime(p) || p % 4 != 1)
        throw std::domain_error("p must be a prime congruent to 1 mod 4");
}

/// Truncation bound for series: nullopt means "exact, no bound".
using TruncBound = std::optional<mpq_class>;

inline TruncBound min_trunc(const TruncBound& a, const TruncBound& b) {
    if (!a) return b;
    if (!b) return a;
    return *a <= *b ? a : b;
}

/// a + shift, where absent a means +infinity.
inline TruncBound shift_trunc(const TruncBound& a, const mpq_class& shift) {
    if (!a) return a;
    return TruncBound(*a + shift);
}

}  // namespace primeforms
