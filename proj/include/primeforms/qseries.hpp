#pragma once

#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace primeforms {

/** QSeries: truncated Laurent series in q with exact rational coefficients
 * and exponents on the lattice (1/N)Z.
 *
 * Invariants kept by every operation:
 *  - stored coefficients are nonzero and lie strictly below the truncation
 *    bound; exponents at or above the bound are unknown, and coeff() refuses
 *    to report them,
 *  - the exponent denominator N is minimal (gcd of N and all stored exponent
 *    numerators is 1), so equal series have identical representations,
 *  - a missing truncation bound means the series is exact (a Laurent
 *    polynomial known completely).
 *
 * Truncation propagates honestly: addition takes the minimum bound,
 * multiplication shifts each factor's bound by the other factor's minimal
 * exponent before taking the minimum.
 */
class QSeries {
public:
    using Exp = long;

    QSeries() : denom_(1) {}  // exact zero

    explicit QSeries(const mpq_class& c) : denom_(1) {
        mpq_class cc = canon(c);
        if (cc != 0) terms_[0] = cc;
    }

    static QSeries zero(TruncBound trunc = std::nullopt) {
        QSeries s;
        s.trunc_ = std::move(trunc);
        return s;
    }

    static QSeries one() { return QSeries(mpq_class(1)); }

    /// c * q^(num/den)
    static QSeries monomial(const mpq_class& c, Exp num, Exp den = 1) {
        check_den(den);
        QSeries s;
        s.denom_ = den;
        mpq_class cc = canon(c);
        if (cc != 0) s.terms_[num] = cc;
        s.normalize();
        return s;
    }

    long exponent_denominator() const { return denom_; }
    const std::map<Exp, mpq_class>& terms() const { return terms_; }
    const TruncBound& truncation() const { return trunc_; }
    bool is_exact() const { return !trunc_.has_value(); }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    /// Lowest stored exponent, as a rational; nullopt for the zero series.
    std::optional<mpq_class> min_exponent() const {
        if (terms_.empty()) return std::nullopt;
        return exp_value(terms_.begin()->first);
    }

    /// Coefficient at exponent num/den. Throws if the exponent is not below
    /// the truncation bound (such coefficients are unknown).
    mpq_class coeff(Exp num, Exp den = 1) const {
        check_den(den);
        mpq_class e = mpq_class(num) / den;
        return coeff_q(e);
    }

    mpq_class coeff_q(const mpq_class& e) const {
        if (trunc_ && e >= *trunc_) {
            throw std::domain_error("coefficient at exponent " + e.get_str() +
                                    " is at or above the truncation bound " +
                                    trunc_->get_str());
        }
        mpq_class scaled = e * denom_;
        if (!is_integer(scaled)) return mpq_class(0);
        Exp key = to_long(scaled.get_num());
        auto it = terms_.find(key);
        return it == terms_.end() ? mpq_class(0) : it->second;
    }

    /// Adds c*q^(num/den) to a series under construction. Throws if the
    /// exponent is not below the truncation bound.
    void add_term(const mpq_class& c, Exp num, Exp den = 1) {
        check_den(den);
        mpq_class e = mpq_class(num) / den;
        if (trunc_ && e >= *trunc_)
            throw std::invalid_argument("term at or above truncation bound");
        mpq_class cc = canon(c);
        if (cc == 0) return;
        long l = std::lcm(denom_, den);
        rescale_keys(l);
        Exp key = num * (l / den);
        auto [it, fresh] = terms_.try_emplace(key, cc);
        if (!fresh) {
            it->second += cc;
            if (it->second == 0) terms_.erase(it);
        }
        normalize();
    }

    void set_truncation(TruncBound t) {
        trunc_ = std::move(t);
        normalize();
    }

    /// Copy with truncation tightened to min(current, bound).
    QSeries truncated(const mpq_class& bound) const {
        QSeries r = *this;
        r.set_truncation(min_trunc(trunc_, TruncBound(bound)));
        return r;
    }

    friend QSeries operator+(const QSeries& a, const QSeries& b) {
        QSeries r;
        long l = std::lcm(a.denom_, b.denom_);
        r.denom_ = l;
        r.terms_ = a.terms_;
        rescale_map(r.terms_, l / a.denom_);
        for (const auto& [e, c] : b.terms_) {
            Exp key = e * (l / b.denom_);
            auto [it, fresh] = r.terms_.try_emplace(key, c);
            if (!fresh) it->second += c;
        }
        r.trunc_ = min_trunc(a.trunc_, b.trunc_);
        r.normalize();
        return r;
    }

    friend QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

    QSeries operator-() const {
        QSeries r = *this;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        // An exact zero annihilates everything, including unknown tails.
        if ((a.is_zero() && a.is_exact()) || (b.is_zero() && b.is_exact()))
            return QSeries();
        QSeries r;
        long l = std::lcm(a.denom_, b.denom_);
        r.denom_ = l;
        long sa = l / a.denom_, sb = l / b.denom_;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exp key = ea * sa + eb * sb;
                auto [it, fresh] = r.terms_.try_emplace(key, ca * cb);
                if (!fresh) it->second += ca * cb;
            }
        r.trunc_ = min_trunc(shift_trunc(a.trunc_, b.min_exponent_eff()),
                             shift_trunc(b.trunc_, a.min_exponent_eff()));
        r.normalize();
        return r;
    }

    friend QSeries operator*(const mpq_class& c, const QSeries& a) {
        if (c == 0) return QSeries::zero(a.trunc_);
        QSeries r = a;
        for (auto& [e, v] : r.terms_) v *= c;
        return r;
    }

    friend QSeries operator*(const QSeries& a, const mpq_class& c) { return c * a; }

    /// Multiplication by q^(num/den).
    QSeries shifted(Exp num, Exp den = 1) const {
        check_den(den);
        QSeries r;
        long l = std::lcm(denom_, den);
        r.denom_ = l;
        Exp off = num * (l / den);
        long s = l / denom_;
        for (const auto& [e, c] : terms_) r.terms_[e * s + off] = c;
        r.trunc_ = shift_trunc(trunc_, mpq_class(num) / den);
        r.normalize();
        return r;
    }

    /// Variable rescale q -> q^s for a positive integer s.
    QSeries rescaled(long s) const {
        if (s <= 0) throw std::invalid_argument("rescale factor must be positive");
        QSeries r;
        r.denom_ = denom_;
        for (const auto& [e, c] : terms_) r.terms_[e * s] = c;
        if (trunc_) r.trunc_ = TruncBound(*trunc_ * s);
        r.normalize();
        return r;
    }

    /// Multiplicative inverse, computed up to the requested exponent bound.
    /// The result's truncation is min(order, T - 2*m) where T is this
    /// series' bound and m its minimal exponent. Requires a nonzero leading
    /// coefficient (automatic: stored terms are nonzero) and a nonempty
    /// series.
    QSeries inverse(const mpq_class& order) const {
        if (terms_.empty()) throw std::domain_error("inverse of zero series");
        Exp mnum = terms_.begin()->first;
        const mpq_class& lead = terms_.begin()->second;
        mpq_class m = exp_value(mnum);
        TruncBound honest =
            trunc_ ? TruncBound(*trunc_ - 2 * m) : std::nullopt;
        TruncBound bound = min_trunc(TruncBound(order), honest);
        // unit = this / (lead * q^m) has constant term 1 on the same lattice
        mpq_class rel = *bound + m;  // need the unit's inverse below rel
        QSeries r;
        r.denom_ = denom_;
        r.trunc_ = bound;
        mpz_class kmax_z = rat_ceil(rel * denom_) - 1;
        if (kmax_z < 0) {
            r.normalize();
            return r;
        }
        long kmax = to_long(kmax_z);
        std::vector<mpq_class> v(static_cast<std::size_t>(kmax) + 1);
        v[0] = 1;
        for (long k = 1; k <= kmax; ++k) {
            mpq_class acc(0);
            for (const auto& [e, c] : terms_) {
                Exp j = e - mnum;
                if (j == 0) continue;
                if (j > k) break;
                if (v[k - j] != 0) acc += (c / lead) * v[k - j];
            }
            v[k] = -acc;
        }
        for (long k = 0; k <= kmax; ++k)
            if (v[k] != 0) r.terms_[k - mnum] = v[k] / lead;
        r.normalize();
        return r;
    }

    /// Integer power. Negative powers require either a monomial (exact
    /// inverse) or a finite truncation bound to fix the expansion order.
    QSeries pow(long e) const {
        if (e == 0) return one();
        if (e > 0) {
            QSeries base = *this, acc = one();
            long n = e;
            while (n > 0) {
                if (n & 1) acc = acc * base;
                n >>= 1;
                if (n > 0) base = base * base;
            }
            return acc;
        }
        QSeries inv;
        if (terms_.size() == 1 && is_exact()) {
            inv.denom_ = denom_;
            inv.terms_[-terms_.begin()->first] = 1 / terms_.begin()->second;
            inv.normalize();
        } else if (trunc_) {
            if (terms_.empty()) throw std::domain_error("inverse of zero series");
            inv = inverse(*trunc_ - 2 * *min_exponent());
        } else {
            throw std::invalid_argument(
                "negative power of an exact multi-term series needs an explicit "
                "order; use inverse(order)");
        }
        return inv.pow(-e);
    }

    /// Canonical-form equality: identical term maps on the reduced lattice.
    /// Truncation bounds are metadata and do not participate.
    friend bool operator==(const QSeries& a, const QSeries& b) {
        return a.denom_ == b.denom_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const QSeries& a, const QSeries& b) { return !(a == b); }

    /// True when every coefficient strictly below `bound` agrees. Throws if
    /// either truncation bound is too small to decide.
    static bool agree_below(const QSeries& a, const QSeries& b, const mpq_class& bound) {
        for (const QSeries* s : {&a, &b})
            if (s->trunc_ && *s->trunc_ < bound)
                throw std::domain_error("truncation bound " + s->trunc_->get_str() +
                                        " too small to compare below " + bound.get_str());
        long l = std::lcm(a.denom_, b.denom_);
        auto scaled = [&](const QSeries& s) {
            std::map<Exp, mpq_class> m = s.terms_;
            rescale_map(m, l / s.denom_);
            return m;
        };
        std::map<Exp, mpq_class> ma = scaled(a), mb = scaled(b);
        for (const auto& [e, c] : ma) {
            if (mpq_class(e) >= bound * l) continue;
            auto it = mb.find(e);
            if (it == mb.end() || it->second != c) return false;
        }
        for (const auto& [e, c] : mb) {
            if (mpq_class(e) >= bound * l) continue;
            if (ma.find(e) == ma.end()) return false;
        }
        return true;
    }

    friend std::ostream& operator<<(std::ostream& os, const QSeries& s) {
        if (s.terms_.empty()) os << "0";
        bool first = true;
        for (const auto& [e, c] : s.terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.get_str();
            if (e != 0) {
                os << "*q^(" << e;
                if (s.denom_ != 1) os << "/" << s.denom_;
                os << ")";
            }
        }
        if (s.trunc_) os << " + O(q^(" << s.trunc_->get_str() << "))";
        return os;
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

private:
    long denom_;
    std::map<Exp, mpq_class> terms_;
    TruncBound trunc_;

    static void check_den(Exp den) {
        if (den <= 0) throw std::invalid_argument("exponent denominator must be positive");
    }

    static mpq_class canon(const mpq_class& c) {
        mpq_class cc = c;
        cc.canonicalize();
        return cc;
    }

    mpq_class exp_value(Exp num) const {
        mpq_class e(num);
        e /= denom_;
        return e;
    }

    /// min(lowest stored exponent, truncation): the smallest exponent at
    /// which this series can carry mass, known or unknown. Callers guarantee
    /// the series is not the exact zero.
    mpq_class min_exponent_eff() const {
        if (terms_.empty()) return *trunc_;
        return exp_value(terms_.begin()->first);
    }

    static void rescale_map(std::map<Exp, mpq_class>& m, long s) {
        if (s == 1) return;
        std::map<Exp, mpq_class> out;
        for (auto& [e, c] : m) out.emplace(e * s, std::move(c));
        m = std::move(out);
    }

    void rescale_keys(long l) {
        if (l == denom_) return;
        rescale_map(terms_, l / denom_);
        denom_ = l;
    }

    void normalize() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second == 0 ||
                (trunc_ && mpq_class(it->first) >= *trunc_ * denom_))
                it = terms_.erase(it);
            else
                ++it;
        }
        long g = denom_;
        for (const auto& [e, c] : terms_) {
            g = std::gcd(g, e < 0 ? -e : e);
            if (g == 1) break;
        }
        if (g > 1) {
            std::map<Exp, mpq_class> out;
            for (auto& [e, c] : terms_) out.emplace(e / g, std::move(c));
            terms_ = std::move(out);
            denom_ /= g;
        }
        if (terms_.empty()) denom_ = 1;
    }
};

/// sigma_k(n) = sum of d^k over divisors d of n, for n >= 1.
inline mpz_class divisor_power_sum(long n, unsigned k) {
    mpz_class acc(0);
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        mpz_class dk, ek;
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), k);
        acc += dk;
        long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(ek.get_mpz_t(), static_cast<unsigned long>(e), k);
            acc += ek;
        }
    }
    return acc;
}

namespace detail {
/// prod_{n=1}^{M} (1 - q^n) with truncation M+1: dropping the factor
/// (1-q^(M+1)) first perturbs the coefficient of q^(M+1).
inline QSeries euler_product(long M) {
    QSeries p = QSeries::one();
    for (long n = 1; n <= M; ++n) {
        QSeries f = QSeries::one();
        f.add_term(-1, n);
        p = p * f;
        p.set_truncation(mpq_class(M + 1));
    }
    p.set_truncation(mpq_class(M + 1));
    return p;
}
}  // namespace detail

/// eta(tau) = q^(1/24) prod (1-q^n), known strictly below `prec`.
inline QSeries dedekind_eta(const mpq_class& prec) {
    long M = to_long(rat_ceil(prec));
    QSeries p = detail::euler_product(M);
    return p.shifted(1, 24);
}

/// Delta(tau) = q prod (1-q^n)^24, known strictly below `prec`.
inline QSeries discriminant_delta(const mpq_class& prec) {
    long M = to_long(rat_ceil(prec));
    return detail::euler_product(M).pow(24).shifted(1);
}

/// E4 = 1 + 240 sum sigma_3(n) q^n.
inline QSeries eisenstein_e4(const mpq_class& prec) {
    QSeries s = QSeries::zero(TruncBound(prec));
    long M = to_long(rat_ceil(prec)) - 1;
    s.add_term(1, 0);
    for (long n = 1; n <= M; ++n)
        s.add_term(mpq_class(240 * mpz_class(divisor_power_sum(n, 3))), n);
    return s;
}

/// E6 = 1 - 504 sum sigma_5(n) q^n.
inline QSeries eisenstein_e6(const mpq_class& prec) {
    QSeries s = QSeries::zero(TruncBound(prec));
    long M = to_long(rat_ceil(prec)) - 1;
    s.add_term(1, 0);
    for (long n = 1; n <= M; ++n)
        s.add_term(mpq_class(-504 * mpz_class(divisor_power_sum(n, 5))), n);
    return s;
}

/// j = E4^3 / Delta = q^-1 + 744 + 196884 q + ...
inline QSeries klein_j(const mpq_class& prec) {
    mpq_class w = prec + 2;
    QSeries e4 = eisenstein_e4(w);
    QSeries delta = discriminant_delta(w);
    return (e4.pow(3) * delta.inverse(w - 2)).truncated(prec);
}

/// J = E4*E6 / Delta = q^-1 - 240 + ... : the unique weight -2 form for
/// SL2(Z), holomorphic on the upper half plane, with expansion q^-1 + O(1).
/// The constant term is forced; it is computed here, never assumed.
inline QSeries weight_minus2_j(const mpq_class& prec) {
    mpq_class w = prec + 2;
    QSeries num = eisenstein_e4(w) * eisenstein_e6(w);
    QSeries delta = discriminant_delta(w);
    return (num * delta.inverse(w - 2)).truncated(prec);
}

}  // namespace primeforms
