#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "rational.hpp"

namespace primeforms {

/** QFieldElem: exact element u + v*sqrt(p) of the real quadratic field
 * Q(sqrt(p)), p prime, p = 1 mod 4.
 *
 * The embedding convention is fixed once: sqrt(p) denotes the positive real
 * root. "First" embedding sends sqrt(p) to +sqrt(p), "second" to -sqrt(p).
 * All sign and comparison queries are exact (no floating point); doubles are
 * offered separately for deriving search bounds only.
 */
class QFieldElem {
public:
    QFieldElem(long p, mpq_class u, mpq_class v)
        : p_(p), u_(std::move(u)), v_(std::move(v)) {
        require_prime_1mod4(p_);
        u_.canonicalize();  // raw two-arg mpq_class input may be unreduced
        v_.canonicalize();
    }

    static QFieldElem rational(long p, const mpq_class& u) {
        return QFieldElem(p, u, 0);
    }

    /// sqrt(p)/p = 1/sqrt(p), the generator of the codifferent.
    static QFieldElem inv_sqrt_p(long p) {
        return QFieldElem(p, 0, mpq_class(1, p));
    }

    long p() const { return p_; }
    const mpq_class& u() const { return u_; }
    const mpq_class& v() const { return v_; }

    QFieldElem conj() const { return QFieldElem(p_, u_, -v_); }
    mpq_class norm() const { return u_ * u_ - p_ * v_ * v_; }
    mpq_class trace() const { return 2 * u_; }
    bool is_zero() const { return u_ == 0 && v_ == 0; }

    friend QFieldElem operator+(const QFieldElem& a, const QFieldElem& b) {
        a.check_same(b);
        return QFieldElem(a.p_, a.u_ + b.u_, a.v_ + b.v_);
    }
    friend QFieldElem operator-(const QFieldElem& a, const QFieldElem& b) {
        a.check_same(b);
        return QFieldElem(a.p_, a.u_ - b.u_, a.v_ - b.v_);
    }
    QFieldElem operator-() const { return QFieldElem(p_, -u_, -v_); }
    friend QFieldElem operator*(const QFieldElem& a, const QFieldElem& b) {
        a.check_same(b);
        return QFieldElem(a.p_, a.u_ * b.u_ + a.p_ * a.v_ * b.v_,
                          a.u_ * b.v_ + a.v_ * b.u_);
    }
    friend QFieldElem operator*(const mpq_class& c, const QFieldElem& a) {
        return QFieldElem(a.p_, c * a.u_, c * a.v_);
    }
    friend QFieldElem operator*(const QFieldElem& a, const mpq_class& c) { return c * a; }

    QFieldElem inverse() const {
        mpq_class n = norm();
        if (n == 0) throw std::domain_error("inverse of zero or a zero divisor");
        return QFieldElem(p_, u_ / n, -v_ / n);
    }

    QFieldElem pow(long k) const {
        QFieldElem base = k < 0 ? inverse() : *this;
        long n = k < 0 ? -k : k;
        QFieldElem acc = rational(p_, 1);
        while (n > 0) {
            if (n & 1) acc = acc * base;
            n >>= 1;
            if (n > 0) base = base * base;
        }
        return acc;
    }

    /// Exact sign of u + v*sqrt(p) under the first embedding: decided by the
    /// signs of u, v and the comparison u^2 vs p v^2 (never equal for v != 0,
    /// since p is not a square).
    int sign_first() const {
        int su = sgn(u_), sv = sgn(v_);
        if (sv == 0) return su;
        if (su == 0) return sv;
        if (su == sv) return su;
        int cmp = sgn(u_ * u_ - p_ * v_ * v_);  // compares |u| vs |v| sqrt(p)
        if (cmp == 0) throw std::logic_error("p is a square?");
        return cmp > 0 ? su : sv;
    }

    int sign_second() const { return conj().sign_first(); }
    bool is_totally_positive() const { return sign_first() > 0 && sign_second() > 0; }

    double double_first() const {
        return u_.get_d() + v_.get_d() * std::sqrt(static_cast<double>(p_));
    }
    double double_second() const {
        return u_.get_d() - v_.get_d() * std::sqrt(static_cast<double>(p_));
    }

    friend bool operator==(const QFieldElem& a, const QFieldElem& b) {
        return a.p_ == b.p_ && a.u_ == b.u_ && a.v_ == b.v_;
    }
    friend bool operator!=(const QFieldElem& a, const QFieldElem& b) { return !(a == b); }

    /// Total order by numeric value under the first embedding.
    friend bool operator<(const QFieldElem& a, const QFieldElem& b) {
        return (a - b).sign_first() < 0;
    }

    friend std::ostream& operator<<(std::ostream& os, const QFieldElem& x) {
        return os << x.u_.get_str() << " + " << x.v_.get_str() << "*sqrt("
                  << x.p_ << ")";
    }

private:
    long p_;
    mpq_class u_, v_;

    static int sgn(const mpq_class& x) { return mpq_sgn(x.get_mpq_t()); }
    void check_same(const QFieldElem& b) const {
        if (p_ != b.p_) throw std::invalid_argument("mixed base fields");
    }
};

/// Membership in O = Z[(1+sqrt(p))/2]: x = (a + b sqrt(p))/2 with integers
/// a = b mod 2.
inline bool in_ring_of_integers(const QFieldElem& x) {
    mpq_class a = 2 * x.u(), b = 2 * x.v();
    if (!is_integer(a) || !is_integer(b)) return false;
    return (a.get_num() - b.get_num()) % 2 == 0;
}

/// Membership in the codifferent (1/sqrt(p)) O: tested as x*sqrt(p) in O.
inline bool in_codifferent(const QFieldElem& x) {
    // x*sqrt(p) = p*v + u*sqrt(p)
    return in_ring_of_integers(QFieldElem(x.p(), x.p() * x.v(), x.u()));
}

/** CodiffElem: an element of the codifferent ideal (1/sqrt(p))O, membership
 * checked on construction. */
class CodiffElem {
public:
    explicit CodiffElem(QFieldElem x) : x_(std::move(x)) {
        if (!in_codifferent(x_))
            throw std::domain_error("element is not in the codifferent (1/sqrt(p))O");
    }
    const QFieldElem& value() const { return x_; }

private:
    QFieldElem x_;
};

/// Smallest unit > 1 of O, computed from the continued fraction of
/// (1 + sqrt(p))/2: the Gauss recurrence on alpha_i = (P_i + sqrt(p))/Q_i is
/// run until (P, Q) repeats; the unit is q_{l-1} alpha_j + q_{l-2} built from
/// the convergents of the periodic tail. Throws if the norm is not -1 (it is
/// -1 for every prime p = 1 mod 4).
inline QFieldElem fundamental_unit(long p) {
    require_prime_1mod4(p);
    long s = to_long(isqrt(mpz_class(p)));
    long P = 1, Q = 2;
    std::vector<std::pair<long, long>> seen;
    std::vector<long> partial;
    std::size_t start = 0, len = 0;
    for (int guard = 0; guard < 10000; ++guard) {
        auto state = std::make_pair(P, Q);
        auto it = std::find(seen.begin(), seen.end(), state);
        if (it != seen.end()) {
            start = static_cast<std::size_t>(it - seen.begin());
            len = seen.size() - start;
            break;
        }
        seen.push_back(state);
        if (Q <= 0) throw std::logic_error("continued fraction left the reduced range");
        long num = P + s;
        long a = num >= 0 ? num / Q : -((-num + Q - 1) / Q);
        partial.push_back(a);
        long Pn = a * Q - P;
        if ((p - Pn * Pn) % Q != 0)
            throw std::logic_error("continued fraction invariant Q | p - P^2 failed");
        long Qn = (p - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    if (len == 0) throw std::logic_error("no continued fraction period found");
    // convergent denominators over one period of the purely periodic tail
    mpz_class qk(0), qk1(1);  // q_{-1} = 0, q_{-2} = 1
    for (std::size_t i = 0; i < len; ++i) {
        mpz_class next = partial[start + i] * qk + qk1;
        qk1 = qk;
        qk = next;
    }
    auto [Pj, Qj] = seen[start];
    // eps = q_{l-1} * (P_j + sqrt(p))/Q_j + q_{l-2}
    mpq_class qden(Qj);
    QFieldElem eps(p, mpq_class(qk) * Pj / qden + mpq_class(qk1),
                   mpq_class(qk) / qden);
    if (!in_ring_of_integers(eps)) throw std::logic_error("unit is not integral");
    if ((eps - QFieldElem::rational(p, 1)).sign_first() <= 0)
        throw std::logic_error("unit is not > 1");
    mpq_class n = eps.norm();
    if (n == 1)
        throw std::domain_error("fundamental unit has norm +1; expected norm -1");
    if (n != -1) throw std::logic_error("fundamental unit norm is not a unit norm");
    return eps;
}

/** Orbit representatives of {lambda in the codifferent : lambda > 0,
 * N(lambda) = n/p} under multiplication by eps0^2, for n < 0.
 *
 * Writing lambda = mu / sqrt(p) with mu = (a + b sqrt(p))/2 in O and
 * N(mu) = -n > 0, each orbit has exactly one member in the window
 * mu > 0, |n| <= mu^2 < |n| eps0^4 (half open, so no duplicates). The scan
 * runs |b| <= b_bound with b_bound derived from |a|, |b sqrt(p)| <=
 * sqrt(|n|) (eps0^2 + 1); the bound is recorded in the result for audit.
 */
struct OrbitSearch {
    std::vector<QFieldElem> reps;
    long b_bound;
};

inline OrbitSearch enumerate_norm_orbit_reps(long p, long n) {
    require_prime_1mod4(p);
    if (n >= 0) throw std::domain_error("n must be negative");
    long m = -n;
    QFieldElem eps0 = fundamental_unit(p);
    QFieldElem eps0_4 = eps0.pow(4);
    double e2 = eps0.double_first() * eps0.double_first();
    long bb = static_cast<long>(
                       std::ceil(std::sqrt(static_cast<double>(m)) * (e2 + 1.0) /
                                 std::sqrt(static_cast<double>(p)))) +
                   2;
    QFieldElem lower = QFieldElem::rational(p, m);
    QFieldElem upper = mpq_class(m) * eps0_4;
    OrbitSearch out;
    out.b_bound = bb;
    for (long b = -bb; b <= bb; ++b) {
        mpz_class rhs = mpz_class(p) * b * b + 4 * mpz_class(m);
        mpz_class root;
        if (!is_perfect_square(rhs, &root)) continue;
        long r = to_long(root);
        if ((r - b) % 2 != 0) continue;
        for (long a : {r, -r}) {  // rhs > 0, so r >= 1 and the pair is distinct
            QFieldElem mu(p, rat(a, 2), rat(b, 2));
            if (mu.sign_first() <= 0) continue;
            QFieldElem mu2 = mu * mu;
            if ((mu2 - lower).sign_first() < 0) continue;
            if ((upper - mu2).sign_first() <= 0) continue;
            out.reps.push_back(mu * QFieldElem::inv_sqrt_p(p));
        }
    }
    std::sort(out.reps.begin(), out.reps.end());
    return out;
}

/// Whether m >= 1 is the norm of an integral ideal of O. Valid for
/// p in {5, 13, 17} (class number one, norm -1 unit), where this reduces to
/// the solvability of |N(mu)| = m in O; scan bounds as in the orbit search.
inline bool is_ideal_norm(long m, long p) {
    if (p != 5 && p != 13 && p != 17)
        throw std::domain_error("is_ideal_norm is only supported for p in {5, 13, 17}");
    if (m < 1) throw std::domain_error("m must be positive");
    QFieldElem eps0 = fundamental_unit(p);
    double e2 = eps0.double_first() * eps0.double_first();
    long bb = static_cast<long>(
                       std::ceil(std::sqrt(static_cast<double>(m)) * (e2 + 1.0) /
                                 std::sqrt(static_cast<double>(p)))) +
                   2;
    for (long b = 0; b <= bb; ++b) {
        for (int sign : {1, -1}) {
            mpz_class rhs = mpz_class(p) * b * b + sign * 4 * mpz_class(m);
            if (rhs < 0) continue;
            mpz_class root;
            if (!is_perfect_square(rhs, &root)) continue;
            if ((root - b) % 2 == 0) return true;
        }
    }
    return false;
}

/** Codifferent lattice window: all nu in (1/sqrt(p))O with
 * 0 < tr(nu * d) <= bound and N(nu) >= norm_floor, for a totally positive
 * direction d. The norm floor is what makes the window finite: the strip
 * 0 < pairing <= bound alone contains infinitely many lattice points.
 * Results are sorted by (pairing, u, v), all comparisons exact.
 */
struct CodiffPoint {
    QFieldElem nu;
    mpq_class pairing;
};

struct CodiffWindow {
    std::vector<CodiffPoint> points;
    long a_bound, b_bound;
};

inline CodiffWindow codiff_enumerate_pairing_bounded(long p, const QFieldElem& d,
                                                     const mpq_class& bound,
                                                     const mpq_class& norm_floor) {
    require_prime_1mod4(p);
    if (d.p() != p) throw std::invalid_argument("direction is in the wrong field");
    if (!d.is_totally_positive())
        throw std::domain_error("grading direction must be totally positive");
    if (norm_floor > 0) throw std::invalid_argument("norm floor must be <= 0");
    double w1 = d.double_first(), w2 = d.double_second();
    double B = bound.get_d(), F = -norm_floor.get_d();
    double D = std::sqrt(B * B + 4 * w1 * w2 * F) + 1e-9;
    // nu = (a + b sqrt(p)) / (2 sqrt(p)); embeddings x, x' give
    // b = x + x', a = (x - x') sqrt(p)
    double xmax = (B + D) / (2 * w1), xmin = -D / (2 * w1);
    double ymax = (B + D) / (2 * w2), ymin = -D / (2 * w2);
    double sp = std::sqrt(static_cast<double>(p));
    long blo = static_cast<long>(std::floor(xmin + ymin)) - 2;
    long bhi = static_cast<long>(std::ceil(xmax + ymax)) + 2;
    long aw = static_cast<long>(
                       std::ceil(std::max(xmax - ymin, ymax - xmin) * sp)) +
                   2;
    CodiffWindow out;
    out.a_bound = aw;
    out.b_bound = std::max(std::labs(blo), std::labs(bhi));
    QFieldElem gen = QFieldElem::inv_sqrt_p(p);
    for (long b = blo; b <= bhi; ++b) {
        for (long a = -aw; a <= aw; ++a) {
            if ((a - b) % 2 != 0) continue;
            if (a == 0 && b == 0) continue;
            QFieldElem nu =
                QFieldElem(p, rat(a, 2), rat(b, 2)) * gen;
            mpq_class t = (nu * d).trace();
            if (t <= 0 || t > bound) continue;
            if (nu.norm() < norm_floor) continue;
            out.points.push_back({nu, t});
        }
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const CodiffPoint& x, const CodiffPoint& y) {
                  if (x.pairing != y.pairing) return x.pairing < y.pairing;
                  if (x.nu.u() != y.nu.u()) return x.nu.u() < y.nu.u();
                  return x.nu.v() < y.nu.v();
              });
    return out;
}

}  // namespace primeforms
