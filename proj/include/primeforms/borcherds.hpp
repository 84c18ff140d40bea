#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forms.hpp"
#include "quadfield.hpp"

namespace primeforms {

/** Weyl chambers, Weyl vectors, obstruction pairings and the Fourier
 * expansion of Borcherds products on the Hilbert modular surface of
 * Q(sqrt(p)).
 *
 * The geometry lives in the imaginary-part plane: a point of H x H is
 * reduced to its imaginary parts (y1, y2), both positive. Base points are
 * exact field elements whose first embeddings are the coordinates; the
 * interesting base points, such as (-eps0', eps0), are irrational, so a
 * rational pair would not do.
 *
 * A pole -n of the input form contributes the wall family
 * {lambda y1 + lambda' y2 = 0 : lambda in d^-1, N(lambda) = -n/p}; the
 * positive lambda form eps0^2-orbits, each a discrete stack of walls.
 */

/// The wall functional lambda y1 + lambda' y2 at the point (y1, y2); its
/// first-embedding sign says which side of the wall the point is on.
inline QFieldElem wall_functional(const QFieldElem& lam, const QFieldElem& y1,
                                  const QFieldElem& y2) {
    return lam * y1 + lam.conj() * y2;
}

struct WeylChamber {
    long p;
    QFieldElem base1, base2;        // interior point (y1, y2)
    std::vector<QFieldElem> walls;  // bracketing walls around the interior point
    std::vector<int> signs;         // side of each wall the interior point is on
};

/// One representative per (sign, eps0^2)-orbit of wall vectors, over all
/// poles of f. The full arrangement is the orbit {+-eps0^(2k) lambda}; an
/// empty result means no pole has soluble norm equation (compact divisors).
inline std::vector<QFieldElem> walls_for(const ScalarForm& f) {
    PrincipalPart pp = principal_part_of(f);
    std::vector<QFieldElem> out;
    for (const auto& [n, c] : pp.coeffs) {
        OrbitSearch s = enumerate_norm_orbit_reps(f.p, n);
        out.insert(out.end(), s.reps.begin(), s.reps.end());
    }
    return out;
}

namespace detail {

/// Within one orbit {lambda eps0^(2k)} the functional at a fixed positive
/// point is strictly increasing in k (the lambda > 0 part grows, the
/// negative conjugate part shrinks), so there is a unique sign change.
/// Returns the last lambda on the negative side; the next orbit member is
/// the first on the positive side. Throws if the point lies on a wall.
inline QFieldElem bracket_orbit(QFieldElem lam, const QFieldElem& e2,
                                const QFieldElem& y1, const QFieldElem& y2) {
    int side = wall_functional(lam, y1, y2).sign_first();
    if (side == 0) throw std::domain_error("base point lies on a wall");
    int guard = 0;
    if (side < 0) {
        QFieldElem next = lam * e2;
        int s = wall_functional(next, y1, y2).sign_first();
        while (s < 0) {
            lam = next;
            next = lam * e2;
            s = wall_functional(next, y1, y2).sign_first();
            if (++guard > 1000) throw std::logic_error("wall walk did not terminate");
        }
        if (s == 0) throw std::domain_error("base point lies on a wall");
        return lam;
    }
    QFieldElem e2inv = e2.inverse();
    QFieldElem cur = lam * e2inv;
    side = wall_functional(cur, y1, y2).sign_first();
    while (side > 0) {
        cur = cur * e2inv;
        side = wall_functional(cur, y1, y2).sign_first();
        if (++guard > 1000) throw std::logic_error("wall walk did not terminate");
    }
    if (side == 0) throw std::domain_error("base point lies on a wall");
    return cur;
}

}  // namespace detail

/// The chamber containing (y1, y2): for each pole and each wall orbit, the
/// walk records the two walls bracketing the point with their signs. A point
/// strictly between the bracketing walls of every orbit is in the same
/// chamber, so the stored pairs cut out the chamber exactly.
inline WeylChamber weyl_chamber_of(const PrincipalPart& pp, const QFieldElem& y1,
                                   const QFieldElem& y2) {
    long p = pp.p;
    if (y1.p() != p || y2.p() != p)
        throw std::invalid_argument("base point is in the wrong field");
    if (y1.sign_first() <= 0 || y2.sign_first() <= 0)
        throw std::domain_error("base point coordinates must be positive");
    QFieldElem e2 = fundamental_unit(p).pow(2);
    WeylChamber W{p, y1, y2, {}, {}};
    for (const auto& [n, c] : pp.coeffs) {
        for (const QFieldElem& rep : enumerate_norm_orbit_reps(p, n).reps) {
            QFieldElem low = detail::bracket_orbit(rep, e2, y1, y2);
            W.walls.push_back(low);
            W.signs.push_back(-1);
            W.walls.push_back(low * e2);
            W.signs.push_back(+1);
        }
    }
    return W;
}

inline WeylChamber weyl_chamber_of(const ScalarForm& f, const QFieldElem& y1,
                                   const QFieldElem& y2) {
    return weyl_chamber_of(principal_part_of(f), y1, y2);
}

/// The canonical interior point (-eps0', eps0); both coordinates positive
/// since 0 < -eps0' < 1 < eps0.
inline std::pair<QFieldElem, QFieldElem> default_basepoint(long p) {
    QFieldElem e = fundamental_unit(p);
    return {-e.conj(), e};
}

/// R(W, n): one lambda per eps0^2-orbit of {lambda in d^-1 : lambda > 0,
/// N(lambda) = n/p}, picked by the sign conditions functional(lambda) < 0
/// and functional(lambda eps0^2) > 0 at the interior point. Sorted by first
/// embedding.
inline std::vector<QFieldElem> R_set(const WeylChamber& W, long n) {
    QFieldElem e2 = fundamental_unit(W.p).pow(2);
    std::vector<QFieldElem> out;
    for (const QFieldElem& rep : enumerate_norm_orbit_reps(W.p, n).reps)
        out.push_back(detail::bracket_orbit(rep, e2, W.base1, W.base2));
    std::sort(out.begin(), out.end());
    return out;
}

/// rho_W = (1/tr eps0) sum_{n<0} s(n) a(n) sum_{lambda in R(W,n)} eps0 lambda.
/// Enforces (tr eps0) rho_W in d^-1, which holds whenever every s(n) a(n)
/// is an integer.
inline QFieldElem weyl_vector(const PrincipalPart& pp, const WeylChamber& W) {
    if (pp.p != W.p)
        throw std::invalid_argument("chamber and principal part disagree on p");
    QFieldElem eps0 = fundamental_unit(W.p);
    QFieldElem acc = QFieldElem::rational(W.p, 0);
    for (const auto& [n, a] : pp.coeffs) {
        mpq_class w = s_factor(n, W.p) * a;
        for (const QFieldElem& lam : R_set(W, n)) acc = acc + w * (eps0 * lam);
    }
    if (!in_codifferent(acc))
        throw std::domain_error(
            "(tr eps0) rho_W is not in the codifferent; the principal part "
            "needs integral s(n) a(n)");
    return mpq_class(1) / eps0.trace() * acc;
}

inline QFieldElem weyl_vector(const ScalarForm& f, const WeylChamber& W) {
    return weyl_vector(principal_part_of(f), W);
}

struct ObstructionReport {
    bool ok;
    mpq_class a0;                     // forced constant term
    std::vector<mpq_class> pairings;  // sum_n s(n) a(n) b(-n), one per basis form
};

/// Existence test for a weight-0 form with the prescribed principal part:
/// the pairing against every weight-2 cusp form of the dual eigenspace must
/// vanish. a0 is the constant term forced by that space's Eisenstein series.
inline ObstructionReport obstruction_check(const PrincipalPart& pp,
                                           const std::vector<ScalarForm>& cusp_basis) {
    long p = pp.p;
    int delta = legendre_chi(-1, p) * pp.eps;
    long depth = pp.pole_depth();
    ScalarForm E = eisenstein_E(2, delta, p, mpq_class(depth + 1));
    ObstructionReport rep{true, 0, {}};
    mpq_class a0(0);
    for (const auto& [n, a] : pp.coeffs) a0 += s_factor(n, p) * a * E.a(-n);
    rep.a0 = -a0 / 2;
    for (const ScalarForm& b : cusp_basis) {
        if (b.p != p) throw std::invalid_argument("basis form at the wrong level");
        if (b.weight != 2)
            throw std::domain_error("obstruction basis must have weight 2");
        if (b.hol != Holomorphy::cuspidal)
            throw std::domain_error("obstruction basis must be cuspidal");
        if (b.sign != delta)
            throw std::domain_error("obstruction basis is in the wrong eigenspace");
        auto mn = b.series.min_exponent();
        if (mn && *mn < 1)
            throw std::domain_error("cusp form has terms at exponents < 1");
        mpq_class pairing(0);
        for (const auto& [n, a] : pp.coeffs)
            pairing += s_factor(n, p) * a * b.a(-n);
        rep.pairings.push_back(pairing);
        if (pairing != 0) rep.ok = false;
    }
    return rep;
}

struct LiftMetadata {
    mpq_class weight;                               // constant term a(0)
    std::vector<std::pair<long, mpq_class>> divisor;  // (m, s(m) a(-m)), m ascending
};

/// Weight and divisor data of the lift of f: weight a(0); the divisor is the
/// multiplicity list over the poles.
inline LiftMetadata lift_metadata(const ScalarForm& f) {
    if (f.weight != 0 || f.sign != 1)
        throw std::domain_error("lift input must be a weight-0 plus-space form");
    PrincipalPart pp = principal_part_of(f);
    LiftMetadata md{f.a(0), {}};
    for (auto it = pp.coeffs.rbegin(); it != pp.coeffs.rend(); ++it)
        md.divisor.emplace_back(-it->first, s_factor(it->first, f.p) * it->second);
    return md;
}

struct HilbertTerm {
    QFieldElem nu;      // index in d^-1; the true exponent is rho + nu
    mpq_class pairing;  // tr(nu * direction)
    mpq_class c;
};

struct HilbertExpansion {
    long p;
    QFieldElem rho;        // prefactor exponent; stored indices are unshifted
    QFieldElem direction;  // grading direction
    mpq_class bound;       // indices kept iff 0 <= pairing <= bound
    std::vector<std::string> caveats;
    std::vector<HilbertTerm> terms;  // sorted by (pairing, nu.u, nu.v)

    mpq_class coefficient_at(const QFieldElem& nu) const {
        for (const HilbertTerm& t : terms)
            if (t.nu == nu) return t.c;
        return 0;
    }
};

namespace detail {

inline int sign_of(const mpq_class& x) { return mpq_sgn(x.get_mpq_t()); }

/// d lies in the (closed) chamber data iff it is totally positive and sits
/// on the interior point's side of every stored wall; then tr(nu d) > 0 for
/// every factor index nu of the product.
inline bool direction_in_chamber(const WeylChamber& W, const QFieldElem& d) {
    if (d.p() != W.p) return false;
    if (d.is_zero() || !d.is_totally_positive()) return false;
    for (std::size_t i = 0; i < W.walls.size(); ++i)
        if (sign_of((W.walls[i] * d).trace()) != W.signs[i]) return false;
    return true;
}

/// Rational-coefficient field element approximating the interior point:
/// sqrt(p) is replaced by isqrt(p 4^k)/2^k and the precision k doubled until
/// the exact chamber test passes. Terminates because the chamber is open.
inline QFieldElem derive_direction(const WeylChamber& W) {
    long p = W.p;
    for (unsigned long k = 4; k <= 4096; k *= 2) {
        mpz_class half;
        mpz_ui_pow_ui(half.get_mpz_t(), 2, k);
        mpq_class s(isqrt(p * half * half), half);
        s.canonicalize();
        mpq_class r1 = W.base1.u() + W.base1.v() * s;
        mpq_class r2 = W.base2.u() + W.base2.v() * s;
        QFieldElem d(p, (r1 + r2) / 2, (r1 - r2) * s / (2 * p));
        if (direction_in_chamber(W, d)) return d;
    }
    throw std::logic_error("failed to derive a grading direction in the chamber");
}

/// Integer coordinates of nu in d^-1: nu = (x + y sqrt(p)) / (2 sqrt(p)).
/// The grading form is then tr(nu d) = x d.v + y d.u.
inline std::pair<long, long> nu_key(const QFieldElem& nu) {
    mpq_class x = 2 * nu.p() * nu.v(), y = 2 * nu.u();
    if (!is_integer(x) || !is_integer(y))
        throw std::logic_error("index is not in the codifferent");
    return {to_long(x.get_num()), to_long(y.get_num())};
}

/** Everything the expansion needs that does not depend on the coefficients
 * of the input form: the chamber is re-derived from the principal part at
 * the supplied base point (so walls always match the form being expanded),
 * the grading direction verified or derived, the index window enumerated,
 * and the coefficient range recorded. */
struct ProductPlan {
    WeylChamber chamber;
    QFieldElem direction;
    QFieldElem rho;
    CodiffWindow window;
    long required;  // smallest sufficient truncation bound for the input form
};

inline ProductPlan plan_product(const PrincipalPart& pp, const WeylChamber& W,
                                std::optional<QFieldElem> direction,
                                const mpq_class& bound) {
    if (pp.p != W.p)
        throw std::invalid_argument("chamber and principal part disagree on p");
    if (bound <= 0) throw std::invalid_argument("grading bound must be positive");
    WeylChamber C = weyl_chamber_of(pp, W.base1, W.base2);
    QFieldElem d = direction ? *direction : derive_direction(C);
    if (direction && !direction_in_chamber(C, d))
        throw std::domain_error("grading direction is not interior to the chamber");
    QFieldElem rho = weyl_vector(pp, C);
    mpq_class norm_floor = mpq_class(-pp.pole_depth()) / mpq_class(pp.p);
    CodiffWindow win = codiff_enumerate_pairing_bounded(pp.p, d, bound, norm_floor);
    long need = 0;
    for (const CodiffPoint& pt : win.points) {
        mpq_class nq = pp.p * pt.nu.norm();
        if (!is_integer(nq)) throw std::logic_error("codifferent norm is not in (1/p)Z");
        need = std::max(need, to_long(nq.get_num()));
    }
    return {std::move(C), std::move(d), std::move(rho), std::move(win), need + 1};
}

struct BorcherdsFactor {
    QFieldElem nu;
    mpq_class pairing;
    long n;       // p N(nu); the coefficient index used
    mpz_class c;  // s(n) a(n), the factor exponent
};

/// Filters the planned window down to actual factors: zero exponents are
/// dropped, non-chamber-positive indices discarded, and the scaling
/// precondition (integral exponents) enforced.
inline std::vector<BorcherdsFactor> borcherds_factors(const ScalarForm& f,
                                                      const ProductPlan& plan) {
    const TruncBound& t = f.series.truncation();
    if (t && *t < plan.required)
        throw std::domain_error(
            "form truncation " + t->get_str() + " is insufficient: the window needs " +
            "coefficients strictly below " + std::to_string(plan.required));
    std::vector<BorcherdsFactor> out;
    for (const CodiffPoint& pt : plan.window.points) {
        long n = to_long(mpq_class(f.p * pt.nu.norm()).get_num());
        mpq_class c = s_factor(n, f.p) * f.series.coeff(n);
        if (c == 0) continue;
        if (!is_integer(c))
            throw std::domain_error("factor exponent s(n) a(n) is not an integer at n = " +
                                    std::to_string(n));
        int side = wall_functional(pt.nu, plan.chamber.base1, plan.chamber.base2)
                       .sign_first();
        if (side < 0) continue;
        if (side == 0)
            throw std::domain_error("factor index lies on a wall through the base point");
        out.push_back({pt.nu, pt.pairing, n, c.get_num()});
    }
    return out;
}

/// Multiplies out prod (1 - X_nu)^c over the factors, graded and truncated
/// by the pairing with the direction. Negative exponents expand as geometric
/// series (region-restricted). Indices are kept as integer coordinate pairs
/// so the merge is exact and deterministic.
inline HilbertExpansion expand_factors(const ProductPlan& plan,
                                       const std::vector<BorcherdsFactor>& factors,
                                       const mpq_class& bound) {
    long p = plan.chamber.p;
    const mpq_class du = plan.direction.u(), dv = plan.direction.v();
    using Key = std::pair<long, long>;
    auto pairing_of = [&](const Key& k) -> mpq_class {
        return k.first * dv + k.second * du;
    };
    std::map<Key, mpq_class> acc;
    acc[{0, 0}] = 1;
    bool region_restricted = false;
    for (const BorcherdsFactor& fac : factors) {
        Key step = nu_key(fac.nu);
        long kmax = to_long(rat_floor(bound / fac.pairing));
        std::vector<std::pair<long, mpq_class>> pows;
        if (fac.c >= 0) {
            long top = fac.c < kmax ? to_long(fac.c) : kmax;
            for (long k = 0; k <= top; ++k) {
                mpz_class b;
                mpz_bin_ui(b.get_mpz_t(), fac.c.get_mpz_t(),
                           static_cast<unsigned long>(k));
                pows.emplace_back(k, mpq_class(k % 2 ? -b : b));
            }
        } else {
            region_restricted = true;
            mpz_class m = -fac.c;
            for (long k = 0; k <= kmax; ++k) {
                mpz_class top_z = m + k - 1, b;
                mpz_bin_ui(b.get_mpz_t(), top_z.get_mpz_t(),
                           static_cast<unsigned long>(k));
                pows.emplace_back(k, mpq_class(b));
            }
        }
        std::map<Key, mpq_class> next;
        for (const auto& [k0, c0] : acc)
            for (const auto& [mult, cf] : pows) {
                Key nk{k0.first + mult * step.first, k0.second + mult * step.second};
                if (pairing_of(nk) > bound) continue;
                auto [it, fresh] = next.try_emplace(nk, c0 * cf);
                if (!fresh) it->second += c0 * cf;
            }
        acc = std::move(next);
    }
    HilbertExpansion out{p, plan.rho, plan.direction, bound, {}, {}};
    if (region_restricted) out.caveats.push_back("region-restricted");
    for (const auto& [k, c] : acc) {
        if (c == 0) continue;
        out.terms.push_back({QFieldElem(p, rat(k.second, 2), rat(k.first, 2 * p)),
                             pairing_of(k), c});
    }
    std::sort(out.terms.begin(), out.terms.end(),
              [](const HilbertTerm& a, const HilbertTerm& b) {
                  if (a.pairing != b.pairing) return a.pairing < b.pairing;
                  if (a.nu.u() != b.nu.u()) return a.nu.u() < b.nu.u();
                  return a.nu.v() < b.nu.v();
              });
    return out;
}

}  // namespace detail

/** Fourier expansion of the Borcherds product of f on the chamber W:
 * the factor set is {nu in d^-1 : nu chamber-positive, tr(nu d) <= bound}
 * with exponents c(nu) = s(p N(nu)) a(p N(nu)); the result collects
 * prod (1 - X_nu)^(c(nu)) with X_nu X_mu = X_(nu+mu), graded by tr(nu d).
 * The prefactor exponent rho_W is attached as metadata; stored indices are
 * unshifted. Factors with negative exponent are expanded geometrically and
 * flagged "region-restricted". */
inline HilbertExpansion product_expansion(const ScalarForm& f, const WeylChamber& W,
                                          const QFieldElem& direction,
                                          const mpq_class& bound) {
    detail::ProductPlan plan =
        detail::plan_product(principal_part_of(f), W, direction, bound);
    return detail::expand_factors(plan, detail::borcherds_factors(f, plan), bound);
}

inline HilbertExpansion product_expansion(const ScalarForm& f, const WeylChamber& W,
                                          const mpq_class& bound) {
    detail::ProductPlan plan =
        detail::plan_product(principal_part_of(f), W, std::nullopt, bound);
    return detail::expand_factors(plan, detail::borcherds_factors(f, plan), bound);
}

struct IntegralityReport {
    mpz_class c;    // smallest positive integer clearing all denominators
    mpz_class gcd;  // gcd of the (cleared) integer coefficients on the window
    bool window_only;  // true when c > 1: it certifies only the computed window
    HilbertExpansion normalized;
};

/// Integrality audit: if every coefficient is an integer, c = 1 and the gcd
/// is reported (the expansion is returned untouched; gcd 1 is a claim to
/// check, not to enforce). Otherwise all coefficients are scaled by the
/// least common denominator c, flagged window-only.
inline IntegralityReport integrality_normalize(const HilbertExpansion& e) {
    mpz_class lcd(1);
    for (const HilbertTerm& t : e.terms)
        mpz_lcm(lcd.get_mpz_t(), lcd.get_mpz_t(), t.c.get_den().get_mpz_t());
    IntegralityReport rep{lcd, 0, lcd != 1, e};
    if (lcd != 1) {
        rep.normalized.caveats.push_back("window-only");
        for (HilbertTerm& t : rep.normalized.terms) t.c *= mpq_class(lcd);
    }
    for (const HilbertTerm& t : rep.normalized.terms)
        mpz_gcd(rep.gcd.get_mpz_t(), rep.gcd.get_mpz_t(),
                t.c.get_num().get_mpz_t());
    return rep;
}

}  // namespace primeforms
