#include <catch2/catch_amalgamated.hpp>

#include <primeforms/qseries.hpp>

using namespace primeforms;

namespace {

/// Independent eta oracle: q^(1/24) sum_k (-1)^k q^(k(3k-1)/2) over the
/// generalized pentagonal numbers. No shared code with the Euler product.
QSeries eta_pentagonal(long M) {
    QSeries s = QSeries::zero(TruncBound(mpq_class(M)));
    for (long k = -300; k <= 300; ++k) {
        long e = k * (3 * k - 1) / 2;
        if (mpq_class(24 * e + 1, 24) >= M) continue;
        s.add_term(mpq_class(k % 2 == 0 ? 1 : -1), 24 * e + 1, 24);
    }
    return s;
}

}  // namespace

TEST_CASE("coefficients are canonicalized on entry", "[qseries]") {
    REQUIRE(QSeries::monomial(mpq_class(4, 6), 1) == QSeries::monomial(mpq_class(2, 3), 1));
    QSeries s;
    s.add_term(mpq_class(4, 6), 2);
    REQUIRE(s.coeff(2) == mpq_class(2, 3));
    QSeries t(mpq_class(10, 4));
    REQUIRE(t.coeff(0) == mpq_class(5, 2));
}

TEST_CASE("terms accumulate and vanish exactly", "[qseries]") {
    QSeries s;
    s.add_term(mpq_class(1, 3), 1);
    s.add_term(mpq_class(2, 3), 1);
    REQUIRE(s.coeff(1) == 1);
    s.add_term(mpq_class(-1), 1);
    REQUIRE(s.is_zero());
    REQUIRE(s.term_count() == 0);
}

TEST_CASE("exponent lattice is kept minimal", "[qseries]") {
    QSeries s = QSeries::monomial(1, 2, 4);  // q^(1/2)
    REQUIRE(s.exponent_denominator() == 2);
    QSeries t = QSeries::monomial(1, 3, 3);  // q^1 entered on a coarse lattice
    REQUIRE(t.exponent_denominator() == 1);
}

TEST_CASE("ring identities hold exactly", "[qseries]") {
    QSeries one = QSeries::one();
    QSeries q = QSeries::monomial(1, 1);
    REQUIRE((one + q) * (one - q) == one - q * q);
    REQUIRE(mpq_class(3) * q - q - q - q == QSeries());
    REQUIRE(q.shifted(-2) == QSeries::monomial(1, -1));
    REQUIRE(q.rescaled(5) == QSeries::monomial(1, 5));
    REQUIRE((q + one).rescaled(3) * QSeries::one() == QSeries::monomial(1, 3) + one);
}

TEST_CASE("truncation propagates by the min rule", "[qseries]") {
    QSeries a = QSeries::zero(TruncBound(mpq_class(5)));
    a.add_term(1, 0);
    QSeries b = QSeries::zero(TruncBound(mpq_class(3)));
    b.add_term(1, 1);
    REQUIRE(*(a + b).truncation() == 3);
    // product rule: min over both shifts, here bound(b) + minexp(a) = 3
    REQUIRE(*(a * b).truncation() == 3);
    QSeries c = QSeries::monomial(1, -1);
    c.set_truncation(TruncBound(mpq_class(2)));
    // bound(c) + minexp(b) = 3 beats bound(b) + minexp(c) = 2
    REQUIRE(*(c * b).truncation() == 2);
    REQUIRE((a + QSeries::one()).truncation() == TruncBound(mpq_class(5)));
}

TEST_CASE("terms at or above the truncation are rejected", "[qseries]") {
    QSeries a = QSeries::zero(TruncBound(mpq_class(3)));
    REQUIRE_THROWS_AS(a.add_term(1, 3), std::invalid_argument);
    a.add_term(1, 2);
    REQUIRE(a.coeff(2) == 1);
    REQUIRE_THROWS_AS(a.coeff(3), std::domain_error);
    REQUIRE_THROWS_AS(a.coeff(7), std::domain_error);
    REQUIRE(a.truncated(2).term_count() == 0);
    REQUIRE(*a.truncated(2).truncation() == 2);
    REQUIRE(*a.truncated(4).truncation() == 3);  // can only tighten
}

TEST_CASE("inverse is a two-sided inverse with an honest bound", "[qseries]") {
    QSeries one = QSeries::one();
    QSeries q = QSeries::monomial(1, 1);
    QSeries f = (one - q).truncated(6);
    QSeries g = f.inverse(6);
    for (long n = 0; n < 6; ++n) REQUIRE(g.coeff(n) == 1);  // geometric series
    REQUIRE(QSeries::agree_below(f * g, one, 6));

    // minimal exponent m = 1: the product f * f^-1 is only known below
    // T - 2m, so the inverse bound caps there no matter what is requested.
    QSeries h = (q + q * q).truncated(5);
    QSeries hinv = h.inverse(100);
    REQUIRE(*hinv.truncation() == 3);
    REQUIRE(hinv.coeff(-1) == 1);
    REQUIRE(hinv.coeff(0) == -1);
    REQUIRE(QSeries::agree_below(h * hinv, one, 4));

    REQUIRE_THROWS_AS(QSeries().inverse(3), std::domain_error);
}

TEST_CASE("integer powers", "[qseries]") {
    QSeries one = QSeries::one();
    QSeries q = QSeries::monomial(1, 1);
    QSeries b = (one - q).pow(24);  // exact binomial expansion
    REQUIRE(b.is_exact());
    REQUIRE(b.coeff(0) == 1);
    REQUIRE(b.coeff(1) == -24);
    REQUIRE(b.coeff(2) == 276);
    REQUIRE(b.coeff(12) == 2704156);
    REQUIRE(b.coeff(24) == 1);
    REQUIRE(QSeries::monomial(mpq_class(1, 2), 2).pow(-3) ==
            QSeries::monomial(8, -6));
    REQUIRE((one + q).pow(0) == one);
    // a negative power of an exact multi-term series has no finite expansion
    REQUIRE_THROWS_AS((one + q).pow(-1), std::invalid_argument);
    REQUIRE(QSeries::agree_below((one - q).truncated(5).pow(-2),
                                 one + 2 * q + 3 * q * q, 3));
}

TEST_CASE("eta matches the pentagonal number expansion", "[qseries][eta]") {
    QSeries eta = dedekind_eta(30);
    REQUIRE(QSeries::agree_below(eta, eta_pentagonal(30), 30));
    REQUIRE(eta.coeff(1, 24) == 1);
    REQUIRE(eta.coeff(25, 24) == -1);
    REQUIRE(eta.coeff(49, 24) == -1);
}

TEST_CASE("discriminant form digits", "[qseries][eta]") {
    QSeries delta = discriminant_delta(8);
    REQUIRE(QSeries::agree_below(delta, dedekind_eta(8).pow(24), 8));
    const std::pair<long, long> tau[] = {
        {1, 1}, {2, -24}, {3, 252}, {4, -1472}, {5, 4830}, {6, -6048}, {7, -16744}};
    for (auto [n, c] : tau) REQUIRE(delta.coeff(n) == c);
    QSeries dinv = delta.inverse(4);
    REQUIRE(dinv.coeff(-1) == 1);
    REQUIRE(dinv.coeff(0) == 24);
    REQUIRE(dinv.coeff(1) == 324);
    REQUIRE(dinv.coeff(2) == 3200);
}

TEST_CASE("Eisenstein and j digits", "[qseries]") {
    QSeries e4 = eisenstein_e4(6), e6 = eisenstein_e6(6);
    REQUIRE(e4.coeff(0) == 1);
    REQUIRE(e4.coeff(1) == 240);
    REQUIRE(e4.coeff(2) == 2160);
    REQUIRE(e4.coeff(3) == 6720);
    REQUIRE(e6.coeff(0) == 1);
    REQUIRE(e6.coeff(1) == -504);
    REQUIRE(e6.coeff(2) == -16632);
    REQUIRE(e6.coeff(3) == -122976);
    REQUIRE(QSeries::agree_below(e4.pow(3) - e6.pow(2),
                                 mpq_class(1728) * discriminant_delta(6), 6));

    QSeries j = klein_j(4);
    REQUIRE(j.coeff(-1) == 1);
    REQUIRE(j.coeff(0) == 744);
    REQUIRE(j.coeff(1) == 196884);
    REQUIRE(j.coeff(2) == 21493760);

    QSeries J = weight_minus2_j(4);
    REQUIRE(J.coeff(-1) == 1);
    REQUIRE(J.coeff(0) == -240);
    REQUIRE(QSeries::agree_below(J * discriminant_delta(7),
                                 eisenstein_e4(7) * eisenstein_e6(7), 4));
}

TEST_CASE("divisor power sums", "[qseries]") {
    REQUIRE(divisor_power_sum(1, 1) == 1);
    REQUIRE(divisor_power_sum(6, 1) == 12);
    REQUIRE(divisor_power_sum(4, 3) == 73);
    REQUIRE(divisor_power_sum(12, 1) == 28);
}

TEST_CASE("agree_below refuses to overclaim", "[qseries]") {
    QSeries a = (QSeries::one() + QSeries::monomial(1, 1)).truncated(2);
    QSeries b = QSeries::one().truncated(5);
    REQUIRE_THROWS_AS(QSeries::agree_below(a, b, 3), std::domain_error);
    REQUIRE(!QSeries::agree_below(a, b, 2));
    REQUIRE(QSeries::agree_below(a, b, 1));
    REQUIRE(QSeries::agree_below(a, b, mpq_class(1, 2)));
}
