#include <catch2/catch_amalgamated.hpp>

#include <primeforms/quadfield.hpp>

#include <algorithm>
#include <tuple>
#include <vector>

using namespace primeforms;

TEST_CASE("fundamental units for small p = 1 mod 4", "[quadfield]") {
    QFieldElem e5 = fundamental_unit(5);
    REQUIRE(e5 == QFieldElem(5, rat(1, 2), rat(1, 2)));
    QFieldElem e13 = fundamental_unit(13);
    REQUIRE(e13 == QFieldElem(13, rat(3, 2), rat(1, 2)));
    QFieldElem e17 = fundamental_unit(17);
    REQUIRE(e17 == QFieldElem(17, 4, 1));
    for (const auto& e : {e5, e13, e17}) {
        REQUIRE(e.norm() == -1);
        REQUIRE(e.sign_first() > 0);
        REQUIRE((e - QFieldElem::rational(e.p(), 1)).sign_first() > 0);  // e > 1
    }
    REQUIRE_THROWS_AS(fundamental_unit(7), std::domain_error);
    REQUIRE_THROWS_AS(fundamental_unit(15), std::domain_error);
}

TEST_CASE("ring and codifferent membership", "[quadfield]") {
    REQUIRE(in_ring_of_integers(QFieldElem(5, rat(1, 2), rat(1, 2))));
    REQUIRE(in_ring_of_integers(QFieldElem(5, 3, 1)));
    REQUIRE(!in_ring_of_integers(QFieldElem(5, rat(1, 2), 1)));
    REQUIRE(!in_ring_of_integers(QFieldElem(5, rat(1, 3), 0)));

    // (1/sqrt(p))O: u picks up the 1/2, v the 1/(2p) granularity
    REQUIRE(in_codifferent(QFieldElem(5, 0, rat(1, 5))));
    REQUIRE(in_codifferent(QFieldElem(5, rat(1, 2), rat(1, 10))));
    REQUIRE(!in_codifferent(QFieldElem(5, rat(1, 2), rat(1, 5))));
    REQUIRE(!in_codifferent(QFieldElem(5, 0, rat(1, 2))));
    REQUIRE_THROWS_AS(CodiffElem(QFieldElem(5, 0, rat(1, 2))), std::domain_error);
    REQUIRE(CodiffElem(QFieldElem(5, 0, rat(1, 5))).value().norm() == rat(-1, 5));
}

TEST_CASE("field arithmetic and exact signs", "[quadfield]") {
    QFieldElem x(5, rat(1, 2), rat(1, 2));
    REQUIRE(x * x == x + QFieldElem::rational(5, 1));  // golden ratio relation
    REQUIRE(x.inverse() == QFieldElem(5, rat(-1, 2), rat(1, 2)));
    REQUIRE(x.pow(3) == QFieldElem(5, 2, 1));
    REQUIRE(x.pow(-3) * x.pow(3) == QFieldElem::rational(5, 1));
    REQUIRE(x.trace() == 1);
    REQUIRE(x.conj() == QFieldElem(5, rat(1, 2), rat(-1, 2)));

    // 161/72 is a convergent of sqrt(5): the difference is tiny but positive
    QFieldElem near(5, rat(161, 72), -1);
    REQUIRE(near.sign_first() == 1);
    REQUIRE(near.sign_second() == 1);
    REQUIRE(QFieldElem(5, rat(-161, 72), 1).sign_first() == -1);
    REQUIRE(QFieldElem(5, 0, 0).sign_first() == 0);
    // eps0 has norm -1: positive but not totally positive; eps0^2 is
    REQUIRE(!x.is_totally_positive());
    REQUIRE((x * x).is_totally_positive());
    REQUIRE(!QFieldElem(5, 1, 1).is_totally_positive());
}

TEST_CASE("constructor canonicalizes rational components", "[quadfield]") {
    REQUIRE(QFieldElem(5, mpq_class(4, 6), mpq_class(2, 4)) ==
            QFieldElem(5, rat(2, 3), rat(1, 2)));
}

TEST_CASE("orbit representatives of negative norm classes", "[quadfield]") {
    auto r1 = enumerate_norm_orbit_reps(5, -1);
    REQUIRE(r1.reps.size() == 1);
    REQUIRE(r1.reps[0] == QFieldElem(5, 0, rat(1, 5)));  // 1/sqrt(5)

    REQUIRE(enumerate_norm_orbit_reps(5, -2).reps.empty());
    REQUIRE(enumerate_norm_orbit_reps(5, -6).reps.empty());

    auto r4 = enumerate_norm_orbit_reps(5, -4);
    REQUIRE(r4.reps.size() == 1);
    REQUIRE(r4.reps[0] == QFieldElem(5, 0, rat(2, 5)));  // 2/sqrt(5)

    auto r5 = enumerate_norm_orbit_reps(5, -5);
    REQUIRE(r5.reps.size() == 1);
    REQUIRE(r5.reps[0] == fundamental_unit(5));

    auto r13 = enumerate_norm_orbit_reps(13, -1);
    REQUIRE(r13.reps.size() == 1);
    REQUIRE(r13.reps[0] == QFieldElem(13, 0, rat(1, 13)));

    for (const auto& lam : r5.reps) {
        REQUIRE(in_codifferent(lam));
        REQUIRE(lam.norm() == -1);
        REQUIRE(lam.sign_first() > 0);
    }
    REQUIRE_THROWS_AS(enumerate_norm_orbit_reps(5, 0), std::domain_error);
    REQUIRE_THROWS_AS(enumerate_norm_orbit_reps(5, 3), std::domain_error);
}

TEST_CASE("ideal norms for class number one fields", "[quadfield]") {
    for (long m : {1L, 4L, 5L, 9L, 11L, 16L, 19L, 20L, 25L, 29L})
        REQUIRE(is_ideal_norm(m, 5));
    for (long m : {2L, 3L, 6L, 10L, 14L, 15L, 21L, 24L, 26L, 30L})
        REQUIRE(!is_ideal_norm(m, 5));
    REQUIRE(is_ideal_norm(3, 13));
    REQUIRE(!is_ideal_norm(2, 13));
    REQUIRE(is_ideal_norm(2, 17));
    REQUIRE(!is_ideal_norm(3, 17));
    REQUIRE_THROWS_AS(is_ideal_norm(1, 29), std::domain_error);
    REQUIRE_THROWS_AS(is_ideal_norm(0, 5), std::domain_error);
}

TEST_CASE("codifferent window matches a brute scan", "[quadfield]") {
    const long p = 5;
    QFieldElem d(p, 3, rat(1, 5));
    mpq_class bound = 4, floor = -1;
    auto win = codiff_enumerate_pairing_bounded(p, d, bound, floor);

    std::vector<CodiffPoint> brute;
    for (long a = -50; a <= 50; ++a)
        for (long b = -50; b <= 50; ++b) {
            if ((a - b) % 2 != 0) continue;
            if (a == 0 && b == 0) continue;
            // nu = (a + b sqrt(p)) / (2 sqrt(p))
            QFieldElem nu(p, rat(b, 2), rat(a, 2 * p));
            mpq_class t = (nu * d).trace();
            if (t <= 0 || t > bound) continue;
            if (nu.norm() < floor) continue;
            brute.push_back({nu, t});
        }
    std::sort(brute.begin(), brute.end(),
              [](const CodiffPoint& x, const CodiffPoint& y) {
                  return std::tie(x.pairing, x.nu.u(), x.nu.v()) <
                         std::tie(y.pairing, y.nu.u(), y.nu.v());
              });

    REQUIRE(win.points.size() == brute.size());
    for (size_t i = 0; i < brute.size(); ++i) {
        REQUIRE(win.points[i].nu == brute[i].nu);
        REQUIRE(win.points[i].pairing == brute[i].pairing);
        REQUIRE(in_codifferent(win.points[i].nu));
    }

    REQUIRE_THROWS_AS(
        codiff_enumerate_pairing_bounded(p, QFieldElem(p, 1, 1), bound, floor),
        std::domain_error);
    REQUIRE_THROWS_AS(codiff_enumerate_pairing_bounded(p, d, bound, mpq_class(1)),
                      std::invalid_argument);
}
