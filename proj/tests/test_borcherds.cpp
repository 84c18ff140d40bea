#include <catch2/catch_amalgamated.hpp>

#include <primeforms/borcherds.hpp>
#include <primeforms/verify.hpp>

using namespace primeforms;

TEST_CASE("wall orbits and the chamber around the default base point", "[borcherds]") {
    ScalarForm f1 = construct_f1_p5(2);
    REQUIRE(walls_for(f1).size() == 1);

    auto [y1, y2] = default_basepoint(5);
    REQUIRE(y1 == -fundamental_unit(5).conj());
    REQUIRE(y2 == fundamental_unit(5));

    WeylChamber W = weyl_chamber_of(f1, y1, y2);
    REQUIRE(W.walls.size() == 2);  // bracketing pair of the single orbit
    REQUIRE(W.signs == std::vector<int>{-1, 1});

    auto reps = R_set(W, -1);
    REQUIRE(reps.size() == 1);
    REQUIRE(reps[0] == QFieldElem(5, 0, rat(1, 5)));
}

TEST_CASE("Weyl vector is constant across the chamber interior", "[borcherds]") {
    ScalarForm f1 = construct_f1_p5(2);
    QFieldElem expected(5, rat(1, 2), rat(1, 10));

    auto [d1, d2] = default_basepoint(5);
    REQUIRE(weyl_vector(f1, weyl_chamber_of(f1, d1, d2)) == expected);

    const std::pair<long, long> pts[] = {{1, 2}, {2, 3}, {1, 3}, {2, 5}, {1, 5}};
    for (auto [a, b] : pts) {
        QFieldElem y1 = QFieldElem::rational(5, a), y2 = QFieldElem::rational(5, b);
        REQUIRE(weyl_vector(f1, weyl_chamber_of(f1, y1, y2)) == expected);
    }

    // linear in the principal part
    PrincipalPart doubled(5, 1, {{-1, mpq_class(2)}});
    WeylChamber W = weyl_chamber_of(doubled, d1, d2);
    REQUIRE(weyl_vector(doubled, W) == QFieldElem(5, 1, rat(1, 5)));

    // s(n) a(n) must be integral for rho_W to land in the codifferent
    PrincipalPart thirds(5, 1, {{-1, mpq_class(1, 3)}});
    REQUIRE_THROWS_AS(weyl_vector(thirds, weyl_chamber_of(thirds, d1, d2)),
                      std::domain_error);
}

TEST_CASE("expansion indices are chamber positive", "[borcherds]") {
    auto [y1, y2] = default_basepoint(5);
    ScalarForm probe = construct_f1_p5(2);
    WeylChamber W = weyl_chamber_of(probe, y1, y2);
    detail::ProductPlan plan = detail::plan_product(principal_part_of(probe), W,
                                                    std::nullopt, 6);
    ScalarForm f1 = construct_f1_p5(plan.required);
    HilbertExpansion e = product_expansion(f1, W, 6);
    REQUIRE(!e.terms.empty());
    bool saw_unit = false;
    for (const HilbertTerm& t : e.terms) {
        if (t.nu.is_zero()) {
            REQUIRE(t.c == 1);
            saw_unit = true;
            continue;
        }
        REQUIRE(wall_functional(t.nu, y1, y2).sign_first() > 0);
    }
    REQUIRE(saw_unit);

    // c(1) collects six decompositions: -110 - 54 + 1 + 121 - 55 - 11
    REQUIRE(e.coefficient_at(QFieldElem(5, 1, 0)) == -108);
    REQUIRE(e.coefficient_at(e.terms[1].nu) == e.terms[1].c);
    REQUIRE(e.coefficient_at(QFieldElem(5, 100, 0)) == 0);
}

TEST_CASE("compact divisors mean no walls", "[borcherds]") {
    for (long m : {1L, 4L, 5L, 9L, 11L, 16L, 19L, 20L, 25L, 29L}) {
        REQUIRE(is_ideal_norm(m, 5));
        REQUIRE(!walls_for(construct_fm_p5(m, 1)).empty());
    }
    for (long m : {6L, 10L, 14L, 15L, 21L, 24L, 26L, 30L}) {
        REQUIRE(!is_ideal_norm(m, 5));
        REQUIRE(walls_for(construct_fm_p5(m, 1)).empty());
    }
}

TEST_CASE("obstruction pairing against synthetic cusp forms", "[borcherds]") {
    PrincipalPart pp(5, 1, {{-1, mpq_class(1)}});
    ObstructionReport clear = obstruction_check(pp, {});
    REQUIRE(clear.ok);
    REQUIRE(clear.a0 == 5);  // the constant term of f_1

    ScalarForm b1{5, 2, 1, Holomorphy::cuspidal,
                  QSeries::monomial(1, 1).truncated(3)};
    ObstructionReport hit = obstruction_check(pp, {b1});
    REQUIRE(!hit.ok);
    REQUIRE(hit.pairings == std::vector<mpq_class>{1});

    ScalarForm b4{5, 2, 1, Holomorphy::cuspidal,
                  QSeries::monomial(1, 4).truncated(6)};
    ObstructionReport miss = obstruction_check(pp, {b4});
    REQUIRE(miss.ok);
    REQUIRE(miss.pairings == std::vector<mpq_class>{0});

    ScalarForm wrong_weight = b4;
    wrong_weight.weight = 4;
    REQUIRE_THROWS_AS(obstruction_check(pp, {wrong_weight}), std::domain_error);
    ScalarForm wrong_sign = b4;
    wrong_sign.sign = -1;
    REQUIRE_THROWS_AS(obstruction_check(pp, {wrong_sign}), std::domain_error);
    ScalarForm not_cuspidal = b4;
    not_cuspidal.hol = Holomorphy::holomorphic;
    REQUIRE_THROWS_AS(obstruction_check(pp, {not_cuspidal}), std::domain_error);
    ScalarForm with_constant = b4;
    with_constant.series.add_term(1, 0);
    REQUIRE_THROWS_AS(obstruction_check(pp, {with_constant}), std::domain_error);
}

TEST_CASE("lift metadata: weight and divisor", "[borcherds]") {
    auto md1 = lift_metadata(construct_fm_p5(1, 1));
    REQUIRE(md1.weight == 5);
    REQUIRE(md1.divisor ==
            std::vector<std::pair<long, mpq_class>>{{1, mpq_class(1)}});

    auto md10 = lift_metadata(construct_fm_p5(10, 1));
    REQUIRE(md10.weight == 10);
    REQUIRE(md10.divisor ==
            std::vector<std::pair<long, mpq_class>>{{10, mpq_class(1)}});

    auto md9 = lift_metadata(construct_fm_p5(9, 1));
    REQUIRE(md9.weight == 35);
    REQUIRE(md9.divisor ==
            std::vector<std::pair<long, mpq_class>>{{9, mpq_class(1)}});

    // the weight is the constant term the obstruction machinery forces
    for (long m = 1; m <= 20; ++m) {
        if (legendre_chi(m, 5) == -1) continue;
        ScalarForm fm = construct_fm_p5(m, 1);
        REQUIRE(lift_metadata(fm).weight ==
                obstruction_check(principal_part_of(fm), {}).a0);
    }

    ScalarForm wrong = construct_fm_p5(1, 1);
    wrong.weight = 2;
    REQUIRE_THROWS_AS(lift_metadata(wrong), std::domain_error);
}

TEST_CASE("integrality audit", "[borcherds]") {
    QFieldElem dir(5, 1, rat(1, 10));
    HilbertExpansion e{5, QFieldElem::rational(5, 0), dir, 4, {}, {}};
    e.terms.push_back({QFieldElem::rational(5, 0), 0, mpq_class(1)});
    e.terms.push_back({QFieldElem(5, 1, 0), 2, mpq_class(1, 3)});

    IntegralityReport rep = integrality_normalize(e);
    REQUIRE(rep.c == 3);
    REQUIRE(rep.window_only);
    REQUIRE(rep.gcd == 1);
    REQUIRE(rep.normalized.terms[0].c == 3);
    REQUIRE(rep.normalized.terms[1].c == 1);
    REQUIRE(rep.normalized.caveats == std::vector<std::string>{"window-only"});
    REQUIRE(e.terms[0].c == 1);  // input untouched

    HilbertExpansion whole{5, QFieldElem::rational(5, 0), dir, 4, {}, {}};
    whole.terms.push_back({QFieldElem::rational(5, 0), 0, mpq_class(2)});
    whole.terms.push_back({QFieldElem(5, 1, 0), 2, mpq_class(4)});
    IntegralityReport rep2 = integrality_normalize(whole);
    REQUIRE(rep2.c == 1);
    REQUIRE(!rep2.window_only);
    REQUIRE(rep2.gcd == 2);
    REQUIRE(rep2.normalized.caveats.empty());
}

TEST_CASE("base point on a wall is rejected", "[borcherds]") {
    // the wall through eps0 passes through the default base point
    ScalarForm f5 = construct_f5_p5(2);
    auto [y1, y2] = default_basepoint(5);
    bool threw = false;
    try {
        weyl_chamber_of(f5, y1, y2);
    } catch (const std::domain_error& e) {
        threw = true;
        REQUIRE(std::string(e.what()).find("base point lies on a wall") !=
                std::string::npos);
    }
    REQUIRE(threw);

    // shifted base point works and gives an integral Weyl vector
    QFieldElem z1 = QFieldElem::rational(5, 1), z2 = QFieldElem::rational(5, 2);
    WeylChamber W = weyl_chamber_of(f5, z1, z2);
    REQUIRE(weyl_vector(f5, W) == QFieldElem::rational(5, 1));
}

TEST_CASE("product expansion guards", "[borcherds]") {
    auto [y1, y2] = default_basepoint(5);
    ScalarForm f1 = construct_f1_p5(5);
    WeylChamber W = weyl_chamber_of(f1, y1, y2);

    // truncation 5 cannot cover the coefficient range the window needs
    REQUIRE_THROWS_AS(product_expansion(f1, W, 4), std::domain_error);

    // tr(d) = 2 direction is on the R(W,-1) wall, not interior
    REQUIRE_THROWS_AS(product_expansion(f1, W, QFieldElem(5, 1, 0), 2),
                      std::domain_error);

    REQUIRE_THROWS_AS(product_expansion(f1, W, mpq_class(0)),
                      std::invalid_argument);
}

TEST_CASE("f4 expansion agrees with the slow oracle", "[borcherds]") {
    auto [y1, y2] = default_basepoint(5);
    ScalarForm probe = construct_f4_p5(1);
    WeylChamber W = weyl_chamber_of(probe, y1, y2);
    detail::ProductPlan plan = detail::plan_product(principal_part_of(probe), W,
                                                    std::nullopt, 3);
    ScalarForm f4 = construct_f4_p5(plan.required);
    HilbertExpansion fast = product_expansion(f4, W, 3);
    HilbertExpansion slow = oracle::product_expansion_slow(f4, W, std::nullopt, 3);
    std::string why;
    REQUIRE(checks::same_expansion(fast, slow, why));
    // f4 has a(n) < 0 somewhere, so geometric factors appear
    REQUIRE(fast.caveats == std::vector<std::string>{"region-restricted"});
}
