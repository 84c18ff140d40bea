#include <catch2/catch_amalgamated.hpp>

#include <primeforms/io.hpp>

#include <cstdio>

using namespace primeforms;

TEST_CASE("series round trips through JSON", "[io]") {
    QSeries eta = dedekind_eta(3);  // fractional lattice, denominator 24
    json j = series_to_json(eta);
    REQUIRE(j["exponent_denominator"] == 24);
    REQUIRE(j["truncation_den"] != 0);
    REQUIRE(series_from_json(j) == eta);
    REQUIRE(*series_from_json(j).truncation() == *eta.truncation());

    QSeries exact = QSeries::monomial(rat(3, 2), -2) + QSeries::monomial(1, 7);
    json je = series_to_json(exact);
    REQUIRE(je["truncation_num"] == 0);
    REQUIRE(je["truncation_den"] == 0);
    QSeries back = series_from_json(je);
    REQUIRE(back == exact);
    REQUIRE(back.is_exact());
}

TEST_CASE("series reader canonicalizes and validates", "[io]") {
    json j;
    j["exponent_denominator"] = 1;
    j["truncation_num"] = 5;
    j["truncation_den"] = 1;
    j["terms"] = json::array({json::array({1, "4/2"})});
    QSeries s = series_from_json(j);
    REQUIRE(s.coeff(1) == 2);

    json dup = j;
    dup["terms"] = json::array({json::array({1, "1"}), json::array({1, "2"})});
    REQUIRE_THROWS_AS(series_from_json(dup), std::invalid_argument);

    json badden = j;
    badden["exponent_denominator"] = 0;
    REQUIRE_THROWS_AS(series_from_json(badden), std::invalid_argument);

    json badtr = j;
    badtr["truncation_den"] = -1;
    REQUIRE_THROWS_AS(series_from_json(badtr), std::invalid_argument);

    json badrat = j;
    badrat["terms"] = json::array({json::array({1, "x"})});
    REQUIRE_THROWS_AS(series_from_json(badrat), std::invalid_argument);
    badrat["terms"] = json::array({json::array({1, "1/0"})});
    REQUIRE_THROWS_AS(series_from_json(badrat), std::invalid_argument);
}

TEST_CASE("scalar forms round trip", "[io]") {
    ScalarForm f1 = construct_f1_p5(6);
    json j = scalar_form_to_json(f1);
    ScalarForm back = scalar_form_from_json(j);
    REQUIRE(back.p == 5);
    REQUIRE(back.weight == 0);
    REQUIRE(back.sign == 1);
    REQUIRE(back.hol == Holomorphy::weakly_holomorphic);
    REQUIRE(back.series == f1.series);

    json bad = j;
    bad["holomorphy"] = "sometimes";
    REQUIRE_THROWS_AS(scalar_form_from_json(bad), std::invalid_argument);
    bad = j;
    bad["sign"] = 2;
    REQUIRE_THROWS_AS(scalar_form_from_json(bad), std::invalid_argument);
    bad = j;
    bad["p"] = 6;
    REQUIRE_THROWS(scalar_form_from_json(bad));
}

TEST_CASE("vector forms round trip and reject inconsistent headers", "[io]") {
    VectorForm F = lift_scalar_to_vector(construct_f1_p5(10), -1);
    json j = vector_form_to_json(F);
    REQUIRE(j["alpha"] == 4);
    REQUIRE(j["epsilon"] == 1);
    REQUIRE(j["r_mod8"] == 0);
    VectorForm back = vector_form_from_json(j);
    REQUIRE(back.comps.size() == 5);
    for (int g = 0; g < 5; ++g) REQUIRE(back.comps[g] == F.comps[g]);

    json bad = j;
    bad["epsilon"] = -1;
    REQUIRE_THROWS_AS(vector_form_from_json(bad), std::invalid_argument);
    bad = j;
    bad["r_mod8"] = 4;
    REQUIRE_THROWS_AS(vector_form_from_json(bad), std::invalid_argument);
    bad = j;
    bad["components"].erase(4);
    REQUIRE_THROWS_AS(vector_form_from_json(bad), std::domain_error);
}

TEST_CASE("principal parts round trip", "[io]") {
    PrincipalPart pp(5, 1, {{-5, rat(1, 2)}, {-1, mpq_class(3)}});
    json j = principal_part_to_json(pp);
    PrincipalPart back = principal_part_from_json(j);
    REQUIRE(back.p == 5);
    REQUIRE(back.eps == 1);
    REQUIRE(back.coeffs == pp.coeffs);

    json dup = j;
    dup["terms"] = json::array(
        {json::array({-1, "1"}), json::array({-1, "2"})});
    REQUIRE_THROWS_AS(principal_part_from_json(dup), std::invalid_argument);

    json bad = j;
    bad["terms"] = json::array({json::array({-2, "1"})});
    REQUIRE_THROWS_AS(principal_part_from_json(bad), std::domain_error);
}

TEST_CASE("expansions round trip", "[io]") {
    auto [y1, y2] = default_basepoint(5);
    ScalarForm probe = construct_f1_p5(1);
    WeylChamber W = weyl_chamber_of(probe, y1, y2);
    detail::ProductPlan plan = detail::plan_product(principal_part_of(probe), W,
                                                    std::nullopt, 4);
    HilbertExpansion e =
        product_expansion(construct_f1_p5(plan.required), W, 4);
    json j = expansion_to_json(e);
    HilbertExpansion back = expansion_from_json(j);
    REQUIRE(back.p == e.p);
    REQUIRE(back.rho == e.rho);
    REQUIRE(back.direction == e.direction);
    REQUIRE(back.bound == e.bound);
    REQUIRE(back.caveats == e.caveats);
    REQUIRE(back.terms.size() == e.terms.size());
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        REQUIRE(back.terms[i].nu == e.terms[i].nu);
        REQUIRE(back.terms[i].pairing == e.terms[i].pairing);
        REQUIRE(back.terms[i].c == e.terms[i].c);
    }

    json far = j;
    far["terms"][0]["nu"]["u"] = "1000";
    REQUIRE_THROWS_AS(expansion_from_json(far), std::invalid_argument);

    json swapped = j;
    std::swap(swapped["terms"][0], swapped["terms"][1]);
    REQUIRE_THROWS_AS(expansion_from_json(swapped), std::invalid_argument);
}

TEST_CASE("form lists and files", "[io]") {
    REQUIRE_THROWS_AS(form_list_from_json(json::object()), std::invalid_argument);

    json arr = json::array({scalar_form_to_json(construct_f1_p5(4)),
                            scalar_form_to_json(construct_f4_p5(4))});
    auto forms = form_list_from_json(arr);
    REQUIRE(forms.size() == 2);
    REQUIRE(forms[1].a(-4) == 1);

    REQUIRE_THROWS_AS(load_json("/nonexistent/primeforms-test.json"),
                      std::runtime_error);

    std::string path = "io_roundtrip_tmp.json";
    save_json(arr, path);
    json loaded = load_json(path);
    REQUIRE(loaded == arr);
    std::remove(path.c_str());
}
