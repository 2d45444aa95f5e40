#include <doctest.h>

#include "eitcool/config_io.hpp"

using namespace eitcool;

TEST_SUITE("config_io") {

TEST_CASE("round trip of the default set") {
    const LambdaParams p;
    const LambdaParams q = params_from_json(params_to_json(p));
    CHECK(q.gamma == p.gamma);
    CHECK(q.gamma_g == p.gamma_g);
    CHECK(q.omega_g == p.omega_g);
    CHECK(q.omega_r == p.omega_r);
    CHECK(q.delta_g == p.delta_g);
    CHECK(q.delta_r == p.delta_r);
    CHECK(q.nu == p.nu);
    CHECK(q.eta == p.eta);
    CHECK(q.eta_g == p.eta_g);
    CHECK(q.eta_r == p.eta_r);
    CHECK(q.alpha == p.alpha);
}

TEST_CASE("derived defaults") {
    SUBCASE("gamma alone splits evenly") {
        const LambdaParams p = params_from_json(R"({"gamma": 2.0})");
        CHECK(p.gamma_g == 1.0);
        CHECK(p.gamma_r == 1.0);
    }
    SUBCASE("one split fills the other") {
        const LambdaParams p = params_from_json(R"({"gamma": 2.0, "gamma_g": 1.5})");
        CHECK(p.gamma_r == doctest::Approx(0.5));
    }
    SUBCASE("splits alone define gamma") {
        const LambdaParams p = params_from_json(R"({"gamma_g": 0.7, "gamma_r": 0.8})");
        CHECK(p.gamma == doctest::Approx(1.5));
    }
    SUBCASE("eta alone puts all recoil on the cooling beam") {
        const LambdaParams p = params_from_json(R"({"eta": 0.2})");
        CHECK(p.eta_g == 0.2);
        CHECK(p.eta_r == 0.0);
    }
    SUBCASE("projections alone define eta") {
        const LambdaParams p = params_from_json(R"({"eta_g": 0.25, "eta_r": 0.05})");
        CHECK(p.eta == doctest::Approx(0.2));
    }
    SUBCASE("eta with one projection fills the other") {
        const LambdaParams p = params_from_json(R"({"eta": 0.1, "eta_g": 0.25})");
        CHECK(p.eta_r == doctest::Approx(0.15));
    }
}

TEST_CASE("unknown keys and malformed input are rejected") {
    CHECK_THROWS_AS((void)params_from_json(R"({"omega_q": 1.0})"), InvalidParameter);
    CHECK_THROWS_AS((void)params_from_json(R"({"gamma": "one"})"), InvalidParameter);
    CHECK_THROWS_AS((void)params_from_json("[1,2]"), InvalidParameter);
    CHECK_THROWS_AS((void)params_from_json("{nope"), InvalidParameter);
    CHECK_THROWS_AS((void)params_from_json_file("/nonexistent/params.json"), IoError);
}

}  // TEST_SUITE
