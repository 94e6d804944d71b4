#include <doctest.h>

#include "symcalc/json_io.hpp"
#include "symcalc/search.hpp"

using namespace symcalc;

TEST_CASE("polynomial JSON round trip")
{
    const Poly p = example7_poly();
    const Json j = to_json(p);
    CHECK(poly_from_json(j) == p);
    CHECK(poly_from_json(parse_json(j.dump())) == p);
    // Terms come out in canonical order whatever the input order.
    const auto shuffled = parse_json(R"({"nvars":2,"terms":[{"alpha":[0,1],"re":1},{"alpha":[1,0],"re":2,"im":0}]})");
    CHECK(to_json(poly_from_json(shuffled)).dump()
          == R"({"nvars":2,"terms":[{"alpha":[0,1],"re":1.0,"im":0.0},{"alpha":[1,0],"re":2.0,"im":0.0}]})");
}

TEST_CASE("digit rounding")
{
    Poly p(1);
    p.add_term({1}, 1.0 / 3.0);
    p.add_term({2}, -0.1 + 1e-17);
    const Json j = to_json(p, 12);
    CHECK(j["terms"][0]["re"].get<double>() == 0.333333333333);
    CHECK(j["terms"][1]["re"].get<double>() == -0.1);
}

TEST_CASE("malformed input is rejected")
{
    CHECK_THROWS_AS(parse_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(parse_json(R"({"terms":[]})")), std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(parse_json(R"({"nvars":2,"terms":[{"alpha":[1],"re":1}]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(parse_json(R"({"nvars":1,"terms":[{"alpha":[-1],"re":1}]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(parse_json(R"({"nvars":1,"terms":[{"alpha":[1],"re":"x"}]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(matrix_from_json(parse_json(R"({"dim":2,"re":[[1,0]]})")), std::invalid_argument);
    CHECK_THROWS_AS(tuple_from_json(parse_json("[]")), std::invalid_argument);
    CHECK_THROWS_AS(experiment_config_from_json(parse_json(R"({"experiment":"x"})")), std::invalid_argument);
}

TEST_CASE("matrix and tuple round trip")
{
    const MatrixTuple t = example7_tuple();
    const MatrixTuple back = tuple_from_json(parse_json(to_json(t).dump()));
    CHECK((back[0] - t[0]).norm() == 0.0);
    CHECK((back[1] - t[1]).norm() == 0.0);
}

TEST_CASE("experiment config")
{
    const auto cfg = experiment_config_from_json(
        parse_json(R"({"experiment":"drury","n":2,"trials":5,"seed":9,"constraint":"contraction"})"));
    CHECK(cfg.experiment == Experiment::Drury);
    CHECK(cfg.trials == 5);
    CHECK(cfg.seed == 9);
    const auto again = experiment_config_from_json(to_json(cfg));
    CHECK(to_json(again).dump() == to_json(cfg).dump());
}
