#include "qgeom/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace qgeom;
using namespace qgeom::io;

namespace {

std::string location_of(const std::string& text) {
    try {
        build(parse_graph_spec(text, "g.json"), "g.json");
    } catch (const ParseError& e) {
        return e.location();
    }
    return "";
}

}  // namespace

TEST_CASE("graph spec parses labels, flags and optional data") {
    const auto spec = parse_graph_spec(R"({
        "vertices": ["a", 1],
        "arrows": [{"from": "a", "to": 1, "weight": 0.25}, {"from": 1, "to": "a", "weight": 0.5}],
        "stochastic": true,
        "initial": [1, 0],
        "psi": [0.6, {"re": 0, "im": 0.8}],
        "potential": [0.1, -0.2]
    })");
    CHECK(spec.vertices == std::vector<std::string>{"a", "1"});
    REQUIRE(spec.arrows.size() == 2);
    CHECK(spec.arrows[0].to == "1");
    CHECK(spec.bidirected);
    CHECK(spec.stochastic);
    REQUIRE(spec.psi);
    CHECK((*spec.psi)[1] == Complex(0.0, 0.8));
    const auto g = build(spec);
    CHECK(g.calc.vertex_count() == 2);
    CHECK(g.weights[1] == 0.5);
}

TEST_CASE("round trip through JSON is lossless") {
    testing::Rng rng(81);
    for (int trial = 0; trial < 50; ++trial) {
        const auto calc = testing::random_bidirected(rng, 2 + trial % 6);
        const auto w = testing::random_stochastic(rng, calc);
        auto spec = to_spec(calc, w);
        spec.psi = testing::random_wave(rng, calc.vertex_count()).values;
        const std::string text = to_json(spec).dump();
        const auto back = parse_graph_spec(text);
        CHECK(to_json(back).dump() == text);
        const auto g = build(back);
        REQUIRE(g.calc.arrow_count() == calc.arrow_count());
        for (std::size_t a = 0; a < calc.arrow_count(); ++a) {
            CHECK(g.calc.arrow(a) == calc.arrow(a));
            CHECK(g.weights[a] == w[a]);
        }
    }
}

TEST_CASE("errors carry locations") {
    CHECK(location_of("{\"vertices\": [\"0\",\n  \"1\"], \"arrows\": [}") == "g.json:2:20");
    CHECK(location_of(R"({"vertices": ["0", "1"], "arrows": [{"from": "0", "to": "2", "weight": 1}]})") ==
          "g.json:/arrows/0/to");
    CHECK(location_of(R"({"vertices": ["0", "0"], "arrows": []})") == "g.json:/vertices/1");
    CHECK(location_of(R"({"vertices": ["0"], "arrows": [{"from": "0", "weight": 1}]})") == "g.json:/arrows/0");
    CHECK(location_of(R"({"vertices": ["0"], "arrows": [], "initial": [1, 2]})") == "g.json:/initial");
    CHECK(location_of(R"([1, 2])") == "g.json:/");

    const std::string one_way = R"({"vertices": ["0", "1"], "arrows": [{"from": "0", "to": "1", "weight": 0.5}]})";
    CHECK_THROWS_WITH_AS(build(parse_graph_spec(one_way, "g.json"), "g.json"), doctest::Contains("/arrows/0"),
                         ValidationError);
    const std::string heavy = R"({"vertices": ["0", "1"], "stochastic": true,
        "arrows": [{"from": "0", "to": "1", "weight": 1.5}, {"from": "1", "to": "0", "weight": 0.5}]})";
    CHECK_THROWS_AS(build(parse_graph_spec(heavy)), ValidationError);
    const std::string negative = R"({"vertices": ["0", "1"], "stochastic": true,
        "arrows": [{"from": "0", "to": "1", "weight": -0.5}, {"from": "1", "to": "0", "weight": 0.5}]})";
    CHECK_THROWS_AS(build(parse_graph_spec(negative)), ValidationError);
    CHECK_THROWS_AS(read_file("/nonexistent/graph.json"), IoError);
}

TEST_CASE("digest is FNV-1a 64") {
    CHECK(digest("") == "fnv1a64:cbf29ce484222325");
    CHECK(digest("a") == "fnv1a64:af63dc4c8601ec8c");
    CHECK(digest("foobar") == "fnv1a64:85944171f73967e8");
}

TEST_CASE("run report keeps key order and tracks failures") {
    RunReport rep("markov equiv", {"qgeom", "markov", "equiv"});
    rep.set_input_digest(digest("x"));
    rep.results()["max_residual"] = 1e-16;
    rep.residual("small", 1e-13, 1e-12);
    rep.assertion("holds", true);
    CHECK(rep.all_passed());
    rep.residual("large", 1e-3, 1e-12);
    CHECK_FALSE(rep.all_passed());
    std::vector<std::string> keys;
    for (const auto& [k, v] : rep.json().items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"command", "argv", "inputs_digest", "results", "residuals", "assertions",
                                           "passed"});
    CHECK(rep.json()["passed"] == false);
    CHECK(rep.json()["residuals"][1]["passed"] == false);

    RunReport again("markov equiv", {"qgeom", "markov", "equiv"});
    again.set_input_digest(digest("x"));
    again.results()["max_residual"] = 1e-16;
    again.residual("small", 1e-13, 1e-12);
    again.assertion("holds", true);
    again.residual("large", 1e-3, 1e-12);
    CHECK(again.dump() == rep.dump());
}

TEST_CASE("trajectory CSV uses shortest round-trip numbers") {
    std::ostringstream os;
    write_trajectory_csv(os, {"a", "b"}, {{1.0, 0.0}, {0.4, 0.6}});
    CHECK(os.str() == "step,a,b\n0,1,0\n1,0.4,0.6\n");
}

TEST_CASE("complex JSON values") {
    CHECK(complex_json({1.5, -2.0}) == Json{{"re", 1.5}, {"im", -2.0}});
    CHECK(complex_from_json(Json(0.25), "/x") == Complex(0.25, 0.0));
    CHECK(complex_from_json(Json{{"re", 1}, {"im", 2}}, "/x") == Complex(1.0, 2.0));
    CHECK_THROWS_AS(complex_from_json(Json("a"), "/x"), ParseError);
}
