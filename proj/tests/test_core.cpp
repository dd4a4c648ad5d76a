#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "relwave/config.hpp"
#include "relwave/errors.hpp"
#include "relwave/experiment.hpp"
#include "relwave/format.hpp"
#include "relwave/four_vector.hpp"
#include "relwave/gauss_legendre.hpp"
#include "support.hpp"

using namespace relwave;
using nlohmann::json;

TEST_CASE("minkowski square uses (+,-,-,-)") {
    CHECK(minkowski_square({20.0, 0.0, 0.0, 0.0}) == 400.0);
    CHECK(minkowski_square({1.0, 1.0, 0.0, 0.0}) == 0.0);
    CHECK(minkowski_square({1.0, 2.0, 0.0, 0.0}) < 0.0);
    CHECK(minkowski_dot({1, 2, 3, 4}, {5, 6, 7, 8}) == doctest::Approx(5 - 12 - 21 - 32));
    CHECK(theta(0) == 1.0);
    CHECK(theta(3) == -1.0);
}

TEST_CASE("four-vector arithmetic and printing") {
    const FourVector a{1, 2, 3, 4}, b{4, 3, 2, 1};
    CHECK((a + b) == FourVector{5, 5, 5, 5});
    CHECK((a - b) == FourVector{-3, -1, 1, 3});
    CHECK((a * 2.0) == FourVector{2, 4, 6, 8});
    CHECK(a.is_finite());
    CHECK_FALSE(FourVector{1, NAN, 0, 0}.is_finite());
    std::ostringstream os;
    os << a;
    CHECK(os.str().find('1') != std::string::npos);
}

TEST_CASE("life time rejects negative and non-finite values") {
    CHECK(LifeTime{0.0}.value() == 0.0);
    CHECK_THROWS_AS(LifeTime{-1e-300}, DomainError);
    CHECK_THROWS_AS(LifeTime{INFINITY}, DomainError);
    CHECK_THROWS_AS(LifeTime{NAN}, DomainError);
}

TEST_CASE("experiment validation") {
    const Experiment ref = testing::reference();
    SUBCASE("reference is valid and validation is idempotent") {
        const Experiment v = validate_experiment(ref);
        CHECK(v == ref);
        CHECK(validate_experiment(v) == v);
    }
    SUBCASE("zero mass") {
        Experiment e = ref;
        e.mass = 0.0;
        CHECK_THROWS_WITH_AS(validate_experiment(e), doctest::Contains("mass"), ConfigError);
    }
    SUBCASE("negative hbar") {
        Experiment e = ref;
        e.hbar = -1.0;
        CHECK_THROWS_AS(validate_experiment(e), ConfigError);
    }
    SUBCASE("hbar = 0 is accepted") {
        Experiment e = ref;
        e.hbar = 0.0;
        CHECK_NOTHROW(validate_experiment(e));
    }
    SUBCASE("zero width names the axis") {
        Experiment e = ref;
        e.packet.sigma[2] = 0.0;
        CHECK_THROWS_WITH_AS(validate_experiment(e), doctest::Contains("sigma[2]"), ConfigError);
    }
    SUBCASE("non-finite displacement") {
        Experiment e = ref;
        e.displacement.x[1] = INFINITY;
        CHECK_THROWS_AS(validate_experiment(e), ConfigError);
    }
    SUBCASE("detector widths must be non-negative") {
        FinalPacket f;
        CHECK_NOTHROW(validate_final_packet(f));
        f.sigma[0] = -1.0;
        CHECK_THROWS_AS(validate_final_packet(f), ConfigError);
    }
}

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    for (std::size_t n : {2u, 5u, 16u, 64u}) {
        const auto& rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == n);
        for (std::size_t k = 1; k < n; ++k) CHECK(rule.nodes[k] > rule.nodes[k - 1]);
        for (std::size_t deg = 0; deg <= 2 * n - 1; deg += 1) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], double(deg));
            const double exact = deg % 2 ? 0.0 : 2.0 / double(deg + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
    CHECK(&gauss_legendre(16) == &gauss_legendre(16));
}

TEST_CASE("compensated sum recovers cancelled terms") {
    const std::vector<double> terms{1.0, 1e100, 1.0, -1e100};
    CHECK(compensated_sum(terms) == 2.0);
    CompensatedSum s;
    for (int i = 0; i < 10; ++i) s.add(0.1);
    CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 9.974905540213202, -1e-300, 6304.0, 1.0 / 3.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(6304.0) == "6304");
}

namespace {
json reference_doc() {
    return json::parse(R"({
      "experiment": {"mass": 1, "hbar": 1, "displacement": [20, 0, 0, 0],
                     "packet": {"sigma": [1, 1, 1, 1], "momentum": [1, 0, 0, 0]}},
      "screen": {"radius": 20, "n_theta": 4, "n_phi": 4, "n_t": 32, "t_max": 200}
    })");
}
}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("reference") {
        const RunConfig cfg = parse_run_config(reference_doc());
        CHECK(cfg.experiment == testing::reference());
        REQUIRE(cfg.screen);
        CHECK(cfg.screen->n_t == 32);
        CHECK(cfg.quadrature.nodes == QuadratureSpec{}.nodes);
    }
    SUBCASE("unknown keys are rejected") {
        json d = reference_doc();
        d["experiment"]["packet"]["width"] = 1;
        CHECK_THROWS_WITH_AS(parse_run_config(d), doctest::Contains("width"), ConfigError);
        json top = reference_doc();
        top["extra"] = 0;
        CHECK_THROWS_AS(parse_run_config(top), ConfigError);
    }
    SUBCASE("missing and malformed fields") {
        json d = reference_doc();
        d["experiment"].erase("mass");
        CHECK_THROWS_WITH_AS(parse_run_config(d), doctest::Contains("mass"), ConfigError);
        json e = reference_doc();
        e["experiment"]["displacement"] = {1, 2, 3};
        CHECK_THROWS_AS(parse_run_config(e), ConfigError);
        json f = reference_doc();
        f["screen"]["n_t"] = 1;
        CHECK_THROWS_AS(parse_run_config(f), ConfigError);
        json g = reference_doc();
        g["screen"]["t_max"] = 10;
        CHECK_THROWS_AS(parse_run_config(g), ConfigError);
    }
    SUBCASE("optional sections") {
        json d = reference_doc();
        d["quadrature"] = {{"nodes", 64}};
        d["solver"] = {{"far_field_threshold", 50}};
        d["nonrel"] = {{"t_values", {1000, 10000}}};
        const RunConfig cfg = parse_run_config(d);
        CHECK(cfg.quadrature.nodes == 64);
        CHECK(cfg.solver.far_field_threshold == 50.0);
        CHECK(cfg.nonrel_t.size() == 2);
        d["quadrature"]["nodes"] = 15;
        CHECK_THROWS_AS(parse_run_config(d), ConfigError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_run_config("/nonexistent/relwave.json"), ConfigError);
    }
}
