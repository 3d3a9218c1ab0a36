#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "majorant/config.hpp"

using namespace majorant;

namespace {

const char* kSampleConfig = R"(# limit-theorem run
[model]
kind = density
a = 1.5
b = 1.0

[run]
n = 5000
replications = 500
p = 1
t = 0.5
seed = 31415
s_grid = -1, 0, 1

[weight]
c0 = 1.0
c1 = 0.0

[zeta]
truncation = 8.0
step = 0.005
replications = 100000
s_max = 5.0
cov_spacing = 0.25
cov_truncation = 10.0

[localization]
d_grid = 1, 2, 3, 4

[tails]
level = 1.0
x_grid = 0.5, 1.0, 1.5, 2.0

[assumptions]
q = 12
)";

ExperimentConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

} // namespace

TEST_CASE("parse a complete configuration", "[config]") {
    const ExperimentConfig cfg = parse_string(kSampleConfig);
    CHECK(cfg.model == ModelKind::density);
    CHECK(cfg.lambda_a == 1.5);
    CHECK(cfg.n == 5000);
    CHECK(cfg.replications == 500);
    CHECK(cfg.seed == 31415);
    CHECK(cfg.s_grid == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(cfg.d_grid == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(cfg.q == 12.0);
    CHECK(cfg.zeta.truncation == 8.0);
    CHECK(cfg.zeta_replications == 100000);
}

TEST_CASE("serialization round-trips to an identical config", "[config]") {
    const ExperimentConfig cfg = parse_string(kSampleConfig);
    const std::string text = serialize_config(cfg);
    const ExperimentConfig reparsed = parse_string(text);
    CHECK(reparsed == cfg);
    CHECK(serialize_config(reparsed) == text);

    ExperimentConfig regression = cfg;
    regression.model = ModelKind::regression;
    regression.lambda_a = 2.0;
    regression.sigma = 1.5;
    const ExperimentConfig reparsed2 = parse_string(serialize_config(regression));
    CHECK(reparsed2 == regression);
}

TEST_CASE("moment order must respect the q constraint", "[config]") {
    std::string text = kSampleConfig;
    text += "\n[run]\np = 6\n\n[assumptions]\nq = 6\n";
    try {
        parse_string(text);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        CHECK(std::string(e.what()).find("min(q, 2q-7)") != std::string::npos);
    }
}

TEST_CASE("invalid parameters are rejected with actionable messages", "[config]") {
    SECTION("regression with zero noise") {
        std::string text = kSampleConfig;
        text += "\n[model]\nkind = regression\na = 2.0\nb = 1.0\nsigma = 0\n";
        CHECK_THROWS_AS(parse_string(text), Error);
    }
    SECTION("negative weight") {
        std::string text = kSampleConfig;
        text += "\n[weight]\nc0 = -0.5\n";
        CHECK_THROWS_AS(parse_string(text), Error);
    }
    SECTION("sample size too small") {
        std::string text = kSampleConfig;
        text += "\n[run]\nn = 20\n";
        CHECK_THROWS_AS(parse_string(text), Error);
    }
    SECTION("covariance horizon exceeding the margin") {
        std::string text = kSampleConfig;
        text += "\n[zeta]\ns_max = 6.0\ncov_truncation = 10.0\n";
        CHECK_THROWS_AS(parse_string(text), Error);
    }
    SECTION("unknown key") {
        std::string text = kSampleConfig;
        text += "\n[run]\nbogus = 1\n";
        CHECK_THROWS_AS(parse_string(text), Error);
    }
    SECTION("malformed line") {
        CHECK_THROWS_AS(parse_string("[model\nkind = density\n"), Error);
        CHECK_THROWS_AS(parse_string("[model]\nkind density\n"), Error);
        CHECK_THROWS_AS(parse_string("[run]\nn = abc\n"), Error);
    }
}

TEST_CASE("constant weight is accepted", "[config]") {
    const ExperimentConfig cfg = parse_string(kSampleConfig);
    CHECK(cfg.weight(0.0) == 1.0);
    CHECK(cfg.weight(1.0) == 1.0);
    CHECK_NOTHROW(cfg.weight.validate());
}

TEST_CASE("missing config file fails as a validation error", "[config]") {
    try {
        load_config("/nonexistent/path.cfg");
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
    }
}
