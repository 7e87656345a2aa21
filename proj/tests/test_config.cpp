#include "eec/config.hpp"
#include "eec/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

namespace {

std::string config_path(const std::string& name) { return std::string(EEC_SOURCE_DIR) + "/configs/" + name; }

const char* minimal = R"(domain = rectangle
domain.lo = 0, 0
domain.hi = 1, 2
levels = 1, 2
noise.family = squared_exponential
noise.length_scale = 0.3
)";

// Field and line of the ConfigError raised by parsing `text`.
std::pair<std::string, int> config_error(const std::string& text)
{
    try {
        (void)eec::parse_config(text);
    } catch (const eec::ConfigError& e) {
        return {e.field(), e.line()};
    }
    return {"<no error>", -1};
}

}  // namespace

TEST_CASE("every bundled config round trips through the canonical text")
{
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(std::string(EEC_SOURCE_DIR) + "/configs")) {
        if (entry.path().extension() != ".cfg")
            continue;
        ++seen;
        CAPTURE(entry.path().string());
        const eec::RunConfig c = eec::load_config(entry.path().string());
        const std::string text = eec::serialize_config(c);
        const eec::RunConfig back = eec::parse_config(text);
        CHECK(back == c);
        CHECK(eec::serialize_config(back) == text);
    }
    CHECK(seen >= 8);
}

TEST_CASE("minimal rectangle config and defaults")
{
    const auto c = eec::parse_config(minimal);
    CHECK(c.domain == eec::DomainKind::Rectangle);
    CHECK(c.dim() == 2);
    CHECK(c.hi[1] == 2.0);
    CHECK(c.mean.family == "constant");
    CHECK(c.mean.c == 0.0);
    CHECK(c.bracket == eec::BracketArgument::Residual);
    CHECK_FALSE(c.mc.has_value());
    CHECK(c.levels == std::vector<double>{1.0, 2.0});
    CHECK(eec::build_stationary(c).lambda()(0, 0) == doctest::Approx(1 / 0.09));
}

TEST_CASE("sections prefix keys and comments are ignored")
{
    const auto a = eec::parse_config(minimal);
    const auto b = eec::parse_config(R"(# comment
domain = rectangle   # trailing comment
domain.lo = 0, 0
domain.hi = 1, 2
levels = 1, 2
[noise]
family = squared_exponential
length_scale = 0.3
)");
    CHECK(a == b);
}

TEST_CASE("doubles survive serialization bit for bit")
{
    auto c = eec::parse_config(minimal);
    c.levels = {0.1, 1.0 / 3.0, 2.0000000000000004};
    c.noise.length_scale = 0.1 + 0.2;
    CHECK(eec::parse_config(eec::serialize_config(c)) == c);
}

TEST_CASE("sphere config with a geometric Schoenberg series")
{
    const auto c = eec::load_config(config_path("sphere_zonal.cfg"));
    CHECK(c.domain == eec::DomainKind::Sphere);
    CHECK(c.dim() == 2);
    REQUIRE(c.noise.ratio.has_value());
    CHECK(*c.noise.ratio == 0.3);
    CHECK(eec::build_schoenberg(c).sphere_dim() == 2);
    CHECK(c.mc->icosphere_level == 3);
    CHECK(c.sphere_derivatives == eec::SphereDerivatives::Frame);
}

TEST_CASE("errors name the field and the line")
{
    const std::string base = minimal;
    CHECK(config_error(base + "levels = 3, 1\n") == std::pair<std::string, int>{"levels", 7});
    CHECK(config_error("domain = rectangle\ndomain.lo = 0\ndomain.hi = 1\nlevels = 2, 1\n"
                       "noise.family = squared_exponential\nnoise.length_scale = 0.3\n") ==
          std::pair<std::string, int>{"levels", 4});
    CHECK(config_error(base + "noise.colour = red\n") == std::pair<std::string, int>{"noise.colour", 7});
    CHECK(config_error(base + "noise.length_scale = 0.4\n") == std::pair<std::string, int>{"noise.length_scale", 7});
    CHECK(config_error(base + "mean.gradient = 1, 2\n") == std::pair<std::string, int>{"mean.gradient", 7});
    CHECK(config_error(base + "mc.grid = 1, 5\n").first == "mc.grid");
    CHECK(config_error(base + "mc.grid = 100, 100\n").first == "mc.grid");
    CHECK(config_error(base + "formula.bracket = sideways\n") == std::pair<std::string, int>{"formula.bracket", 7});
    CHECK(config_error(base + "formula.sphere_derivatives = chart\n").first == "formula.sphere_derivatives");
    CHECK(config_error(base + "this line is not a pair\n") == std::pair<std::string, int>{"", 7});
    CHECK(config_error(base + "[noise\n") == std::pair<std::string, int>{"", 7});
    CHECK(config_error("levels = 1\nnoise.family = squared_exponential\nnoise.length_scale = 1\n").first == "domain");
    CHECK(config_error("domain = torus\n").first == "domain");
}

TEST_CASE("noise and mean families must match the domain and dimension")
{
    const std::string sphere = "domain = sphere\ndomain.dim = 2\nlevels = 1\n";
    CHECK(config_error(sphere + "noise.family = squared_exponential\nnoise.length_scale = 1\n").first == "noise.family");
    CHECK(config_error(sphere + "noise.family = schoenberg\nnoise.ratio = 0.3\nnoise.coeffs = 1, 1\n").first ==
          "noise.coeffs");
    CHECK(config_error(sphere + "noise.family = schoenberg\nnoise.ratio = 1.5\n").first == "noise.ratio");
    CHECK(config_error(sphere + "noise.family = schoenberg\nnoise.ratio = 0.3\nmean.family = cosine_product\n"
                                "mean.amplitudes = 1\nmean.frequencies = 0, 1\n")
              .first == "mean.family");
    const std::string rect = "domain = rectangle\ndomain.lo = 0, 0\ndomain.hi = 1, 1\nlevels = 1\n"
                             "noise.family = squared_exponential\nnoise.length_scale = 0.3\n";
    CHECK(config_error(rect + "mean.family = quadratic_bump\nmean.c = 1\nmean.center = 0.5\nmean.curvature = 1, 0; 0, 1\n")
              .first == "mean.center");
    CHECK(config_error(rect + "mean.family = quadratic_bump\nmean.c = 1\nmean.center = 0.5, 0.5\n"
                              "mean.curvature = -1, 0; 0, 1\n")
              .first == "mean.family");
    CHECK(config_error("domain = rectangle\ndomain.lo = 0, 0\ndomain.hi = 1, 1\nlevels = 1\n"
                       "noise.family = cosine_mixture\nnoise.frequencies = 1, 0\nnoise.weights = 1\n")
              .first == "noise.family");
}

TEST_CASE("missing files raise an I/O error")
{
    CHECK_THROWS_AS(eec::load_config(config_path("does_not_exist.cfg")), eec::IoError);
}
