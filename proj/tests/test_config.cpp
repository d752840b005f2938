#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cgw/config.hpp"
#include "cgw/errors.hpp"

#include <string>

using namespace cgw;

namespace {

std::string field_of(const json& doc, const CliOverrides& cli = {})
{
    try {
        build_config(doc, cli);
    } catch (const ConfigError& e) {
        return e.field;
    }
    return "<accepted>";
}

} // namespace

TEST_CASE("toml subset")
{
    auto j = parse_toml(R"(
# comment
command = "solve"   # trailing comment
varpi = 0.1
varpi_grid = [0.02, 0.04,
              0.06]
[physics]
g = 1
sigma = 1_000.5
[grid]
N_X = 4096
[model]
kind = 'planar'
vortices = [[0.0, -1.0, 1.0]]
patches = [{ center = [0.5, -2.0], r = [0.0, 0.3], value = [1.0, 0.0] }]
[report]
angular = false
[a.b]
name = "x\ty"
)");
    CHECK(j["command"] == "solve");
    CHECK(j["varpi"].get<double>() == 0.1);
    CHECK(j["varpi_grid"].size() == 3);
    CHECK(j["physics"]["g"].is_number_integer());
    CHECK(j["physics"]["sigma"].get<double>() == 1000.5);
    CHECK(j["grid"]["N_X"].get<long long>() == 4096);
    CHECK(j["model"]["kind"] == "planar");
    CHECK(j["model"]["patches"][0]["center"][1].get<double>() == -2.0);
    CHECK(j["report"]["angular"] == false);
    CHECK(j["a"]["b"]["name"] == "x\ty");
}

TEST_CASE("toml syntax errors carry the line")
{
    try {
        parse_toml("command = \"solve\"\nvarpi = = 2\n");
        FAIL("accepted");
    } catch (const ConfigError& e) {
        CHECK(e.field == "line 2");
    }
    CHECK_THROWS_AS(parse_toml("x = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("[t\n"), ConfigError);
    CHECK_THROWS_AS(parse_toml("s = \"open\n"), ConfigError);
}

TEST_CASE("minimal config fills defaults")
{
    auto c = build_config(json{{"command", "solve"}, {"varpi", 0.1}}, {});
    CHECK(c.command == "solve");
    CHECK(c.params.g == 1.0);
    CHECK(c.params.sigma == 1.0);
    CHECK(c.solver.grid.L == 400.0);
    CHECK(c.solver.grid.N == 8192);
    CHECK(c.model.points.size() == 1);
    CHECK(c.model.points[0].center[1] == -1.0);
    CHECK(c.effective["grid"]["N_X"] == 8192);
    CHECK(c.effective["physics"]["sigma"].get<double>() == 1.0);
}

TEST_CASE("flags win over file values and are echoed")
{
    json doc = parse_toml("command = \"solve\"\nvarpi = 0.05\n[physics]\nsigma = 2.0\n");
    CliOverrides o;
    o.sigma = 3.0;
    o.varpi = 0.07;
    o.out = "elsewhere";
    auto c = build_config(doc, o);
    CHECK(c.params.sigma == 3.0);
    CHECK(*c.varpi == 0.07);
    CHECK(c.out == "elsewhere");
    CHECK(c.effective["physics"]["sigma"].get<double>() == 3.0);
    CHECK(c.effective["varpi"].get<double>() == 0.07);
}

TEST_CASE("validation errors name the field")
{
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"physics", {{"sigma", 0.0}}}}) == "physics.sigma");
    CliOverrides zero;
    zero.sigma = 0.0;
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}}, zero) == "physics.sigma");
    CHECK(field_of({{"varpi", 0.1}}) == "command");
    CHECK(field_of({{"command", "fly"}}) == "command");
    CHECK(field_of({{"command", "solve"}}) == "varpi");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"grid", {{"N_X", 1000}}}}) == "grid.N_X");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"grid", {{"N_Y", 2}}}}) == "grid.N_Y");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"colour", 1}}) == "colour");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"physics", {{"gee", 1}}}}) == "physics.gee");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"physics", {{"g", "one"}}}}) == "physics.g");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.9}}) == "varpi");
    CHECK(field_of({{"command", "sweep"}, {"varpi_grid", {0.02, 0.01}}}) == "varpi_grid[1]");
    CHECK(field_of({{"command", "sweep"}}) == "varpi_grid");
    CHECK(field_of({{"command", "verify-identities"}}) == "input");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"solver", {{"fixed_c1", -0.01}}}}) == "solver.fixed_c1");
    CHECK(field_of({{"command", "verify-fields"}, {"model", {{"kind", "cloud"}}}}) == "model.kind");
    CHECK(field_of({{"command", "solve"}, {"varpi", 0.1}, {"model", {{"kind", "ring"}}}}) == "model.kind");
    CHECK(field_of({{"command", "verify-fields"}, {"verify", {{"radii", {10.0}}}}}) == "verify.radii");
}

TEST_CASE("sigma = 0 is fine when nothing is solved")
{
    auto c = build_config({{"command", "verify-fields"}, {"physics", {{"sigma", 0.0}}}}, {});
    CHECK(c.radii.size() == 12);
}

TEST_CASE("model round trip")
{
    json spec = {{"kind", "planar"},
                 {"vortices", {{0.0, -1.0, 0.5}, {0.3, -2.0, -0.2}}},
                 {"phantom", {0.0, 2.0}}};
    auto m = model_from_json(spec, "model");
    CHECK(m.points.size() == 2);
    CHECK(m.phantom[1] == 2.0);
    auto back = model_from_json(model_to_json(m), "model");
    CHECK(back.points[1].strength == -0.2);
    CHECK(back.phantom[1] == 2.0);

    auto ring = model_from_json({{"kind", "ring"}, {"radius", 0.5}, {"segments", 64}}, "model");
    CHECK(ring.dim() == 3);
    CHECK_THROWS_AS(model_from_json({{"kind", "planar"}, {"vortices", {{0.0, 0.5, 1.0}}}}, "model"),
                    ConfigError);
}
