#include "cgw/app.hpp"

#include "CLI11.hpp"

#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"Capillary-gravity solitary waves with a submerged vortex"};
    cgw::CliOverrides o;
    std::string command, config, out;
    double varpi = 0, sigma = 0, g = 0, tol = 0;
    app.add_option("command", command, "solve | sweep | verify-fields | verify-identities")
        ->check(CLI::IsMember({"solve", "sweep", "verify-fields", "verify-identities"}));
    auto* c_opt = app.add_option("--config", config, "TOML or JSON config file");
    auto* w_opt = app.add_option("--varpi", varpi, "vortex strength");
    auto* s_opt = app.add_option("--sigma", sigma, "surface tension");
    auto* g_opt = app.add_option("--g", g, "gravity");
    auto* o_opt = app.add_option("--out", out, "output directory");
    auto* t_opt = app.add_option("--tol", tol, "residual tolerance");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (!command.empty())
        o.command = command;
    if (*c_opt)
        o.config = config;
    if (*w_opt)
        o.varpi = varpi;
    if (*s_opt)
        o.sigma = sigma;
    if (*g_opt)
        o.g = g;
    if (*o_opt)
        o.out = out;
    if (*t_opt)
        o.tol = tol;
    return cgw::run_cli(o);
}
