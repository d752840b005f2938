#include "cgw/app.hpp"

#include "cgw/errors.hpp"
#include "cgw/io.hpp"

#include <fmt/format.h>

#include <filesystem>

namespace cgw {

namespace fs = std::filesystem;

namespace {

std::string at(const RunConfig& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

ReportOptions report_options(const RunConfig& c)
{
    ReportOptions o;
    o.angular = c.angular;
    if (c.tail_window)
        o.tail_window = TailWindow{(*c.tail_window)[0], (*c.tail_window)[1]};
    return o;
}

int do_solve(const RunConfig& c)
{
    SolveOptions so;
    so.fixed_c1 = c.fixed_c1;
    WaveState s = solve_wave(*c.varpi, c.params, c.model, c.solver, nullptr, so);
    save_wave_state(c.out, s);
    DipoleReport r = dipole_report(s, report_options(c));
    write_json(at(c, "report.json"), report_json(r, s));
    fmt::print("solve: varpi {:g} c1 {:.10g} iterations {} excess mass {:.3e} (|eta| mass {:.3e})\n", s.varpi, s.c1,
               s.iterations, r.excess_mass, r.abs_mass);
    return 0;
}

int do_sweep(const RunConfig& c)
{
    ContinuationRecord rec = continuation_sweep(c.varpi_grid, c.params, c.model, c.solver);
    write_text(at(c, "record.csv"), record_csv(rec));
    for (size_t k = 0; k < rec.entries.size(); ++k) {
        const auto& s = *rec.entries[k].state;
        DipoleReport r = dipole_report(s, report_options(c));
        write_json(at(c, fmt::format("reports/report_{:03d}.json", k)), report_json(r, s));
    }
    fmt::print("sweep: {} of {} strengths converged\n", rec.entries.size(), c.varpi_grid.size());
    if (rec.truncated)
        throw ConvergenceError("continuation stopped at " + rec.reason);
    return 0;
}

int do_verify_fields(const RunConfig& c)
{
    std::optional<Vec3> dir;
    if (c.direction)
        dir = Vec3{(*c.direction)[0], (*c.direction)[1], (*c.direction)[2]};
    FarFieldReport f = far_field_report(c.model, nullptr, c.radii, dir);
    std::vector<std::vector<double>> cols(3);
    for (const auto& row : f.rows) {
        cols[0].push_back(row.r);
        cols[1].push_back(row.error);
        cols[2].push_back(row.speed);
    }
    write_text(at(c, "far_field.csv"), csv_table({"r", "dipole_error", "speed"}, cols));
    write_json(at(c, "far_field.json"), far_field_json(f, c.model));
    fmt::print("verify-fields: dimension {} error slope {:.4f}\n", c.model.dim(), f.error_slope);
    return 0;
}

int do_verify_identities(const RunConfig& c)
{
    WaveState s = load_wave_state(c.input);
    DipoleReport r = dipole_report(s, report_options(c));
    write_json(at(c, "report.json"), report_json(r, s));
    fmt::print("verify-identities: p identity {:.8g} p tail {:.8g}\n", r.p_identity, r.p_tail);
    return 0;
}

void write_error(const std::string& out, const Error& e, int code)
{
    try {
        write_json((fs::path(out) / "error.json").string(), error_json(e, code));
    } catch (const std::exception&) {
    }
    fmt::print(stderr, "error ({}): {}\n", e.kind(), e.what());
}

} // namespace

int run(const RunConfig& c)
{
    try {
        write_json(at(c, "config.effective.json"), c.effective);
        std::error_code ec;
        fs::remove(at(c, "error.json"), ec);
        if (c.command == "solve")
            return do_solve(c);
        if (c.command == "sweep")
            return do_sweep(c);
        if (c.command == "verify-fields")
            return do_verify_fields(c);
        return do_verify_identities(c);
    } catch (const ConfigError& e) {
        write_error(c.out, e, 2);
        return 2;
    } catch (const Error& e) {
        write_error(c.out, e, 1);
        return 1;
    } catch (const std::exception& e) {
        Error wrapped(e.what());
        write_error(c.out, wrapped, 1);
        return 1;
    }
}

int run_cli(const CliOverrides& cli)
{
    RunConfig cfg;
    try {
        cfg = parse_config(cli);
    } catch (const ConfigError& e) {
        write_error(cli.out.value_or("out"), e, 2);
        return 2;
    }
    return run(cfg);
}

} // namespace cgw
