#include "cgw/io.hpp"

#include "cgw/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cgw {

namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& text)
{
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec)
            throw Error("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << text;
    if (!out)
        throw Error("write failed for " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols)
{
    std::string s;
    for (size_t c = 0; c < header.size(); ++c)
        s += (c ? "," : "") + header[c];
    s += "\n";
    size_t rows = cols.empty() ? 0 : cols[0].size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols.size(); ++c) {
            if (c)
                s += ',';
            s += fmt::format("{:.17g}", cols[c][r]);
        }
        s += '\n';
    }
    return s;
}

namespace {

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>& header)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("input", "cannot open " + path);
    std::string line;
    header.clear();
    if (!std::getline(in, line))
        throw ConfigError("input", path + " is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            header.push_back(cell);
    }
    std::vector<std::vector<double>> cols(header.size());
    int ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= cols.size())
                throw ConfigError("input", fmt::format("{} line {}: too many columns", path, ln));
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw ConfigError("input", fmt::format("{} line {}: bad number '{}'", path, ln, cell));
            cols[c++].push_back(v);
        }
        if (c != cols.size())
            throw ConfigError("input", fmt::format("{} line {}: expected {} columns", path, ln, cols.size()));
    }
    return cols;
}

json fit_json(const TailFit& f)
{
    return {{"R1", f.R1}, {"R2", f.R2}, {"coefficient", f.coefficient}, {"exponent", f.exponent},
            {"residual", f.residual}, {"samples", f.samples}, {"sign_flip", f.sign_flip}};
}

json vec_json(const ImpulseVector& m)
{
    json a = json::array();
    for (int i = 0; i < m.n; ++i)
        a.push_back(m.m[i]);
    return a;
}

} // namespace

json wave_meta_json(const WaveState& s)
{
    const auto& g = s.grid();
    json j;
    j["varpi"] = s.varpi;
    j["c1"] = s.c1;
    j["physics"] = {{"g", s.params.g}, {"sigma", s.params.sigma}};
    j["grid"] = {{"L", g.L}, {"N_X", g.N}, {"N_Y", s.strip->ny()}};
    j["model"] = model_to_json(s.model);
    j["converged"] = s.converged;
    j["dynamically_consistent"] = s.dynamically_consistent;
    j["iterations"] = s.iterations;
    j["residuals"] = {{"F1", s.F1_norm}, {"F2", s.F2_norm}, {"advection", s.advection_norm}};
    j["picard_contraction"] = s.picard_contraction;
    j["files"] = {{"surface", "wave.csv"}, {"psi", "psi.csv"}, {"log", "convergence.csv"}};
    return j;
}

void save_wave_state(const std::string& dir, const WaveState& s)
{
    const auto& g = s.grid();
    std::vector<double> X(g.N);
    for (int j = 0; j < g.N; ++j)
        X[j] = g.x(j);
    write_text((fs::path(dir) / "wave.csv").string(),
               csv_table({"X", "eta", "eta_x", "eta_xx", "psi_surface"},
                         {X, s.eta.eta, s.eta.eta_x, s.eta.eta_xx, s.psi.trace()}));

    std::string p = "Y";
    for (int j = 0; j < g.N; ++j)
        p += fmt::format(",{}", j);
    p += '\n';
    const auto& y = s.strip->cheb().y;
    for (int i = 0; i < s.psi.v.rows(); ++i) {
        p += fmt::format("{:.17g}", y[i]);
        for (int j = 0; j < g.N; ++j)
            p += fmt::format(",{:.17g}", s.psi.v(i, j));
        p += '\n';
    }
    write_text((fs::path(dir) / "psi.csv").string(), p);

    std::vector<std::vector<double>> cols(7);
    for (const auto& r : s.log) {
        cols[0].push_back(r.iter);
        cols[1].push_back(r.F1);
        cols[2].push_back(r.F2);
        cols[3].push_back(r.advection);
        cols[4].push_back(r.c1);
        cols[5].push_back(r.eta_max);
        cols[6].push_back(r.psi_step);
    }
    write_text((fs::path(dir) / "convergence.csv").string(),
               csv_table({"iter", "F1", "F2", "advection", "c1", "eta_max", "psi_step"}, cols));
    write_json((fs::path(dir) / "wave.meta.json").string(), wave_meta_json(s));
}

WaveState load_wave_state(const std::string& dir)
{
    std::string mp = (fs::path(dir) / "wave.meta.json").string();
    std::ifstream in(mp);
    if (!in)
        throw ConfigError("input", "cannot open " + mp);
    json meta;
    try {
        meta = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("input", mp + ": " + e.what());
    }
    SolverSettings S;
    try {
        S.grid.L = meta.at("grid").at("L").get<double>();
        S.grid.N = meta.at("grid").at("N_X").get<int>();
        S.ny = meta.at("grid").at("N_Y").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError("input.grid", e.what());
    }
    PhysicalParams P;
    P.g = meta.at("physics").value("g", 1.0);
    P.sigma = meta.at("physics").value("sigma", 1.0);
    SolverContext ctx = SolverContext::make(S);
    WaveState s = trivial_state(ctx, P, S);
    s.varpi = meta.value("varpi", 0.0);
    s.c1 = meta.value("c1", 0.0);
    s.model = model_from_json(meta.at("model"), "input.model");
    s.converged = meta.value("converged", false);
    s.dynamically_consistent = meta.value("dynamically_consistent", true);
    s.iterations = meta.value("iterations", 0);

    std::vector<std::string> hdr;
    auto w = read_csv((fs::path(dir) / "wave.csv").string(), hdr);
    if (hdr.size() < 2 || hdr[1] != "eta")
        throw ConfigError("input", "wave.csv must have X,eta,... columns");
    if (static_cast<int>(w[1].size()) != S.grid.N)
        throw ConfigError("input", "wave.csv row count differs from grid.N_X");
    for (int j = 0; j < S.grid.N; ++j)
        if (std::abs(w[0][j] - S.grid.x(j)) > 1e-9 * S.grid.L)
            throw ConfigError("input", fmt::format("wave.csv X[{}] is off the grid", j));
    s.eta = SurfaceProfile::from_samples(*ctx.fft, w[1]);

    auto p = read_csv((fs::path(dir) / "psi.csv").string(), hdr);
    const auto& y = ctx.strip->cheb().y;
    if (p.size() != static_cast<size_t>(S.grid.N) + 1 || p[0].size() != y.size())
        throw ConfigError("input", "psi.csv shape differs from the grid");
    for (size_t i = 0; i < y.size(); ++i) {
        if (std::abs(p[0][i] - y[i]) > 1e-12)
            throw ConfigError("input", fmt::format("psi.csv row {} is not on the Chebyshev node", i));
        for (int j = 0; j < S.grid.N; ++j)
            s.psi.v(i, j) = p[j + 1][i];
    }
    return s;
}

json report_json(const DipoleReport& r, const WaveState& s)
{
    json j;
    j["varpi"] = s.varpi;
    j["c1"] = s.c1;
    j["converged"] = s.converged;
    j["dynamically_consistent"] = s.dynamically_consistent;
    j["impulse"] = vec_json(r.m);
    j["excess_mass"] = r.excess_mass;
    j["abs_mass"] = r.abs_mass;
    j["bernoulli_sup"] = r.bernoulli_sup;
    j["kinematic_sup"] = r.kinematic_sup;
    j["p_identity"] = r.p_identity;
    j["p_tail"] = r.p_tail;
    j["identity_terms"] = {{"surface_UU", r.identity.surface_UU}, {"surface_UV", r.identity.surface_UV},
                           {"surface_cV", r.identity.surface_cV}, {"sides", r.identity.sides},
                           {"exterior", r.identity.exterior}, {"integral", r.identity.integral}};
    j["eta_tail_pinned"] = fit_json(r.eta_tail_pinned);
    j["eta_tail"] = fit_json(r.eta_tail);
    j["speed_tail"] = fit_json(r.speed_tail);
    j["eta_sign_change"] = r.eta_sign_change;
    j["eta_positive_outer"] = r.eta_positive_outer;
    json am;
    am["slope"] = r.angular.slope;
    am["fit_R1"] = r.angular.fit_R1;
    am["fit_R2"] = r.angular.fit_R2;
    am["R"] = r.angular.R;
    am["I"] = r.angular.I;
    j["angular_momentum"] = am;
    j["warnings"] = r.warnings;
    return j;
}

json far_field_json(const FarFieldReport& r, const VorticityModel& m)
{
    json j;
    j["dimension"] = m.dim();
    j["impulse"] = vec_json(r.m);
    j["error_slope"] = r.error_slope;
    j["speed_slope"] = r.speed_slope;
    j["expected_error_slope_max"] = -(m.dim() + 1) + 0.2;
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"r", row.r}, {"error", row.error}, {"speed", row.speed}});
    j["rows"] = rows;
    if (m.dim() == 3) {
        Vec3 w = net_vorticity_3d(m);
        j["net_vorticity"] = {w[0], w[1], w[2]};
        j["net_vorticity_norm"] = norm(w);
    } else {
        json srows = json::array();
        for (const auto& row : r.surface)
            srows.push_back({{"x", row.x}, {"scaled_normal_velocity", row.scaled}});
        j["surface"] = srows;
        j["surface_limit"] = r.surface_limit;
        j["expected_surface_limit"] = r.expected_surface_limit;
    }
    return j;
}

std::string record_csv(const ContinuationRecord& rec)
{
    std::vector<std::vector<double>> c(10);
    for (const auto& e : rec.entries) {
        c[0].push_back(e.varpi);
        c[1].push_back(e.c1);
        c[2].push_back(e.eta_max);
        c[3].push_back(e.excess_mass);
        c[4].push_back(e.abs_mass);
        c[5].push_back(e.F1);
        c[6].push_back(e.F2);
        c[7].push_back(e.advection);
        c[8].push_back(e.iterations);
        c[9].push_back(e.picard_contraction);
    }
    return csv_table({"varpi", "c1", "eta_max", "excess_mass", "abs_mass", "F1", "F2", "advection", "iterations",
                      "picard_contraction"},
                     c);
}

json error_json(const Error& e, int exit_code)
{
    json j;
    j["status"] = "error";
    j["exit_code"] = exit_code;
    j["kind"] = e.kind();
    j["message"] = e.what();
    if (auto* ce = dynamic_cast<const ConfigError*>(&e))
        j["field"] = ce->field;
    return j;
}

} // namespace cgw
