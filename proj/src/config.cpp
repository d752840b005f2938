#include "cgw/config.hpp"

#include "cgw/diagnostics.hpp"
#include "cgw/errors.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cgw {

// ---------------------------------------------------------------------------
// TOML subset

namespace {

class TomlReader {
public:
    explicit TomlReader(const std::string& t) : s_(t) {}

    json run()
    {
        json root = json::object();
        json* table = &root;
        while (true) {
            skip_blank_lines();
            if (eof())
                break;
            if (peek() == '[') {
                ++i_;
                if (peek() == '[')
                    fail("arrays of tables are not supported");
                std::vector<std::string> path{key()};
                skip_ws();
                while (peek() == '.') {
                    ++i_;
                    skip_ws();
                    path.push_back(key());
                    skip_ws();
                }
                expect(']');
                table = &root;
                for (const auto& k : path) {
                    if (!table->contains(k))
                        (*table)[k] = json::object();
                    table = &(*table)[k];
                    if (!table->is_object())
                        fail("'" + k + "' is not a table");
                }
                end_line();
                continue;
            }
            std::string k = key();
            skip_ws();
            expect('=');
            skip_ws();
            if (table->contains(k))
                fail("duplicate key '" + k + "'");
            (*table)[k] = value();
            end_line();
        }
        return root;
    }

private:
    const std::string& s_;
    size_t i_ = 0;
    int line_ = 1;

    bool eof() const { return i_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[i_]; }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError(fmt::format("line {}", line_), what);
    }

    void expect(char c)
    {
        if (peek() != c)
            fail(fmt::format("expected '{}'", c));
        ++i_;
    }

    void skip_ws()
    {
        while (!eof() && (s_[i_] == ' ' || s_[i_] == '\t'))
            ++i_;
    }

    void skip_comment()
    {
        if (peek() == '#')
            while (!eof() && s_[i_] != '\n')
                ++i_;
    }

    // whitespace, comments and newlines (inside arrays too)
    void skip_all()
    {
        while (!eof()) {
            skip_ws();
            skip_comment();
            if (peek() == '\n' || peek() == '\r') {
                if (peek() == '\n')
                    ++line_;
                ++i_;
            } else {
                break;
            }
        }
    }

    void skip_blank_lines() { skip_all(); }

    void end_line()
    {
        skip_ws();
        skip_comment();
        if (peek() == '\r')
            ++i_;
        if (!eof() && peek() != '\n')
            fail("unexpected text after value");
    }

    std::string key()
    {
        if (peek() == '"')
            return basic_string();
        std::string k;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '-'))
            k += s_[i_++];
        if (k.empty())
            fail("expected a key");
        return k;
    }

    std::string basic_string()
    {
        expect('"');
        std::string out;
        while (true) {
            if (eof() || peek() == '\n')
                fail("unterminated string");
            char c = s_[i_++];
            if (c == '"')
                break;
            if (c == '\\') {
                char e = s_[i_++];
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '\\': out += '\\'; break;
                case '"': out += '"'; break;
                default: fail(fmt::format("unsupported escape '\\{}'", e));
                }
            } else {
                out += c;
            }
        }
        return out;
    }

    json value()
    {
        char c = peek();
        if (c == '"')
            return basic_string();
        if (c == '\'') {
            ++i_;
            std::string out;
            while (!eof() && peek() != '\'' && peek() != '\n')
                out += s_[i_++];
            expect('\'');
            return out;
        }
        if (c == '[') {
            ++i_;
            json arr = json::array();
            skip_all();
            while (peek() != ']') {
                arr.push_back(value());
                skip_all();
                if (peek() == ',') {
                    ++i_;
                    skip_all();
                } else if (peek() != ']') {
                    fail("expected ',' or ']' in array");
                }
            }
            ++i_;
            return arr;
        }
        if (c == '{') {
            ++i_;
            json obj = json::object();
            skip_ws();
            while (peek() != '}') {
                std::string k = key();
                skip_ws();
                expect('=');
                skip_ws();
                obj[k] = value();
                skip_ws();
                if (peek() == ',') {
                    ++i_;
                    skip_ws();
                } else if (peek() != '}') {
                    fail("expected ',' or '}' in inline table");
                }
            }
            ++i_;
            return obj;
        }
        std::string tok;
        while (!eof() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
               peek() != '}' && peek() != '#')
            tok += s_[i_++];
        if (tok == "true")
            return true;
        if (tok == "false")
            return false;
        std::string clean;
        for (char ch : tok)
            if (ch != '_')
                clean += ch;
        if (clean == "inf" || clean == "+inf" || clean == "-inf" || clean == "nan")
            fail("non-finite numbers are not accepted");
        try {
            size_t used = 0;
            bool integral = clean.find_first_of(".eE") == std::string::npos;
            if (integral) {
                long long v = std::stoll(clean, &used, 10);
                if (used == clean.size())
                    return v;
            } else {
                double v = std::stod(clean, &used);
                if (used == clean.size())
                    return v;
            }
        } catch (const std::exception&) {
        }
        fail("cannot parse value '" + tok + "'");
    }
};

} // namespace

json parse_toml(const std::string& text) { return TomlReader(text).run(); }

json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    size_t first = text.find_first_not_of(" \t\r\n");
    bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    if (is_json || (first != std::string::npos && text[first] == '{')) {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("config", std::string("invalid JSON: ") + e.what());
        }
    }
    return parse_toml(text);
}

// ---------------------------------------------------------------------------
// Field readers

namespace {

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys)
{
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key()))
            throw ConfigError(join(path, it.key()), "unknown field");
}

const json* find(const json& obj, const char* k) { return obj.contains(k) ? &obj.at(k) : nullptr; }

double number(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ConfigError(path, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d))
        throw ConfigError(path, "expected a finite number");
    return d;
}

double number_or(const json& obj, const char* k, const std::string& path, double def)
{
    const json* v = find(obj, k);
    return v ? number(*v, join(path, k)) : def;
}

long long integer_or(const json& obj, const char* k, const std::string& path, long long def)
{
    const json* v = find(obj, k);
    if (!v)
        return def;
    if (!v->is_number_integer())
        throw ConfigError(join(path, k), "expected an integer");
    return v->get<long long>();
}

std::string string_or(const json& obj, const char* k, const std::string& path, const std::string& def)
{
    const json* v = find(obj, k);
    if (!v)
        return def;
    if (!v->is_string())
        throw ConfigError(join(path, k), "expected a string");
    return v->get<std::string>();
}

bool bool_or(const json& obj, const char* k, const std::string& path, bool def)
{
    const json* v = find(obj, k);
    if (!v)
        return def;
    if (!v->is_boolean())
        throw ConfigError(join(path, k), "expected true or false");
    return v->get<bool>();
}

std::vector<double> numbers(const json& v, const std::string& path)
{
    if (!v.is_array())
        throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(number(v[i], fmt::format("{}[{}]", path, i)));
    return out;
}

template <size_t K>
std::array<double, K> fixed(const json& v, const std::string& path)
{
    auto a = numbers(v, path);
    if (a.size() != K)
        throw ConfigError(path, fmt::format("expected {} numbers", K));
    std::array<double, K> out{};
    std::copy(a.begin(), a.end(), out.begin());
    return out;
}

const json& table(const json& doc, const char* k, const json& empty)
{
    const json* v = find(doc, k);
    if (!v)
        return empty;
    if (!v->is_object())
        throw ConfigError(k, "expected a table");
    return *v;
}

} // namespace

VorticityModel model_from_json(const json& spec, const std::string& path)
{
    if (!spec.is_object())
        throw ConfigError(path, "expected a table");
    std::string kind = string_or(spec, "kind", path, "planar");
    VorticityModel m;
    if (kind == "planar") {
        known_keys(spec, path, {"kind", "vortices", "patches", "phantom", "quad_tol"});
        if (const json* v = find(spec, "phantom")) {
            auto p = fixed<2>(*v, join(path, "phantom"));
            m.phantom = {p[0], p[1]};
        }
        m.quad_tol = number_or(spec, "quad_tol", path, m.quad_tol);
        if (const json* v = find(spec, "vortices")) {
            if (!v->is_array())
                throw ConfigError(join(path, "vortices"), "expected an array of [x1, x2, strength]");
            for (size_t i = 0; i < v->size(); ++i) {
                auto a = fixed<3>((*v)[i], fmt::format("{}.vortices[{}]", path, i));
                m.points.push_back({{a[0], a[1]}, a[2]});
            }
        }
        if (const json* v = find(spec, "patches")) {
            if (!v->is_array())
                throw ConfigError(join(path, "patches"), "expected an array of inline tables");
            for (size_t i = 0; i < v->size(); ++i) {
                std::string pp = fmt::format("{}.patches[{}]", path, i);
                const json& t = (*v)[i];
                if (!t.is_object())
                    throw ConfigError(pp, "expected an inline table");
                known_keys(t, pp, {"center", "r", "value"});
                RadialPatch patch;
                auto c = fixed<2>(t.contains("center") ? t.at("center") : json(), join(pp, "center"));
                patch.center = {c[0], c[1]};
                patch.r = numbers(t.contains("r") ? t.at("r") : json(), join(pp, "r"));
                patch.value = numbers(t.contains("value") ? t.at("value") : json(), join(pp, "value"));
                m.patches.push_back(patch);
            }
        }
        if (!m.patches.empty())
            m.kind = ModelKind::RadialPatch;
        if (m.empty())
            m.points.push_back({{0.0, -1.0}, 1.0});
    } else if (kind == "ring") {
        known_keys(spec, path, {"kind", "center", "radius", "circulation", "segments"});
        auto c = spec.contains("center") ? fixed<3>(spec.at("center"), join(path, "center")) : std::array<double, 3>{0, 0, -3};
        double R = number_or(spec, "radius", path, 1.0);
        double G = number_or(spec, "circulation", path, 1.0);
        long long n = integer_or(spec, "segments", path, 256);
        if (!(R > 0.0))
            throw ConfigError(join(path, "radius"), "must be positive");
        if (n < 8)
            throw ConfigError(join(path, "segments"), "must be at least 8");
        m = vortex_ring_model({c[0], c[1], c[2]}, R, G, static_cast<int>(n));
    } else if (kind == "curl-lattice") {
        known_keys(spec, path, {"kind", "center", "width", "amplitude", "half_cells"});
        auto c = spec.contains("center") ? fixed<3>(spec.at("center"), join(path, "center")) : std::array<double, 3>{0, 0, -3};
        auto a = spec.contains("amplitude") ? fixed<3>(spec.at("amplitude"), join(path, "amplitude"))
                                            : std::array<double, 3>{1.0, 0.3, -0.5};
        double s = number_or(spec, "width", path, 0.5);
        long long hm = integer_or(spec, "half_cells", path, 12);
        if (!(s > 0.0))
            throw ConfigError(join(path, "width"), "must be positive");
        if (hm < 4 || hm > 40)
            throw ConfigError(join(path, "half_cells"), "must lie in [4, 40]");
        m = curl_lattice_model({c[0], c[1], c[2]}, s, {a[0], a[1], a[2]}, static_cast<int>(hm));
    } else {
        throw ConfigError(join(path, "kind"), "expected planar, ring or curl-lattice");
    }
    try {
        m.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(path, e.what());
    }
    return m;
}

json model_to_json(const VorticityModel& m)
{
    json j;
    if (m.kind == ModelKind::Sampled3D) {
        j["kind"] = "sampled-3d";
        j["samples"] = m.samples.pos.size();
        return j;
    }
    j["kind"] = "planar";
    json v = json::array();
    for (const auto& p : m.points)
        v.push_back({p.center[0], p.center[1], p.strength});
    j["vortices"] = v;
    json ps = json::array();
    for (const auto& p : m.patches)
        ps.push_back({{"center", {p.center[0], p.center[1]}}, {"r", p.r}, {"value", p.value}});
    j["patches"] = ps;
    j["phantom"] = {m.phantom[0], m.phantom[1]};
    j["quad_tol"] = m.quad_tol;
    return j;
}

RunConfig build_config(json doc, const CliOverrides& cli)
{
    if (!doc.is_object())
        throw ConfigError("config", "expected a table at the top level");
    // flags win over file values
    if (cli.command)
        doc["command"] = *cli.command;
    if (cli.varpi)
        doc["varpi"] = *cli.varpi;
    if (cli.out)
        doc["out"] = *cli.out;
    if (cli.sigma)
        doc["physics"]["sigma"] = *cli.sigma;
    if (cli.g)
        doc["physics"]["g"] = *cli.g;
    if (cli.tol)
        doc["solver"]["tol"] = *cli.tol;

    known_keys(doc, "", {"command", "varpi", "varpi_grid", "out", "input", "physics", "grid", "solver", "model",
                         "report", "verify"});
    const json empty = json::object();
    RunConfig c;

    const json* cmd = find(doc, "command");
    if (!cmd)
        throw ConfigError("command", "missing (solve, sweep, verify-fields or verify-identities)");
    if (!cmd->is_string())
        throw ConfigError("command", "expected a string");
    c.command = cmd->get<std::string>();
    static const std::set<std::string> commands{"solve", "sweep", "verify-fields", "verify-identities"};
    if (!commands.count(c.command))
        throw ConfigError("command", "unknown command '" + c.command + "'");
    const bool solving = c.command == "solve" || c.command == "sweep";

    c.out = string_or(doc, "out", "", "out");
    if (c.out.empty())
        throw ConfigError("out", "must not be empty");

    const json& phys = table(doc, "physics", empty);
    known_keys(phys, "physics", {"g", "sigma", "epsilon", "moment_order"});
    c.params.g = number_or(phys, "g", "physics", 1.0);
    c.params.sigma = number_or(phys, "sigma", "physics", 1.0);
    c.params.epsilon = number_or(phys, "epsilon", "physics", c.params.epsilon);
    c.params.moment_order = number_or(phys, "moment_order", "physics", c.params.moment_order);
    if (!(c.params.g > 0.0))
        throw ConfigError("physics.g", "must be positive");
    if (solving && !(c.params.sigma > 0.0))
        throw ConfigError("physics.sigma", "must be positive for " + c.command);
    if (c.params.sigma < 0.0)
        throw ConfigError("physics.sigma", "must be non-negative");

    const json& grid = table(doc, "grid", empty);
    known_keys(grid, "grid", {"L", "N_X", "N_Y"});
    c.solver.grid.L = number_or(grid, "L", "grid", 400.0);
    long long nx = integer_or(grid, "N_X", "grid", 8192);
    long long ny = integer_or(grid, "N_Y", "grid", 32);
    if (!(c.solver.grid.L > 0.0))
        throw ConfigError("grid.L", "must be positive");
    if (nx < 64 || (nx & (nx - 1)) != 0 || nx > (1 << 20))
        throw ConfigError("grid.N_X", "must be a power of two in [64, 2^20]");
    if (ny < 8 || ny > 128)
        throw ConfigError("grid.N_Y", "must lie in [8, 128]");
    c.solver.grid.N = static_cast<int>(nx);
    c.solver.ny = static_cast<int>(ny);

    const json& sol = table(doc, "solver", empty);
    known_keys(sol, "solver", {"tol", "max_outer", "varpi_max", "max_halvings", "fixed_c1"});
    c.solver.tol = number_or(sol, "tol", "solver", c.solver.tol);
    c.solver.max_outer = static_cast<int>(integer_or(sol, "max_outer", "solver", c.solver.max_outer));
    c.solver.varpi_max = number_or(sol, "varpi_max", "solver", c.solver.varpi_max);
    c.solver.max_halvings = static_cast<int>(integer_or(sol, "max_halvings", "solver", c.solver.max_halvings));
    if (const json* v = find(sol, "fixed_c1"))
        c.fixed_c1 = number(*v, "solver.fixed_c1");
    if (!(c.solver.tol > 0.0))
        throw ConfigError("solver.tol", "must be positive");
    if (c.solver.max_outer < 1)
        throw ConfigError("solver.max_outer", "must be at least 1");
    if (!(c.solver.varpi_max > 0.0))
        throw ConfigError("solver.varpi_max", "must be positive");
    if (c.solver.max_halvings < 0)
        throw ConfigError("solver.max_halvings", "must be non-negative");

    if (const json* v = find(doc, "varpi"))
        c.varpi = number(*v, "varpi");
    if (const json* v = find(doc, "varpi_grid"))
        c.varpi_grid = numbers(*v, "varpi_grid");
    if (c.command == "solve") {
        if (!c.varpi)
            throw ConfigError("varpi", "required for solve");
        if (std::abs(*c.varpi) > c.solver.varpi_max)
            throw ConfigError("varpi", fmt::format("|varpi| exceeds solver.varpi_max = {:g}", c.solver.varpi_max));
    }
    if (c.command == "sweep") {
        if (c.varpi_grid.empty())
            throw ConfigError("varpi_grid", "required for sweep");
        for (size_t i = 1; i < c.varpi_grid.size(); ++i)
            if (!(c.varpi_grid[i] > c.varpi_grid[i - 1]))
                throw ConfigError(fmt::format("varpi_grid[{}]", i), "grid must increase strictly");
        for (size_t i = 0; i < c.varpi_grid.size(); ++i)
            if (std::abs(c.varpi_grid[i]) > c.solver.varpi_max)
                throw ConfigError(fmt::format("varpi_grid[{}]", i), "exceeds solver.varpi_max");
    }

    c.model_spec = doc.contains("model") ? doc.at("model") : json::object();
    c.model = model_from_json(c.model_spec, "model");
    if (solving && c.model.kind == ModelKind::Sampled3D)
        throw ConfigError("model.kind", "the wave solver needs a planar model");
    if (c.fixed_c1 && c.model.patches.empty())
        throw ConfigError("solver.fixed_c1", "only meaningful for frozen-patch models");

    const json& rep = table(doc, "report", empty);
    known_keys(rep, "report", {"angular", "tail_window"});
    c.angular = bool_or(rep, "angular", "report", true);
    if (const json* v = find(rep, "tail_window")) {
        auto w = fixed<2>(*v, "report.tail_window");
        if (!(w[0] > 0.0 && w[1] > w[0] && w[1] < c.solver.grid.L))
            throw ConfigError("report.tail_window", "need 0 < R1 < R2 < L");
        c.tail_window = w;
    }

    const json& ver = table(doc, "verify", empty);
    known_keys(ver, "verify", {"radii", "direction"});
    if (const json* v = find(ver, "radii")) {
        c.radii = numbers(*v, "verify.radii");
        for (size_t i = 0; i < c.radii.size(); ++i)
            if (!(c.radii[i] > 0.0))
                throw ConfigError(fmt::format("verify.radii[{}]", i), "must be positive");
        if (c.radii.size() < 2)
            throw ConfigError("verify.radii", "need at least two radii");
    } else {
        c.radii = geometric_radii(20.0, 200.0, 12);
    }
    if (const json* v = find(ver, "direction"))
        c.direction = fixed<3>(*v, "verify.direction");

    c.input = string_or(doc, "input", "", "");
    if (c.command == "verify-identities" && c.input.empty())
        throw ConfigError("input", "required for verify-identities (directory with wave.csv and wave.meta.json)");

    json e;
    e["command"] = c.command;
    if (c.varpi)
        e["varpi"] = *c.varpi;
    if (!c.varpi_grid.empty())
        e["varpi_grid"] = c.varpi_grid;
    e["out"] = c.out;
    if (!c.input.empty())
        e["input"] = c.input;
    e["physics"] = {{"g", c.params.g}, {"sigma", c.params.sigma}, {"epsilon", c.params.epsilon},
                    {"moment_order", c.params.moment_order}};
    e["grid"] = {{"L", c.solver.grid.L}, {"N_X", c.solver.grid.N}, {"N_Y", c.solver.ny}};
    e["solver"] = {{"tol", c.solver.tol}, {"max_outer", c.solver.max_outer}, {"varpi_max", c.solver.varpi_max},
                   {"max_halvings", c.solver.max_halvings}};
    if (c.fixed_c1)
        e["solver"]["fixed_c1"] = *c.fixed_c1;
    e["model"] = c.model.kind == ModelKind::Sampled3D ? c.model_spec : model_to_json(c.model);
    e["report"] = {{"angular", c.angular}};
    if (c.tail_window)
        e["report"]["tail_window"] = *c.tail_window;
    e["verify"] = {{"radii", c.radii}};
    if (c.direction)
        e["verify"]["direction"] = *c.direction;
    c.effective = e;
    return c;
}

RunConfig parse_config(const CliOverrides& cli)
{
    json doc = cli.config ? load_config_file(*cli.config) : json::object();
    return build_config(std::move(doc), cli);
}

} // namespace cgw
