#include "dnls/io.hpp"

#include "dnls/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dnls {

namespace fs = std::filesystem;

namespace {

std::string resolve(const std::string& base, const std::string& p)
{
    if (p.empty() || fs::path(p).is_absolute())
        return p;
    return (fs::path(base) / p).string();
}

std::vector<std::vector<double>> read_table(const std::string& path, std::vector<std::string>& header)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw PreconditionError(path + ": empty file");
    header.clear();
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw PreconditionError(path + ": malformed number '" + cell + "'");
            }
        }
        if (row.size() != header.size())
            throw PreconditionError(path + ": row has the wrong number of columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

void expect_header(const std::vector<std::string>& h, const std::vector<std::string>& want, const std::string& path)
{
    if (h != want) {
        std::string w;
        for (const auto& s : want)
            w += (w.empty() ? "" : ",") + s;
        throw PreconditionError(path + ": expected columns " + w);
    }
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& base_dir)
{
    RunConfig c;
    c.base_dir = base_dir;
    try {
        if (j.contains("grids")) {
            const auto& g = j.at("grids");
            c.L = g.value("L", c.L);
            c.Nx = g.value("Nx", c.Nx);
            c.Z = g.value("Z", c.Z);
            c.Nz = g.value("Nz", c.Nz);
        }
        if (j.contains("potential"))
            c.potential = j.at("potential");
        if (j.contains("times"))
            c.times = j.at("times").get<std::vector<double>>();
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            c.tol.solver = t.value("solver", c.tol.solver);
            c.tol.roundtrip = t.value("roundtrip", c.tol.roundtrip);
            c.tol.unitarity = t.value("unitarity", c.tol.unitarity);
            c.tol.edge = t.value("edge", c.tol.edge);
            c.tol.a_floor = t.value("a_floor", c.tol.a_floor);
            c.tol.gluing = t.value("gluing", c.tol.gluing);
            c.tol.cross_solver = t.value("cross_solver", c.tol.cross_solver);
            c.tol.decay = t.value("decay", c.tol.decay);
        }
        if (j.contains("pde")) {
            c.pde_dt = j.at("pde").value("dt", c.pde_dt);
            c.pde_cfl = j.at("pde").value("cfl", c.pde_cfl);
        }
        if (j.contains("health"))
            c.z_im = j.at("health").value("z_im", c.z_im);
        if (j.contains("evolution"))
            c.nyquist_safety = j.at("evolution").value("nyquist_safety", c.nyquist_safety);
        if (j.contains("input")) {
            c.scattering_csv = resolve(base_dir, j.at("input").value("scattering_csv", std::string()));
            c.scattering_json = resolve(base_dir, j.at("input").value("scattering_json", std::string()));
        }
        if (j.contains("fault"))
            c.fault_a_scale = j.at("fault").value("a_scale", 1.0);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("config: ") + e.what());
    }

    make_grids(c.L, c.Nx, c.Z, c.Nz);
    const double tols[] = {c.tol.solver, c.tol.roundtrip, c.tol.unitarity, c.tol.edge,
                           c.tol.a_floor, c.tol.gluing,   c.tol.cross_solver, c.tol.decay};
    for (double t : tols)
        if (!(t > 0.0))
            throw PreconditionError("config: tolerances must be positive");
    for (double t : c.times)
        if (!std::isfinite(t))
            throw PreconditionError("config: times must be finite");
    if (!(c.pde_dt > 0.0) || !(c.pde_cfl > 0.0))
        throw PreconditionError("config: pde dt and cfl must be positive");
    return c;
}

RunConfig load_config(const std::string& path)
{
    json j = read_json(path);
    return parse_config(j, fs::path(path).parent_path().string());
}

Profile make_profile(const json& spec)
{
    const std::string type = spec.value("type", std::string());
    if (type == "zero")
        return [](double) { return cplx(0.0); };
    if (type == "gaussian") {
        const double A = spec.value("amplitude", 0.3);
        const double w = spec.value("width", 1.0);
        const double c = spec.value("center", 0.0);
        const double chirp = spec.value("chirp", 0.0);
        if (!(w > 0.0))
            throw PreconditionError("gaussian width must be positive");
        return [=](double x) {
            const double y = x - c;
            return A * std::exp(-(y / w) * (y / w)) * std::polar(1.0, chirp * y * y);
        };
    }
    if (type == "sech") {
        const double A = spec.value("amplitude", 0.3);
        const double w = spec.value("width", 1.0);
        if (!(w > 0.0))
            throw PreconditionError("sech width must be positive");
        return [=](double x) { return cplx(A / std::cosh(x / w)); };
    }
    throw PreconditionError("unknown analytic profile '" + type + "'");
}

SampledPotential load_potential(const RunConfig& cfg, const SpatialGrid& grid)
{
    const auto& p = cfg.potential;
    if (p.is_null())
        throw PreconditionError("config: no potential given");
    const std::string type = p.value("type", std::string());
    if (type == "soliton")
        return soliton_profile(p.value("omega", 1.0), grid, cfg.tol.edge);
    if (type == "csv") {
        auto [g, u] = read_potential_csv(resolve(cfg.base_dir, p.value("path", std::string())));
        if (g.N != grid.N || std::abs(g.L - grid.L) > 1e-9 * grid.L)
            throw PreconditionError("potential CSV grid does not match the configured grid");
        return potential_from_values(grid, std::move(u), cfg.tol.edge);
    }
    return sample_potential(make_profile(p), grid, cfg.tol.edge);
}

void write_potential_csv(const std::string& path, const SpatialGrid& grid, const cvec& u)
{
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot write " + path);
    out << "x,re_u,im_u\n";
    for (int j = 0; j < grid.N; ++j)
        out << num(grid.x(j)) << ',' << num(u[j].real()) << ',' << num(u[j].imag()) << '\n';
}

std::pair<SpatialGrid, cvec> read_potential_csv(const std::string& path)
{
    std::vector<std::string> h;
    auto rows = read_table(path, h);
    expect_header(h, {"x", "re_u", "im_u"}, path);
    const int n = static_cast<int>(rows.size());
    if (n < 8)
        throw PreconditionError(path + ": too few rows");
    const double dx = rows[1][0] - rows[0][0];
    const double L = -rows[0][0];
    auto g = make_spatial_grid(L, n);
    if (std::abs(g.dx - dx) > 1e-9 * dx)
        throw PreconditionError(path + ": x column is not the grid -L + j*2L/N");
    cvec u(n);
    for (int j = 0; j < n; ++j) {
        if (std::abs(rows[j][0] - g.x(j)) > 1e-9 * std::max(1.0, L))
            throw PreconditionError(path + ": x column is not uniform");
        u[j] = {rows[j][1], rows[j][2]};
    }
    return {g, u};
}

void write_reflection_csv(const std::string& path, const SpectralGrid& g, const cvec& a, const cvec& rp,
                          const cvec& rm)
{
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot write " + path);
    out << "z,re_a,im_a,re_rplus,im_rplus,re_rminus,im_rminus\n";
    for (int k = 0; k < g.N; ++k)
        out << num(g.z(k)) << ',' << num(a[k].real()) << ',' << num(a[k].imag()) << ',' << num(rp[k].real()) << ','
            << num(rp[k].imag()) << ',' << num(rm[k].real()) << ',' << num(rm[k].imag()) << '\n';
}

void write_scattering_csv(const std::string& path, const ScatteringData& S)
{
    write_reflection_csv(path, S.grid, S.a, S.r_plus, S.r_minus);
}

ScatteringFile read_scattering_csv(const std::string& path)
{
    std::vector<std::string> h;
    auto rows = read_table(path, h);
    expect_header(h, {"z", "re_a", "im_a", "re_rplus", "im_rplus", "re_rminus", "im_rminus"}, path);
    const int n = static_cast<int>(rows.size());
    if (n < 8)
        throw PreconditionError(path + ": too few rows");
    ScatteringFile f;
    f.grid = make_spectral_grid(-rows[0][0], n);
    f.a.resize(n);
    f.r_plus.resize(n);
    f.r_minus.resize(n);
    for (int k = 0; k < n; ++k) {
        if (std::abs(rows[k][0] - f.grid.z(k)) > 1e-9 * std::max(1.0, f.grid.Z))
            throw PreconditionError(path + ": z column is not the grid -Z + k*2Z/N");
        f.a[k] = {rows[k][1], rows[k][2]};
        f.r_plus[k] = {rows[k][3], rows[k][4]};
        f.r_minus[k] = {rows[k][5], rows[k][6]};
    }
    return f;
}

json to_json(const SpectralHealthReport& h)
{
    return json{{"min_abs_a_real_line", h.min_abs_a_real_line},
                {"winding_number_upper_half", h.winding_number_upper_half},
                {"small_norm_satisfied", h.small_norm_satisfied},
                {"small_norm_lhs", h.small_norm_lhs},
                {"c0_sq", h.c0_sq},
                {"contour_samples", h.contour_samples}};
}

json to_json(const ConservedQuantities& c)
{
    return json{{"I0", c.I0}, {"I1", c.I1}, {"I2", c.I2}};
}

json scattering_metadata(const ScatteringData& S, const SpectralHealthReport* health)
{
    json j{{"a_inf", {{"re", S.a_inf.real()}, {"im", S.a_inf.imag()}}},
           {"c0_sq", S.c0_sq},
           {"grid", {{"Z", S.grid.Z}, {"Nz", S.grid.N}}},
           {"unitarity_defect", unitarity_report(S)}};
    if (health)
        j["health"] = to_json(*health);
    return j;
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot write " + path);
    out << j.dump(2) << '\n';
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw PreconditionError(path + ": " + e.what());
    }
}

}  // namespace dnls
