#include "dnls/errors.hpp"
#include "dnls/evolution.hpp"
#include "dnls/io.hpp"
#include "dnls/validate.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace dnls;
namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config;
    std::string out = ".";
    bool compare = false;
    bool deterministic = false;
    int threads = 0;
};

std::string out_path(const Globals& g, const std::string& name) { return (fs::path(g.out) / name).string(); }

json run_info(const Globals& g, const std::string& cmd)
{
    return json{{"command", cmd}, {"threads", thread_count()}, {"deterministic", g.deterministic}};
}

ScatteringOptions scat_opts(const RunConfig& c)
{
    ScatteringOptions o;
    o.a_floor = c.tol.a_floor;
    return o;
}

HealthOptions health_opts(const RunConfig& c)
{
    HealthOptions o;
    o.z_im = c.z_im;
    return o;
}

RHOptions rh_opts(const RunConfig& c)
{
    RHOptions o;
    o.tol = c.tol.solver;
    o.gluing_tol = c.tol.gluing;
    return o;
}

json rec_json(const ReconstructedPotential& r)
{
    return json{{"gluing_defect", r.gluing_defect},
                {"max_residual", r.max_residual},
                {"a_inf_attached", r.a_inf_attached},
                {"a_inf", {{"re", r.a_inf_used.real()}, {"im", r.a_inf_used.imag()}}},
                {"overlap_half_width", r.overlap_half_width}};
}

int cmd_forward(const Globals& g, const RunConfig& c)
{
    auto [xg, zg] = make_grids(c.L, c.Nx, c.Z, c.Nz);
    const auto u0 = load_potential(c, xg);
    const auto S = scattering_coefficients(u0, zg, scat_opts(c));
    const auto h = spectral_health(u0, S, health_opts(c));
    write_scattering_csv(out_path(g, "scattering.csv"), S);
    json rep = scattering_metadata(S, &h);
    rep["run"] = run_info(g, "forward");
    write_json(out_path(g, "scattering.json"), rep);
    std::printf("unitarity defect %.3e  winding %d  min|a| %.6f  c0_sq %.6f\n", unitarity_report(S),
                h.winding_number_upper_half, h.min_abs_a_real_line, S.c0_sq);
    require_admissible(h, c.tol.a_floor);
    return 0;
}

int cmd_inverse(const Globals& g, const RunConfig& c)
{
    if (c.scattering_csv.empty())
        throw PreconditionError("config: input.scattering_csv is required for inverse");
    const auto f = read_scattering_csv(c.scattering_csv);
    std::optional<cplx> a_inf;
    if (!c.scattering_json.empty()) {
        const json m = read_json(c.scattering_json);
        if (m.contains("a_inf"))
            a_inf = cplx(m["a_inf"].value("re", 1.0), m["a_inf"].value("im", 0.0));
    }
    const auto rp = validate_reflection(f.grid, f.r_plus, f.r_minus, 1e-10, c.tol.decay);
    const auto xg = make_spatial_grid(c.L, c.Nx);
    const auto rec = reconstruct(rp, xg, a_inf, rh_opts(c));
    write_potential_csv(out_path(g, "potential.csv"), xg, rec.values);
    json rep = rec_json(rec);
    rep["run"] = run_info(g, "inverse");
    if (!c.potential.is_null()) {
        const auto u0 = load_potential(c, xg);
        rep["relative_l2_error"] = relative_l2(rec.values, u0.u);
    }
    write_json(out_path(g, "inverse.json"), rep);
    std::printf("gluing defect %.3e  max residual %.3e\n", rec.gluing_defect, rec.max_residual);
    return 0;
}

int cmd_roundtrip(const Globals& g, const RunConfig& c)
{
    auto [xg, zg] = make_grids(c.L, c.Nx, c.Z, c.Nz);
    const auto u0 = load_potential(c, xg);
    const auto S = scattering_coefficients(u0, zg, scat_opts(c));
    const auto h = spectral_health(u0, S, health_opts(c));
    require_admissible(h, c.tol.a_floor);
    const auto rp = validate_reflection(zg, S.r_plus, S.r_minus, 1e-10, c.tol.decay);
    const auto rec = reconstruct(rp, xg, S.a_inf, rh_opts(c));
    const double err = relative_l2(rec.values, u0.u);
    write_scattering_csv(out_path(g, "scattering.csv"), S);
    write_potential_csv(out_path(g, "potential.csv"), xg, rec.values);
    json rep = rec_json(rec);
    rep["run"] = run_info(g, "roundtrip");
    rep["relative_l2_error"] = err;
    rep["tolerance"] = c.tol.roundtrip;
    rep["passed"] = err < c.tol.roundtrip;
    rep["scattering"] = scattering_metadata(S, &h);
    write_json(out_path(g, "roundtrip.json"), rep);
    std::printf("roundtrip relative L2 error %.3e (tolerance %.1e)\n", err, c.tol.roundtrip);
    return err < c.tol.roundtrip ? 0 : 2;
}

// shared by evolve and compare
int propagate(const Globals& g, const RunConfig& c, bool compare, bool write_csv, const char* name)
{
    auto [xg, zg] = make_grids(c.L, c.Nx, c.Z, c.Nz);
    const auto u0 = load_potential(c, xg);
    PropagationOptions po;
    po.scattering = scat_opts(c);
    po.health = health_opts(c);
    po.rh = rh_opts(c);
    po.nyquist_safety = c.nyquist_safety;
    const auto res = ist_propagate(u0, zg, c.times, po);

    PDEOptions pde;
    pde.cfl = c.pde_cfl;
    std::optional<PDEState> s0;
    if (compare)
        s0 = make_pde_state(u0, std::min(c.pde_dt, pde.cfl * xg.dx * xg.dx), pde);

    json states = json::array();
    bool ok = true;
    for (std::size_t i = 0; i < res.states.size(); ++i) {
        const auto& st = res.states[i];
        if (write_csv)
            write_potential_csv(out_path(g, "potential_t" + std::to_string(i) + ".csv"), xg, st.potential.values);
        if (st.nyquist_warning)
            std::fprintf(stderr, "warning: t = %g exceeds the phase resolution of the z-grid (8 Z |t| dz = %.3f)\n",
                         st.t, st.nyquist);
        json s = rec_json(st.potential);
        s["t"] = st.t;
        s["nyquist"] = st.nyquist;
        s["nyquist_warning"] = st.nyquist_warning;
        s["conserved"] = to_json(st.conserved);
        if (s0) {
            const auto ps = step_dnls(*s0, st.t, pde);
            const double e = relative_l2(st.potential.values, ps.u);
            s["cross_solver_error"] = e;
            s["pde_conserved"] = to_json(conserved_quantities(ps));
            ok = ok && e < c.tol.cross_solver;
            std::printf("t = %g  cross-solver relative L2 error %.3e\n", st.t, e);
        }
        states.push_back(s);
    }
    json rep{{"run", run_info(g, name)},
             {"initial_conserved", to_json(res.initial)},
             {"scattering", scattering_metadata(res.scattering, &res.health)},
             {"states", states}};
    if (compare) {
        rep["cross_solver_tolerance"] = c.tol.cross_solver;
        rep["cross_solver_passed"] = ok;
    }
    write_json(out_path(g, std::string(name) + ".json"), rep);
    return ok ? 0 : 2;
}

int cmd_validate(const Globals& g, const RunConfig& c)
{
    const auto rep = run_validation(c);
    json j = to_json(rep);
    j["run"] = run_info(g, "validate");
    write_json(out_path(g, "validation.json"), j);
    for (const auto& s : rep.suites)
        std::printf("%-18s %s  %.3e / %.3e\n", s.name.c_str(), s.passed ? "pass" : "FAIL", s.metric, s.tolerance);
    return rep.all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Inverse scattering engine for the derivative NLS equation"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory");
    app.add_flag("--compare", g.compare, "evolve: also run the pseudospectral solver");
    app.add_flag("--deterministic", g.deterministic, "fixed thread team, ordered reductions");
    app.add_option("--threads", g.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
    app.fallthrough();

    const char* names[] = {"forward", "inverse", "evolve", "roundtrip", "compare", "validate"};
    const char* help[] = {"potential -> scattering data",
                          "scattering data -> potential",
                          "direct transform, exact evolution, reconstruction at each time",
                          "forward then inverse, reports the relative error",
                          "IST against the pseudospectral solver at each time",
                          "run the property suites"};
    for (int i = 0; i < 6; ++i)
        app.add_subcommand(names[i], help[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        set_thread_count(g.threads);
        set_deterministic(g.deterministic);
        fs::create_directories(g.out);
        const RunConfig c = load_config(g.config);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "forward")
            return cmd_forward(g, c);
        if (cmd == "inverse")
            return cmd_inverse(g, c);
        if (cmd == "evolve")
            return propagate(g, c, g.compare, true, "evolve");
        if (cmd == "compare")
            return propagate(g, c, true, false, "compare");
        if (cmd == "roundtrip")
            return cmd_roundtrip(g, c);
        return cmd_validate(g, c);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 4;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    }
}
