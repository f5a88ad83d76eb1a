#include "doctest.h"

#include "dnls/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace dnls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("dnls_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, const fs::path& log = {})
{
    std::string cmd = std::string(DNLS_CLI_PATH) + " " + args;
    cmd += log.empty() ? " > /dev/null 2>&1" : " > /dev/null 2> " + log.string();
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path write_config(const fs::path& dir, const json& j)
{
    const auto p = dir / "config.json";
    write_json(p.string(), j);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json gaussian_config()
{
    return json{{"grids", {{"L", 20}, {"Nx", 1024}, {"Z", 40}, {"Nz", 2048}}},
                {"potential", {{"type", "gaussian"}, {"amplitude", 0.3}, {"width", 1.0}}},
                {"times", {0.0}}};
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("zero potential forward and inverse")
    {
        const auto d = scratch("zero");
        const json c{{"grids", {{"L", 20}, {"Nx", 256}, {"Z", 20}, {"Nz", 512}}},
                     {"potential", {{"type", "zero"}}},
                     {"input", {{"scattering_csv", "scattering.csv"}, {"scattering_json", "scattering.json"}}}};
        const auto cfg = write_config(d, c);
        REQUIRE(run("forward --config " + cfg.string() + " --out " + d.string()) == 0);
        const auto f = read_scattering_csv((d / "scattering.csv").string());
        for (int k = 0; k < f.grid.N; ++k) {
            CHECK(f.r_plus[k] == cplx(0.0));
            CHECK(f.r_minus[k] == cplx(0.0));
        }
        const auto rep = read_json((d / "scattering.json").string());
        CHECK(rep["health"]["winding_number_upper_half"] == 0);
        CHECK(rep.contains("a_inf"));
        CHECK(rep.contains("c0_sq"));

        REQUIRE(run("inverse --config " + cfg.string() + " --out " + d.string()) == 0);
        const auto [g, u] = read_potential_csv((d / "potential.csv").string());
        CHECK(g.N == 256);
        for (const auto& v : u)
            CHECK(v == cplx(0.0));
    }

    TEST_CASE("Gaussian forward, inverse and determinism")
    {
        const auto d = scratch("gauss");
        json c = gaussian_config();
        c["input"] = {{"scattering_csv", "scattering.csv"}, {"scattering_json", "scattering.json"}};
        const auto cfg = write_config(d, c);
        const std::string base = "--config " + cfg.string() + " --out " + d.string();
        REQUIRE(run("forward --deterministic --threads 1 " + base) == 0);
        const auto rep = read_json((d / "scattering.json").string());
        CHECK(rep["unitarity_defect"].get<double>() < 1e-8);
        CHECK(rep["health"]["winding_number_upper_half"] == 0);
        const auto first = slurp(d / "scattering.csv");

        REQUIRE(run("inverse " + base) == 0);
        const auto inv = read_json((d / "inverse.json").string());
        CHECK(inv["relative_l2_error"].get<double>() < 1e-4);
        CHECK(inv["gluing_defect"].get<double>() < 1e-5);

        REQUIRE(run("forward --deterministic --threads 1 " + base) == 0);
        CHECK(slurp(d / "scattering.csv") == first);
    }

    TEST_CASE("soliton is refused with exit code 4")
    {
        const auto d = scratch("soliton");
        const json c{{"grids", {{"L", 30}, {"Nx", 1024}, {"Z", 40}, {"Nz", 2048}}},
                     {"potential", {{"type", "soliton"}, {"omega", 1.0}}}};
        const auto cfg = write_config(d, c);
        CHECK(run("forward --config " + cfg.string() + " --out " + d.string()) == 4);
        const auto rep = read_json((d / "scattering.json").string());
        CHECK(rep["health"]["winding_number_upper_half"].get<int>() >= 1);
        CHECK(run("roundtrip --config " + cfg.string() + " --out " + d.string()) == 4);
    }

    TEST_CASE("corrupted reflection data")
    {
        const auto d = scratch("corrupt");
        const auto cfg = write_config(d, gaussian_config());
        REQUIRE(run("forward --config " + cfg.string() + " --out " + d.string()) == 0);
        auto f = read_scattering_csv((d / "scattering.csv").string());
        for (int k = 0; k < f.grid.N; ++k)
            f.r_minus[k] = 3.0 * f.grid.z(k) * f.r_plus[k];
        write_reflection_csv((d / "bad.csv").string(), f.grid, f.a, f.r_plus, f.r_minus);
        json c = gaussian_config();
        c["input"] = {{"scattering_csv", "bad.csv"}};
        const auto cfg2 = write_config(d, c);
        CHECK(run("inverse --config " + cfg2.string() + " --out " + d.string()) == 2);
    }

    TEST_CASE("evolve at t = 0 reproduces the roundtrip")
    {
        const auto d = scratch("evolve0");
        const auto cfg = write_config(d, gaussian_config());
        const std::string base = "--config " + cfg.string() + " --out " + d.string();
        REQUIRE(run("roundtrip " + base) == 0);
        const auto rt = read_json((d / "roundtrip.json").string());
        CHECK(rt["relative_l2_error"].get<double>() < 1e-4);
        REQUIRE(run("evolve " + base) == 0);
        CHECK(slurp(d / "potential_t0.csv") == slurp(d / "potential.csv"));
    }

    TEST_CASE("evolve with comparison and Nyquist warning")
    {
        const auto d = scratch("evolve");
        json c = gaussian_config();
        c["times"] = {0.5};
        c["pde"] = {{"dt", 5e-4}};
        const auto cfg = write_config(d, c);
        REQUIRE(run("evolve --compare --config " + cfg.string() + " --out " + d.string(), d / "err.txt") == 0);
        const auto rep = read_json((d / "evolve.json").string());
        CHECK(rep["states"][0]["cross_solver_error"].get<double>() < 1e-3);
        CHECK(rep["states"][0]["nyquist_warning"] == true);
        CHECK(slurp(d / "err.txt").find("warning") != std::string::npos);
        CHECK(fs::exists(d / "potential_t0.csv"));

        REQUIRE(run("compare --config " + cfg.string() + " --out " + d.string()) == 0);
        CHECK(read_json((d / "compare.json").string())["cross_solver_passed"] == true);
    }

    TEST_CASE("validate")
    {
        const auto d = scratch("validate");
        auto cfg = write_config(d, gaussian_config());
        CHECK(run("validate --config " + cfg.string() + " --out " + d.string()) == 0);
        auto rep = read_json((d / "validation.json").string());
        CHECK(rep["all_passed"] == true);
        CHECK(rep["coarse_tolerances"] == false);

        json f = gaussian_config();
        f["fault"] = {{"a_scale", 1.1}};
        cfg = write_config(d, f);
        CHECK(run("validate --config " + cfg.string() + " --out " + d.string()) == 2);
        rep = read_json((d / "validation.json").string());
        for (const auto& s : rep["suites"])
            if (s["name"] == "unitarity") {
                CHECK(s["passed"] == false);
                CHECK(s["metric"].get<double>() == doctest::Approx(0.21).epsilon(1e-4));
            }

        const json tiny{{"grids", {{"L", 3.5}, {"Nx", 16}, {"Z", 3.5}, {"Nz", 16}}},
                        {"potential", {{"type", "gaussian"}, {"amplitude", 0.3}, {"width", 1.0}}},
                        {"times", {0.25}},
                        {"tolerances", {{"edge", 1e-4}, {"decay", 1e-2}}},
                        {"pde", {{"dt", 1e-3}}}};
        cfg = write_config(d, tiny);
        CHECK(run("validate --config " + cfg.string() + " --out " + d.string()) == 0);
        rep = read_json((d / "validation.json").string());
        CHECK(rep["coarse_tolerances"] == true);
    }

    TEST_CASE("configuration errors")
    {
        const auto d = scratch("config");
        CHECK(run("forward --config " + (d / "missing.json").string()) == 2);
        json c = gaussian_config();
        c["tolerances"] = {{"solver", -1.0}};
        auto cfg = write_config(d, c);
        CHECK(run("forward --config " + cfg.string() + " --out " + d.string()) == 2);
        c = gaussian_config();
        c["grids"]["Nx"] = 1000;
        cfg = write_config(d, c);
        CHECK(run("forward --config " + cfg.string() + " --out " + d.string()) == 2);
        c = gaussian_config();
        c["potential"] = {{"type", "sech"}, {"amplitude", 1.0}, {"width", 1.0}};
        c["grids"]["L"] = 2;
        cfg = write_config(d, c);
        CHECK(run("forward --config " + cfg.string() + " --out " + d.string()) == 2);
        CHECK(run("bogus --config " + cfg.string()) == 2);
        CHECK_THROWS(parse_config(json{{"times", {1.0, nullptr}}}));
    }

    TEST_CASE("potential CSV roundtrip")
    {
        const auto d = scratch("csv");
        const auto g = make_spatial_grid(5.0, 64);
        cvec u(g.N);
        for (int j = 0; j < g.N; ++j)
            u[j] = std::exp(-g.x(j) * g.x(j)) * cplx(0.1, -0.3) / 3.0;
        write_potential_csv((d / "u.csv").string(), g, u);
        const auto [g2, u2] = read_potential_csv((d / "u.csv").string());
        CHECK(g2.N == g.N);
        CHECK(g2.L == doctest::Approx(g.L));
        CHECK(u2 == u);
    }
}
