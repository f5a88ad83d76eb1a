#pragma once

#include "dnls/direct_scattering.hpp"
#include "dnls/evolution.hpp"
#include "dnls/rh_inverse.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace dnls {

using json = nlohmann::json;

struct Tolerances {
    double solver = 1e-10;
    double roundtrip = 1e-4;
    double unitarity = 1e-8;
    double edge = default_edge_floor;
    double a_floor = 1e-6;
    double gluing = 1e-5;
    double cross_solver = 1e-3;
    double decay = 1e-8;
};

struct RunConfig {
    double L = 20.0;
    int Nx = 1024;
    double Z = 40.0;
    int Nz = 2048;
    json potential;  // analytic profile or {"type":"csv","path":...}
    std::vector<double> times{0.0};
    Tolerances tol;
    double pde_dt = 5e-4;
    double pde_cfl = 1.0;
    double z_im = -1.0;
    double nyquist_safety = 1.0;
    std::string scattering_csv;  // input for the inverse command
    std::string scattering_json;
    double fault_a_scale = 1.0;  // validate: deliberate corruption of a
    std::string base_dir;        // relative paths resolve here
};

RunConfig parse_config(const json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

Profile make_profile(const json& spec);
SampledPotential load_potential(const RunConfig& cfg, const SpatialGrid& grid);

void write_potential_csv(const std::string& path, const SpatialGrid& grid, const cvec& u);
// returns the grid implied by the x column together with the samples
std::pair<SpatialGrid, cvec> read_potential_csv(const std::string& path);

void write_scattering_csv(const std::string& path, const ScatteringData& S);
void write_reflection_csv(const std::string& path, const SpectralGrid& g, const cvec& a, const cvec& rp,
                          const cvec& rm);

struct ScatteringFile {
    SpectralGrid grid;
    cvec a, r_plus, r_minus;
};
ScatteringFile read_scattering_csv(const std::string& path);

json to_json(const SpectralHealthReport& h);
json to_json(const ConservedQuantities& c);
json scattering_metadata(const ScatteringData& S, const SpectralHealthReport* health);

void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

}  // namespace dnls
