#pragma once

#include "dnls/io.hpp"

#include <string>
#include <vector>

namespace dnls {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double metric = 0.0;
    double tolerance = 0.0;
    json detail = json::object();
};

// Thresholds used by the suites. Grids with min(Nx, Nz) < 64 get the relaxed
// coarse table (see README).
struct SuiteTolerances {
    bool coarse = false;
    double norms = 1e-12;
    double unitarity = 1e-8;
    double parity = 1e-10;
    double asymptotics = 0.0;  // 0 means 2/Z
    double projector = 1e-12;
    double isometry = 1e-6;
    double delta = 1e-8;
    double positivity = 1e-12;
    double roundtrip = 1e-4;
    double gluing = 1e-5;
    double evolution = 1e-12;
    double conservation[3] = {1e-5, 1e-4, 1e-4};
};

SuiteTolerances suite_tolerances(const RunConfig& cfg);

struct ValidationReport {
    std::vector<SuiteResult> suites;
    SuiteTolerances tolerances;
    bool all_passed = true;
};

ValidationReport run_validation(const RunConfig& cfg, Exec ex = Exec::Parallel);
json to_json(const ValidationReport& r);

double relative_l2(const cvec& a, const cvec& ref);

}  // namespace dnls
