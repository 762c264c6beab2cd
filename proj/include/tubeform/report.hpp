#pragma once

#include "tubeform/classify.hpp"
#include "tubeform/surface.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tubeform {

/// Catalog surface named by a CLI invocation or a config document.
struct SurfaceSpec {
    std::string name = "clifford"; ///< clifford | ftorus | gsphere | psphere
    int k = 1;
    double r = 1.0471975511965976; ///< gsphere radius (default pi/3)
    double a = 0.6, b = 0.8;       ///< ftorus radii
    double r0 = 1.0, eps = 0.1;    ///< psphere base radius and amplitude
    int mode = 2;                  ///< psphere mode
    int resolution = 64;
};

/// Throws InvalidInput for unknown names or out-of-range parameters.
Surface build_surface(const SurfaceSpec& spec);

nlohmann::ordered_json to_json(const SurfaceSpec& spec);

struct RunSettings {
    SurfaceSpec surface;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = 42;
    double tol = 1e-8;
    /// Empty: command-specific default multiples of rho_M.
    std::vector<double> t_list;
    RadiusChoice radius;
};

/// Applies a flat key/value config document (name, k, r, a, b, r0, eps,
/// mode, resolution, samples, seed, t_list) on top of `base`. t_list may be
/// an array of numbers or a comma-separated string.
RunSettings apply_config(const nlohmann::json& doc, RunSettings base);

/// Parses "0.1,0.2" or "start:stop:count" (inclusive linspace).
std::vector<double> parse_t_list(const std::string& text);

struct VerifyOutcome {
    nlohmann::ordered_json report;
    bool pass = false;
};

nlohmann::ordered_json analyze(const RunSettings& settings);
VerifyOutcome verify(const RunSettings& settings);
nlohmann::ordered_json tube_table(const RunSettings& settings);

/// Tube table of an analyze report, one row per radius.
std::string analyze_csv(const nlohmann::ordered_json& report);
std::string verify_csv(const nlohmann::ordered_json& report);
std::string tube_table_csv(const nlohmann::ordered_json& table);

/// Full front end. Exit codes: 0 success, 1 failed verification, 2 invalid
/// input, 3 quadrature/regularity (or other numerical) failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tubeform
