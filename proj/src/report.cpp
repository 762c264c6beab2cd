#include "tubeform/report.hpp"

#include "tubeform/catalog.hpp"
#include "tubeform/error.hpp"
#include "tubeform/integrate.hpp"
#include "tubeform/tube.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace tubeform {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kOutside = "outside smoothness range";
constexpr double kFlagSlack = 1e-12;

json number(double x)
{
    if (std::isnan(x))
        return nullptr;
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

json volume(double value, const char* source, bool outside)
{
    json v;
    v["value"] = number(value);
    v["source"] = source;
    v["flag"] = outside ? json(kOutside) : json(nullptr);
    return v;
}

json location(const ChartLocation& at)
{
    return json{{"chart", at.chart}, {"u", at.u}, {"v", at.v}};
}

class Stopwatch {
public:
    double lap()
    {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Pipeline {
    Surface surface;
    bool flipped;
    SurfaceIntegrals integrals;
    FocalReport focal;
    SampledSurface sampled;
};

Pipeline run_pipeline(const SurfaceSpec& spec, json& timings)
{
    Stopwatch clock;
    const Surface raw = build_surface(spec);
    const Surface s = normalize_orientation(raw);
    SampledSurface sampled = sample_surface(s);
    const SurfaceIntegrals integrals = surface_integrals(sampled);
    timings["integrals_s"] = clock.lap();
    const FocalReport focal = focal_radius(s, sampled);
    timings["focal_s"] = clock.lap();
    return Pipeline{s, s.orientation_sign() != raw.orientation_sign(), integrals, focal, std::move(sampled)};
}

json header(const char* command, const RunSettings& settings)
{
    json j;
    j["tool"] = "tubeform";
    j["version"] = TUBEFORM_VERSION;
    j["command"] = command;
    j["surface"] = to_json(settings.surface);
    j["seed"] = settings.seed;
    j["samples"] = settings.samples;
    return j;
}

json integrals_json(const Pipeline& p)
{
    const SurfaceIntegrals& I = p.integrals;
    return json{{"area", I.area},
                {"total_mean", I.total_mean},
                {"total_gauss", I.total_gauss},
                {"euler_char", I.euler_char},
                {"euler_residual", I.euler_residual},
                {"orientation_flipped", p.flipped}};
}

json focal_json(const FocalReport& f)
{
    return json{{"rho_plus", number(f.rho_plus)},
                {"rho_minus", number(f.rho_minus)},
                {"rho", number(f.rho)},
                {"argmin_plus", location(f.argmin_plus)},
                {"argmin_minus", location(f.argmin_minus)},
                {"focal_set_distance_plus", number(f.focal_set_distance_plus)},
                {"focal_set_distance_minus", number(f.focal_set_distance_minus)}};
}

json verdict_json(const PinchingVerdict& v)
{
    return json{{"k", v.k},
                {"ratio", v.ratio},
                {"threshold", v.threshold ? json(*v.threshold) : json("unattainable")},
                {"radius_used", json{{"source", to_string(v.radius_used.source)}, {"scope", to_string(v.radius_used.scope)}}},
                {"radius", number(v.radius)},
                {"certified", v.certified},
                {"margin", number(v.margin)}};
}

json bound_json(const Pipeline& p)
{
    if (p.surface.space().k() != 1)
        return nullptr;
    const RadiusBound b = radius_bound_sphere(p.integrals.euler_char, p.integrals.area);
    json j{{"chi", p.integrals.euler_char}, {"area", p.integrals.area}, {"argument", b.argument}, {"vacuous", b.vacuous}};
    if (b.vacuous) {
        j["bound"] = nullptr;
        j["rho_within_bound"] = nullptr;
        j["second_branch_relevant"] = nullptr;
    } else {
        j["bound"] = b.bound;
        j["rho_within_bound"] = p.focal.rho <= b.bound + 1e-9;
        j["second_branch_relevant"] = b.second_branch_relevant(p.focal.rho);
    }
    return j;
}

std::vector<double> default_t_list(const std::vector<double>& requested, const FocalReport& focal,
                                   std::initializer_list<double> fractions)
{
    if (!requested.empty())
        return requested;
    std::vector<double> ts;
    for (double f : fractions)
        ts.push_back(f * focal.rho);
    return ts;
}

McConfig mc_config(const RunSettings& settings)
{
    McConfig cfg;
    cfg.samples = settings.samples;
    cfg.seed = settings.seed;
    return cfg;
}

bool mc_agrees(double mc, double sigma, double closed)
{
    return std::abs(mc - closed) <= 3.0 * sigma + 1e-9 * std::max(1.0, std::abs(closed));
}

double rho_for(const FocalReport& f, Side side)
{
    switch (side) {
    case Side::plus:
        return f.rho_plus;
    case Side::minus:
        return f.rho_minus;
    case Side::both:
        return f.rho;
    }
    return f.rho;
}

std::string csv_field(const json& j)
{
    if (j.is_null())
        return "";
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_boolean())
        return j.get<bool>() ? "true" : "false";
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    std::ostringstream os;
    os << std::setprecision(17) << j.get<double>();
    return os.str();
}

} // namespace

Surface build_surface(const SurfaceSpec& spec)
{
    if (spec.name == "clifford")
        return clifford_torus(spec.resolution);
    if (spec.name == "ftorus" || spec.name == "flat_torus")
        return flat_torus(spec.a, spec.b, spec.resolution);
    if (spec.name == "gsphere" || spec.name == "geodesic_sphere")
        return geodesic_sphere(spec.k, spec.r, spec.resolution);
    if (spec.name == "psphere" || spec.name == "perturbed_sphere")
        return perturbed_sphere(spec.k, spec.r0, spec.eps, spec.mode, spec.resolution);
    throw InvalidInput("unknown surface '" + spec.name + "' (expected clifford, ftorus, gsphere or psphere)");
}

nlohmann::ordered_json to_json(const SurfaceSpec& spec)
{
    json j{{"name", spec.name}};
    if (spec.name == "clifford") {
        j["k"] = 1;
    } else if (spec.name == "ftorus" || spec.name == "flat_torus") {
        j["k"] = 1;
        j["a"] = spec.a;
        j["b"] = spec.b;
    } else if (spec.name == "gsphere" || spec.name == "geodesic_sphere") {
        j["k"] = spec.k;
        j["r"] = spec.r;
    } else {
        j["k"] = spec.k;
        j["r0"] = spec.r0;
        j["eps"] = spec.eps;
        j["mode"] = spec.mode;
    }
    j["resolution"] = spec.resolution;
    return j;
}

std::vector<double> parse_t_list(const std::string& text)
{
    auto to_double = [](const std::string& s) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            throw InvalidInput("not a number: '" + s + "'");
        }
        if (used != s.size() || !std::isfinite(x) || x < 0.0)
            throw InvalidInput("invalid tube radius: '" + s + "'");
        return x;
    };
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    if (text.find(':') != std::string::npos) {
        while (std::getline(in, item, ':'))
            parts.push_back(item);
        if (parts.size() != 3)
            throw InvalidInput("t range must be start:stop:count");
        const double a = to_double(parts[0]);
        const double b = to_double(parts[1]);
        const int n = static_cast<int>(to_double(parts[2]));
        if (n < 1)
            throw InvalidInput("t range needs a positive count");
        std::vector<double> ts;
        for (int i = 0; i < n; ++i)
            ts.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return ts;
    }
    std::vector<double> ts;
    while (std::getline(in, item, ','))
        ts.push_back(to_double(item));
    if (ts.empty())
        throw InvalidInput("empty t list");
    return ts;
}

RunSettings apply_config(const nlohmann::json& doc, RunSettings base)
{
    if (!doc.is_object())
        throw InvalidInput("config document must be a flat object");
    try {
        for (const auto& [key, value] : doc.items()) {
            if (value.is_object() || (value.is_array() && key != "t_list"))
                throw InvalidInput("config key '" + key + "' must hold a scalar");
            SurfaceSpec& s = base.surface;
            if (key == "name")
                s.name = value.get<std::string>();
            else if (key == "k")
                s.k = value.get<int>();
            else if (key == "r")
                s.r = value.get<double>();
            else if (key == "a")
                s.a = value.get<double>();
            else if (key == "b")
                s.b = value.get<double>();
            else if (key == "r0")
                s.r0 = value.get<double>();
            else if (key == "eps")
                s.eps = value.get<double>();
            else if (key == "mode")
                s.mode = value.get<int>();
            else if (key == "resolution")
                s.resolution = value.get<int>();
            else if (key == "samples")
                base.samples = value.get<std::uint64_t>();
            else if (key == "seed")
                base.seed = value.get<std::uint64_t>();
            else if (key == "t_list" || key == "t-list")
                base.t_list = value.is_string() ? parse_t_list(value.get<std::string>()) : value.get<std::vector<double>>();
            else
                throw InvalidInput("unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed config value: ") + e.what());
    }
    return base;
}

nlohmann::ordered_json analyze(const RunSettings& settings)
{
    Stopwatch total;
    json timings;
    const Pipeline p = run_pipeline(settings.surface, timings);
    const int k = p.surface.space().k();
    Stopwatch clock;

    json report = header("analyze", settings);
    report["integrals"] = integrals_json(p);
    report["focal"] = focal_json(p.focal);
    report["pinching"] = verdict_json(pinching_verdict(p.integrals, p.focal, k, settings.radius));
    json alternatives = json::array();
    for (RadiusSource source : {RadiusSource::focal_set, RadiusSource::along_normal})
        for (RadiusScope scope : {RadiusScope::rho_plus, RadiusScope::rho})
            alternatives.push_back(verdict_json(pinching_verdict(p.integrals, p.focal, k, {source, scope})));
    report["pinching_alternatives"] = alternatives;
    report["radius_bound"] = bound_json(p);

    const std::vector<double> ts = default_t_list(settings.t_list, p.focal, {0.25, 0.5, 0.75, 1.0});
    std::vector<McEstimate> mc;
    if (settings.samples > 0) {
        std::vector<TubeQuery> queries;
        for (double t : ts)
            for (Side side : {Side::plus, Side::minus, Side::both})
                queries.push_back({t, side});
        mc = mc_tube_volumes(p.surface, queries, mc_config(settings));
    }
    const bool minimal = equal_volume_test(p.integrals, k, 0.0).zero_mean;
    json table = json::array();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        const TubeVolumes v = tube_volumes(p.integrals, k, t, p.focal);
        json row;
        row["t"] = t;
        row["vol_plus"] = volume(v.vol_plus, "closed-form", v.outside_plus);
        row["vol_minus"] = volume(v.vol_minus, "closed-form", v.outside_minus);
        row["vol_both"] = volume(v.vol_both, "closed-form", v.outside_both);
        for (Side side : {Side::plus, Side::minus}) {
            const std::string key = std::string("coarea_") + to_string(side);
            if (t < rho_for(p.focal, side) - kFlagSlack) {
                const double coarea = tube_volume_coarea(p.sampled, t, side);
                row[key] = volume(coarea, "coarea", false);
                row[key]["residual"] = coarea - tube_volume_closed(p.integrals, k, t, side);
            } else {
                row[key] = nullptr;
            }
        }
        if (!mc.empty()) {
            for (std::size_t j = 0; j < 3; ++j) {
                const Side side = std::array{Side::plus, Side::minus, Side::both}[j];
                const McEstimate& e = mc[3 * i + j];
                json m = volume(e.mean, "monte-carlo", t > rho_for(p.focal, side) + kFlagSlack);
                m["std_error"] = e.std_error;
                m["samples_inside"] = e.samples_inside;
                row[std::string("mc_") + to_string(side)] = m;
            }
        }
        const EqualVolumeResult eq = equal_volume_test(p.integrals, k, t);
        row["plus_minus_difference"] = eq.difference;
        if (k == 1 && minimal) {
            const MinimalTubeBound mb = tube_volume_upper_bound_minimal(p.integrals.euler_char, t);
            row["minimal_bound"] = json{{"derived", mb.derived}, {"printed", mb.printed}};
        }
        table.push_back(row);
    }
    report["zero_mean_curvature"] = minimal;
    report["tube_table"] = table;
    timings["tube_s"] = clock.lap();
    timings["total_s"] = total.lap();
    report["timings"] = timings;
    return report;
}

VerifyOutcome verify(const RunSettings& settings)
{
    Stopwatch total;
    json timings;
    const Pipeline p = run_pipeline(settings.surface, timings);
    const int k = p.surface.space().k();
    Stopwatch clock;

    const std::vector<double> ts = default_t_list(settings.t_list, p.focal, {0.25, 0.5, 0.75});
    std::vector<TubeQuery> queries;
    for (double t : ts)
        for (Side side : {Side::plus, Side::minus, Side::both})
            queries.push_back({t, side});
    std::vector<McEstimate> mc;
    if (settings.samples > 0)
        mc = mc_tube_volumes(p.surface, queries, mc_config(settings));
    timings["monte_carlo_s"] = clock.lap();

    bool pass = true;
    json checks = json::array();
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const auto [t, side] = queries[q];
        const bool flagged = t > rho_for(p.focal, side) + kFlagSlack;
        const double closed = tube_volume_closed(p.integrals, k, t, side);
        json row;
        row["t"] = t;
        row["side"] = to_string(side);
        row["flagged"] = flagged;
        row["closed"] = volume(closed, "closed-form", flagged);

        bool row_pass = true;
        if (!flagged) {
            const double coarea = side == Side::both
                                      ? tube_volume_coarea(p.sampled, t, Side::plus) + tube_volume_coarea(p.sampled, t, Side::minus)
                                      : tube_volume_coarea(p.sampled, t, side);
            const double residual = std::abs(closed - coarea);
            row["coarea"] = volume(coarea, "coarea", false);
            row["residual"] = residual;
            row["residual_ok"] = residual <= settings.tol;
            row_pass = residual <= settings.tol;
        } else {
            row["coarea"] = nullptr;
            row["residual"] = nullptr;
            row["residual_ok"] = nullptr;
        }
        if (!mc.empty()) {
            const McEstimate& e = mc[q];
            json m = volume(e.mean, "monte-carlo", flagged);
            m["std_error"] = e.std_error;
            row["monte_carlo"] = m;
            row["mc_z"] = e.std_error > 0.0 ? json((e.mean - closed) / e.std_error) : json(nullptr);
            const bool agrees = mc_agrees(e.mean, e.std_error, closed);
            row["mc_ok"] = agrees;
            row["expected_fail"] = flagged;
            if (!flagged)
                row_pass = row_pass && agrees;
        }
        row["pass"] = flagged ? json(nullptr) : json(row_pass);
        if (!flagged)
            pass = pass && row_pass;
        checks.push_back(row);
    }

    json report = header("verify", settings);
    report["tolerance"] = settings.tol;
    report["integrals"] = integrals_json(p);
    report["focal"] = focal_json(p.focal);
    report["checks"] = checks;
    report["pass"] = pass;
    timings["checks_s"] = clock.lap();
    timings["total_s"] = total.lap();
    report["timings"] = timings;
    return {report, pass};
}

nlohmann::ordered_json tube_table(const RunSettings& settings)
{
    json timings;
    const Pipeline p = run_pipeline(settings.surface, timings);
    const int k = p.surface.space().k();
    const std::vector<double> ts = default_t_list(settings.t_list, p.focal, {0.0, 0.25, 0.5, 0.75, 1.0});
    json rows = json::array();
    for (double t : ts) {
        const TubeVolumes v = tube_volumes(p.integrals, k, t, p.focal);
        const bool outside = v.outside_plus || v.outside_minus || v.outside_both;
        json row;
        row["t"] = t;
        row["vol_plus"] = v.vol_plus;
        row["vol_minus"] = v.vol_minus;
        row["vol_both"] = v.vol_both;
        row["parallel_area_plus"] = t < p.focal.rho_plus ? json(parallel_area(p.sampled, t, Side::plus)) : json(nullptr);
        row["flag"] = outside ? json(kOutside) : json(nullptr);
        rows.push_back(row);
    }
    json out = header("tube-table", settings);
    out.erase("samples");
    out.erase("seed");
    out["rows"] = rows;
    return out;
}

std::string verify_csv(const nlohmann::ordered_json& report)
{
    std::ostringstream os;
    os << "t,side,closed,coarea,residual,mc_mean,mc_std_error,mc_z,flag,pass\n";
    for (const auto& row : report.at("checks")) {
        const json& mc = row.contains("monte_carlo") ? row["monte_carlo"] : json(nullptr);
        os << csv_field(row["t"]) << ',' << csv_field(row["side"]) << ',' << csv_field(row["closed"]["value"]) << ','
           << (row["coarea"].is_null() ? "" : csv_field(row["coarea"]["value"])) << ',' << csv_field(row["residual"])
           << ',' << (mc.is_null() ? "" : csv_field(mc["value"])) << ','
           << (mc.is_null() ? "" : csv_field(mc["std_error"])) << ','
           << (row.contains("mc_z") ? csv_field(row["mc_z"]) : "") << ',' << csv_field(row["closed"]["flag"]) << ','
           << csv_field(row["pass"]) << '\n';
    }
    return os.str();
}

std::string analyze_csv(const nlohmann::ordered_json& report)
{
    std::ostringstream os;
    os << "t,vol_plus,vol_minus,vol_both,mc_plus,mc_plus_se,mc_minus,mc_minus_se,mc_both,mc_both_se,flag\n";
    auto value = [](const json& row, const char* key, const char* field) {
        return row.contains(key) ? csv_field(row[key][field]) : std::string();
    };
    for (const auto& row : report.at("tube_table")) {
        const json& flag = row["vol_plus"]["flag"].is_null() ? row["vol_minus"]["flag"] : row["vol_plus"]["flag"];
        os << csv_field(row["t"]) << ',' << value(row, "vol_plus", "value") << ',' << value(row, "vol_minus", "value")
           << ',' << value(row, "vol_both", "value");
        for (const char* key : {"mc_plus", "mc_minus", "mc_both"})
            os << ',' << value(row, key, "value") << ',' << value(row, key, "std_error");
        os << ',' << csv_field(flag) << '\n';
    }
    return os.str();
}

std::string tube_table_csv(const nlohmann::ordered_json& table)
{
    std::ostringstream os;
    os << "t,vol_plus,vol_minus,vol_both,parallel_area_plus,flag\n";
    for (const auto& row : table.at("rows")) {
        os << csv_field(row["t"]) << ',' << csv_field(row["vol_plus"]) << ',' << csv_field(row["vol_minus"]) << ','
           << csv_field(row["vol_both"]) << ',' << csv_field(row["parallel_area_plus"]) << ',' << csv_field(row["flag"])
           << '\n';
    }
    return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Tube volumes, focal radii and pinching certificates for surfaces in S^3 and H^3", "tubeform"};
    app.require_subcommand(1);

    RunSettings settings;
    if (const char* env = std::getenv("TUBEFORM_SEED")) {
        try {
            settings.seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "error: TUBEFORM_SEED is not an unsigned integer\n";
            return 2;
        }
    }
    std::string surface_name;
    std::string config_path;
    std::string t_list;
    std::string format = "json";
    std::string output;
    std::string radius_source = "focal_set";
    std::string radius_scope = "rho_plus";
    SurfaceSpec flags;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double tol = 1e-8;

    auto add_common = [&](CLI::App* sub, std::uint64_t default_samples) {
        sub->add_option("surface", surface_name, "clifford | ftorus | gsphere | psphere");
        sub->add_option("--config", config_path, "flat JSON config document");
        sub->add_option("--k", flags.k, "curvature sign (+1 or -1)");
        sub->add_option("--r", flags.r, "geodesic sphere radius");
        sub->add_option("--a", flags.a, "flat torus first radius");
        sub->add_option("--b", flags.b, "flat torus second radius");
        sub->add_option("--r0", flags.r0, "perturbed sphere base radius");
        sub->add_option("--eps", flags.eps, "perturbed sphere amplitude");
        sub->add_option("--mode", flags.mode, "perturbed sphere mode (1-3)");
        sub->add_option("--resolution", flags.resolution, "quadrature nodes per chart axis");
        sub->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output", output, "write the report to this file");
        sub->add_option("--samples", samples, "Monte Carlo samples (0 disables)")
            ->default_str(std::to_string(default_samples));
        sub->add_option("--seed", seed, "Monte Carlo seed (default $TUBEFORM_SEED or 42)");
    };

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "integrals, focal radii, pinching verdict and tube table");
    add_common(analyze_cmd, 100'000);
    analyze_cmd->add_option("--t-list", t_list, "tube radii, comma list or start:stop:count");
    analyze_cmd->add_option("--radius-source", radius_source, "focal_set | along_normal")
        ->check(CLI::IsMember({"focal_set", "along_normal"}));
    analyze_cmd->add_option("--radius-scope", radius_scope, "rho_plus | rho")->check(CLI::IsMember({"rho_plus", "rho"}));

    CLI::App* verify_cmd = app.add_subcommand("verify", "compare closed forms against coarea and Monte Carlo oracles");
    add_common(verify_cmd, 1'000'000);
    verify_cmd->add_option("--t-list", t_list, "tube radii, comma list or start:stop:count");
    verify_cmd->add_option("--tol", tol, "closed vs coarea tolerance");

    CLI::App* table_cmd = app.add_subcommand("tube-table", "closed-form tube volumes on a grid of radii");
    add_common(table_cmd, 0);
    table_cmd->add_option("--t-grid", t_list, "tube radii, comma list or start:stop:count");

    std::vector<const char*> argv{"tubeform"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--samples") == 0)
        samples = cmd == analyze_cmd ? 100'000 : cmd == verify_cmd ? 1'000'000 : 0;
    settings.samples = samples;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in)
                throw InvalidInput("cannot open config document '" + config_path + "'");
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw InvalidInput(std::string("config document is not valid JSON: ") + e.what());
            }
            settings = apply_config(doc, settings);
        }
        // Explicit flags override the config document.
        if (cmd->count("--samples"))
            settings.samples = samples;
        if (cmd->count("--seed"))
            settings.seed = seed;
        if (!surface_name.empty())
            settings.surface.name = surface_name;
        else if (config_path.empty())
            throw InvalidInput("no surface given (name or --config)");
        SurfaceSpec& s = settings.surface;
        if (cmd->count("--k"))
            s.k = flags.k;
        if (cmd->count("--r"))
            s.r = flags.r;
        if (cmd->count("--a"))
            s.a = flags.a;
        if (cmd->count("--b"))
            s.b = flags.b;
        if (cmd->count("--r0"))
            s.r0 = flags.r0;
        if (cmd->count("--eps"))
            s.eps = flags.eps;
        if (cmd->count("--mode"))
            s.mode = flags.mode;
        if (cmd->count("--resolution"))
            s.resolution = flags.resolution;
        if (!t_list.empty())
            settings.t_list = parse_t_list(t_list);
        settings.tol = tol;
        settings.radius.source = radius_source == "focal_set" ? RadiusSource::focal_set : RadiusSource::along_normal;
        settings.radius.scope = radius_scope == "rho_plus" ? RadiusScope::rho_plus : RadiusScope::rho;

        std::string text;
        int code = 0;
        const std::string name = cmd->get_name();
        if (name == "analyze") {
            const json report = analyze(settings);
            text = format == "csv" ? analyze_csv(report) : report.dump(2) + "\n";
        } else if (name == "verify") {
            const VerifyOutcome v = verify(settings);
            text = format == "csv" ? verify_csv(v.report) : v.report.dump(2) + "\n";
            code = v.pass ? 0 : 1;
        } else {
            const json table = tube_table(settings);
            text = format == "csv" ? tube_table_csv(table) : table.dump(2) + "\n";
        }
        if (!output.empty()) {
            std::ofstream file(output);
            if (!file)
                throw InvalidInput("cannot write '" + output + "'");
            file << text;
        } else {
            out << text;
        }
        return code;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace tubeform
