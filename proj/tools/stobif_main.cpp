// stobif: stochastic bifurcation diagrams from Fokker-Planck mean orbits.
//
// Subcommands:
//   orbit      mean orbit for one (r, x0)
//   scan       mean equilibria at one r
//   sweep      bifurcation diagram over an r range
//   oracle     Euler-Maruyama ensemble mean for one (r, x0)
//   reproduce  stochastic + deterministic diagrams for the builtin systems

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "stobif/bifurcation.hpp"
#include "stobif/config.hpp"
#include "stobif/csv.hpp"
#include "stobif/equilibria.hpp"
#include "stobif/errors.hpp"
#include "stobif/mean_orbit.hpp"
#include "stobif/montecarlo.hpp"
#include "stobif/parallel.hpp"
#include "stobif/system.hpp"

namespace {

using namespace stobif;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string default_output_dir() {
    const char* env = std::getenv("STOBIF_OUTPUT_DIR");
    return env && *env ? env : ".";
}

struct Options {
    std::string config_path;
    std::string system_name;
    std::string mode = "stochastic";
    std::string boundary; // empty: per-system default
    double x_min = 0.0, x_max = 0.0;
    int grid_n = 0; // 0: per-system default
    double r = 0.0;
    double x0 = 0.5;
    double t_final = 40.0;
    double dt = 1e-3;
    int stride = 100;
    double settle_tol = 1e-4;
    double merge_tol = 0.02;
    int fan = 21;
    double r_min = -1.0, r_max = 1.0;
    int r_steps = 41;
    bool refine = false;
    double refine_width = 0.01;
    int n_paths = 100000;
    std::uint64_t seed = 0;
    double clip = 0.0; // 0: domain half-width
    int workers = 0;
    std::string output;
    std::string density_dump;
    std::string output_dir = default_output_dir();
};

// A flag wins over the config file, the config file over the default.
void apply_config_file(const ConfigMap& map, CLI::App* cmd, Options& opt) {
    auto maybe_number = [&](const std::string& key, auto& field) {
        const CLI::Option* o = cmd->get_option_no_throw("--" + key);
        auto it = map.find(key);
        if (it == map.end() || (o && o->count() > 0))
            return;
        if (it->second.kind != ConfigValue::Kind::number)
            throw ConfigError("config key " + key + " must be a number");
        field = static_cast<std::remove_reference_t<decltype(field)>>(
            it->second.number);
    };
    auto maybe_string = [&](const std::string& key, std::string& field) {
        const CLI::Option* o = cmd->get_option_no_throw("--" + key);
        auto it = map.find(key);
        if (it == map.end() || (o && o->count() > 0))
            return;
        field = it->second.text;
    };

    maybe_string("mode", opt.mode);
    maybe_string("boundary", opt.boundary);
    maybe_number("x-min", opt.x_min);
    maybe_number("x-max", opt.x_max);
    maybe_number("grid-n", opt.grid_n);
    maybe_number("r", opt.r);
    maybe_number("x0", opt.x0);
    maybe_number("t-final", opt.t_final);
    maybe_number("dt", opt.dt);
    maybe_number("stride", opt.stride);
    maybe_number("settle-tol", opt.settle_tol);
    maybe_number("merge-tol", opt.merge_tol);
    maybe_number("fan", opt.fan);
    maybe_number("r-min", opt.r_min);
    maybe_number("r-max", opt.r_max);
    maybe_number("r-steps", opt.r_steps);
    maybe_number("refine-width", opt.refine_width);
    maybe_number("n-paths", opt.n_paths);
    maybe_number("seed", opt.seed);
    maybe_number("clip", opt.clip);
    maybe_number("workers", opt.workers);
    maybe_string("output", opt.output);
}

SdeSystem resolve_system(const Options& opt, const ConfigMap& map) {
    if (!opt.system_name.empty())
        return lookup_builtin(opt.system_name);
    if (auto sys = system_from_config(map))
        return *sys;
    throw ConfigError("no system selected; use --system or a config file with "
                      "system/drift/diffusion keys");
}

Grid resolve_grid(const Options& opt, const SdeSystem& system, double r) {
    Grid grid = default_grid_for(system, r);
    double x_min = opt.x_min != 0.0 || opt.x_max != 0.0 ? opt.x_min : grid.x_min;
    double x_max = opt.x_min != 0.0 || opt.x_max != 0.0 ? opt.x_max : grid.x_max;
    int n = opt.grid_n > 0 ? opt.grid_n
                           : std::max(16, static_cast<int>(
                                              std::lround((x_max - x_min) / 0.01)));
    BoundaryPolicy policy =
        opt.boundary.empty() ? grid.policy : boundary_policy_from_string(opt.boundary);
    return build_grid(x_min, x_max, n, policy);
}

ScanConfig make_scan_config(const Options& opt) {
    ScanConfig cfg;
    cfg.t_final = opt.t_final;
    cfg.dt = opt.dt;
    cfg.sample_stride = opt.stride;
    cfg.settle_tol = opt.settle_tol;
    cfg.merge_tol = opt.merge_tol;
    cfg.fan_size = opt.fan;
    cfg.workers = opt.workers;
    return cfg;
}

void validate_common(const Options& opt) {
    if (!(opt.dt > 0.0))
        throw ConfigError("dt must be positive");
    if (!(opt.t_final > 0.0))
        throw ConfigError("t-final must be positive");
    if (opt.stride < 1)
        throw ConfigError("stride must be >= 1");
    if (opt.fan < 5)
        throw ConfigError("fan must have at least 5 points");
    if (!(opt.settle_tol > 0.0) || !(opt.merge_tol > 0.0))
        throw ConfigError("settle-tol and merge-tol must be positive");
}

Provenance common_provenance(const Options& opt, const SdeSystem& system,
                             const Grid& grid) {
    Provenance prov;
    prov.emplace_back("system", system.name());
    prov.emplace_back("mode", opt.mode);
    prov.emplace_back("x_min", format_double(grid.x_min));
    prov.emplace_back("x_max", format_double(grid.x_max));
    prov.emplace_back("grid_n", std::to_string(grid.n));
    prov.emplace_back("boundary", to_string(grid.policy));
    prov.emplace_back("t_final", format_double(opt.t_final));
    prov.emplace_back("dt", format_double(opt.dt));
    prov.emplace_back("stride", std::to_string(opt.stride));
    return prov;
}

void write_file(const std::string& path, const std::string& body) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open output file: " + path);
    out << body;
    out.flush();
    if (!out)
        throw IoError("write failed: " + path);
}

void warn_boundary(const SolverStats& stats) {
    if (stats.boundary_density_max > 1e-8)
        std::cerr << "warning: boundary-cell density reached "
                  << format_double(stats.boundary_density_max)
                  << "; results may depend on the domain truncation\n";
}

std::string output_path(const Options& opt, const std::string& fallback) {
    if (!opt.output.empty())
        return opt.output;
    return (std::filesystem::path(opt.output_dir) / fallback).string();
}

int run_orbit_cmd(const Options& opt, const ConfigMap& map) {
    validate_common(opt);
    SdeSystem system = resolve_system(opt, map);
    if (opt.mode == "deterministic")
        system = system.with_zero_diffusion();
    else if (opt.mode != "stochastic")
        throw ConfigError("mode must be deterministic or stochastic");
    const Grid grid = resolve_grid(opt, system, opt.r);

    SolverStats stats;
    MeanOrbit orbit;
    std::vector<DensityField> snapshots;
    EvolveConfig ecfg{opt.t_final, opt.dt, opt.stride};
    orbit.x0 = opt.x0;
    orbit.r = opt.r;
    orbit.conditioned = grid.policy == BoundaryPolicy::absorbing;
    const bool dump = !opt.density_dump.empty();
    evolve_visit(
        system, opt.r, grid, opt.x0, ecfg,
        [&](const DensityField& field) {
            const double mass = field.mass();
            if (!(mass > kMassFloor)) {
                orbit.truncated = true;
                return false;
            }
            orbit.times.push_back(field.time);
            orbit.means.push_back(field.raw_first_moment() / mass);
            orbit.surviving_mass.push_back(mass);
            if (dump)
                snapshots.push_back(field);
            return true;
        },
        &stats);

    Provenance prov = common_provenance(opt, system, grid);
    prov.emplace_back("r", format_double(opt.r));
    prov.emplace_back("x0", format_double(opt.x0));
    if (orbit.conditioned)
        prov.emplace_back("conditioned", "true");
    if (orbit.truncated)
        prov.emplace_back("truncated", "true");

    std::ostringstream body;
    write_orbit_csv(body, orbit, prov);
    const std::string path = output_path(opt, "orbit.csv");
    write_file(path, body.str());
    if (dump) {
        std::ostringstream dens;
        write_density_csv(dens, snapshots, prov);
        write_file(opt.density_dump, dens.str());
    }
    warn_boundary(stats);
    std::cout << "wrote " << path << " (" << orbit.times.size() << " samples)\n";
    return kExitOk;
}

int run_scan_cmd(const Options& opt, const ConfigMap& map) {
    validate_common(opt);
    SdeSystem system = resolve_system(opt, map);
    const Mode mode = mode_from_string(opt.mode);
    if (mode == Mode::deterministic)
        system = system.with_zero_diffusion();
    ScanConfig cfg = make_scan_config(opt);
    cfg.grid = resolve_grid(opt, system, opt.r);

    const EquilibriumScan scan = detect_equilibria(system, opt.r, cfg);

    Provenance prov = common_provenance(opt, system, scan.grid);
    prov.emplace_back("r", format_double(opt.r));
    prov.emplace_back("settle_tol", format_double(scan.settle_tol));
    prov.emplace_back("merge_tol", format_double(scan.merge_tol));
    prov.emplace_back("fan", std::to_string(scan.x0_fan.size()));

    std::ostringstream body;
    write_scan_csv(body, scan, mode, prov);
    const std::string path = output_path(opt, "scan.csv");
    write_file(path, body.str());
    warn_boundary(scan.solver_stats);
    std::cout << "wrote " << path << " (" << scan.equilibria.size()
              << " equilibria)\n";
    if (!scan.diagnostic.empty())
        std::cout << "diagnostic: " << scan.diagnostic << "\n";
    return kExitOk;
}

int run_sweep_cmd(const Options& opt, const ConfigMap& map) {
    validate_common(opt);
    if (opt.r_steps < 2)
        throw ConfigError("r-steps must be >= 2");
    if (!(opt.r_min < opt.r_max))
        throw ConfigError("need r-min < r-max");
    SdeSystem system = resolve_system(opt, map);
    const Mode mode = mode_from_string(opt.mode);

    SweepConfig cfg;
    cfg.r_min = opt.r_min;
    cfg.r_max = opt.r_max;
    cfg.r_steps = opt.r_steps;
    cfg.refine = opt.refine;
    cfg.refine_width = opt.refine_width;
    cfg.workers = opt.workers;
    cfg.scan = make_scan_config(opt);
    cfg.scan.workers = 1; // parallelism lives at the r level
    if (opt.x_min != 0.0 || opt.x_max != 0.0 || opt.grid_n > 0 ||
        !opt.boundary.empty())
        cfg.scan.grid = resolve_grid(opt, system, opt.r_min);

    const BifurcationDiagram diagram = sweep(system, mode, cfg);

    Provenance prov;
    prov.emplace_back("system", system.name());
    prov.emplace_back("mode", to_string(mode));
    prov.emplace_back("r_min", format_double(opt.r_min));
    prov.emplace_back("r_max", format_double(opt.r_max));
    prov.emplace_back("r_steps", std::to_string(opt.r_steps));
    prov.emplace_back("t_final", format_double(opt.t_final));
    prov.emplace_back("dt", format_double(opt.dt));
    prov.emplace_back("settle_tol", format_double(opt.settle_tol));
    prov.emplace_back("merge_tol", format_double(opt.merge_tol));
    prov.emplace_back("fan", std::to_string(opt.fan));

    std::ostringstream body;
    write_diagram_csv(body, diagram, prov);
    const std::string path = output_path(opt, "sweep.csv");
    write_file(path, body.str());

    std::ostringstream summary;
    write_summary_csv(summary, diagram, prov);
    std::filesystem::path sp(path);
    sp.replace_filename(sp.stem().string() + "_summary.csv");
    write_file(sp.string(), summary.str());

    SolverStats merged;
    for (const EquilibriumScan& scan : diagram.scans)
        merged.merge(scan.solver_stats);
    warn_boundary(merged);
    std::cout << "wrote " << path << " and " << sp.string() << " ("
              << diagram.bifurcations.size() << " bifurcation intervals)\n";
    return kExitOk;
}

int run_oracle_cmd(const Options& opt, const ConfigMap& map) {
    validate_common(opt);
    SdeSystem system = resolve_system(opt, map);
    if (opt.mode == "deterministic")
        system = system.with_zero_diffusion();
    const Grid grid = resolve_grid(opt, system, opt.r);

    EnsembleConfig cfg;
    cfg.n_paths = opt.n_paths;
    cfg.dt = opt.dt;
    cfg.t_final = opt.t_final;
    cfg.seed = opt.seed;
    cfg.domain_clip = opt.clip > 0.0 ? opt.clip : grid.half_width();
    cfg.sample_stride = opt.stride;
    cfg.workers = opt.workers;

    const EnsembleOrbit ens = em_mean_orbit(system, opt.r, opt.x0, cfg);

    Provenance prov = common_provenance(opt, system, grid);
    prov.emplace_back("r", format_double(opt.r));
    prov.emplace_back("x0", format_double(opt.x0));
    prov.emplace_back("n_paths", std::to_string(cfg.n_paths));
    prov.emplace_back("seed", std::to_string(cfg.seed));
    prov.emplace_back("domain_clip", format_double(cfg.domain_clip));

    std::ostringstream body;
    write_ensemble_csv(body, ens, prov);
    const std::string path = output_path(opt, "oracle.csv");
    write_file(path, body.str());
    std::cout << "wrote " << path << " (" << ens.orbit.times.size()
              << " samples)\n";
    return kExitOk;
}

int run_reproduce_cmd(const Options& opt) {
    validate_common(opt);
    struct Case {
        const char* system;
        double r_min, r_max;
        int r_steps;
    };
    const Case cases[] = {
        {"saddle-node", -1.0, 1.0, 41},
        {"transcritical", -5.0, 2.0, 71},
        {"pitchfork", -0.5, 1.0, 31},
    };
    for (const Case& c : cases) {
        const SdeSystem system = lookup_builtin(c.system);
        for (Mode mode : {Mode::stochastic, Mode::deterministic}) {
            SweepConfig cfg;
            cfg.r_min = c.r_min;
            cfg.r_max = c.r_max;
            cfg.r_steps = c.r_steps;
            cfg.workers = opt.workers;
            cfg.scan = make_scan_config(opt);
            cfg.scan.workers = 1;
            const BifurcationDiagram diagram = sweep(system, mode, cfg);

            Provenance prov;
            prov.emplace_back("system", system.name());
            prov.emplace_back("mode", to_string(mode));
            prov.emplace_back("r_min", format_double(c.r_min));
            prov.emplace_back("r_max", format_double(c.r_max));
            prov.emplace_back("r_steps", std::to_string(c.r_steps));
            prov.emplace_back("t_final", format_double(opt.t_final));
            prov.emplace_back("dt", format_double(opt.dt));
            prov.emplace_back("settle_tol", format_double(opt.settle_tol));
            prov.emplace_back("merge_tol", format_double(opt.merge_tol));
            prov.emplace_back("fan", std::to_string(opt.fan));

            const std::string name =
                std::string(c.system) + "_" + to_string(mode) + ".csv";
            const std::string path =
                (std::filesystem::path(opt.output_dir) / name).string();
            std::ostringstream body;
            write_diagram_csv(body, diagram, prov);
            write_file(path, body.str());
            std::cout << "wrote " << path << "\n";
        }
    }
    return kExitOk;
}

void add_system_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--system", opt.system_name,
                    "builtin system: saddle-node, transcritical, pitchfork");
    cmd->add_option("--config", opt.config_path,
                    "config file (key = value; may define the system)");
    cmd->add_option("--mode", opt.mode, "deterministic or stochastic");
    cmd->add_option("--x-min", opt.x_min, "domain lower edge");
    cmd->add_option("--x-max", opt.x_max, "domain upper edge");
    cmd->add_option("--grid-n", opt.grid_n, "number of grid cells");
    cmd->add_option("--boundary", opt.boundary, "reflecting or absorbing");
    cmd->add_option("--t-final", opt.t_final, "time horizon");
    cmd->add_option("--dt", opt.dt, "time step");
    cmd->add_option("--stride", opt.stride, "steps between samples");
    cmd->add_option("--workers", opt.workers, "worker threads (0: all cores)");
    cmd->add_option("--output,-o", opt.output, "output CSV path");
    cmd->add_option("--output-dir", opt.output_dir,
                    "output directory (default: $STOBIF_OUTPUT_DIR or .)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic bifurcation diagrams via Fokker-Planck mean orbits"};
    app.require_subcommand(1);

    Options opt;

    CLI::App* orbit = app.add_subcommand("orbit", "mean orbit for one (r, x0)");
    add_system_options(orbit, opt);
    orbit->add_option("--r", opt.r, "parameter value");
    orbit->add_option("--x0", opt.x0, "initial state");
    orbit->add_option("--dump-density", opt.density_dump,
                      "also write density snapshots (t,x,p) to this file");

    CLI::App* scan = app.add_subcommand("scan", "mean equilibria at one r");
    add_system_options(scan, opt);
    scan->add_option("--r", opt.r, "parameter value");
    scan->add_option("--settle-tol", opt.settle_tol, "settle tolerance");
    scan->add_option("--merge-tol", opt.merge_tol, "cluster separation");
    scan->add_option("--fan", opt.fan, "number of initial conditions");

    CLI::App* sweepc = app.add_subcommand("sweep", "bifurcation diagram over r");
    add_system_options(sweepc, opt);
    sweepc->add_option("--r-min", opt.r_min, "sweep start");
    sweepc->add_option("--r-max", opt.r_max, "sweep end");
    sweepc->add_option("--r-steps", opt.r_steps, "number of r samples");
    sweepc->add_flag("--refine", opt.refine, "bisect flagged intervals in r");
    sweepc->add_option("--refine-width", opt.refine_width, "refined interval width");
    sweepc->add_option("--settle-tol", opt.settle_tol, "settle tolerance");
    sweepc->add_option("--merge-tol", opt.merge_tol, "cluster separation");
    sweepc->add_option("--fan", opt.fan, "number of initial conditions");

    CLI::App* oracle = app.add_subcommand("oracle", "Euler-Maruyama ensemble mean");
    add_system_options(oracle, opt);
    oracle->add_option("--r", opt.r, "parameter value");
    oracle->add_option("--x0", opt.x0, "initial state");
    oracle->add_option("--n-paths", opt.n_paths, "ensemble size");
    oracle->add_option("--seed", opt.seed, "RNG seed");
    oracle->add_option("--clip", opt.clip, "freeze paths outside (-clip, clip)");

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "builtin-system diagrams, stochastic and deterministic");
    add_system_options(reproduce, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        ConfigMap map;
        if (!opt.config_path.empty())
            map = parse_config_file(opt.config_path);

        CLI::App* active = app.get_subcommands().front();
        apply_config_file(map, active, opt);

        if (active == orbit)
            return run_orbit_cmd(opt, map);
        if (active == scan)
            return run_scan_cmd(opt, map);
        if (active == sweepc)
            return run_sweep_cmd(opt, map);
        if (active == oracle)
            return run_oracle_cmd(opt, map);
        return run_reproduce_cmd(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
