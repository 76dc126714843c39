// Batch experiment runner. Every experiment is fully determined by
// (config, seed); re-runs write byte-identical summaries. Outputs per
// run: CSV artifacts, a key-value summary.txt with pass/fail, and
// manifest.json (config hash, version, seed, artifact list).
//
// Exit codes: 0 all assertions pass, 2 physics assertion failed,
// 3 configuration error, 4 numerical failure.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bohmlab/characters.hpp"
#include "bohmlab/config_file.hpp"
#include "bohmlab/csvio.hpp"
#include "bohmlab/equivariance.hpp"
#include "bohmlab/errors.hpp"
#include "bohmlab/grid.hpp"
#include "bohmlab/guidance.hpp"
#include "bohmlab/sampler.hpp"

namespace fs = std::filesystem;
using namespace bohmlab;

namespace {

constexpr const char* kVersion = "bohmlab 1.0.0";

constexpr int kExitPass = 0;
constexpr int kExitPhysics = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumerical = 4;

struct ExperimentInfo {
    std::string name;
    std::string config_keys;
    std::string claim;
};

const std::vector<ExperimentInfo>& experiment_table() {
    static const std::vector<ExperimentInfo> table = {
        {"characters", "n",
         "the permutation group on N labels admits exactly two unit-modulus multiplicative maps, "
         "the trivial map and the sign map"},
        {"periodicity", "wavefunction keys; samples; t0; t1; character",
         "exchange-(anti)symmetrized states satisfy psi(sigma q) = gamma_sigma psi(q) for the "
         "matching character, and unsymmetrized products violate it"},
        {"trajectory", "wavefunction keys; initial.<i>; t0; t1; samples_out",
         "guidance trajectories integrated on the covering space project consistently to the "
         "quotient"},
        {"lift-independence", "wavefunction keys; initial.<i>; t0; t1; deviation_bound",
         "the projected trajectory is independent of which lift of the initial configuration is "
         "integrated"},
        {"equivariance", "wavefunction keys; n; t1; bootstrap; bins; burn_in; thinning; chains",
         "an ensemble sampled from |psi|^2 and transported by the guidance flow stays |psi_t|^2 "
         "distributed at later times"},
        {"grid-preservation", "grid.points; grid.lo; grid.hi; dt; steps; potential.*; statistics",
         "Schrodinger evolution under an exchange-symmetric potential preserves the exchange "
         "sector and the norm"},
        {"non-crossing-1d", "wavefunction keys; trajectories; t1; backend",
         "in one dimension identical particles cannot pass through each other: sorted ordering is "
         "preserved and separations stay positive"},
        {"mass-density", "wavefunction keys; times; points; mass_tol",
         "the mass-weighted marginal density integrates to the total mass"},
    };
    return table;
}

/// Collected outputs of one run, flushed atomically at the end.
struct RunOutput {
    fs::path dir;
    std::vector<std::pair<std::string, std::string>> summary;  // ordered key = value
    std::vector<std::string> artifacts;

    void add(const std::string& key, const std::string& value) { summary.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, long value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

    void write_artifact(const std::string& name, const std::string& content) {
        write_file_atomic((dir / name).string(), content);
        artifacts.push_back(name);
    }

    void flush(const std::string& experiment, const std::string& claim, const KeyValueConfig& cfg,
               std::uint64_t seed, bool pass) {
        add("pass", pass);
        std::string text;
        text += "experiment = " + experiment + "\n";
        for (const auto& [k, v] : summary) text += k + " = " + v + "\n";
        write_file_atomic((dir / "summary.txt").string(), text);
        artifacts.push_back("summary.txt");

        nlohmann::json manifest;
        manifest["experiment"] = experiment;
        manifest["claim"] = claim;
        manifest["version"] = kVersion;
        manifest["seed"] = seed;
        manifest["config_hash"] = fnv1a_hex(cfg.canonical_text());
        manifest["config"] = cfg.entries();
        manifest["outputs"] = artifacts;
        manifest["pass"] = pass;
        write_file_atomic((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    }
};

/// Defaults -> config file -> command-line overrides. A config that
/// defines its own packets replaces the default packet block outright
/// (no silent filling of missing packet fields), so incomplete packet
/// definitions are diagnosed.
KeyValueConfig effective_config(const std::string& defaults, const std::string& config_path,
                                std::uint64_t seed, bool seed_set, double tol, bool tol_set) {
    auto base = KeyValueConfig::parse_text(defaults, "<defaults>");
    KeyValueConfig cfg;
    if (!config_path.empty()) {
        const auto user = KeyValueConfig::parse_file(config_path);
        bool user_packets = false;
        for (const auto& [k, v] : user.entries())
            if (k.rfind("packet.", 0) == 0) user_packets = true;
        for (const auto& [k, v] : base.entries()) {
            if (user_packets && (k.rfind("packet.", 0) == 0 || k.rfind("initial.", 0) == 0)) continue;
            cfg.set(k, v);
        }
        for (const auto& [k, v] : user.entries()) cfg.set(k, v);
    } else {
        cfg = base;
    }
    if (seed_set) cfg.set("seed", std::to_string(seed));
    if (tol_set) cfg.set("tol", format_double(tol));
    return cfg;
}

std::string trajectory_csv(const Trajectory& traj, const WaveFunction& psi) {
    // columns follow the integrated lift (continuous in t); canonical
    // order is recoverable by sorting blocks
    std::string body = "t," + configuration_header(traj.lift_states.front().particles,
                                                   traj.lift_states.front().dim) +
                       ",min_pair_dist,abs_psi\n";
    for (std::size_t s = 0; s < traj.size(); ++s) {
        body += format_double(traj.times[s]) + "," + configuration_row(traj.lift_states[s]);
        body += "," + format_double(min_pairwise_distance(traj.lift_states[s]));
        body += "," + format_double(std::abs(psi.value(std::span<const double>(traj.lift_states[s].coords),
                                                       traj.times[s])));
        body += "\n";
    }
    return body;
}

// ---------------------------------------------------------------- characters

int run_characters(const KeyValueConfig& cfg, RunOutput& out) {
    const int n = static_cast<int>(cfg.get_long("n", 4));
    const auto found = enumerate_characters(n);
    out.add("n", static_cast<long>(n));
    out.add("characters_found", static_cast<long>(found.size()));
    bool unitary = true;
    for (std::size_t i = 0; i < found.size(); ++i) {
        out.add("character" + std::to_string(i), found[i].name());
        if (!verify_unitarity(CandidateFactor::from_character(found[i]), n)) unitary = false;
    }
    out.add("unitarity_verified", unitary);

    std::string csv = "sigma_rank,images,parity,trivial,sign\n";
    for (const auto& sigma : enumerate_elements(n)) {
        std::string images;
        for (int i = 0; i < sigma.size(); ++i) images += (i ? " " : "") + std::to_string(sigma(i));
        csv += std::to_string(rank(sigma)) + "," + images + "," + std::to_string(parity(sigma));
        for (const auto& g : found) csv += "," + std::to_string(g.value(sigma));
        csv += "\n";
    }
    out.write_artifact("characters.csv", csv);

    const bool expected_count = (n == 1 ? found.size() == 1 : found.size() == 2);
    return (expected_count && unitary) ? kExitPass : kExitPhysics;
}

// --------------------------------------------------------------- periodicity

int run_periodicity(const KeyValueConfig& cfg, RunOutput& out) {
    const auto psi = wavefunction_from_config(cfg);
    const int samples = static_cast<int>(cfg.get_long("samples", 1000));
    const std::uint64_t seed = cfg.get_u64("seed", 20260101);
    const double tol = cfg.get_double("tol", 1e-10);
    const double t0 = cfg.get_double("t0", 0.0);
    const double t1 = cfg.get_double("t1", 1.0);

    std::string character = cfg.get_string("character", "auto");
    if (character == "auto")
        character = psi->statistics() == Statistics::fermion ? "sign" : "trivial";
    TopologicalFactor gamma = character == "sign" ? TopologicalFactor::sign(psi->particles())
                                                  : TopologicalFactor::trivial(psi->particles());
    if (character != "sign" && character != "trivial")
        throw ConfigError("config: 'character' must be trivial | sign | auto");

    const auto chk = check_periodicity(*psi, gamma, samples, seed, t0, t1);
    out.add("character", character);
    out.add("samples", static_cast<long>(chk.samples));
    out.add("max_residual", chk.max_residual);
    out.add("tol", tol);
    return chk.max_residual < tol ? kExitPass : kExitPhysics;
}

// ---------------------------------------------------------------- trajectory

UnorderedConfiguration initial_from_config(const KeyValueConfig& cfg, const WaveFunction& psi,
                                           std::uint64_t seed) {
    if (cfg.has("initial.0")) {
        std::vector<double> coords;
        for (int i = 0; i < psi.particles(); ++i) {
            const auto block = cfg.get_vector("initial." + std::to_string(i));
            if (static_cast<int>(block.size()) != psi.dim())
                throw ConfigError("config: 'initial." + std::to_string(i) + "' needs d components");
            coords.insert(coords.end(), block.begin(), block.end());
        }
        return project(OrderedConfiguration(psi.particles(), psi.dim(), std::move(coords)));
    }
    return sample_density(psi, 0.0, 1, seed).members.front();
}

int run_trajectory(const KeyValueConfig& cfg, RunOutput& out) {
    const auto psi = wavefunction_from_config(cfg);
    const std::uint64_t seed = cfg.get_u64("seed", 20260101);
    const double t0 = cfg.get_double("t0", 0.0);
    const double t1 = cfg.get_double("t1", 1.0);
    IntegrateOptions opt;
    opt.tol = cfg.get_double("tol", 1e-8);
    opt.samples = static_cast<int>(cfg.get_long("samples_out", 129));

    const auto q0 = initial_from_config(cfg, *psi, seed);
    const auto traj = integrate_trajectory(*psi, q0, t0, t1, psi->params(), opt);
    out.write_artifact("trajectory.csv", trajectory_csv(traj, *psi));

    bool consistent = true;
    for (std::size_t s = 0; s < traj.size(); ++s)
        if (!(project(traj.lift_states[s]) == traj.states[s])) consistent = false;
    const bool ordering_ok = psi->dim() != 1 || crossing_check_1d(traj);

    out.add("steps_accepted", traj.steps_accepted);
    out.add("steps_rejected", traj.steps_rejected);
    out.add("min_abs_psi", traj.min_abs_psi);
    out.add("min_pair_distance", min_pair_distance(traj));
    out.add("projection_consistent", consistent);
    out.add("ordering_preserved", ordering_ok);
    return (consistent && ordering_ok) ? kExitPass : kExitPhysics;
}

// --------------------------------------------------------- lift-independence

int run_lift_independence(const KeyValueConfig& cfg, RunOutput& out) {
    const auto psi = wavefunction_from_config(cfg);
    const std::uint64_t seed = cfg.get_u64("seed", 20260101);
    const double t0 = cfg.get_double("t0", 0.0);
    const double t1 = cfg.get_double("t1", 1.0);
    const double tol = cfg.get_double("tol", 1e-8);
    const double bound = cfg.get_double("deviation_bound", 100.0 * tol);

    const auto q0 = initial_from_config(cfg, *psi, seed);
    const auto rep = lift_independence_check(*psi, q0, t0, t1, psi->params(), tol, 65, 1e-8, seed);
    out.add("lifts_integrated", static_cast<long>(rep.lifts_integrated));
    out.add("character", rep.character.name());
    out.add("max_quotient_deviation", rep.max_quotient_deviation);
    out.add("deviation_bound", bound);
    return rep.max_quotient_deviation < bound ? kExitPass : kExitPhysics;
}

// -------------------------------------------------------------- equivariance

int run_equivariance(const KeyValueConfig& cfg, RunOutput& out) {
    const auto psi = wavefunction_from_config(cfg);
    const std::uint64_t seed = cfg.get_u64("seed", 20260101);
    const int n = static_cast<int>(cfg.get_long("n", 10000));
    const double t1 = cfg.get_double("t1", 1.0);
    const int bootstrap = static_cast<int>(cfg.get_long("bootstrap", 200));

    SamplerConfig scfg;
    scfg.burn_in = static_cast<int>(cfg.get_long("burn_in", 1000));
    scfg.thinning = static_cast<int>(cfg.get_long("thinning", 10));
    scfg.chains = static_cast<int>(cfg.get_long("chains", 8));
    scfg.proposal_scale = cfg.get_double("proposal_scale", 0.0);

    TransportOptions topt;
    topt.tol = cfg.get_double("tol", 1e-8);

    const auto bins1 = build_quotient_bins(*psi, t1, static_cast<int>(cfg.get_long("bins", 8)));
    const auto marg1 = marginal_cdfs(*psi, t1);
    const auto th1 = calibrate_thresholds(*psi, t1, n, mix_seed(seed, 1), bootstrap, scfg, bins1, marg1);

    const auto e0 = sample_density(*psi, 0.0, n, seed, scfg);
    for (const auto& w : e0.warnings) out.add("warning", w);
    const auto e1 = transport_ensemble(*psi, e0, t1, psi->params(), topt);
    const auto rep = distribution_distance(e1, *psi, t1, th1, bins1, marg1);

    export_ensemble_csv(e0, (out.dir / "ensemble_initial.csv").string());
    out.artifacts.push_back("ensemble_initial.csv");
    export_ensemble_csv(e1, (out.dir / "ensemble_transported.csv").string());
    out.artifacts.push_back("ensemble_transported.csv");
    export_report(rep, (out.dir / "report.txt").string());
    out.artifacts.push_back("report.txt");

    out.add("n", static_cast<long>(n));
    out.add("t1", t1);
    out.add("transport_failures", static_cast<long>(e1.transport_failures));
    out.add("bootstrap_replicates", static_cast<long>(bootstrap));
    for (std::size_t c = 0; c < rep.ks_per_coordinate.size(); ++c)
        out.add("ks_coordinate" + std::to_string(c), rep.ks_per_coordinate[c]);
    out.add("ks_max", rep.ks_max);
    out.add("ks_threshold", rep.thresholds.ks);
    out.add("chi2", rep.chi2);
    out.add("chi2_threshold", rep.thresholds.chi2);
    return (rep.pass && e1.transport_failures == 0) ? kExitPass : kExitPhysics;
}

// --------------------------------------------------------- grid-preservation

int run_grid_preservation(const KeyValueConfig& cfg, RunOutput& out) {
    const int points = static_cast<int>(cfg.get_long("grid.points", 161));
    const double lo = cfg.get_double("grid.lo", -6.0);
    const double hi = cfg.get_double("grid.hi", 6.0);
    const double dt = cfg.get_double("dt", 1e-3);
    const long steps = cfg.get_long("steps", 10000);
    const double tol = cfg.get_double("tol", 1e-10);
    const std::string stats_name = cfg.get_string("statistics", "fermion");
    const Statistics stats = stats_name == "boson" ? Statistics::boson : Statistics::fermion;
    if (stats_name != "boson" && stats_name != "fermion")
        throw ConfigError("config: 'statistics' must be fermion | boson for grid-preservation");

    GaussianPacket p1, p2;
    p1.center = {cfg.get_double("packet.0.center", -1.5)};
    p1.momentum = {cfg.get_double("packet.0.momentum", 0.6)};
    p1.width = cfg.get_double("packet.0.width", 0.5);
    p2.center = {cfg.get_double("packet.1.center", 1.5)};
    p2.momentum = {cfg.get_double("packet.1.momentum", -0.6)};
    p2.width = cfg.get_double("packet.1.width", 0.5);

    auto state = init_pair_state(p1, p2, GridSpec::square(points, lo, hi), stats);

    const std::string pot = cfg.get_string("potential", "double-well");
    if (pot == "double-well") {
        const double a = cfg.get_double("potential.a", 1.5);
        const double v0 = cfg.get_double("potential.v0", 2.0);
        set_potential(state, [a, v0](double x) {
            const double r = x * x / (a * a) - 1.0;
            return v0 * r * r;
        }, pot);
    } else if (pot == "harmonic") {
        const double omega = cfg.get_double("potential.omega", 1.0);
        set_potential(state, [omega](double x) { return 0.5 * omega * omega * x * x; }, pot);
    } else if (pot == "zero") {
        set_potential(state, [](double) { return 0.0; }, pot);
    } else {
        throw ConfigError("config: 'potential' must be double-well | harmonic | zero");
    }

    const auto gamma = stats == Statistics::fermion ? TopologicalFactor::sign(2)
                                                    : TopologicalFactor::trivial(2);
    const double norm0 = discrete_norm(state);
    const double sector0 = symmetry_sector_error(state, gamma);
    advance(state, dt, steps);
    const double norm1 = discrete_norm(state);
    const double sector1 = symmetry_sector_error(state, gamma);
    export_snapshot_csv(state, (out.dir / "final_state.csv").string());
    out.artifacts.push_back("final_state.csv");

    const double norm_drift = std::abs(norm1 - norm0);
    out.add("statistics", stats_name);
    out.add("potential", pot);
    out.add("steps", steps);
    out.add("dt", dt);
    out.add("sector_error_initial", sector0);
    out.add("sector_error_final", sector1);
    out.add("norm_drift", norm_drift);
    out.add("tol", tol);
    return (sector1 < tol && norm_drift < tol) ? kExitPass : kExitPhysics;
}

// ----------------------------------------------------------- non-crossing-1d

int run_non_crossing(const KeyValueConfig& cfg, RunOutput& out) {
    const auto packet_psi = wavefunction_from_config(cfg);
    if (packet_psi->dim() != 1) throw ConfigError("config: non-crossing-1d needs dimension = 1");
    const std::uint64_t seed = cfg.get_u64("seed", 20260101);
    const int runs = static_cast<int>(cfg.get_long("trajectories", 100));
    const double t1 = cfg.get_double("t1", 1.0);
    const std::string backend = cfg.get_string("backend", "analytic");
    IntegrateOptions opt;
    opt.tol = cfg.get_double("tol", 1e-8);
    opt.samples = 65;

    // backend = grid runs the same check against a grid-propagated state,
    // which allows a generic (non-closed-form) potential
    std::shared_ptr<const WaveFunction> psi = packet_psi;
    if (backend == "grid") {
        if (packet_psi->particles() != 2)
            throw ConfigError("config: the grid backend needs exactly 2 packets");
        auto state = init_pair_state(packet_psi->packets()[0], packet_psi->packets()[1],
                                     GridSpec::square(static_cast<int>(cfg.get_long("grid.points", 161)),
                                                      cfg.get_double("grid.lo", -6.0),
                                                      cfg.get_double("grid.hi", 6.0)),
                                     packet_psi->statistics());
        const std::string pot = cfg.get_string("potential", "double-well");
        if (pot == "double-well") {
            const double a = cfg.get_double("potential.a", 1.5);
            const double v0 = cfg.get_double("potential.v0", 2.0);
            set_potential(state, [a, v0](double x) {
                const double r = x * x / (a * a) - 1.0;
                return v0 * r * r;
            }, pot);
        } else if (pot == "zero") {
            set_potential(state, [](double) { return 0.0; }, pot);
        } else {
            throw ConfigError("config: grid backend potential must be double-well | zero");
        }
        const double dt = cfg.get_double("dt", 1e-3);
        const long steps = std::lround(t1 / dt);
        psi = std::make_shared<GridWaveFunction>(
            record_evolution(std::move(state), dt, steps, cfg.get_long("snapshot_stride", 10)));
        out.add("backend", std::string("grid(") + pot + ")");
    } else if (backend == "analytic") {
        out.add("backend", backend);
    } else {
        throw ConfigError("config: 'backend' must be analytic | grid");
    }

    const auto starts = sample_density(*psi, 0.0, runs, seed);
    int ordering_violations = 0;
    double min_distance = std::numeric_limits<double>::infinity();
    std::string csv = "run,min_pair_dist,ordering_preserved\n";
    for (int r = 0; r < runs; ++r) {
        const auto traj = integrate_trajectory(*psi, starts.members[static_cast<std::size_t>(r)], 0.0,
                                               t1, packet_psi->params(), opt);
        const bool ok = crossing_check_1d(traj);
        const double dist = min_pair_distance(traj);
        if (!ok) ++ordering_violations;
        min_distance = std::min(min_distance, dist);
        csv += std::to_string(r) + "," + format_double(dist) + "," + (ok ? "true" : "false") + "\n";
    }
    out.write_artifact("runs.csv", csv);
    out.add("trajectories", static_cast<long>(runs));
    out.add("ordering_violations", static_cast<long>(ordering_violations));
    out.add("min_pair_distance", min_distance);
    return (ordering_violations == 0 && min_distance > 0.0) ? kExitPass : kExitPhysics;
}

// -------------------------------------------------------------- mass-density

int run_mass_density(const KeyValueConfig& cfg, RunOutput& out) {
    const auto psi = wavefunction_from_config(cfg);
    const double mass_tol = cfg.get_double("mass_tol", 1e-4);
    const int points = static_cast<int>(cfg.get_long("points", 201));
    const auto times = cfg.has("times") ? cfg.get_vector("times") : std::vector<double>{0.0, 0.5, 1.0};
    const auto& params = psi->params();
    double total_mass = 0.0;
    for (int i = 0; i < params.particles; ++i) total_mass += params.mass_of(i);

    bool pass = true;
    std::string csv = "t,x,mass_density\n";
    for (double t : times) {
        std::vector<double> lo, hi;
        psi->support_box(t, lo, hi);
        const double a = lo[0], b = hi[0];
        // profile on a uniform x grid and total mass by composite Simpson
        std::vector<double> profile(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double x = a + (b - a) * i / (points - 1);
            profile[static_cast<std::size_t>(i)] =
                mass_density(*psi, std::span<const double>(&x, 1), t, params);
            csv += format_double(t) + "," + format_double(x) + "," +
                   format_double(profile[static_cast<std::size_t>(i)]) + "\n";
        }
        double integral = 0.0;
        const double h = (b - a) / (points - 1);
        for (int i = 0; i + 1 < points; ++i)
            integral += 0.5 * h * (profile[static_cast<std::size_t>(i)] + profile[static_cast<std::size_t>(i) + 1]);
        out.add("total_mass_t" + format_double(t), integral);
        if (std::abs(integral - total_mass) > mass_tol) pass = false;
    }
    out.write_artifact("mass_density.csv", csv);
    out.add("expected_total_mass", total_mass);
    out.add("mass_tol", mass_tol);
    return pass ? kExitPass : kExitPhysics;
}

// --------------------------------------------------------------------- main

const std::map<std::string, std::string>& default_configs() {
    static const std::map<std::string, std::string> defaults = {
        {"characters", "n = 4\n"},
        {"periodicity",
         "statistics = fermion\ndimension = 1\n"
         "packet.0.center = -1.0\npacket.0.momentum = 1.0\npacket.0.width = 0.7\n"
         "packet.1.center = 1.0\npacket.1.momentum = -1.0\npacket.1.width = 0.7\n"
         "samples = 1000\nt0 = 0\nt1 = 1\ncharacter = auto\n"},
        {"trajectory",
         "statistics = fermion\ndimension = 1\n"
         "packet.0.center = -1.0\npacket.0.momentum = 1.0\npacket.0.width = 0.7\n"
         "packet.1.center = 1.0\npacket.1.momentum = -1.0\npacket.1.width = 0.7\n"
         "initial.0 = -1.0\ninitial.1 = 1.0\nt0 = 0\nt1 = 1\n"},
        {"lift-independence",
         "statistics = fermion\ndimension = 1\n"
         "packet.0.center = -1.0\npacket.0.momentum = 1.0\npacket.0.width = 0.7\n"
         "packet.1.center = 1.0\npacket.1.momentum = -1.0\npacket.1.width = 0.7\n"
         "initial.0 = -1.1\ninitial.1 = 0.7\nt0 = 0\nt1 = 1\ndeviation_bound = 1e-6\n"},
        {"equivariance",
         "statistics = fermion\ndimension = 1\n"
         "packet.0.center = -1.0\npacket.0.momentum = 1.0\npacket.0.width = 0.7\n"
         "packet.1.center = 1.0\npacket.1.momentum = -1.0\npacket.1.width = 0.7\n"
         "n = 10000\nt1 = 1\nbootstrap = 200\nbins = 8\n"},
        {"grid-preservation",
         "statistics = fermion\ngrid.points = 161\ngrid.lo = -6\ngrid.hi = 6\n"
         "dt = 1e-3\nsteps = 10000\npotential = double-well\n"},
        {"non-crossing-1d",
         "statistics = fermion\ndimension = 1\n"
         "packet.0.center = -1.0\npacket.0.momentum = 1.0\npacket.0.width = 0.7\n"
         "packet.1.center = 1.0\npacket.1.momentum = -1.0\npacket.1.width = 0.7\n"
         "trajectories = 100\nt1 = 1\n"},
        {"mass-density",
         "statistics = fermion\ndimension = 1\nmass = 1.5\n"
         "packet.0.center = -1.0\npacket.0.momentum = 1.0\npacket.0.width = 0.7\n"
         "packet.1.center = 1.0\npacket.1.momentum = -1.0\npacket.1.width = 0.7\n"
         "times = 0.0, 0.5, 1.0\n"},
    };
    return defaults;
}

int list_experiments() {
    std::cout << "experiment        | config keys                                      | claim\n";
    std::cout << std::string(120, '-') << "\n";
    for (const auto& e : experiment_table()) {
        std::cout << e.name;
        for (std::size_t i = e.name.size(); i < 18; ++i) std::cout << ' ';
        std::cout << "| " << e.config_keys;
        for (std::size_t i = e.config_keys.size(); i < 49; ++i) std::cout << ' ';
        std::cout << "| " << e.claim << "\n";
    }
    std::cout << "\nwave-function schema (used by all experiments except characters and "
                 "grid-preservation):\n"
              << wavefunction_schema_help();
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bohmian dynamics for identical particles on the unordered configuration space"};
    app.require_subcommand(0, 1);

    bool do_list = false;
    app.add_subcommand("list", "Describe every experiment and its config keys")
        ->callback([&] { do_list = true; });

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    double tol = 0.0;
    long n_override = -1;

    std::map<std::string, CLI::App*> subs;
    for (const auto& e : experiment_table()) {
        auto* sub = app.add_subcommand(e.name, e.claim);
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--seed", seed, "random seed (overrides config)");
        sub->add_option("--out", out_dir, "output directory (default out-<experiment>)");
        sub->add_option("--tol", tol, "tolerance (overrides config)");
        if (e.name == "characters") sub->add_option("--n", n_override, "particle count N");
        subs[e.name] = sub;
    }

    CLI11_PARSE(app, argc, argv);

    if (do_list) return list_experiments();
    std::string chosen;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) chosen = name;
    if (chosen.empty()) {
        std::cout << app.help();
        return kExitPass;
    }

    try {
        auto cfg = effective_config(default_configs().at(chosen), config_path,
                                    seed, subs[chosen]->count("--seed") > 0,
                                    tol, subs[chosen]->count("--tol") > 0);
        if (chosen == "characters" && n_override >= 0) cfg.set("n", std::to_string(n_override));

        RunOutput out;
        out.dir = out_dir.empty() ? fs::path("out-" + chosen) : fs::path(out_dir);
        fs::create_directories(out.dir);

        int code = kExitPass;
        if (chosen == "characters") code = run_characters(cfg, out);
        else if (chosen == "periodicity") code = run_periodicity(cfg, out);
        else if (chosen == "trajectory") code = run_trajectory(cfg, out);
        else if (chosen == "lift-independence") code = run_lift_independence(cfg, out);
        else if (chosen == "equivariance") code = run_equivariance(cfg, out);
        else if (chosen == "grid-preservation") code = run_grid_preservation(cfg, out);
        else if (chosen == "non-crossing-1d") code = run_non_crossing(cfg, out);
        else if (chosen == "mass-density") code = run_mass_density(cfg, out);

        std::string claim;
        for (const auto& e : experiment_table())
            if (e.name == chosen) claim = e.claim;
        out.flush(chosen, claim, cfg, cfg.get_u64("seed", 20260101), code == kExitPass);
        std::cout << chosen << ": " << (code == kExitPass ? "PASS" : "FAIL") << " (outputs in "
                  << out.dir.string() << ")\n";
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PeriodicityViolation& e) {
        std::cerr << "physics assertion failed: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const NodeProximityError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IntegrationStalled& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const TransportDegraded& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }
}
