// Command-line front end: codebook generation/inspection, closed-form
// analysis reports, and Monte-Carlo link sweeps with CSV/JSON output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "vlcmimo/analysis.hpp"
#include "vlcmimo/channel.hpp"
#include "vlcmimo/codebook.hpp"
#include "vlcmimo/report.hpp"
#include "vlcmimo/sim.hpp"

namespace {

using nlohmann::json;
using namespace vlcmimo;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string iso_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

double parse_gamma(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return std::stod(text);
        const double num = std::stod(text.substr(0, slash));
        const double den = std::stod(text.substr(slash + 1));
        if (den == 0.0) throw UsageError("gamma denominator is zero");
        return num / den;
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse gamma value '" + text + "'");
    }
}

DimmingMethod parse_method(const std::string& name) {
    if (name == "fill") return DimmingMethod::Fill;
    if (name == "complement") return DimmingMethod::Complement;
    throw UsageError("method must be fill or complement");
}

std::vector<Detector> parse_detectors(const std::string& list) {
    std::vector<Detector> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const std::string item =
            list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item == "ml")
            out.push_back(Detector::ML);
        else if (item == "zf")
            out.push_back(Detector::ZF);
        else if (item == "mmse")
            out.push_back(Detector::MMSE);
        else if (item == "none" || item.empty())
            ;  // allow an empty detector set for bound/MI-only runs
        else
            throw UsageError("unknown detector '" + item + "'");
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

void emit(const std::optional<std::string>& out_path, const std::string& contents) {
    if (out_path)
        write_file(*out_path, contents);
    else
        std::cout << contents;
}

void write_manifest(const std::string& command, const json& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["tool"] = "vlcmimo";
    manifest["version"] = kVersion;
    manifest["seed"] = seed;
    manifest["timestamp"] = iso_timestamp();
    manifest["config"] = config;
    manifest["outputs"] = outputs;
    for (const auto& path : outputs) write_file(path + ".manifest.json", manifest.dump(2) + "\n");
}

json manifest_object(const std::string& command, const json& config, std::uint64_t seed) {
    json manifest;
    manifest["command"] = command;
    manifest["tool"] = "vlcmimo";
    manifest["version"] = kVersion;
    manifest["seed"] = seed;
    manifest["timestamp"] = iso_timestamp();
    manifest["config"] = config;
    return manifest;
}

// ---------------------------------------------------------------- codebook

struct CodebookArgs {
    int n_t = 4;
    std::string gamma = "1/4";
    std::string method = "fill";
    std::string format = "text";
    std::optional<std::string> out;
    bool verify = false;
};

int run_codebook(const CodebookArgs& args) {
    if (args.verify) {
        bool all_ok = true;
        for (int ones = 1; ones <= 3; ++ones) {
            const auto& fixture = reference_codebook_nt4(ones);
            const auto book = enumerate_codebook(CodebookSpec::make(4, ones));
            bool ok = book.size() == fixture.size();
            for (std::size_t m = 0; ok && m < book.size(); ++m) ok = book[m] == fixture[m];
            std::printf("gamma=%d/4: %s\n", ones, ok ? "ok" : "MISMATCH");
            all_ok = all_ok && ok;
        }
        return all_ok ? kExitOk : kExitRuntime;
    }

    const auto spec = CodebookSpec::from_gamma(args.n_t, parse_gamma(args.gamma),
                                               parse_method(args.method));
    std::string contents;
    if (args.format == "json") {
        contents = codebook_dump_json(spec).dump(2) + "\n";
    } else if (args.format == "text") {
        contents = codebook_dump_text(spec);
    } else {
        throw UsageError("format must be text or json");
    }
    emit(args.out, contents);
    if (args.out) {
        json config{{"nt", args.n_t}, {"gamma", args.gamma}, {"method", args.method},
                    {"format", args.format}};
        write_manifest("codebook", config, 0, {*args.out});
    }
    return kExitOk;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
    int n_t = 0;
    std::string gamma;
    double t_b = 0.0;
    double mftp = 0.0;
    std::string format = "json";
    std::optional<std::string> out;
};

int run_analyze(const AnalyzeArgs& args) {
    if (args.n_t == 0 && !(args.t_b > 0.0 && args.mftp > 0.0))
        throw UsageError("need --nt and/or both --tb and --mftp");

    json report;
    if (args.n_t != 0) {
        report["n_t"] = args.n_t;
        report["k"] = message_length(args.n_t);
        report["rate"] = code_rate(args.n_t);
        const auto weights = dimming_weight_table(args.n_t);
        report["weight_table"] = {{"gamma_actual", weights.gamma_actual},
                                  {"gamma_complement", weights.gamma_complement},
                                  {"weight_actual", weights.weight_actual},
                                  {"weight_complement", weights.weight_complement}};
        if (!args.gamma.empty()) {
            const auto spec = CodebookSpec::from_gamma(args.n_t, parse_gamma(args.gamma));
            report["gamma"] = args.gamma;
            report["run_length"] = max_run_length(spec);
            if (message_length(args.n_t) <= 16) {
                const auto distance = min_distance_report(spec);
                report["d_min"] = distance.min_hamming;
                report["min_euclidean_scale"] = distance.min_euclidean;
            }
        }
    }
    if (args.t_b > 0.0 && args.mftp > 0.0)
        report["nt_max"] = max_nt_for_flicker(args.t_b, args.mftp);

    std::string contents;
    if (args.format == "json") {
        contents = report.dump(2) + "\n";
    } else if (args.format == "text") {
        for (const auto& [key, value] : report.items())
            contents += key + " = " + value.dump() + "\n";
    } else {
        throw UsageError("format must be text or json");
    }
    emit(args.out, contents);
    if (args.out) write_manifest("analyze", report, 0, {*args.out});
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    int n_t = 4;
    int n_r = 4;
    std::string gamma = "1/4";
    std::string method = "fill";
    std::string detectors = "ml";
    double snr_start = 0.0;
    double snr_stop = 40.0;
    double snr_step = 5.0;
    long trials = 100000;
    long min_errors = 200;
    std::uint64_t seed = 1;
    std::string preset = "paper-default";
    bool with_bound = false;
    bool with_mi = false;
    double semi_angle_deg = 60.0;
    std::string fov_cutoff = "on";
    int channel_hold = 1;
    std::string gain_scale = "auto";
    long bound_samples = 1000;
    long mi_samples = 20000;
    int threads = 0;
    std::string format = "csv";
    std::optional<std::string> out;
};

void apply_config_file(SimulateArgs& args, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }
    auto get = [&cfg](const char* key, auto& slot) {
        if (cfg.contains(key)) slot = cfg.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("nt", args.n_t);
    get("nr", args.n_r);
    get("gamma", args.gamma);
    get("method", args.method);
    get("detectors", args.detectors);
    get("snr_start", args.snr_start);
    get("snr_stop", args.snr_stop);
    get("snr_step", args.snr_step);
    get("trials", args.trials);
    get("min_errors", args.min_errors);
    get("seed", args.seed);
    get("preset", args.preset);
    get("bound", args.with_bound);
    get("mi", args.with_mi);
    get("semi_angle", args.semi_angle_deg);
    get("fov_cutoff", args.fov_cutoff);
    get("channel_hold", args.channel_hold);
    get("gain_scale", args.gain_scale);
    get("bound_samples", args.bound_samples);
    get("mi_samples", args.mi_samples);
    get("threads", args.threads);
    get("format", args.format);
    if (cfg.contains("out")) args.out = cfg.at("out").get<std::string>();
}

json simulate_config_json(const SimulateArgs& args, const SweepPlan& plan, double gain_scale) {
    json config;
    config["nt"] = args.n_t;
    config["nr"] = args.n_r;
    config["gamma"] = args.gamma;
    config["method"] = args.method;
    config["detectors"] = args.detectors;
    config["snr_start"] = args.snr_start;
    config["snr_stop"] = args.snr_stop;
    config["snr_step"] = args.snr_step;
    config["trials"] = plan.trials_per_point;
    config["min_errors"] = plan.min_errors;
    config["seed"] = plan.seed;
    config["preset"] = args.preset;
    config["bound"] = args.with_bound;
    config["mi"] = args.with_mi;
    config["semi_angle"] = args.semi_angle_deg;
    config["fov_cutoff"] = args.fov_cutoff;
    config["channel_hold"] = plan.channel_hold;
    config["gain_scale"] = gain_scale;
    config["bound_samples"] = plan.bound_channel_samples;
    config["mi_samples"] = plan.mi_samples;
    config["threads"] = plan.threads;
    config["format"] = args.format;
    config["n0"] = plan.n0;
    return config;
}

int run_simulate(const SimulateArgs& args) {
    SweepPlan plan;
    plan.spec = CodebookSpec::from_gamma(args.n_t, parse_gamma(args.gamma),
                                         parse_method(args.method));
    if (args.preset != "paper-default")
        throw UsageError("unknown preset '" + args.preset + "'");
    plan.geom = default_geometry(args.n_t, args.n_r);
    plan.optics = default_optics();
    plan.optics.semi_angle = args.semi_angle_deg * 3.141592653589793 / 180.0;
    if (args.fov_cutoff == "off")
        plan.optics.fov_cutoff = false;
    else if (args.fov_cutoff != "on")
        throw UsageError("--fov-cutoff takes on or off");

    if (args.snr_step <= 0.0) throw UsageError("--snr-step must be positive");
    if (args.snr_stop < args.snr_start) throw UsageError("--snr-stop is below --snr-start");
    for (double snr = args.snr_start; snr <= args.snr_stop + 1e-9; snr += args.snr_step)
        plan.snr_grid_db.push_back(snr);

    plan.detectors = parse_detectors(args.detectors);
    if (plan.detectors.empty() && !args.with_bound && !args.with_mi)
        throw UsageError("nothing to do: no detectors, no --bound, no --mi");
    plan.trials_per_point = args.trials;
    plan.min_errors = args.min_errors;
    plan.seed = args.seed;
    plan.channel_hold = args.channel_hold;
    plan.bound_channel_samples = args.bound_samples;
    plan.mi_samples = args.mi_samples;
    plan.threads = args.threads;
    if (args.gain_scale != "auto") {
        try {
            plan.gain_scale = std::stod(args.gain_scale);
        } catch (const std::logic_error&) {
            throw UsageError("--gain-scale takes auto or a positive number");
        }
        if (!(plan.gain_scale > 0.0)) throw UsageError("--gain-scale must be positive");
    }

    std::optional<SweepResult> cer, bound, mi;
    if (!plan.detectors.empty()) cer = run_cer_sweep(plan);
    if (args.with_bound) bound = run_bound_sweep(plan);
    if (args.with_mi) mi = run_mi_sweep(plan);
    const auto rows = merge_sweep_rows(cer ? &*cer : nullptr, bound ? &*bound : nullptr,
                                       mi ? &*mi : nullptr);
    const double resolved_scale =
        cer ? cer->gain_scale : (bound ? bound->gain_scale : mi->gain_scale);
    const json config = simulate_config_json(args, plan, resolved_scale);

    if (args.format == "csv") {
        emit(args.out, sweep_csv(rows));
        if (args.out) write_manifest("simulate", config, plan.seed, {*args.out});
    } else if (args.format == "json") {
        json doc;
        doc["manifest"] = manifest_object("simulate", config, plan.seed);
        doc["rows"] = sweep_json_rows(rows);
        emit(args.out, doc.dump(2) + "\n");
    } else {
        throw UsageError("format must be csv or json");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation space-time codes for MIMO visible-light links"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CodebookArgs cb;
    auto* cb_cmd = app.add_subcommand("codebook", "Generate or verify codebooks");
    cb_cmd->add_option("--nt", cb.n_t, "transmit antennas");
    cb_cmd->add_option("--gamma", cb.gamma, "dimming factor, e.g. 1/4 or 0.25");
    cb_cmd->add_option("--method", cb.method, "fill|complement");
    cb_cmd->add_option("--format", cb.format, "text|json");
    cb_cmd->add_option("--out", [&cb](const CLI::results_t& r) { cb.out = r[0]; return true; },
                       "output path (stdout when absent)");
    cb_cmd->add_flag("--verify-appendix-b", cb.verify,
                     "check the built-in n_t=4 reference codebooks");

    AnalyzeArgs an;
    auto* an_cmd = app.add_subcommand("analyze", "Closed-form code metrics");
    an_cmd->add_option("--nt", an.n_t, "transmit antennas");
    an_cmd->add_option("--gamma", an.gamma, "dimming factor for run-length/distance");
    an_cmd->add_option("--tb", an.t_b, "bit period in seconds");
    an_cmd->add_option("--mftp", an.mftp, "maximum flickering time period in seconds");
    an_cmd->add_option("--format", an.format, "json|text");
    an_cmd->add_option("--out", [&an](const CLI::results_t& r) { an.out = r[0]; return true; },
                       "output path (stdout when absent)");

    SimulateArgs sim;
    std::string config_path;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo link sweeps");
    sim_cmd->add_option("--config", config_path, "JSON config file; flags override");
    sim_cmd->add_option("--nt", sim.n_t, "transmit antennas");
    sim_cmd->add_option("--nr", sim.n_r, "receive antennas");
    sim_cmd->add_option("--gamma", sim.gamma, "dimming factor");
    sim_cmd->add_option("--method", sim.method, "fill|complement");
    sim_cmd->add_option("--detectors", sim.detectors, "comma list of ml,zf,mmse (or none)");
    sim_cmd->add_option("--snr-start", sim.snr_start, "grid start, dB");
    sim_cmd->add_option("--snr-stop", sim.snr_stop, "grid stop, dB");
    sim_cmd->add_option("--snr-step", sim.snr_step, "grid step, dB");
    sim_cmd->add_option("--trials", sim.trials, "trials per SNR point");
    sim_cmd->add_option("--min-errors", sim.min_errors, "early-stop error count (0 disables)");
    sim_cmd->add_option("--seed", sim.seed, "base RNG seed");
    sim_cmd->add_option("--preset", sim.preset, "parameter preset (paper-default)");
    sim_cmd->add_flag("--bound", sim.with_bound, "add union-bound columns");
    sim_cmd->add_flag("--mi", sim.with_mi, "add mutual-information columns");
    sim_cmd->add_option("--semi-angle", sim.semi_angle_deg, "LED half-power angle, degrees");
    sim_cmd->add_option("--fov-cutoff", sim.fov_cutoff, "on|off");
    sim_cmd->add_option("--channel-hold", sim.channel_hold, "trials per receiver placement");
    sim_cmd->add_option("--gain-scale", sim.gain_scale, "auto or explicit channel gain scale");
    sim_cmd->add_option("--bound-samples", sim.bound_samples, "channel samples for the bound");
    sim_cmd->add_option("--mi-samples", sim.mi_samples, "Monte-Carlo samples for MI");
    sim_cmd->add_option("--threads", sim.threads, "worker threads (0 = auto)");
    sim_cmd->add_option("--format", sim.format, "csv|json");
    sim_cmd->add_option("--out", [&sim](const CLI::results_t& r) { sim.out = r[0]; return true; },
                        "output path (stdout when absent)");

    // the config file provides defaults, so it must load before the final
    // flag values land; scan for it, then let the normal parse override
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    try {
        if (!config_path.empty()) apply_config_file(sim, config_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cb_cmd->parsed()) return run_codebook(cb);
        if (an_cmd->parsed()) return run_analyze(an);
        if (sim_cmd->parsed()) return run_simulate(sim);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CapacityExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
