// qnet: command-line driver for the cavity-chain C-PHASE gate simulator.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <optional>
#include <mutex>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qnet/config.hpp"
#include "qnet/decoupling.hpp"
#include "qnet/fidelity.hpp"
#include "qnet/rng.hpp"
#include "qnet/timedomain.hpp"
#include "qnet/version.hpp"

using namespace qnet;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format;  // csv|json; config output.format supplies the default
    int threads = 0;
    std::optional<int> n_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> samples_override;
    std::optional<double> delta_override;
};

RunConfig load_config(CommonArgs& args) {
    RunConfig cfg = parse_config_file(args.config_path);
    if (args.n_override) cfg.n = *args.n_override;
    if (args.seed_override) cfg.mc_seed = *args.seed_override;
    if (args.samples_override) cfg.mc_samples = *args.samples_override;
    if (args.delta_override) cfg.mc_delta = *args.delta_override;
    if (cfg.n < 1 || cfg.n > 20) throw ValidationError("n out of range");
    // config-file output block supplies defaults; flags win
    if (args.out_path.empty()) args.out_path = cfg.output_path;
    if (args.format.empty()) args.format = cfg.output_format;
    return cfg;
}

json config_echo_json(const RunConfig& cfg) {
    json echo = json::object();
    for (const auto& [k, v] : cfg.echo) echo[k] = v;
    return echo;
}

json metadata_json(const RunConfig& cfg, const std::string& subcommand) {
    json meta;
    meta["tool"] = "qnet";
    meta["tool_version"] = QNET_VERSION;
    meta["csv_format_version"] = QNET_CSV_FORMAT_VERSION;
    meta["subcommand"] = subcommand;
    meta["n"] = cfg.n;
    meta["grid"] = {{"points", cfg.grid_points},
                    {"halfspan_bandwidths", cfg.grid_halfspan_bandwidths}};
    meta["xi_optimizer"] = {{"tol_over_kappa", 1e-6}, {"window_over_kappa", 20.0}};
    meta["mc"] = {{"delta", cfg.mc_delta},
                  {"samples", cfg.mc_samples},
                  {"seed", cfg.mc_seed},
                  {"rng", "splitmix64 + box-muller"},
                  {"block_detuning_kappas", cfg.mc_block_detuning_kappas}};
    meta["heralded_definition"] =
        "success_probability = basis-state average of the transmitted probability; "
        "heralded_fidelity = fidelity / success_probability";
    meta["config"] = config_echo_json(cfg);
    return meta;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

json cell_value(const std::string& cell) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == cell.size()) return v;
    } catch (...) {
    }
    return cell;
}

void write_table(const CommonArgs& args, const RunConfig& cfg, const std::string& subcommand,
                 const std::string& header, const std::vector<std::string>& rows) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file) throw ValidationError("cannot open output file '" + args.out_path + "'");
        out = &file;
    }
    if (args.format == "json") {
        json doc;
        doc["columns"] = split_cells(header);
        json data = json::array();
        for (const auto& r : rows) {
            json row = json::array();
            for (const auto& cell : split_cells(r)) row.push_back(cell_value(cell));
            data.push_back(std::move(row));
        }
        doc["rows"] = std::move(data);
        doc["metadata"] = metadata_json(cfg, subcommand);
        *out << doc.dump(2) << "\n";
        out->flush();
        return;
    }
    *out << header << "\n";
    for (const auto& r : rows) *out << r << "\n";
    out->flush();
    if (!args.out_path.empty()) {
        std::ofstream meta(args.out_path + ".meta.json");
        meta << metadata_json(cfg, subcommand).dump(2) << "\n";
    }
}

void write_json_report(const CommonArgs& args, json& doc) {
    if (!args.out_path.empty()) {
        std::ofstream file(args.out_path);
        if (!file) throw ValidationError("cannot open output file '" + args.out_path + "'");
        file << doc.dump(2) << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
}

// Worker pool over independent points; results land in indexed slots so the
// assembled output is byte-identical regardless of the thread count.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

int run_components(CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const auto packet_grid = uniform_grid(cfg.grid_halfspan_bandwidths * cfg.delta_omega,
                                          cfg.grid_points);
    const CavitySpec one = cfg.uniform_cavity(Sidedness::one_sided);
    const CavitySpec two = cfg.uniform_cavity(Sidedness::two_sided);

    std::vector<std::string> rows;
    rows.reserve(packet_grid.size());
    for (double w : packet_grid) {
        std::string row = fmt(w);
        for (Qubit q : {Qubit::zero, Qubit::one}) {
            const cplx r1 = one_sided_reflection(w, one, q);
            const auto sc = two_sided_coefficients(w, two, q);
            row += "," + fmt(r1.real()) + "," + fmt(r1.imag());
            row += "," + fmt(sc.transmission->real()) + "," + fmt(sc.transmission->imag());
            row += "," + fmt(sc.reflection.real()) + "," + fmt(sc.reflection.imag());
        }
        rows.push_back(std::move(row));
    }
    write_table(args, cfg, "components",
                "omega_rad_s,q0_r1_re,q0_r1_im,q0_t2_re,q0_t2_im,q0_r2_re,q0_r2_im,"
                "q1_r1_re,q1_r1_im,q1_t2_re,q1_t2_im,q1_r2_re,q1_r2_im",
                rows);
    return 0;
}

int run_transfer(CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const NetworkSpec spec = cfg.network();
    const auto grid = uniform_grid(cfg.grid_halfspan_bandwidths * cfg.delta_omega,
                                   cfg.grid_points);
    const auto set = build_amplitude_set(spec, grid);

    std::vector<std::string> rows;
    rows.reserve(grid.size() * set.amplitudes.size());
    for (const auto& [state, col] : set.amplitudes) {
        const std::string name = state_string(state, cfg.n);
        for (std::size_t k = 0; k < grid.size(); ++k)
            rows.push_back(fmt(grid[k]) + "," + name + "," + fmt(col[k].real()) + "," +
                           fmt(col[k].imag()));
    }
    write_table(args, cfg, "transfer", "omega_rad_s,state,re,im", rows);
    return 0;
}

int run_timedomain(CommonArgs& args, int qubit_value) {
    const RunConfig cfg = load_config(args);
    const CavitySpec cavity = cfg.uniform_cavity(Sidedness::one_sided);
    const auto packet = cfg.packet();
    const auto state = scatter_time_domain(packet, cavity,
                                           qubit_value ? Qubit::one : Qubit::zero);
    std::vector<std::string> rows;
    rows.reserve(state.t.size());
    for (std::size_t k = 0; k < state.t.size(); ++k) {
        rows.push_back(fmt(state.t[k]) + "," + fmt(std::norm(state.b_in[k])) + "," +
                       fmt(std::norm(state.b_out[k])) + "," + fmt(std::norm(state.c_b[k])) +
                       "," + fmt(std::norm(state.c_e[k])));
    }
    write_table(args, cfg, "timedomain", "t_s,abs2_b_in,abs2_b_out,abs2_c_b,abs2_c_e", rows);
    return 0;
}

json report_json(const RunConfig& cfg, const GateReport& rep) {
    json doc;
    doc["fidelity"] = rep.fidelity;
    doc["xi_star_s"] = rep.xi_star;
    doc["success_probability"] = rep.success_probability;
    doc["heralded_fidelity"] = rep.heralded_fidelity;
    std::vector<std::pair<std::string, cplx>> named;
    for (const auto& [s, o] : rep.overlaps) named.emplace_back(state_string(s, cfg.n), o);
    std::sort(named.begin(), named.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    json overlaps = json::object();
    for (const auto& [name, o] : named) overlaps[name] = {o.real(), o.imag()};
    doc["overlaps"] = overlaps;
    return doc;
}

int run_fidelity(CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const NetworkSpec spec = cfg.network();
    const auto packet = cfg.packet();
    const auto rep = gate_fidelity(spec, packet);

    json doc = report_json(cfg, rep);
    if (cfg.n == 2) doc["entanglement_fidelity"] = entanglement_fidelity(spec, packet);
    doc["metadata"] = metadata_json(cfg, "fidelity");
    write_json_report(args, doc);
    return 0;
}

int run_coeffs(CommonArgs& args, int n) {
    json doc;
    doc["n"] = n;
    doc["inv_C"] = expansion_coefficient(n, SmallParameter::inv_cooperativity);
    doc["kappa_prime_ratio"] = expansion_coefficient(n, SmallParameter::kappa_prime_ratio);
    doc["eta"] = expansion_coefficient(n, SmallParameter::eta);
    const auto blk = bandwidth_coefficients(n);
    doc["bandwidth_block"] = {{"a_per_kappa2", blk.a}, {"b_tau_per_kappa", blk.b},
                              {"c_tau2", blk.c}};
    json meta;
    meta["tool"] = "qnet";
    meta["tool_version"] = QNET_VERSION;
    meta["subcommand"] = "coeffs";
    meta["working_point"] = "kappa = 1, gamma = 0.1, bandwidth 1e-4 kappa";
    doc["metadata"] = meta;
    write_json_report(args, doc);
    return 0;
}

struct SweepArgs {
    std::optional<std::string> param;
    std::optional<double> from;
    std::optional<double> to;
    std::optional<int> points;
    bool log_scale = false;
    bool log_given = false;
};

int run_sweep(CommonArgs& args, const SweepArgs& flags) {
    RunConfig cfg = load_config(args);
    // per-field merge: every flag overrides its config counterpart
    struct {
        std::string param;
        double from, to;
        int points;
        bool log_scale;
    } sweep{flags.param.value_or(cfg.sweep_param), flags.from.value_or(cfg.sweep_from),
            flags.to.value_or(cfg.sweep_to), flags.points.value_or(cfg.sweep_points),
            flags.log_given ? flags.log_scale : cfg.sweep_log};
    if (sweep.param.empty() || !is_sweep_param(sweep.param))
        throw ValidationError("sweep: give --param out of inv_C, bandwidth2, tau_ns, delta, "
                              "kappa_prime_ratio, eta");
    if (sweep.points < 1) throw ValidationError("sweep: --points must be >= 1");
    if (sweep.log_scale && (sweep.from <= 0.0 || sweep.to <= 0.0))
        throw ValidationError("sweep: log scale needs positive bounds");

    std::vector<double> values(sweep.points);
    for (int i = 0; i < sweep.points; ++i) {
        const double t = sweep.points == 1 ? 0.0 : static_cast<double>(i) / (sweep.points - 1);
        values[i] = sweep.log_scale
                        ? sweep.from * std::pow(sweep.to / sweep.from, t)
                        : sweep.from + (sweep.to - sweep.from) * t;
    }

    const bool mc_sweep = sweep.param == "delta";
    std::vector<std::string> rows(values.size());
    parallel_for(values.size(), args.threads, [&](std::size_t i) {
        const RunConfig point = apply_sweep_value(cfg, sweep.param, values[i]);
        const NetworkSpec spec = point.network();
        const auto packet = point.packet();
        if (mc_sweep) {
            McOptions opts;
            opts.block_detuning_kappas = point.mc_block_detuning_kappas;
            const std::uint64_t point_seed =
                SplitMix64::for_sample(point.mc_seed, i).next_u64();
            const auto nodd = noisy_fidelity_mc(spec, packet, values[i], point.mc_samples,
                                                false, point_seed, opts);
            const auto dd = noisy_fidelity_mc(spec, packet, values[i], point.mc_samples, true,
                                              point_seed, opts);
            rows[i] = sweep.param + "," + fmt(values[i]) + "," + fmt(nodd.mean) + "," +
                      fmt(nodd.stderr_mean) + "," + fmt(dd.mean) + "," + fmt(dd.stderr_mean);
        } else {
            const auto rep = gate_fidelity(spec, packet);
            rows[i] = sweep.param + "," + fmt(values[i]) + "," + fmt(rep.fidelity) + "," +
                      fmt(rep.xi_star) + "," + fmt(rep.success_probability) + "," +
                      fmt(rep.heralded_fidelity);
        }
    });

    const std::string header =
        mc_sweep ? "param,value,f_nodd_mean,f_nodd_stderr,f_dd_mean,f_dd_stderr"
                 : "param,value,fidelity,xi_star_s,success_probability,heralded_fidelity";
    write_table(args, cfg, "sweep", header, rows);
    return 0;
}

int run_dd_verify(int n) {
    const auto res = verify_refocus(dd_sequence(n));
    if (res.refocused) {
        std::cout << "refocused; global phase: " << res.global_phase.str() << "\n";
        return 0;
    }
    std::cout << "not refocused\n";
    return 1;
}

int run_dd_fidelity(CommonArgs& args, bool without_dd) {
    const RunConfig cfg = load_config(args);
    const NetworkSpec spec = cfg.network();
    const auto packet = cfg.packet();
    McOptions opts;
    opts.block_detuning_kappas = cfg.mc_block_detuning_kappas;
    const auto res = noisy_fidelity_mc(spec, packet, cfg.mc_delta, cfg.mc_samples, !without_dd,
                                       cfg.mc_seed, opts);
    json doc;
    doc["mean"] = res.mean;
    doc["stderr"] = res.stderr_mean;
    doc["samples"] = res.samples;
    doc["seed"] = res.seed;
    doc["delta"] = cfg.mc_delta;
    doc["with_dd"] = !without_dd;
    doc["metadata"] = metadata_json(cfg, "dd fidelity");
    write_json_report(args, doc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-photon cavity-chain C-PHASE gate simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QNET_VERSION);

    CommonArgs common;
    int td_qubit = 0;
    int coeffs_n = 2;
    int verify_n = 2;
    bool without_dd = false;
    SweepArgs sweep;

    auto add_common = [&](CLI::App* sub, bool config_required = true) {
        auto* opt = sub->add_option("--config", common.config_path, "configuration file");
        if (config_required) opt->required();
        sub->add_option("--out", common.out_path, "output path (default stdout)");
        sub->add_option("--format", common.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", common.threads, "worker threads (0 = hardware)");
        sub->add_option("--n", common.n_override, "override register size");
        sub->add_option("--seed", common.seed_override, "override mc.seed");
        sub->add_option("--samples", common.samples_override, "override mc.samples");
        sub->add_option("--delta", common.delta_override, "override mc.delta");
    };

    auto* c_components = app.add_subcommand("components", "single-cavity scattering tables");
    add_common(c_components);
    auto* c_transfer = app.add_subcommand("transfer", "per-state network amplitudes");
    add_common(c_transfer);
    auto* c_timedomain = app.add_subcommand("timedomain", "one-sided cavity pulse dynamics");
    add_common(c_timedomain);
    c_timedomain->add_option("--q", td_qubit, "qubit state 0|1")->check(CLI::Range(0, 1));
    auto* c_fidelity = app.add_subcommand("fidelity", "gate fidelity report");
    add_common(c_fidelity);
    auto* c_coeffs = app.add_subcommand("coeffs", "error-budget coefficients");
    c_coeffs->add_option("--n", coeffs_n, "register size")->check(CLI::Range(2, 8));
    c_coeffs->add_option("--out", common.out_path, "output path (default stdout)");
    auto* c_sweep = app.add_subcommand("sweep", "parameter sweep");
    add_common(c_sweep);
    c_sweep->add_option("--param", sweep.param,
                        "inv_C|bandwidth2|tau_ns|delta|kappa_prime_ratio|eta");
    c_sweep->add_option("--from", sweep.from, "sweep start");
    c_sweep->add_option("--to", sweep.to, "sweep end");
    c_sweep->add_option("--points", sweep.points, "sweep points");
    auto* log_flag = c_sweep->add_flag("--log", sweep.log_scale, "logarithmic spacing");

    auto* c_dd = app.add_subcommand("dd", "dynamical decoupling");
    c_dd->require_subcommand(1);
    auto* c_verify = c_dd->add_subcommand("verify", "exact refocusing check");
    c_verify->add_option("--n", verify_n, "register size")->check(CLI::Range(2, 16));
    auto* c_ddfid = c_dd->add_subcommand("fidelity", "monte carlo fidelity under phase noise");
    add_common(c_ddfid);
    c_ddfid->add_flag("--without-dd", without_dd, "skip the refocusing sequence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (c_components->parsed()) return run_components(common);
        if (c_transfer->parsed()) return run_transfer(common);
        if (c_timedomain->parsed()) return run_timedomain(common, td_qubit);
        if (c_fidelity->parsed()) return run_fidelity(common);
        if (c_coeffs->parsed()) return run_coeffs(common, coeffs_n);
        if (c_sweep->parsed()) {
            sweep.log_given = log_flag->count() > 0;
            return run_sweep(common, sweep);
        }
        if (c_dd->parsed()) {
            if (c_verify->parsed()) return run_dd_verify(verify_n);
            if (c_ddfid->parsed()) return run_dd_fidelity(common, without_dd);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
