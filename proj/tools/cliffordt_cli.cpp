// Command-line front end for the doped-circuit experiments.
//
//   cliffordt heat   --n 8 --nt 0 --realizations 1 --out runs/heat
//   cliffordt ess    --n 12 --nt 2 --nt 26 --universal
//   cliffordt fluct  --config fluct.json
//   cliffordt cool   --n 8 --nt 0 --nt 4 --realizations 20
//   cliffordt render --n 16 --nt 5 --nt 20 --realizations 1
//   cliffordt fits   --n 8 --n 40

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cliffordt/harness/commands.hpp"

namespace {

using namespace cliffordt;
using namespace cliffordt::harness;

struct Overrides {
    std::string config_path;
    std::vector<int> n;
    std::vector<int> nt;
    bool universal = false;
    std::optional<std::size_t> realizations;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> log_base;
    std::optional<std::size_t> parallelism;
    std::optional<std::size_t> stride;
    std::optional<double> beta;
    std::optional<std::size_t> budget;
    std::optional<int> block_size;
    std::optional<std::string> scale;
    std::optional<std::string> baseline;
    bool plot_scripts = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--n", o.n, "qubit count (repeatable)");
    cmd->add_option("--nt", o.nt, "T-gate doping n_T (repeatable)");
    cmd->add_flag("--universal", o.universal, "also run universal circuits");
    cmd->add_option("--realizations", o.realizations, "realizations per point");
    cmd->add_option("--seed", o.seed, "64-bit base seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--log-base", o.log_base, "entropy log base")->check(CLI::IsMember({"2", "e"}));
    cmd->add_option("--parallelism", o.parallelism, "worker threads (0 = all cores)");
    cmd->add_option("--stride", o.stride, "record heating entropy every k gates");
    cmd->add_option("--beta", o.beta, "cooling inverse temperature");
    cmd->add_option("--budget", o.budget, "accepted cooling gates (default 40 N^2)");
    cmd->add_option("--block-size", o.block_size, "Clifford block size (default 10 N^2)");
    cmd->add_option("--scale", o.scale, "render scale")->check(CLI::IsMember({"linear", "log"}));
    cmd->add_option("--baseline", o.baseline, "universal baseline mode")->check(CLI::IsMember({"compute", "load"}));
    cmd->add_flag("--plot-scripts", o.plot_scripts, "emit matplotlib scripts next to the CSVs");
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (!o.n.empty()) c.n_qubits = o.n;
    if (!o.nt.empty()) c.n_t = o.nt;
    if (o.universal) c.universal = true;
    if (o.realizations) c.realizations = *o.realizations;
    if (o.seed) c.seed_base = *o.seed;
    if (o.out) c.output_dir = *o.out;
    if (o.log_base) c.log_base = parse_log_base(*o.log_base);
    if (o.parallelism) c.parallelism = *o.parallelism;
    if (o.stride) c.observe_stride = *o.stride;
    if (o.beta) c.cooling.beta = *o.beta;
    if (o.budget) c.cooling.accepted_budget = *o.budget;
    if (o.block_size) c.block_size = *o.block_size;
    if (o.scale) c.render_scale = *o.scale == "log" ? ImageScale::Log : ImageScale::Linear;
    if (o.baseline) c.baseline_mode = *o.baseline == "load" ? BaselineMode::Load : BaselineMode::Compute;
    if (o.plot_scripts) c.plot_scripts = true;
    c.cooling.log_base = c.log_base;
    c.validate();
    return c;
}

void write_config_echo(const ExperimentConfig& c, const std::string& command) {
    std::filesystem::create_directories(c.output_dir);
    write_json(c.output_dir / (command + "_config.json"), to_json(c));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Doped Clifford+T circuit entanglement experiments"};
    app.require_subcommand(1);
    Overrides o;
    auto* heat = app.add_subcommand("heat", "entanglement heating with per-gate average entropy");
    auto* ess = app.add_subcommand("ess", "entanglement spectrum statistics and KL divergence from GUE");
    auto* fluct = app.add_subcommand("fluct", "temporal entropy fluctuations at infinite temperature");
    auto* cool = app.add_subcommand("cool", "Metropolis entanglement cooling and reversibility");
    auto* render = app.add_subcommand("render", "three-stage amplitude images (PGM)");
    auto* fits = app.add_subcommand("fits", "reference formulas and minimum-doping table");
    for (auto* cmd : {heat, ess, fluct, cool, render, fits}) add_common(cmd, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fits->parsed()) {
            Overrides fo = o;
            fo.n.clear();
            const ExperimentConfig c = resolve(fo);
            int lo = 8;
            int hi = 40;
            if (!o.n.empty()) {
                lo = *std::min_element(o.n.begin(), o.n.end());
                hi = *std::max_element(o.n.begin(), o.n.end());
            }
            const auto res = cmd_fits(c, lo, hi);
            std::printf("N  nT_min_ess(N+2)  solved  nT_min_var  solved  nT_min_rev\n");
            for (const auto& r : res.rows) {
                std::printf("%-3d %-16g %-7d %-11.4f %-7d %.4f\n", r.n_qubits, r.min_ess, r.min_ess_solved, r.min_var,
                            r.min_var_solved, r.min_rev);
            }
            for (const auto& [kind, s] : res.slopes) {
                std::printf("growth slope %-13s window %.4f asymptotic %.4f\n", kind.c_str(), s.first, s.second);
            }
            return 0;
        }

        const ExperimentConfig c = resolve(o);
        if (heat->parsed()) {
            write_config_echo(c, "heat");
            for (const auto& p : cmd_heat(c)) {
                double mean_final = 0.0;
                for (const auto& r : p.records) mean_final += r.final_entropy / p.records.size();
                std::printf("N=%d %s: %zu realizations, mean final S_bar %.6f %s\n", p.point.n_qubits,
                            p.point.tag().c_str(), p.records.size(), mean_final,
                            std::string(entropy_unit(c.log_base)).c_str());
            }
        } else if (ess->parsed()) {
            write_config_echo(c, "ess");
            for (const auto& p : cmd_ess(c)) {
                if (p.d_kl) {
                    std::printf("N=%d %s: D_KL %.6f over %zu ratios (%zu degenerate gaps)%s%s\n", p.point.n_qubits,
                                p.point.tag().c_str(), p.d_kl->value, p.pooled.values.size(),
                                p.pooled.degenerate_count, p.d_kl->diagnostic.empty() ? "" : ": ",
                                p.d_kl->diagnostic.c_str());
                } else {
                    std::printf("N=%d %s: no spacing ratios\n", p.point.n_qubits, p.point.tag().c_str());
                }
            }
        } else if (fluct->parsed()) {
            write_config_echo(c, "fluct");
            for (const auto& r : cmd_fluct(c)) {
                std::printf("N=%d %s: mean Var %.4e +- %.1e (fit %.4e)\n", r.point.n_qubits, r.point.tag().c_str(),
                            r.ensemble.variance.mean, r.ensemble.variance.std_error, r.var_fit);
            }
        } else if (cool->parsed()) {
            write_config_echo(c, "cool");
            for (const auto& r : cmd_cool(c)) {
                std::printf("N=%d %s: R_U %.4f +- %.4f, success %.2f, cap hits %zu (fit %.4f)\n",
                            r.cool.point.n_qubits, r.cool.point.tag().c_str(), r.reversibility,
                            r.reversibility_std_error, r.cool.ensemble.success_fraction, r.cool.cap_hits,
                            r.reversibility_fit);
            }
        } else if (render->parsed()) {
            write_config_echo(c, "render");
            for (const auto& r : cmd_render(c)) {
                for (const auto& f : r.files) std::printf("%s\n", f.string().c_str());
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
