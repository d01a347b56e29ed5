#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cliffordt/harness/config.hpp"
#include "cliffordt/harness/experiments.hpp"
#include "cliffordt/harness/output.hpp"

namespace cliffordt::harness {

namespace fs = std::filesystem;

namespace detail {

inline std::string unit(const ExperimentConfig& cfg) { return std::string(entropy_unit(cfg.log_base)); }

inline json metadata(const ExperimentConfig& cfg, std::string_view command) {
    return json{{"command", command},
                {"log_base", std::string(to_string(cfg.log_base))},
                {"entropy_unit", unit(cfg)},
                {"config", to_json(cfg)}};
}

inline json record_json(const RealizationRecord& r) {
    return json{{"index", r.index},
                {"seed", r.seed},
                {"heated_entropy", r.heated_entropy},
                {"final_entropy", r.final_entropy},
                {"temporal_var", r.temporal_var},
                {"accepted", r.accepted},
                {"proposed", r.proposed},
                {"reached_zero", r.reached_zero},
                {"cap_exhausted", r.cap_exhausted}};
}

inline std::string family_cell(const Point& p) { return std::string(to_string(p.family)); }

inline void prepare(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.output_dir);
}

inline void plot_script(const ExperimentConfig& cfg, const std::string& name, const std::string& body) {
    if (!cfg.plot_scripts) return;
    write_text(cfg.output_dir / name,
               "import sys\nimport pandas as pd\nimport matplotlib\nmatplotlib.use('Agg')\n"
               "import matplotlib.pyplot as plt\n\n" +
                   body);
}

}  // namespace detail

/// Heating runs with per-gate entropy series. Writes heat_summary.csv,
/// heat_series.csv and heat_records.json.
inline std::vector<HeatPoint> cmd_heat(const ExperimentConfig& cfg) {
    detail::prepare(cfg);
    auto points = run_heat(cfg);
    const auto u = detail::unit(cfg);
    CsvWriter summary(cfg.output_dir / "heat_summary.csv",
                      {"N", "family", "n_T", "realization", "seed", "gates", "final_S_bar[" + u + "]",
                       "max_S_bar[" + u + "]", "log_base"});
    CsvWriter series(cfg.output_dir / "heat_series.csv",
                     {"N", "family", "n_T", "realization", "gate_index", "S_bar[" + u + "]"});
    json records = detail::metadata(cfg, "heat");
    records["points"] = json::array();
    for (const auto& hp : points) {
        json pj{{"N", hp.point.n_qubits}, {"family", detail::family_cell(hp.point)}, {"n_T", hp.point.n_t}};
        pj["realizations"] = json::array();
        for (const auto& r : hp.records) {
            summary.row_strings({cell(hp.point.n_qubits), detail::family_cell(hp.point), cell(hp.point.n_t),
                                 cell(r.index), cell(r.seed), cell(r.gate_count), cell(r.final_entropy),
                                 cell(r.max_entropy), std::string(to_string(cfg.log_base))});
            for (std::size_t k = 0; k < r.series.values.size(); ++k) {
                const std::size_t gate = std::min((k + 1) * cfg.observe_stride, r.gate_count);
                series.row_strings({cell(hp.point.n_qubits), detail::family_cell(hp.point), cell(hp.point.n_t),
                                    cell(r.index), cell(gate), cell(r.series.values[k])});
            }
            pj["realizations"].push_back({{"index", r.index},
                                          {"seed", r.seed},
                                          {"gates", r.gate_count},
                                          {"final_entropy", r.final_entropy},
                                          {"series", r.series.values},
                                          {"half_cut_spectrum", r.half_cut_spectrum.probabilities}});
        }
        records["points"].push_back(std::move(pj));
    }
    write_json(cfg.output_dir / "heat_records.json", records);
    detail::plot_script(cfg, "plot_heat.py",
                        "d = pd.read_csv(sys.argv[1] if len(sys.argv) > 1 else 'heat_series.csv')\n"
                        "col = [c for c in d.columns if c.startswith('S_bar')][0]\n"
                        "for (n, f, t), g in d.groupby(['N', 'family', 'n_T']):\n"
                        "    m = g.groupby('gate_index')[col].mean()\n"
                        "    plt.plot(m.index, m.values, label=f'N={n} {f} nT={t}')\n"
                        "plt.xlabel('gate'); plt.ylabel(col); plt.legend(); plt.savefig('heat.png', dpi=150)\n");
    return points;
}

/// Pooled spacing-ratio statistics vs the GUE surmise. Writes ess_dkl.csv,
/// ess_realizations.csv and one ess_hist_N<N>_<tag>.csv per point.
inline std::vector<EssPoint> cmd_ess(const ExperimentConfig& cfg) {
    detail::prepare(cfg);
    auto points = run_ess(cfg);
    CsvWriter table(cfg.output_dir / "ess_dkl.csv",
                    {"N", "family", "n_T", "n_T/N", "D_KL[nats]", "ratio_count", "degenerate_count",
                     "out_of_range_fraction", "dkl_fit[nats]", "bins", "r_max"});
    CsvWriter per(cfg.output_dir / "ess_realizations.csv",
                  {"N", "family", "n_T", "realization", "seed", "ratio_count", "degenerate_count", "D_KL[nats]"});
    for (const auto& ep : points) {
        const auto& p = ep.point;
        const std::string dkl = ep.d_kl ? cell(ep.d_kl->value) : "NA";
        const std::string fit = p.universal() ? cell(dkl_universal(p.n_qubits))
                                              : cell(dkl_fit(p.n_t, p.n_qubits).value);
        const std::string ntn = p.universal() ? "NA" : cell(static_cast<double>(p.n_t) / p.n_qubits);
        table.row_strings({cell(p.n_qubits), detail::family_cell(p), p.universal() ? "NA" : cell(p.n_t), ntn, dkl,
                           cell(ep.pooled.values.size()), cell(ep.pooled.degenerate_count),
                           ep.histogram ? cell(ep.histogram->out_of_range_fraction()) : "NA", fit,
                           cell(cfg.ess.bins), cell(cfg.ess.r_max)});
        for (std::size_t i = 0; i < ep.realizations.size(); ++i) {
            const auto& r = ep.realizations[i];
            per.row_strings({cell(p.n_qubits), detail::family_cell(p), cell(p.n_t), cell(i), cell(r.seed),
                             cell(r.ratio_count), cell(r.degenerate_count), r.d_kl ? cell(*r.d_kl) : "NA"});
        }
        if (ep.histogram) {
            const auto& h = *ep.histogram;
            CsvWriter hist(cfg.output_dir / ("ess_hist_N" + std::to_string(p.n_qubits) + "_" + p.tag() + ".csv"),
                           {"bin_lo", "bin_hi", "density", "gue_bin_density"});
            const auto q = reference_bins(gue_pdf, h.bin_edges).in_range;
            for (std::size_t b = 0; b < h.bins(); ++b) {
                hist.row_strings({cell(h.bin_edges[b]), cell(h.bin_edges[b + 1]), cell(h.densities[b]),
                                  cell(q[b] / h.width(b))});
            }
        }
    }
    detail::plot_script(cfg, "plot_ess.py",
                        "d = pd.read_csv('ess_dkl.csv')\n"
                        "d = d[d['family'] != 'universal']\n"
                        "for n, g in d.groupby('N'):\n"
                        "    plt.semilogy(g['n_T/N'], g['D_KL[nats]'], 'o-', label=f'N={n}')\n"
                        "plt.xlabel('n_T/N'); plt.ylabel('D_KL'); plt.legend(); plt.savefig('ess_dkl.png', dpi=150)\n");
    return points;
}

/// Temporal fluctuations under an infinite-temperature Clifford circuit.
/// Writes fluct.csv and fluct_records.json.
inline std::vector<FluctRow> cmd_fluct(const ExperimentConfig& cfg) {
    detail::prepare(cfg);
    auto rows = run_fluct(cfg);
    const auto u2 = detail::unit(cfg) + "^2";
    CsvWriter table(cfg.output_dir / "fluct.csv",
                    {"N", "family", "n_T", "realizations", "mean_var[" + u2 + "]", "std_error[" + u2 + "]",
                     "var_fit", "fluct_gates", "log_base"});
    json records = detail::metadata(cfg, "fluct");
    records["points"] = json::array();
    for (const auto& r : rows) {
        const auto& p = r.point;
        table.row_strings({cell(p.n_qubits), detail::family_cell(p), cell(p.n_t), cell(r.ensemble.realization_count()),
                           cell(r.ensemble.variance.mean), cell(r.ensemble.variance.std_error), cell(r.var_fit),
                           cell(cfg.fluct_gates_for(p.n_qubits)), std::string(to_string(cfg.log_base))});
        json pj{{"N", p.n_qubits}, {"family", detail::family_cell(p)}, {"n_T", p.n_t}, {"records", json::array()}};
        for (const auto& rec : r.ensemble.records) pj["records"].push_back(detail::record_json(rec));
        records["points"].push_back(std::move(pj));
    }
    write_json(cfg.output_dir / "fluct_records.json", records);
    detail::plot_script(cfg, "plot_fluct.py",
                        "d = pd.read_csv('fluct.csv')\n"
                        "col = [c for c in d.columns if c.startswith('mean_var')][0]\n"
                        "d = d[d['family'] != 'universal']\n"
                        "for n, g in d.groupby('N'):\n"
                        "    plt.semilogy(g['n_T'], g[col], 'o', label=f'N={n}')\n"
                        "    plt.semilogy(g['n_T'], g['var_fit'], '-')\n"
                        "plt.xlabel('n_T'); plt.ylabel(col); plt.legend(); plt.savefig('fluct.png', dpi=150)\n");
    return rows;
}

/// Key identifying a cached universal baseline.
inline json baseline_key(const ExperimentConfig& cfg, int n) {
    const auto c = to_json(cfg);
    return json{{"N", n},
                {"cooling", c["cooling"]},
                {"seed_base", cfg.seed_base},
                {"realizations", cfg.realizations},
                {"block_size", cfg.block_for(n)},
                {"log_base", std::string(to_string(cfg.log_base))}};
}

inline fs::path baseline_manifest_path(const ExperimentConfig& cfg) {
    return cfg.output_dir / "baseline_manifest.json";
}

inline json read_manifest(const fs::path& path) {
    if (!fs::exists(path)) return json{{"entries", json::array()}};
    std::ifstream in(path);
    json j;
    in >> j;
    return j;
}

/// Cached baseline for (N, cooling config, seed range), if present.
inline std::optional<UniversalBaseline> find_baseline(const ExperimentConfig& cfg, int n) {
    const auto manifest = read_manifest(baseline_manifest_path(cfg));
    const auto key = baseline_key(cfg, n);
    for (const auto& e : manifest.at("entries")) {
        if (e.at("key") == key) {
            return UniversalBaseline{n, e.at("mean_final_entropy").get<double>(),
                                     e.at("realizations").get<std::size_t>()};
        }
    }
    return std::nullopt;
}

inline void store_baseline(const ExperimentConfig& cfg, const UniversalBaseline& b) {
    auto manifest = read_manifest(baseline_manifest_path(cfg));
    const auto key = baseline_key(cfg, b.n_qubits);
    auto& entries = manifest["entries"];
    for (auto it = entries.begin(); it != entries.end(); ++it) {
        if (it->at("key") == key) {
            entries.erase(it);
            break;
        }
    }
    entries.push_back({{"key", key}, {"mean_final_entropy", b.mean_final_entropy}, {"realizations", b.realizations}});
    write_json(baseline_manifest_path(cfg), manifest);
}

struct CoolRow {
    CoolPoint cool;
    UniversalBaseline baseline;
    double reversibility = 0.0;
    double reversibility_std_error = 0.0;
    double reversibility_fit = 0.0;
};

/// Metropolis cooling with reversibility against the universal baseline.
/// Writes cool.csv, cool_series.csv and cool_records.json.
inline std::vector<CoolRow> cmd_cool(const ExperimentConfig& cfg) {
    detail::prepare(cfg);
    std::vector<CoolRow> rows;
    for (int n : cfg.n_qubits) {
        std::optional<CoolPoint> universal_run;
        auto baseline = find_baseline(cfg, n);
        if (!baseline || cfg.universal) {
            if (!baseline && cfg.baseline_mode == BaselineMode::Load) {
                throw UsageError("no universal baseline for N=" + std::to_string(n) + " in " +
                                 baseline_manifest_path(cfg).string() +
                                 "; reversibility needs the mean cooled entropy of universal circuits at the same N "
                                 "and cooling config (run cool with baseline_mode=compute)");
            }
            universal_run = cool_point(cfg, Point::universal_at(n));
            baseline = UniversalBaseline{n, universal_run->ensemble.final_entropy.mean, cfg.realizations};
            store_baseline(cfg, *baseline);
        }
        for (int t : cfg.n_t) {
            CoolRow row;
            row.cool = cool_point(cfg, Point::doped(n, t));
            row.baseline = *baseline;
            const auto finals = final_entropies(row.cool.ensemble);
            row.reversibility = reversibility(finals, row.baseline, n);
            row.reversibility_std_error = row.cool.ensemble.final_entropy.std_error / n;
            row.reversibility_fit = reversibility_fit(t, n);
            rows.push_back(std::move(row));
        }
        if (cfg.universal && universal_run) {
            CoolRow row;
            row.cool = std::move(*universal_run);
            row.baseline = *baseline;
            const auto finals = final_entropies(row.cool.ensemble);
            row.reversibility = reversibility(finals, row.baseline, n);
            row.reversibility_std_error = row.cool.ensemble.final_entropy.std_error / n;
            row.reversibility_fit = var_universal(n);
            rows.push_back(std::move(row));
        }
    }

    const auto u = detail::unit(cfg);
    CsvWriter table(cfg.output_dir / "cool.csv",
                    {"N", "family", "n_T", "realizations", "R_U[" + u + "/qubit]", "R_U_std_error",
                     "success_fraction", "success_std_error", "mean_final_S_bar[" + u + "]",
                     "baseline_S_bar[" + u + "]", "reversibility_fit", "cap_hits", "mean_proposed", "beta"});
    CsvWriter series(cfg.output_dir / "cool_series.csv",
                     {"N", "family", "n_T", "step", "mean_S_bar[" + u + "]"});
    json records = detail::metadata(cfg, "cool");
    records["points"] = json::array();
    for (const auto& r : rows) {
        const auto& p = r.cool.point;
        const auto& e = r.cool.ensemble;
        table.row_strings({cell(p.n_qubits), detail::family_cell(p), cell(p.n_t), cell(e.realization_count()),
                           cell(r.reversibility), cell(r.reversibility_std_error), cell(e.success_fraction),
                           cell(e.success_std_error), cell(e.final_entropy.mean), cell(r.baseline.mean_final_entropy),
                           cell(r.reversibility_fit), cell(r.cool.cap_hits), cell(r.cool.mean_proposed),
                           cell(cfg.cooling.beta)});
        for (std::size_t k = 0; k < r.cool.mean_series.size(); ++k) {
            series.row_strings({cell(p.n_qubits), detail::family_cell(p), cell(p.n_t), cell(k + 1),
                                cell(r.cool.mean_series[k])});
        }
        json pj{{"N", p.n_qubits}, {"family", detail::family_cell(p)}, {"n_T", p.n_t}, {"records", json::array()}};
        for (const auto& rec : e.records) pj["records"].push_back(detail::record_json(rec));
        records["points"].push_back(std::move(pj));
    }
    write_json(cfg.output_dir / "cool_records.json", records);
    detail::plot_script(cfg, "plot_cool.py",
                        "d = pd.read_csv('cool_series.csv')\n"
                        "col = [c for c in d.columns if c.startswith('mean_S_bar')][0]\n"
                        "for (n, f, t), g in d.groupby(['N', 'family', 'n_T']):\n"
                        "    plt.plot(g['step'], g[col], label=f'N={n} {f} nT={t}')\n"
                        "plt.xlabel('accepted gate'); plt.ylabel(col); plt.legend(); plt.savefig('cool.png', dpi=150)\n");
    return rows;
}

struct RenderOutput {
    int n_qubits = 0;
    int n_t = 0;
    std::size_t realization = 0;
    std::uint64_t seed = 0;
    std::array<fs::path, 3> files;
};

/// Three-stage amplitude images (Clifford block, T layer, Clifford block)
/// for every N, n_T and realization. Writes render_N<N>_nT<t>_r<i>_stage<k>.pgm.
inline std::vector<RenderOutput> cmd_render(const ExperimentConfig& cfg) {
    detail::prepare(cfg);
    for (int n : cfg.n_qubits) {
        if (n % 2 != 0) throw UsageError("render needs even N, got N=" + std::to_string(n));
    }
    std::vector<RenderOutput> out;
    for (int n : cfg.n_qubits) {
        for (int t : cfg.n_t) {
            const Point p = Point::doped(n, t);
            for (std::size_t i = 0; i < cfg.realizations; ++i) {
                RenderOutput r{n, t, i, realization_seed(cfg, p, Stream::Render, i), {}};
                const auto grids = render_stages(n, t, cfg.block_for(n), r.seed);
                for (int stage = 0; stage < 3; ++stage) {
                    const std::string stem = "render_N" + std::to_string(n) + "_nT" + std::to_string(t) + "_r" +
                                             std::to_string(i) + "_stage" + std::to_string(stage + 1) + ".pgm";
                    r.files[stage] = cfg.output_dir / stem;
                    const std::string comment = "N=" + std::to_string(n) + " family=" + std::string(to_string(p.family)) +
                                                " n_T=" + std::to_string(t) + " seed=" + std::to_string(r.seed) +
                                                " stage=" + std::to_string(stage + 1);
                    write_image(grids[stage], r.files[stage], cfg.render_scale, comment);
                }
                out.push_back(r);
            }
        }
    }
    return out;
}

struct FitsOutput {
    std::vector<FitsRow> rows;
    /// Least-squares log-log slopes over the requested N window and over
    /// N in [1e3, 1e5] (asymptotic order).
    std::map<std::string, std::pair<double, double>> slopes;
};

/// Reference-formula table. Writes fits.csv and fits_slopes.csv.
inline FitsOutput cmd_fits(const ExperimentConfig& cfg, int n_lo, int n_hi) {
    fs::create_directories(cfg.output_dir);
    FitsOutput out;
    out.rows = fits_table(n_lo, n_hi);
    CsvWriter table(cfg.output_dir / "fits.csv",
                    {"N", "dkl_universal[nats]", "var_universal", "nT_min_ess", "nT_min_ess_solved", "nT_min_var",
                     "nT_min_var_solved", "nT_min_rev", "reversibility_fit_at_nT_min_var"});
    for (const auto& r : out.rows) {
        table.row_strings({cell(r.n_qubits), cell(r.dkl_universal), cell(r.var_universal), cell(r.min_ess),
                           cell(r.min_ess_solved), cell(r.min_var), cell(r.min_var_solved), cell(r.min_rev),
                           cell(r.reversibility_fit_at_min_v)});
    }
    CsvWriter slopes(cfg.output_dir / "fits_slopes.csv", {"kind", "slope_window", "slope_asymptotic", "N_lo", "N_hi"});
    for (auto kind : {DopingKind::ESS, DopingKind::Variance, DopingKind::Reversibility}) {
        const double w = n_hi > n_lo ? growth_order_slope(kind, std::max(1, n_lo), n_hi) : std::nan("");
        const double a = growth_order_slope(kind, 1000, 100000);
        out.slopes[std::string(to_string(kind))] = {w, a};
        slopes.row_strings({std::string(to_string(kind)), cell(w), cell(a), cell(n_lo), cell(n_hi)});
    }
    return out;
}

}  // namespace cliffordt::harness
