// Acceptance checks, one line per criterion.
//
//   acceptance          run all criteria
//   acceptance 3 5      run criteria 3 and 5
//
// Exit status is non-zero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "cliffordt/cliffordt.hpp"
#include "cliffordt/harness/commands.hpp"
#include "cliffordt/unitary_oracle.hpp"

using namespace cliffordt;
using namespace cliffordt::harness;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

ExperimentConfig desk(std::vector<int> n, std::vector<int> n_t, bool universal, std::size_t realizations) {
    ExperimentConfig c;
    c.n_qubits = std::move(n);
    c.n_t = std::move(n_t);
    c.universal = universal;
    c.realizations = realizations;
    c.output_dir = fs::temp_directory_path() / "cliffordt_acceptance";
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void clifford_reversibility(Verdict& v) {
    auto cfg = desk({8}, {0}, false, 20);
    const auto point = cool_point(cfg, Point::doped(8, 0));
    std::size_t ok = 0;
    for (const auto& r : point.ensemble.records) ok += r.final_entropy < 1e-9;
    const double frac = static_cast<double>(ok) / static_cast<double>(point.ensemble.records.size());
    v.detail << "N=8 n_T=0: " << ok << "/20 runs reach S_bar < 1e-9 (fraction " << frac << ", need >= 0.9)";
    v.check(frac >= 0.9, "success fraction");
}

void universal_irreversibility(Verdict& v) {
    auto cfg = desk({10}, {}, true, 10);
    const auto point = cool_point(cfg, Point::universal_at(10));
    double worst = 1e9;
    for (const auto& r : point.ensemble.records) worst = std::min(worst, r.final_entropy / r.heated_entropy);
    v.detail << "N=10 universal, 10 runs: min final/saturated S_bar = " << worst << " (need >= 0.95)";
    v.check(worst >= 0.95, "final entropy ratio");
}

void ess_crossover(Verdict& v) {
    const auto pts = run_ess(desk({12}, {2, 26}, true, 50));
    const double d2 = pts[0].d_kl ? pts[0].d_kl->value : std::nan("");
    const double d26 = pts[1].d_kl ? pts[1].d_kl->value : std::nan("");
    const double du = pts[2].d_kl ? pts[2].d_kl->value : std::nan("");
    v.detail << "N=12 D_KL: n_T=2 " << d2 << ", n_T=26 " << d26 << ", universal " << du << "; |26/uni - 1| = "
             << std::abs(d26 / du - 1.0) << " (need <= 0.3), 2/uni = " << d2 / du << " (need >= 3)";
    v.check(std::abs(d26 / du - 1.0) <= 0.3, "n_T=26 within 30% of universal");
    v.check(d2 >= 3.0 * du, "n_T=2 at least 3x universal");
}

void universal_fluctuations(Verdict& v) {
    for (int n : {8, 10}) {
        const auto rows = run_fluct(desk({n}, {}, true, 50));
        const double var = rows[0].ensemble.variance.mean;
        const double ref = var_universal(n);
        v.detail << "N=" << n << " Var " << var << " vs 0.2/d^1.25 = " << ref << " (ratio " << var / ref << "); ";
        v.check(var > ref / 3.0 && var < 3.0 * ref, "N=" + std::to_string(n) + " within factor 3");
    }
}

void doping_monotonicity(Verdict& v) {
    const std::vector<int> dopings{0, 4, 8, 16};
    const auto fl = run_fluct(desk({8}, dopings, false, 50));
    auto cool_cfg = desk({8}, dopings, false, 20);
    std::vector<EnsembleResult> cooled;
    for (int t : dopings) cooled.push_back(cool_point(cool_cfg, Point::doped(8, t)).ensemble);
    v.detail << "N=8 Var:";
    for (const auto& r : fl) v.detail << ' ' << r.ensemble.variance.mean;
    v.detail << "; success:";
    for (const auto& e : cooled) v.detail << ' ' << e.success_fraction;
    for (std::size_t i = 0; i + 1 < dopings.size(); ++i) {
        const auto& a = fl[i].ensemble.variance;
        const auto& b = fl[i + 1].ensemble.variance;
        v.check(b.mean <= a.mean + std::max(a.std_error, b.std_error), "Var at n_T=" + std::to_string(dopings[i + 1]));
        const double se = std::max(cooled[i].success_std_error, cooled[i + 1].success_std_error);
        v.check(cooled[i + 1].success_fraction <= cooled[i].success_fraction + se,
                "success at n_T=" + std::to_string(dopings[i + 1]));
    }
}

void formula_reproduction(Verdict& v) {
    auto cfg = desk({8}, {0}, false, 1);
    const auto res = cmd_fits(cfg, 8, 40);
    double worst_var = 0.0;
    double worst_rev = 0.0;
    int worst_ess_gap = 0;
    int worst_ess_n = 0;
    bool ess_line = true;
    for (const auto& r : res.rows) {
        const double n = r.n_qubits;
        ess_line = ess_line && r.min_ess == n + 2.0;
        worst_var = std::max(worst_var, std::abs(r.min_var - (2.29 * n - 5.0 / 3.0)));
        worst_rev = std::max(worst_rev, std::abs(r.min_rev - 0.7 * std::pow(2.29 * n - 5.0 / 3.0, 1.4)));
        const int gap = r.min_ess_solved - (r.n_qubits + 2);
        if (std::abs(gap) > std::abs(worst_ess_gap)) {
            worst_ess_gap = gap;
            worst_ess_n = r.n_qubits;
        }
    }
    v.detail << "N+2 column exact: " << (ess_line ? "yes" : "no") << "; max |var - formula| " << worst_var
             << "; max |rev - formula| " << worst_rev << "; worst ESS solve - (N+2) = " << worst_ess_gap << " at N="
             << worst_ess_n << " (need |.| <= 1)";
    v.check(ess_line, "ESS column");
    v.check(worst_var <= 1e-12, "variance column");
    v.check(worst_rev <= 1e-12, "reversibility column");
    v.check(std::abs(worst_ess_gap) <= 1, "ESS inequality solve within 1 of N+2");
}

template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

void property_suites(Verdict& v) {
    RandomEngine rng(7);

    auto s = new_zero_state(10);
    apply_circuit(s, random_universal_block(10, 10000, rng));
    const double norm_dev = std::abs(s.norm() - 1.0);
    v.check(norm_dev < 1e-9, "norm conservation");

    double lu = 0.0;
    {
        auto w = s;
        std::vector<double> before;
        for (int k = 1; k < 10; ++k) before.push_back(cut_entropy(w, k));
        for (std::uint32_t q = 0; q < 10; ++q) {
            for (const auto& g : {Gate::h(q), Gate::s(q), Gate::t(q)}) {
                apply_gate(w, g);
                for (int k = 1; k < 10; ++k) lu = std::max(lu, std::abs(cut_entropy(w, k) - before[k - 1]));
            }
        }
    }
    v.check(lu < 1e-10, "local-unitary invariance");

    double flat = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        auto c = new_zero_state(8);
        apply_circuit(c, random_clifford_block(8, 640, rng));
        for (int k = 1; k < 8; ++k) {
            const auto sp = schmidt_spectrum(c, {k});
            int rank = 0;
            for (double p : sp.probabilities) rank += p > 1e-6;
            const double level = 1.0 / rank;
            const bool pow2 = (rank & (rank - 1)) == 0;
            if (!pow2) flat = 1.0;
            for (double p : sp.probabilities) {
                if (p > 1e-6) flat = std::max(flat, std::abs(p - level));
            }
        }
    }
    v.check(flat < 1e-9, "stabilizer flat spectrum");

    double oracle = 0.0;
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            Circuit c;
            for (int g = 0; g < 100; ++g) {
                c.push(n == 1 ? (uniform_index(rng, 2) ? Gate::h(0) : Gate::t(0))
                              : random_gate(n, GateSet::Universal, rng));
            }
            const auto u = circuit_unitary_oracle(c, n);
            auto st = new_zero_state(n);
            apply_circuit(st, c);
            for (std::size_t i = 0; i < st.dim(); ++i) oracle = std::max(oracle, std::abs(u(i, 0) - st[i]));
        }
    }
    v.check(oracle < 1e-12, "kernel vs dense oracle");

    double min_kl = 1.0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> p(10);
        std::vector<double> q(10);
        double sp = 0.0;
        double sq = 0.0;
        for (int i = 0; i < 10; ++i) {
            p[i] = uniform_unit(rng);
            q[i] = 1e-9 + uniform_unit(rng);
            sp += p[i];
            sq += q[i];
        }
        for (auto& x : p) x /= sp;
        for (auto& x : q) x /= sq;
        min_kl = std::min(min_kl, kl_divergence(p, q).value);
    }
    v.check(min_kl >= 0.0, "KL non-negativity");

    const double total = simpson(gue_pdf, 0.0, 10.0, 100000) + simpson(gue_pdf, 10.0, 1000.0, 100000) +
                         1.0 / (3.0 * wigner_dyson_z(2) * 1e9);
    v.check(std::abs(total - 1.0) < 1e-3, "surmise normalization");
    const double p1 = std::abs(gue_pdf(1.0) - std::numbers::sqrt3 / std::numbers::pi);
    v.check(p1 < 1e-9, "P(1) = sqrt(3)/pi");

    const auto sp = schmidt_spectrum(s, {5});
    auto scaled = sp;
    for (auto& x : scaled.probabilities) x *= 8.0;
    v.check(spacing_ratios(sp).values == spacing_ratios(scaled).values, "spacing-ratio scale invariance");

    auto r = new_zero_state(8);
    apply_circuit(r, random_clifford_block(8, 640, rng));
    const auto before = grid_pixels(amplitude_grid(r), ImageScale::Linear);
    for (std::uint32_t q = 0; q < 8; ++q) apply_gate(r, Gate::t(q));
    v.check(grid_pixels(amplitude_grid(r), ImageScale::Linear) == before, "T-layer colormap byte identity");

    v.detail << "norm dev " << norm_dev << ", local-unitary dS " << lu << ", flat-spectrum dev " << flat
             << ", oracle dev " << oracle << ", min KL " << min_kl << ", surmise mass " << total << ", |P(1) - sqrt3/pi| "
             << p1;
}

void fig1_render(Verdict& v) {
    auto cfg = desk({16}, {5, 20}, false, 5);
    cfg.output_dir = fs::temp_directory_path() / "cliffordt_acceptance_render";
    fs::remove_all(cfg.output_dir);
    const auto out = cmd_render(cfg);
    std::size_t same = 0;
    std::size_t differ = 0;
    for (const auto& r : out) {
        std::array<std::string, 3> body;
        for (int k = 0; k < 3; ++k) {
            const auto bytes = slurp(r.files[k]);
            const auto comment_end = bytes.find('\n', 3);
            const auto dims_end = bytes.find('\n', comment_end + 1);
            const auto dims = bytes.substr(comment_end + 1, dims_end - comment_end - 1);
            v.check(dims == "256 256", "grid size " + dims);
            v.check(bytes.size() == dims_end + 5 + 65536, "pixel payload size");
            body[k] = bytes.substr(comment_end);
        }
        const bool same12 = body[0] == body[1];
        const bool diff3 = body[0] != body[2];
        same += same12;
        differ += diff3;
        const std::string tag = " at n_T=" + std::to_string(r.n_t) + " seed " + std::to_string(r.realization);
        v.check(same12, "stage 1 vs 2" + tag);
        v.check(diff3, "stage 3" + tag);
    }
    v.detail << out.size() << " renders at n_T in {5, 20}, 256x256 P5; stage1==stage2 in " << same
             << ", stage3 differs in " << differ;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"Clifford reversibility", clifford_reversibility},
        {"universal irreversibility", universal_irreversibility},
        {"ESS crossover", ess_crossover},
        {"universal fluctuation scaling", universal_fluctuations},
        {"doping monotonicity", doping_monotonicity},
        {"formula reproduction", formula_reproduction},
        {"property suites", property_suites},
        {"amplitude image reproduction", fig1_render},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c < 1 || c > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "unknown criterion '%s' (expected 1..%zu)\n", argv[i], criteria.size());
            return 2;
        }
        selected.insert(c);
    }
    if (selected.empty()) {
        for (int c = 1; c <= static_cast<int>(criteria.size()); ++c) selected.insert(c);
    }
    int failures = 0;
    for (int c : selected) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[c - 1].second(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "[error: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d %s: %s (%.1fs) %s\n", c, criteria[c - 1].first.c_str(), v.pass ? "PASS" : "FAIL",
                    secs, v.detail.str().c_str());
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
