// Ensemble-level checks that run the full heat / ESS / fluctuation /
// cooling pipelines at desk scale.

#include <gtest/gtest.h>

#include <cmath>

#include "cliffordt/harness/commands.hpp"

using namespace cliffordt;
using namespace cliffordt::harness;

namespace {

ExperimentConfig desk(std::vector<int> n, std::vector<int> n_t, bool universal, std::size_t realizations) {
    ExperimentConfig c;
    c.n_qubits = std::move(n);
    c.n_t = std::move(n_t);
    c.universal = universal;
    c.realizations = realizations;
    return c;
}

double per_realization_se(const EssPoint& p) {
    std::vector<double> xs;
    for (const auto& r : p.realizations) {
        if (r.d_kl && std::isfinite(*r.d_kl)) xs.push_back(*r.d_kl);
    }
    return sample_stats(xs).std_error;
}

}  // namespace

TEST(EssPipeline, CliffordFarAboveUniversal) {
    const auto pts = run_ess(desk({12}, {0}, true, 10));
    ASSERT_EQ(pts.size(), 2u);
    ASSERT_TRUE(pts[0].d_kl && pts[1].d_kl);
    EXPECT_GT(pts[0].pooled.degenerate_count, 0u);
    EXPECT_GT(pts[0].d_kl->value, 10.0 * pts[1].d_kl->value);
}

TEST(EssPipeline, DivergenceDecreasesWithDoping) {
    const int n = 10;
    const auto pts = run_ess(desk({n}, {0, n / 2, 2 * n}, true, 50));
    ASSERT_EQ(pts.size(), 4u);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        ASSERT_TRUE(pts[i].d_kl && pts[i + 1].d_kl);
        const double gap = pts[i].d_kl->value - pts[i + 1].d_kl->value;
        const double se = std::max(per_realization_se(pts[i]), per_realization_se(pts[i + 1]));
        EXPECT_GT(gap, se) << pts[i].point.tag() << " vs " << pts[i + 1].point.tag() << ": "
                           << pts[i].d_kl->value << " vs " << pts[i + 1].d_kl->value;
    }
}

TEST(EssPipeline, FitMatchesUniversalDivergence) {
    const int n = 12;
    const auto pts = run_ess(desk({n}, {}, true, 50));
    ASSERT_TRUE(pts[0].d_kl);
    const double fit = dkl_fit(4 * n, n).value;
    const double measured = pts[0].d_kl->value;
    EXPECT_NEAR(measured / fit, 1.0, 0.3) << "measured " << measured << " fit " << fit;
}

TEST(FluctPipeline, MatchesFitWithinFactorThree) {
    for (int n : {8, 10}) {
        const auto rows = run_fluct(desk({n}, {0, 2 * n}, false, 50));
        for (const auto& r : rows) {
            const double ratio = r.ensemble.variance.mean / r.var_fit;
            EXPECT_GT(ratio, 1.0 / 3.0) << "N=" << n << " " << r.point.tag();
            EXPECT_LT(ratio, 3.0) << "N=" << n << " " << r.point.tag();
        }
    }
}

TEST(FluctPipeline, DecreasesWithDoping) {
    const int n = 8;
    const auto rows = run_fluct(desk({n}, {0, n, 3 * n}, false, 50));
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& a = rows[i].ensemble.variance;
        const auto& b = rows[i + 1].ensemble.variance;
        EXPECT_GT(a.mean - b.mean, std::max(a.std_error, b.std_error));
    }
}

TEST(FluctPipeline, DisjointSeedRangesAgree) {
    auto a = desk({8}, {4}, false, 40);
    auto b = a;
    b.seed_base = 1000;
    const auto ra = run_fluct(a)[0].ensemble.variance;
    const auto rb = run_fluct(b)[0].ensemble.variance;
    EXPECT_LT(std::abs(ra.mean - rb.mean), 3.0 * std::hypot(ra.std_error, rb.std_error));
}

TEST(CoolPipeline, UniversalCircuitsDoNotDisentangle) {
    const int n = 8;
    auto base_cfg = desk({n}, {}, true, 10);
    const auto base = cool_point(base_cfg, Point::universal_at(n));
    auto sample_cfg = base_cfg;
    sample_cfg.seed_base = 2;
    const auto sample = cool_point(sample_cfg, Point::universal_at(n));
    EXPECT_EQ(sample.ensemble.success_fraction, 0.0);
    const UniversalBaseline baseline{n, base.ensemble.final_entropy.mean, 10};
    const double r = reversibility(final_entropies(sample.ensemble), baseline, n);
    const double se = std::hypot(base.ensemble.final_entropy.std_error, sample.ensemble.final_entropy.std_error) / n;
    EXPECT_LT(std::abs(r), 2.0 * se) << "R_U " << r;
}

TEST(CoolPipeline, ReversibilityBetweenLimits) {
    const int n = 8;
    auto cfg = desk({n}, {0, 4, 16}, true, 20);
    cfg.output_dir = std::filesystem::temp_directory_path() / "cliffordt_pipeline_cool";
    std::filesystem::remove_all(cfg.output_dir);
    const auto rows = cmd_cool(cfg);
    ASSERT_EQ(rows.size(), 4u);
    const double upper = rows[0].baseline.mean_final_entropy / n;
    for (const auto& r : rows) EXPECT_GE(r.reversibility + r.reversibility_std_error, 0.0) << r.cool.point.tag();
    const auto& t4 = rows[1];
    EXPECT_EQ(t4.cool.point.n_t, 4);
    EXPECT_GT(t4.reversibility, 0.0);
    EXPECT_LT(t4.reversibility, upper);
}

TEST(RenderPipeline, SingleTLayerChangesScrambledImage) {
    auto cfg = desk({16}, {1}, false, 5);
    cfg.output_dir = std::filesystem::temp_directory_path() / "cliffordt_pipeline_render";
    std::filesystem::remove_all(cfg.output_dir);
    for (std::size_t i = 0; i < cfg.realizations; ++i) {
        const auto seed = realization_seed(cfg, Point::doped(16, 1), Stream::Render, i);
        const auto g = render_stages(16, 1, cfg.block_for(16), seed);
        EXPECT_EQ(grid_pixels(g[0], ImageScale::Linear), grid_pixels(g[1], ImageScale::Linear));
        EXPECT_NE(grid_pixels(g[0], ImageScale::Linear), grid_pixels(g[2], ImageScale::Linear)) << "seed " << i;
    }
}
