// Copyright 2026 The mipt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mipt/campaign.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace mipt;

namespace {

std::string temp_prefix(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / "mipt_campaign_test";
    std::filesystem::create_directories(dir);
    std::string p = (dir / name).string();
    for (const char *ext : {".samples.csv", ".coherent.csv", ".free_energy.csv", ".summary.json", ".progress.json",
                            ".sweep.csv"}) {
        std::filesystem::remove(p + ext);
    }
    return p;
}

std::string slurp(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

CampaignConfig small_entropy(const std::string &name) {
    CampaignConfig c;
    c.kind = CampaignKind::Entropy;
    c.L_x = 8;
    c.t_over_pi = 0.25;
    c.p_meas = 0.6;
    c.samples = 40;
    c.snapshots_per_sample = 2;
    c.seed = 7;
    c.out = temp_prefix(name);
    c.workers = 1;
    c.commit_every = 8;
    return c;
}

std::string error_field(const CampaignConfig &c) {
    try {
        c.validate();
    } catch (const ConfigError &e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST(campaign, key_values_round_trip) {
    CampaignConfig c;
    c.kind = CampaignKind::CoherentInfo;
    c.boundary = Boundary::Open;
    c.t_over_pi = 0.13;
    c.renyi = {1, std::numeric_limits<double>::infinity()};
    c.p_meas_grid = {0.4, 0.5};
    c.L_x_grid = {8, 16};
    CampaignConfig back = parse_key_values(to_key_values(c));
    EXPECT_EQ(to_key_values(back), to_key_values(c));
    EXPECT_EQ(back.kind, CampaignKind::CoherentInfo);
    EXPECT_EQ(back.renyi.size(), 2u);
    EXPECT_TRUE(std::isinf(back.renyi[1]));
    std::string text = to_key_values(c);
    EXPECT_EQ(config_keys().size(), (size_t)std::count(text.begin(), text.end(), '\n'));
}

TEST(campaign, parse_errors_name_the_field) {
    auto field_of = [](const std::string &text) {
        try {
            parse_key_values(text);
        } catch (const ConfigError &e) {
            return e.field();
        }
        return std::string();
    };
    EXPECT_EQ(field_of("L_x = eight"), "L_x");
    EXPECT_EQ(field_of("samples = -3"), "samples");
    EXPECT_EQ(field_of("t_over_pi = 0.1x"), "t_over_pi");
    EXPECT_EQ(field_of("resume = maybe"), "resume");
    EXPECT_EQ(field_of("no_such_key = 1"), "no_such_key");
    EXPECT_EQ(field_of("kind = magic"), "kind");
    EXPECT_EQ(field_of("boundary = twisted"), "boundary");
    EXPECT_EQ(field_of("renyi = 1,0.x"), "renyi");
    EXPECT_EQ(field_of("just words"), "line 1");
    EXPECT_EQ(field_of("# comment only\n\nseed = 3 # trailing"), "");
}

TEST(campaign, validate_rejects_bad_values) {
    CampaignConfig c;
    EXPECT_EQ(error_field(c), "");
    c.L_x = 2;
    EXPECT_EQ(error_field(c), "L_x");
    c = {};
    c.t_over_pi = 0.3;
    EXPECT_EQ(error_field(c), "t_over_pi");
    c = {};
    c.t_over_pi = 0;
    EXPECT_EQ(error_field(c), "t_over_pi");
    c = {};
    c.p_meas = 1.5;
    EXPECT_EQ(error_field(c), "p_meas");
    c = {};
    c.kind = CampaignKind::CoherentInfo;
    EXPECT_EQ(error_field(c), "boundary");
    c = {};
    c.backend = "clifford";
    c.t_over_pi = 0.2;
    EXPECT_EQ(error_field(c), "backend");
    c = {};
    c.backend = "quantum";
    EXPECT_EQ(error_field(c), "backend");
    c = {};
    c.kind = CampaignKind::FreeEnergy;
    c.gaussian_engine = "modes";
    EXPECT_EQ(error_field(c), "gaussian_engine");
    c = {};
    c.max_order = 6;
    EXPECT_EQ(error_field(c), "max_order");
    c = {};
    c.fit_lo = 0.9;
    EXPECT_EQ(error_field(c), "fit_hi");
    c = {};
    c.renyi = {};
    EXPECT_EQ(error_field(c), "renyi");
    c = {};
    c.p_meas_grid = {0.5, -0.1};
    EXPECT_EQ(error_field(c), "p_meas_grid");
    c = {};
    c.backend = "exact";
    c.L_x = 20;
    EXPECT_THROW(resolve(c), ConfigError);
}

TEST(campaign, resolve_defaults) {
    CampaignConfig c;
    c.L_x = 16;
    ResolvedCampaign rc = resolve(c);
    EXPECT_EQ(rc.backend, BackendKind::Clifford);
    EXPECT_EQ(rc.spec.L_y, 64);
    EXPECT_EQ(rc.snapshot_every, 8);
    EXPECT_EQ(rc.cuts, cut_list(16, 1, true));
    c.t_over_pi = 0.14;
    EXPECT_EQ(resolve(c).backend, BackendKind::Gaussian);
    c.L_x = 8;
    EXPECT_EQ(resolve(c).backend, BackendKind::Exact);
    c.kind = CampaignKind::CoherentInfo;
    c.boundary = Boundary::Open;
    EXPECT_EQ(resolve(c).spec.L_y, 7);
    EXPECT_EQ(resolve(c).spec.protocol, Protocol::SurfaceCode);
}

TEST(campaign, zero_samples_writes_header_only) {
    CampaignConfig c = small_entropy("zero");
    c.samples = 0;
    CampaignSummary s = run_campaign(c);
    EXPECT_TRUE(s.empty);
    EXPECT_EQ(s.n_samples, 0u);
    EXPECT_EQ(slurp(samples_path(c)), "seed,sample_index,backend,t,p_meas,L_x,L_y,snapshot_row,n,l,S_nats\n");
    EXPECT_NE(slurp(summary_path(c)).find("\"empty\": true"), std::string::npos);
}

TEST(campaign, workers_do_not_change_output) {
    CampaignConfig a = small_entropy("w1");
    CampaignConfig b = small_entropy("w4");
    b.workers = 4;
    CampaignSummary sa = run_campaign(a);
    CampaignSummary sb = run_campaign(b);
    EXPECT_EQ(slurp(samples_path(a)), slurp(samples_path(b)));
    EXPECT_EQ(sa.json, sb.json);
    EXPECT_EQ(sa.n_snapshots, 80u);
    EXPECT_TRUE(sa.checks_passed);
}

TEST(campaign, resume_matches_uninterrupted_run) {
    CampaignConfig full = small_entropy("full");
    CampaignSummary s_full = run_campaign(full);

    CampaignConfig part = small_entropy("part");
    part.samples = 17;
    run_campaign(part);
    // A torn tail past the last committed sample is discarded on resume.
    {
        std::ofstream f(samples_path(part), std::ios::app);
        f << "7,17,clifford,0.78";
    }
    part.samples = 40;
    part.workers = 3;
    CampaignSummary s_part = run_campaign(part);
    EXPECT_EQ(slurp(samples_path(full)), slurp(samples_path(part)));
    EXPECT_EQ(s_full.json, s_part.json);
}

TEST(campaign, resume_refuses_a_different_config) {
    CampaignConfig c = small_entropy("mismatch");
    c.samples = 5;
    run_campaign(c);
    c.seed = 8;
    try {
        run_campaign(c);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field(), "resume");
    }
    c.resume = false;
    EXPECT_NO_THROW(run_campaign(c));
}

TEST(campaign, summarize_csv_reproduces_fits) {
    CampaignConfig c = small_entropy("refit");
    c.L_x = 16;
    c.samples = 30;
    CampaignSummary s = run_campaign(c);
    CampaignSummary r = summarize_csv(CampaignConfig{}, samples_path(c));
    ASSERT_EQ(r.n_snapshots, s.n_snapshots);
    for (double n : {1.0, 2.0}) {
        EXPECT_NEAR(r.fit("c_ent", n).derived, s.fit("c_ent", n).derived, 1e-12);
        EXPECT_NEAR(r.fit("c_ent", n).derived_stderr, s.fit("c_ent", n).derived_stderr, 1e-12);
    }
    EXPECT_NEAR(r.fit("x^(2)").derived, s.fit("x^(2)").derived, 1e-12);
    EXPECT_THROW(s.fit("no_such"), std::invalid_argument);
}

TEST(campaign, coherent_info_and_free_energy_campaigns) {
    CampaignConfig c;
    c.kind = CampaignKind::CoherentInfo;
    c.boundary = Boundary::Open;
    c.L_x = 4;
    c.t_over_pi = 0.12;
    c.p_meas = 0.8;
    c.samples = 30;
    c.out = temp_prefix("ci");
    CampaignSummary s = run_campaign(c);
    EXPECT_EQ(s.n_samples, 30u);
    EXPECT_GE(s.mean_i_s.value, 0);
    EXPECT_LE(s.mean_i_s.value, 1);
    CampaignSummary r = summarize_csv(CampaignConfig{}, samples_path(c));
    EXPECT_NEAR(r.mean_i_s.value, s.mean_i_s.value, 1e-15);

    CampaignConfig f;
    f.kind = CampaignKind::FreeEnergy;
    f.L_x = 5;
    f.L_y = 4;
    f.t_over_pi = 0.2;
    f.samples = 20;
    f.out = temp_prefix("fe");
    CampaignSummary sf = run_campaign(f);
    EXPECT_TRUE(std::isfinite(sf.free_energy_density.value));
    CampaignSummary rf = summarize_csv(CampaignConfig{}, samples_path(f));
    EXPECT_NEAR(rf.free_energy_density.value, sf.free_energy_density.value, 1e-12);
}

TEST(campaign, sweep_grid_shapes_and_resume) {
    CampaignConfig c;
    c.kind = CampaignKind::CoherentInfo;
    c.boundary = Boundary::Open;
    c.samples = 4;
    c.t_over_pi = 0.25;
    struct Shape {
        std::vector<int> L;
        std::vector<double> p;
        size_t n;
    };
    for (const Shape &sh : {Shape{{}, {}, 1}, Shape{{4, 6}, {0.4, 0.5, 0.6}, 6}, Shape{{4, 6, 8}, {}, 3}}) {
        c.L_x_grid = sh.L;
        c.p_meas_grid = sh.p;
        c.out = temp_prefix("sweep" + std::to_string(sh.n));
        auto pts = run_sweep(c);
        EXPECT_EQ(pts.size(), sh.n);
        EXPECT_EQ(read_sweep_csv(sweep_path(c)).size(), sh.n);
    }
    // Resume: drop the last row, rerun, and get the same file back.
    std::string before = slurp(sweep_path(c));
    std::string cut = before.substr(0, before.rfind('\n', before.size() - 2) + 1) + "8,7,0.25,";
    {
        std::ofstream f(sweep_path(c), std::ios::trunc);
        f << cut;
    }
    auto pts = run_sweep(c);
    EXPECT_EQ(pts.size(), 3u);
    EXPECT_EQ(slurp(sweep_path(c)), before);
}

TEST(campaign, ordered_farm_commits_in_order_and_propagates_errors) {
    std::vector<uint64_t> seen;
    ordered_farm(
        3, 200, 5,
        [](uint64_t i) {
            SampleRecord r;
            r.index = i;
            return r;
        },
        [&](SampleRecord &&r) { seen.push_back(r.index); });
    ASSERT_EQ(seen.size(), 197u);
    for (size_t k = 0; k < seen.size(); k++) {
        EXPECT_EQ(seen[k], 3 + k);
    }
    EXPECT_THROW(ordered_farm(
                     0, 100, 4,
                     [](uint64_t i) {
                         if (i == 37) {
                             throw std::runtime_error("boom");
                         }
                         return SampleRecord{i, {}, {0, 0}, 0};
                     },
                     [](SampleRecord &&) {}),
                 std::runtime_error);
}

TEST(campaign, accumulator_state_round_trip) {
    CampaignConfig c = small_entropy("state");
    ResolvedCampaign rc = resolve(c);
    CampaignAccumulators a(c, rc), b(c, rc);
    for (uint64_t i = 0; i < 10; i++) {
        a.add(compute_sample(c, rc, i));
    }
    b.load_state(a.state());
    EXPECT_EQ(a.state(), b.state());
    EXPECT_EQ(summarize(c, rc, a).json, summarize(c, rc, b).json);
    EXPECT_THROW(b.load_state({1, 2, 3}), std::invalid_argument);
}

TEST(campaign, steady_state_is_stationary) {
    // Half-chain entropy after 4 L and after 8 L rows agree within errors.
    auto mean_half = [](int rows) {
        CampaignConfig c;
        c.L_x = 16;
        c.L_y = rows;
        c.p_meas = 0.5;
        c.samples = 3000;
        c.renyi = {1};
        c.max_order = 2;
        c.write_samples = false;
        c.out = temp_prefix("stat" + std::to_string(rows));
        CampaignSummary s = run_campaign(c);
        size_t k = std::find(s.cuts.begin(), s.cuts.end(), 8) - s.cuts.begin();
        return s.cumulants[0][k][0];
    };
    Estimate a = mean_half(64), b = mean_half(128);
    double z = (a.value - b.value) / std::hypot(a.error, b.error);
    EXPECT_LT(std::abs(z), 4) << a.value << " vs " << b.value;
}
