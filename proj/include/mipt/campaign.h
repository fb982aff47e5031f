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

// Campaign configuration, deterministic sample farming and output files.

#ifndef MIPT_CAMPAIGN_H
#define MIPT_CAMPAIGN_H

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mipt/backend.h"
#include "mipt/observables.h"
#include "mipt/stats.h"

namespace mipt {

enum class CampaignKind : uint8_t {
    /// Entanglement profiles of steady-state snapshots.
    Entropy,
    /// Boundary test-spin correlator of the surface-code protocol.
    CoherentInfo,
    /// -ln Z per row increment on a cylinder.
    FreeEnergy,
};

std::string to_string(CampaignKind k);
CampaignKind parse_campaign_kind(const std::string &s);

/// Invalid configuration value; field() is the key that failed.
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(std::string field, const std::string &what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

/// Flat typed configuration. Every field is settable by its key name through
/// set_key; 0 in an "auto" integer field selects the documented default.
struct CampaignConfig {
    CampaignKind kind = CampaignKind::Entropy;
    int L_x = 16;
    /// Rows before the first snapshot (entropy, free energy) or lattice
    /// height (coherent information). 0: 4 L_x, or L_x - 1 for coherent info.
    int L_y = 0;
    Boundary boundary = Boundary::Periodic;
    double t_over_pi = 0.25;
    double p_meas = 1.0;
    SignModel signs = SignModel::Nishimori;
    /// auto | exact | mps | clifford | gaussian.
    std::string backend = "auto";
    /// auto | tableau | clusters.
    std::string clifford_engine = "auto";
    /// auto | covariance | modes.
    std::string gaussian_engine = "auto";
    uint64_t samples = 100;
    uint64_t seed = 1;
    /// Rows between snapshots; 0: L_x / 2.
    int snapshot_every = 0;
    int snapshots_per_sample = 1;
    /// Free energy: rows over which ln Z increments are measured; 0: 4 L_x.
    int measure_rows = 0;
    int cut_stride = 1;
    /// auto | true | false. auto folds periodic chains at L/2.
    std::string fold = "auto";
    std::vector<double> renyi = {1, 2, 3, std::numeric_limits<double>::infinity()};
    int max_order = 5;
    double fit_lo = 0.125;
    double fit_hi = 0.875;
    /// Output path prefix; files are <out>.samples.csv (or .coherent.csv,
    /// .free_energy.csv), <out>.summary.json and <out>.progress.json.
    std::string out = "mipt";
    bool write_samples = true;
    bool resume = true;
    /// 0: MIPT_WORKERS or 1.
    int workers = 0;
    int commit_every = 64;
    double mps_cutoff = 1e-20;
    int mps_chi_max = 1024;
    int gaussian_orthonormalize_rows = 4;
    int dense_max_qubits = 14;
    /// Sweep grids (comma lists in key=value form).
    std::vector<double> t_over_pi_grid;
    std::vector<double> p_meas_grid;
    std::vector<int> L_x_grid;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Sets one field from its text form; throws ConfigError for unknown keys or
/// malformed values.
void set_key(CampaignConfig &cfg, const std::string &key, const std::string &value);
/// All keys accepted by set_key, in documentation order.
const std::vector<std::string> &config_keys();
/// Canonical key=value text of every field (one per line).
std::string to_key_values(const CampaignConfig &cfg);
/// Parses key=value lines ('#' comments, blank lines ignored).
CampaignConfig parse_key_values(const std::string &text, CampaignConfig base = {});

/// Concrete choices derived from a validated config.
struct ResolvedCampaign {
    LatticeSpec spec;
    double t = 0;
    BackendKind backend = BackendKind::Exact;
    BackendOptions options;
    int snapshot_every = 1;
    int measure_rows = 1;
    std::vector<int> cuts;
    ChordGeometry geometry{2, Boundary::Open};
};

ResolvedCampaign resolve(const CampaignConfig &cfg);

/// Worker count from cfg.workers, else MIPT_WORKERS, else 1.
int worker_count(const CampaignConfig &cfg);

/// Per-sample results.
struct SampleRecord {
    uint64_t index = 0;
    std::vector<EntropySample> snapshots;
    DomainWallSample domain_wall{0, 0};
    double minus_log_z = 0;
};

/// Computes sample index i of a resolved campaign. Pure in (cfg, i).
SampleRecord compute_sample(const CampaignConfig &cfg, const ResolvedCampaign &rc, uint64_t i);

struct NamedFit {
    std::string quantity;
    double renyi = 1;
    int order = 1;
    FitResult fit;
    /// Non-empty when the fit could not be made.
    std::string error;
};

/// Streaming accumulators for one campaign.
class CampaignAccumulators {
   public:
    CampaignAccumulators(const CampaignConfig &cfg, const ResolvedCampaign &rc);

    void add(const SampleRecord &rec);
    uint64_t samples() const {
        return samples_;
    }
    uint64_t snapshots() const {
        return snapshots_;
    }
    /// Entropy: acc(r, c) for renyi index r and cut index c.
    const BlockedMoments &entropy(size_t r, size_t c) const {
        return entropy_[r * n_cuts_ + c];
    }
    const BlockedMoments &i_s() const {
        return i_s_;
    }
    const BlockedMoments &correlator() const {
        return c_;
    }
    const BlockedMoments &free_energy_density() const {
        return f_;
    }
    /// Number of snapshots that violated Renyi monotonicity.
    uint64_t monotonicity_violations() const {
        return violations_;
    }

    std::vector<double> state() const;
    void load_state(const std::vector<double> &state);

   private:
    size_t n_cuts_;
    uint64_t samples_ = 0;
    uint64_t snapshots_ = 0;
    uint64_t violations_ = 0;
    std::vector<BlockedMoments> entropy_;
    BlockedMoments i_s_;
    BlockedMoments c_;
    BlockedMoments f_;
    double measure_sites_ = 1;
};

struct CampaignSummary {
    CampaignKind kind = CampaignKind::Entropy;
    uint64_t n_samples = 0;
    uint64_t n_snapshots = 0;
    bool empty = true;
    std::vector<double> renyi;
    std::vector<int> cuts;
    /// cumulants[r][c][m - 1] = kappa_m of S_{renyi[r]} at cuts[c].
    std::vector<std::vector<std::vector<Estimate>>> cumulants;
    std::vector<NamedFit> fits;
    Estimate mean_i_s;
    Estimate mean_c;
    Estimate free_energy_density;
    /// Oracle self-checks on the data (Renyi monotonicity, kappa_2 >= 0).
    bool checks_passed = true;
    std::vector<std::string> check_failures;
    std::string json;

    /// Fit by quantity name and Renyi index; throws if absent or failed.
    const FitResult &fit(const std::string &quantity, double renyi = 1) const;
};

CampaignSummary summarize(const CampaignConfig &cfg, const ResolvedCampaign &rc, const CampaignAccumulators &acc);

/// Runs a campaign: farms samples over worker threads, commits them in index
/// order to the CSV and accumulators, writes the summary JSON. Resumes from
/// <out>.progress.json when cfg.resume is set and the config matches.
CampaignSummary run_campaign(const CampaignConfig &cfg);

/// Rebuilds accumulators from a samples / coherent / free-energy CSV written
/// by run_campaign and summarizes them.
CampaignSummary summarize_csv(const CampaignConfig &cfg, const std::string &csv_path);

/// Output file names for a config.
std::string samples_path(const CampaignConfig &cfg);
std::string summary_path(const CampaignConfig &cfg);
std::string progress_path(const CampaignConfig &cfg);
std::string sweep_path(const CampaignConfig &cfg);

/// One grid point of a sweep.
struct SweepPoint {
    int L_x = 0;
    int L_y = 0;
    double t_over_pi = 0;
    double p_meas = 0;
    /// mean I_s (bits) or mean S_1(L/2) (nats).
    std::string observable;
    Estimate estimate;
    uint64_t n_samples = 0;
};

/// Runs the grid L_x_grid x t_over_pi_grid x p_meas_grid (an empty grid uses
/// the scalar field) and appends one CSV row per completed point. Points
/// already present in the sweep CSV are skipped when cfg.resume is set.
std::vector<SweepPoint> run_sweep(const CampaignConfig &cfg);
std::vector<SweepPoint> read_sweep_csv(const std::string &path);

/// Ordered parallel map: work(i) runs on up to `workers` threads; commit(i)
/// is called on the calling thread for i = begin, begin + 1, ... in order.
void ordered_farm(uint64_t begin, uint64_t end, int workers, const std::function<SampleRecord(uint64_t)> &work,
                  const std::function<void(SampleRecord &&)> &commit);

}  // namespace mipt

#endif
