#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "actinet/features.hpp"
#include "actinet/train.hpp"

namespace actinet {

// Labeled feature rows (un-normalized; normalization statistics are fit per
// cross-validation rotation on the training folds only).
struct LabeledDataset {
    std::vector<FeatureVector> rows; // every row must carry a label

    std::size_t size() const { return rows.size(); }
    void validate() const; // throws DataError if any row is unlabeled
};

// Rounds the decimal-encoded output to the nearest class, half away from
// zero, clamped to [0, 2]. Throws DataError for non-finite outputs.
int decode_class(double output);

struct FoldSplit {
    std::vector<std::vector<std::size_t>> folds; // index sets
};

// Stratified folds: per-class seeded shuffle, then round-robin assignment,
// so per-class counts differ by at most one across folds. Throws DataError
// when a class has fewer samples than k.
FoldSplit make_folds(const LabeledDataset& dataset, std::size_t k,
                     std::uint64_t seed);

// Percent of rows whose decoded prediction matches the label. Features are
// normalized with `stats` before the forward pass.
double classification_rate(const MlpParams& params, const NormStats& stats,
                           const LabeledDataset& dataset);

using Confusion = std::array<std::array<std::size_t, 3>, 3>; // [true][pred]

enum class InitScheme { NguyenWidrow, Uniform };

struct CvOptions {
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    std::size_t k = 3;
    InitScheme init = InitScheme::NguyenWidrow;
    double init_lo = -10.0, init_hi = 10.0; // used by InitScheme::Uniform
};

struct CvCell {
    std::size_t run = 0;
    std::size_t fold = 0; // the held-out fold
    double train_rate = 0.0;
    double test_rate = 0.0;
    Confusion test_confusion{};
    std::string stop_reason;
    double final_mse = 0.0;
    std::uint64_t epochs = 0;
    std::uint64_t init_seed = 0;
    std::string norm_fit_folds; // fold ids whose rows fit the normalizer
};

struct EvalReport {
    std::size_t runs = 0, k = 0;
    std::vector<CvCell> cells; // runs * k entries, run-major
    // Aggregates over per-run averages (sample standard deviation, n-1).
    double mean_train = 0.0, std_train = 0.0;
    double mean_test = 0.0, std_test = 0.0;

    std::vector<double> per_run_train() const;
    std::vector<double> per_run_test() const;
};

// The paper's protocol: stratified k-fold rotations, `runs` repetitions with
// fresh seeded initializations (folds stay fixed for the master seed), the
// normalizer fit on each rotation's training folds. Per-run rates average the
// k rotations; report aggregates are mean and std over runs.
EvalReport cross_validate(const LabeledDataset& dataset,
                          const Topology& topology, const TrainConfig& config,
                          const CvOptions& options);

struct SweepRow {
    std::vector<std::size_t> hidden_sizes;
    EvalReport report;
};

std::vector<SweepRow> topology_sweep(
    const LabeledDataset& dataset,
    const std::vector<std::vector<std::size_t>>& hidden_size_lists,
    const TrainConfig& config, const CvOptions& options);

// Band-rule classifier over un-normalized FFT magnitudes: the dominant
// non-DC bin decides. Below `rest_threshold` it is rest; otherwise walk for
// 1.5-2.5 Hz and run for 2.5-5 Hz; anything else falls back to rest.
int baseline_classify(const std::array<double, kFeatureCount>& magnitudes,
                      double sample_rate_hz, std::size_t n_fft,
                      double rest_threshold = 1.2);

// Baseline accuracy over a labeled dataset (percent).
double baseline_rate(const LabeledDataset& dataset, double sample_rate_hz,
                     std::size_t n_fft, double rest_threshold = 1.2);

// Report CSV, one row per run x fold, plus the aggregate block. Numeric
// formatting is shortest-round-trip, so identical runs serialize
// byte-identically.
void write_report_csv(std::ostream& os, const EvalReport& report);

void write_report_summary(std::ostream& os, const EvalReport& report);

void write_sweep_table(std::ostream& os, const std::vector<SweepRow>& rows);

} // namespace actinet
