#include "actinet/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "actinet/errors.hpp"
#include "actinet/format.hpp"
#include "actinet/rng.hpp"

namespace actinet {
namespace {

TrainDataset to_train_dataset(const std::vector<FeatureVector>& rows) {
    TrainDataset d;
    d.features = Matrix(rows.size(), kFeatureCount);
    d.targets.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            d.features(i, c) = rows[i].features[c];
        d.targets[i] = static_cast<double>(class_code(*rows[i].label));
    }
    return d;
}

std::vector<FeatureVector> gather(const LabeledDataset& dataset,
                                  const std::vector<std::size_t>& idx) {
    std::vector<FeatureVector> rows;
    rows.reserve(idx.size());
    for (std::size_t i : idx) rows.push_back(dataset.rows[i]);
    return rows;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

} // namespace

void LabeledDataset::validate() const {
    for (const FeatureVector& r : rows)
        if (!r.label) throw DataError("dataset contains an unlabeled row");
}

int decode_class(double output) {
    if (!std::isfinite(output))
        throw DataError("cannot decode a non-finite network output");
    const double r = std::round(output); // halves round away from zero
    return static_cast<int>(std::clamp(r, 0.0, 2.0));
}

FoldSplit make_folds(const LabeledDataset& dataset, std::size_t k,
                     std::uint64_t seed) {
    dataset.validate();
    if (k < 2) throw ConfigError("need at least two folds");

    std::array<std::vector<std::size_t>, 3> by_class;
    for (std::size_t i = 0; i < dataset.rows.size(); ++i)
        by_class[static_cast<std::size_t>(class_code(*dataset.rows[i].label))]
            .push_back(i);
    for (const auto& cls : by_class)
        if (cls.size() < k)
            throw DataError("a class has fewer samples than folds");

    SplitMix64 rng(seed);
    FoldSplit split;
    split.folds.assign(k, {});
    for (auto& cls : by_class) {
        for (std::size_t i = cls.size(); i > 1; --i)
            std::swap(cls[i - 1], cls[rng.next_below(i)]);
        for (std::size_t i = 0; i < cls.size(); ++i)
            split.folds[i % k].push_back(cls[i]);
    }
    for (auto& fold : split.folds) std::sort(fold.begin(), fold.end());
    return split;
}

double classification_rate(const MlpParams& params, const NormStats& stats,
                           const LabeledDataset& dataset) {
    dataset.validate();
    if (dataset.size() == 0)
        throw DataError("classification rate over an empty dataset");
    std::size_t correct = 0;
    for (const FeatureVector& row : dataset.rows) {
        const FeatureVector n = apply_normalizer(stats, row);
        const int pred = decode_class(forward(params, n.features).output());
        if (pred == class_code(*row.label)) ++correct;
    }
    return 100.0 * static_cast<double>(correct) /
           static_cast<double>(dataset.size());
}

std::vector<double> EvalReport::per_run_train() const {
    std::vector<double> out(runs, 0.0);
    for (const CvCell& c : cells) out[c.run] += c.train_rate;
    for (double& v : out) v /= static_cast<double>(k);
    return out;
}

std::vector<double> EvalReport::per_run_test() const {
    std::vector<double> out(runs, 0.0);
    for (const CvCell& c : cells) out[c.run] += c.test_rate;
    for (double& v : out) v /= static_cast<double>(k);
    return out;
}

EvalReport cross_validate(const LabeledDataset& dataset,
                          const Topology& topology, const TrainConfig& config,
                          const CvOptions& options) {
    dataset.validate();
    topology.validate();
    config.validate();
    if (options.runs == 0) throw ConfigError("need at least one run");

    // Seed sequence: fold shuffle first, then one init seed per (run, fold)
    // rotation in run-major order. Everything replays from the master seed.
    SplitMix64 seeder(options.seed);
    const std::uint64_t fold_seed = seeder.next_u64();
    const FoldSplit split = make_folds(dataset, options.k, fold_seed);

    TrainConfig cfg = config;
    cfg.show = 0; // no per-epoch chatter inside the harness

    EvalReport report;
    report.runs = options.runs;
    report.k = options.k;

    for (std::size_t run = 0; run < options.runs; ++run) {
        for (std::size_t fold = 0; fold < options.k; ++fold) {
            const std::uint64_t init_seed = seeder.next_u64();

            std::vector<std::size_t> train_idx;
            std::string fit_folds;
            for (std::size_t f = 0; f < options.k; ++f) {
                if (f == fold) continue;
                fit_folds += static_cast<char>('0' + f);
                train_idx.insert(train_idx.end(), split.folds[f].begin(),
                                 split.folds[f].end());
            }

            LabeledDataset train{gather(dataset, train_idx)};
            LabeledDataset test{gather(dataset, split.folds[fold])};

            const NormStats stats = fit_normalizer(train.rows);
            std::vector<FeatureVector> train_norm;
            train_norm.reserve(train.rows.size());
            for (const FeatureVector& r : train.rows)
                train_norm.push_back(apply_normalizer(stats, r));

            MlpParams init =
                options.init == InitScheme::NguyenWidrow
                    ? init_nguyen_widrow(topology, init_seed)
                    : init_uniform(topology, init_seed, options.init_lo,
                                   options.init_hi);

            TrainResult result =
                train_lm(std::move(init), to_train_dataset(train_norm), cfg);

            CvCell cell;
            cell.run = run;
            cell.fold = fold;
            cell.init_seed = init_seed;
            cell.norm_fit_folds = fit_folds;
            cell.stop_reason = to_string(result.log.stop_reason);
            cell.final_mse = result.log.final_mse;
            cell.epochs = result.log.epochs_run;
            cell.train_rate = classification_rate(result.params, stats, train);
            cell.test_rate = classification_rate(result.params, stats, test);
            for (const FeatureVector& row : test.rows) {
                const FeatureVector n = apply_normalizer(stats, row);
                const int pred =
                    decode_class(forward(result.params, n.features).output());
                ++cell.test_confusion[static_cast<std::size_t>(
                    class_code(*row.label))][static_cast<std::size_t>(pred)];
            }
            report.cells.push_back(std::move(cell));
        }
    }

    const std::vector<double> run_train = report.per_run_train();
    const std::vector<double> run_test = report.per_run_test();
    report.mean_train = mean_of(run_train);
    report.std_train = sample_std(run_train, report.mean_train);
    report.mean_test = mean_of(run_test);
    report.std_test = sample_std(run_test, report.mean_test);
    return report;
}

std::vector<SweepRow> topology_sweep(
    const LabeledDataset& dataset,
    const std::vector<std::vector<std::size_t>>& hidden_size_lists,
    const TrainConfig& config, const CvOptions& options) {
    if (hidden_size_lists.empty())
        throw ConfigError("topology sweep list is empty");
    std::vector<SweepRow> rows;
    for (const auto& hidden : hidden_size_lists) {
        Topology topo;
        topo.hidden_sizes = hidden;
        rows.push_back(SweepRow{
            hidden, cross_validate(dataset, topo, config, options)});
    }
    return rows;
}

int baseline_classify(const std::array<double, kFeatureCount>& magnitudes,
                      double sample_rate_hz, std::size_t n_fft,
                      double rest_threshold) {
    std::size_t dominant = 1;
    for (std::size_t k = 2; k < magnitudes.size(); ++k)
        if (magnitudes[k] > magnitudes[dominant]) dominant = k;
    if (magnitudes[dominant] < rest_threshold) return class_code(Activity::Rest);
    const double f = static_cast<double>(dominant) * sample_rate_hz /
                     static_cast<double>(n_fft);
    if (f >= 1.5 && f < 2.5) return class_code(Activity::Walk);
    if (f >= 2.5 && f <= 5.0) return class_code(Activity::Run);
    return class_code(Activity::Rest);
}

double baseline_rate(const LabeledDataset& dataset, double sample_rate_hz,
                     std::size_t n_fft, double rest_threshold) {
    dataset.validate();
    if (dataset.size() == 0) throw DataError("baseline over an empty dataset");
    std::size_t correct = 0;
    for (const FeatureVector& row : dataset.rows)
        if (baseline_classify(row.features, sample_rate_hz, n_fft,
                              rest_threshold) == class_code(*row.label))
            ++correct;
    return 100.0 * static_cast<double>(correct) /
           static_cast<double>(dataset.size());
}

void write_report_csv(std::ostream& os, const EvalReport& report) {
    os << "run,fold,train_rate,test_rate,stop_reason,final_mse,epochs,"
          "init_seed,norm_fit_folds";
    for (int t = 0; t < 3; ++t)
        for (int p = 0; p < 3; ++p) os << ",conf_" << t << p;
    os << "\n";
    for (const CvCell& c : report.cells) {
        os << c.run << ',' << c.fold << ',' << format_double(c.train_rate)
           << ',' << format_double(c.test_rate) << ',' << c.stop_reason << ','
           << format_double(c.final_mse) << ',' << c.epochs << ','
           << c.init_seed << ',' << c.norm_fit_folds;
        for (int t = 0; t < 3; ++t)
            for (int p = 0; p < 3; ++p)
                os << ',' << c.test_confusion[static_cast<std::size_t>(t)]
                                             [static_cast<std::size_t>(p)];
        os << "\n";
    }
    os << "aggregate,mean_train," << format_double(report.mean_train) << "\n";
    os << "aggregate,std_train," << format_double(report.std_train) << "\n";
    os << "aggregate,mean_test," << format_double(report.mean_test) << "\n";
    os << "aggregate,std_test," << format_double(report.std_test) << "\n";
}

void write_report_summary(std::ostream& os, const EvalReport& report) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "runs %zu, folds %zu\n"
                  "  train rate: mean %6.2f %%  std %6.3f\n"
                  "  test rate:  mean %6.2f %%  std %6.3f\n",
                  report.runs, report.k, report.mean_train, report.std_train,
                  report.mean_test, report.std_test);
    os << buf;
}

void write_sweep_table(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "hidden_layers  mean_train  std_train  mean_test  std_test\n";
    for (const SweepRow& row : rows) {
        std::ostringstream topo;
        for (std::size_t i = 0; i < row.hidden_sizes.size(); ++i) {
            if (i) topo << '-';
            topo << row.hidden_sizes[i];
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%-13s  %10.2f  %9.3f  %9.2f  %8.3f\n",
                      topo.str().c_str(), row.report.mean_train,
                      row.report.std_train, row.report.mean_test,
                      row.report.std_test);
        os << buf;
    }
}

} // namespace actinet
