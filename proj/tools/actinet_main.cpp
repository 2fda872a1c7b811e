// actinet - accelerometer activity classification pipeline.
//
// Subcommands: synth, filter-design, featurize, train, eval, sweep,
// predict, stream. Exit codes: 0 success, 1 usage/config error,
// 2 data error, 3 training abort.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "actinet/errors.hpp"
#include "actinet/evaluate.hpp"
#include "actinet/format.hpp"
#include "actinet/io.hpp"
#include "actinet/kernels.hpp"
#include "actinet/pipeline.hpp"
#include "actinet/rng.hpp"
#include "actinet/stream.hpp"
#include "actinet/synth.hpp"

namespace {

using namespace actinet;

struct CommonOpts {
    std::string config_path;
    double rate = 50.0;
    std::uint64_t seed = 0;
    CLI::Option* rate_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path,
                    "Pipeline configuration JSON");
    opts.rate_opt =
        cmd->add_option("--rate", opts.rate, "Sample rate in Hz")->check(
            CLI::PositiveNumber);
    opts.seed_opt = cmd->add_option("--seed", opts.seed, "RNG seed");
}

// Defaults, overlaid by --config, overlaid by explicit flags.
PipelineConfig resolve_config(const CommonOpts& opts) {
    PipelineConfig cfg;
    if (!opts.config_path.empty()) cfg = read_config_file(opts.config_path);
    if (opts.rate_opt->count() > 0) cfg.sample_rate_hz = opts.rate;
    if (opts.seed_opt->count() > 0) cfg.seed = opts.seed;
    cfg.validate();
    return cfg;
}

std::vector<std::size_t> parse_hidden(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        sizes.push_back(static_cast<std::size_t>(std::stoul(tok)));
    }
    return sizes;
}

Activity parse_activity(const std::string& s) {
    const auto a = activity_from_string(s);
    if (!a) throw ConfigError("unknown activity: " + s);
    return *a;
}

CalibrationParams load_cal(const std::string& path) {
    if (path.empty()) return CalibrationParams{}; // nominal sensor constants
    return read_calibration_file(path);
}

InitScheme parse_init(const std::string& s) {
    if (s == "nw") return InitScheme::NguyenWidrow;
    if (s == "uniform") return InitScheme::Uniform;
    throw ConfigError("--init must be nw or uniform");
}

LabeledDataset dataset_from_rows(std::vector<FeatureVector> rows) {
    LabeledDataset d{std::move(rows)};
    d.validate();
    return d;
}

int cmd_synth(const CommonOpts& common, const std::string& activity,
              double duration, double noise, double fundamental, double amp,
              bool fund_set, bool amp_set, const std::string& out,
              const std::string& cal_path, const std::string& manifest) {
    const PipelineConfig cfg = resolve_config(common);
    const CalibrationParams cal = load_cal(cal_path);

    SynthSpec spec = SynthSpec::for_activity(parse_activity(activity), duration,
                                             cfg.seed, noise);
    if (fund_set) spec.fundamental_hz = fundamental;
    if (amp_set) spec.body_amp_g = amp;

    const SynthResult result = synth_trace(spec, cal, cfg.sample_rate_hz);
    write_trace_csv_file(out, result.trace);
    write_text_file(out + ".label", std::string(to_string(result.label)) + "\n");
    if (!manifest.empty()) append_manifest_line(manifest, out, result.label);
    std::cout << "wrote " << result.trace.samples.size() << " samples to "
              << out << " (" << to_string(result.label) << ")\n";
    return 0;
}

int cmd_filter_design(const CommonOpts& common, int order, double edge,
                      double ripple, double atten) {
    PipelineConfig cfg = resolve_config(common);
    const IirFilter f = design_highpass_elliptic(order, edge, ripple, atten,
                                                 cfg.sample_rate_hz);
    std::cout << "high-pass elliptic, order " << order << ", edge "
              << format_double(edge) << " Hz, ripple " << format_double(ripple)
              << " dB, atten " << format_double(atten) << " dB, fs "
              << format_double(cfg.sample_rate_hz) << " Hz\n";
    std::cout << "sections (b0 b1 b2 | a1 a2):\n";
    for (const Biquad& s : f.sections)
        std::cout << "  " << format_double(s.b0) << ' ' << format_double(s.b1)
                  << ' ' << format_double(s.b2) << " | " << format_double(s.a1)
                  << ' ' << format_double(s.a2) << "\n";
    std::cout << "pole magnitudes:";
    for (double m : pole_magnitudes(f)) std::cout << ' ' << format_double(m);
    std::cout << "\nresponse:\n  f_hz      |H|        dB\n";
    const double nyq = cfg.sample_rate_hz / 2.0;
    std::vector<double> grid{0.01, edge / 4.0, edge / 2.0, 0.75 * edge, edge};
    for (int i = 1; i <= 10; ++i)
        grid.push_back(edge + (nyq - 0.01 - edge) * i / 10.0);
    for (double fr : grid) {
        const double h = std::abs(frequency_response(f, fr));
        char buf[80];
        std::snprintf(buf, sizeof(buf), "  %-8.3f  %-9.6f  %8.2f\n", fr, h,
                      20.0 * std::log10(h));
        std::cout << buf;
    }
    return 0;
}

int cmd_featurize(const CommonOpts& common, const std::string& in,
                  const std::string& out, const std::string& label,
                  const std::string& cal_path) {
    const PipelineConfig cfg = resolve_config(common);
    const CalibrationParams cal = load_cal(cal_path);
    const RawTrace trace = read_trace_csv_file(in, cfg.sample_rate_hz);

    std::optional<Activity> act;
    if (!label.empty()) act = parse_activity(label);

    const std::vector<FeatureVector> rows = run_pipeline(trace, cal, cfg, act);
    if (rows.empty())
        std::cerr << "warning: trace shorter than one window, no features\n";
    write_features_csv_file(out, rows);
    std::cout << "wrote " << rows.size() << " feature rows to " << out << "\n";
    return 0;
}

int cmd_train(const CommonOpts& common, const std::string& features_path,
              const std::string& out, const std::string& topology_str,
              const std::string& init_str, double init_lo, double init_hi) {
    PipelineConfig cfg = resolve_config(common);
    if (!topology_str.empty()) cfg.hidden_sizes = parse_hidden(topology_str);

    const LabeledDataset data =
        dataset_from_rows(read_features_csv_file(features_path));
    const NormStats stats = fit_normalizer(data.rows);

    TrainDataset train;
    train.features = Matrix(data.size(), kFeatureCount);
    train.targets.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const FeatureVector n = apply_normalizer(stats, data.rows[i]);
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            train.features(i, c) = n.features[c];
        train.targets[i] = static_cast<double>(class_code(*data.rows[i].label));
    }

    Topology topo;
    topo.hidden_sizes = cfg.hidden_sizes;
    const InitScheme scheme = parse_init(init_str);
    MlpParams init = scheme == InitScheme::NguyenWidrow
                         ? init_nguyen_widrow(topo, cfg.seed)
                         : init_uniform(topo, cfg.seed, init_lo, init_hi);

    const TrainResult result = train_lm(std::move(init), train, cfg.train);

    ModelFile model;
    model.params = result.params;
    model.norm = stats;
    model.seed = cfg.seed;
    model.stop_reason = to_string(result.log.stop_reason);
    model.final_mse = result.log.final_mse;
    write_model_file(out, model);

    std::cout << "trained " << data.size() << " rows, stop="
              << model.stop_reason << ", mse="
              << format_double(model.final_mse) << ", epochs="
              << result.log.epochs_run << "\n"
              << "model written to " << out << "\n";
    return 0;
}

LabeledDataset eval_dataset(const PipelineConfig& cfg,
                            const std::string& features_path,
                            std::size_t synth_per_class, double noise) {
    if (!features_path.empty())
        return dataset_from_rows(read_features_csv_file(features_path));
    SynthDatasetOptions opts;
    opts.windows_per_class = synth_per_class;
    opts.noise_std_g = noise;
    opts.seed = cfg.seed;
    return dataset_from_rows(make_synth_dataset(opts, cfg));
}

int cmd_eval(const CommonOpts& common, const std::string& features_path,
             std::size_t synth_per_class, double noise,
             const std::string& topology_str, std::size_t runs,
             const std::string& report_path, const std::string& init_str,
             double init_lo, double init_hi, std::uint64_t epoch_override,
             bool epochs_set) {
    PipelineConfig cfg = resolve_config(common);
    if (!topology_str.empty()) cfg.hidden_sizes = parse_hidden(topology_str);
    if (epochs_set) cfg.train.epochs = epoch_override;

    const LabeledDataset data =
        eval_dataset(cfg, features_path, synth_per_class, noise);

    Topology topo;
    topo.hidden_sizes = cfg.hidden_sizes;
    CvOptions options;
    options.runs = runs;
    options.seed = cfg.seed;
    options.init = parse_init(init_str);
    options.init_lo = init_lo;
    options.init_hi = init_hi;

    const EvalReport report = cross_validate(data, topo, cfg.train, options);

    if (!report_path.empty()) {
        std::ofstream os(report_path, std::ios::binary);
        if (!os) throw DataError("cannot write report: " + report_path);
        write_report_csv(os, report);
    }
    write_report_summary(std::cout, report);
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "  baseline (no classifier): %6.2f %%\n",
                  baseline_rate(data, cfg.sample_rate_hz, kWindowLen,
                                cfg.baseline_rest_threshold));
    std::cout << buf;
    return 0;
}

int cmd_sweep(const CommonOpts& common, const std::string& features_path,
              std::size_t synth_per_class, double noise,
              const std::string& topologies, std::size_t runs,
              const std::string& report_path) {
    PipelineConfig cfg = resolve_config(common);
    const LabeledDataset data =
        eval_dataset(cfg, features_path, synth_per_class, noise);

    std::vector<std::vector<std::size_t>> lists;
    std::stringstream ss(topologies);
    std::string tok;
    while (std::getline(ss, tok, ';'))
        if (!tok.empty()) lists.push_back(parse_hidden(tok));

    CvOptions options;
    options.runs = runs;
    options.seed = cfg.seed;
    const std::vector<SweepRow> rows =
        topology_sweep(data, lists, cfg.train, options);
    write_sweep_table(std::cout, rows);

    if (!report_path.empty()) {
        std::ofstream os(report_path, std::ios::binary);
        if (!os) throw DataError("cannot write report: " + report_path);
        os << "hidden,mean_train,std_train,mean_test,std_test\n";
        for (const SweepRow& row : rows) {
            std::string name;
            for (std::size_t i = 0; i < row.hidden_sizes.size(); ++i) {
                if (i) name += '-';
                name += std::to_string(row.hidden_sizes[i]);
            }
            os << name << ',' << format_double(row.report.mean_train) << ','
               << format_double(row.report.std_train) << ','
               << format_double(row.report.mean_test) << ','
               << format_double(row.report.std_test) << "\n";
        }
    }
    return 0;
}

int cmd_predict(const CommonOpts& common, const std::string& model_path,
                const std::string& in, std::string kind,
                const std::string& cal_path) {
    const PipelineConfig cfg = resolve_config(common);
    const ModelFile model = read_model_file(model_path);

    if (kind == "auto") {
        std::ifstream is(in);
        if (!is) throw DataError("cannot open input: " + in);
        std::string header;
        std::getline(is, header);
        if (header.rfind("label", 0) == 0) kind = "features";
        else if (header.rfind("t_ms", 0) == 0 || header.rfind("x_mV", 0) == 0)
            kind = "trace";
        else
            throw DataError("cannot detect input kind from header: " + in);
    }

    if (kind == "trace") {
        const CalibrationParams cal = load_cal(cal_path);
        const RawTrace trace = read_trace_csv_file(in, cfg.sample_rate_hz);
        const std::vector<FeatureVector> rows = run_pipeline(trace, cal, cfg);
        for (const FeatureVector& fv : rows) {
            const FeatureVector n = apply_normalizer(model.norm, fv);
            const int code = decode_class(forward(model.params, n.features).output());
            const double t = static_cast<double>(fv.start_index) /
                             cfg.sample_rate_hz;
            std::cout << format_double(t) << ','
                      << to_string(static_cast<Activity>(code)) << "\n";
        }
    } else if (kind == "features") {
        const std::vector<FeatureVector> rows = read_features_csv_file(in);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const FeatureVector n = apply_normalizer(model.norm, rows[i]);
            const int code = decode_class(forward(model.params, n.features).output());
            std::cout << i << ',' << to_string(static_cast<Activity>(code))
                      << "\n";
        }
    } else {
        throw ConfigError("--kind must be auto, trace or features");
    }
    return 0;
}

int cmd_stream(const CommonOpts& common, const std::string& model_path,
               const std::string& cal_path) {
    const PipelineConfig cfg = resolve_config(common);
    const ModelFile model = read_model_file(model_path);
    const CalibrationParams cal = load_cal(cal_path);

    StreamClassifier classifier(cfg, cal, model.params, model.norm);

    auto print_events = [&](const std::vector<LabelEvent>& events) {
        for (const LabelEvent& ev : events)
            std::cout << format_double(ev.time_s) << ','
                      << to_string(static_cast<Activity>(ev.class_code))
                      << "\n"
                      << std::flush;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(std::cin, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("t_ms", 0) == 0 || line.rfind("x_mV", 0) == 0) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        bool bad = false;
        while (std::getline(ss, tok, ',')) {
            try {
                vals.push_back(std::stod(tok));
            } catch (const std::exception&) {
                bad = true;
                break;
            }
        }
        if (bad || (vals.size() != 3 && vals.size() != 4))
            throw DataError("malformed stream line " + std::to_string(line_no));
        const std::size_t off = vals.size() == 4 ? 1 : 0;
        RawSample s{vals[off], vals[off + 1], vals[off + 2]};
        print_events(classifier.push(s));
    }
    print_events(classifier.finish());
    if (classifier.skipped_samples() > 0)
        std::cerr << "warning: skipped " << classifier.skipped_samples()
                  << " non-finite samples\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"accelerometer activity classification pipeline"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a labeled raw trace");
    CommonOpts synth_common;
    add_common(synth, synth_common);
    std::string synth_activity = "walk", synth_out = "trace.csv";
    std::string synth_cal, synth_manifest;
    double synth_duration = 10.0, synth_noise = 0.05;
    double synth_fund = 0.0, synth_amp = 0.0;
    synth->add_option("--activity", synth_activity, "rest|walk|run")
        ->required();
    synth->add_option("--duration", synth_duration, "seconds")
        ->check(CLI::PositiveNumber);
    synth->add_option("--noise", synth_noise, "noise std in g");
    auto* fund_opt = synth->add_option("--fundamental", synth_fund,
                                       "fundamental frequency Hz");
    auto* amp_opt = synth->add_option("--amp", synth_amp, "body amplitude g");
    synth->add_option("--out", synth_out, "output trace CSV")->required();
    synth->add_option("--cal", synth_cal, "calibration JSON");
    synth->add_option("--manifest", synth_manifest,
                      "append trace,label to this manifest");

    // filter-design
    auto* fdesign =
        app.add_subcommand("filter-design", "print the high-pass design");
    CommonOpts fd_common;
    add_common(fdesign, fd_common);
    int fd_order = 4;
    double fd_edge = 0.8, fd_ripple = 0.5, fd_atten = 40.0;
    fdesign->add_option("--order", fd_order, "even filter order");
    fdesign->add_option("--edge", fd_edge, "passband edge Hz");
    fdesign->add_option("--ripple", fd_ripple, "passband ripple dB");
    fdesign->add_option("--atten", fd_atten, "stopband attenuation dB");

    // featurize
    auto* feat = app.add_subcommand("featurize", "trace CSV -> feature CSV");
    CommonOpts feat_common;
    add_common(feat, feat_common);
    std::string feat_in, feat_out, feat_label, feat_cal;
    feat->add_option("--in", feat_in, "input trace CSV")->required();
    feat->add_option("--out", feat_out, "output feature CSV")->required();
    feat->add_option("--label", feat_label, "label for all rows");
    feat->add_option("--cal", feat_cal, "calibration JSON");

    // train
    auto* train = app.add_subcommand("train", "train a model on features");
    CommonOpts train_common;
    add_common(train, train_common);
    std::string train_features, train_out = "model.json", train_topo;
    std::string train_init = "nw";
    double train_lo = -10.0, train_hi = 10.0;
    train->add_option("--features", train_features, "labeled feature CSV")
        ->required();
    train->add_option("--out", train_out, "output model JSON");
    train->add_option("--topology", train_topo, "hidden sizes, e.g. 7,7");
    train->add_option("--init", train_init, "nw|uniform");
    train->add_option("--init-lo", train_lo, "uniform init lower bound");
    train->add_option("--init-hi", train_hi, "uniform init upper bound");

    // eval
    auto* eval = app.add_subcommand("eval", "cross-validated evaluation");
    CommonOpts eval_common;
    add_common(eval, eval_common);
    std::string eval_features, eval_topo, eval_report, eval_init = "nw";
    std::size_t eval_synth = 30, eval_runs = 10;
    double eval_noise = 0.05, eval_lo = -10.0, eval_hi = 10.0;
    std::uint64_t eval_epochs = 0;
    eval->add_option("--features", eval_features,
                     "labeled feature CSV (default: synthetic dataset)");
    eval->add_option("--synth-per-class", eval_synth,
                     "windows per class for the synthetic dataset");
    eval->add_option("--noise", eval_noise, "synthetic noise std in g");
    eval->add_option("--topology", eval_topo, "hidden sizes, e.g. 7,7");
    eval->add_option("--runs", eval_runs, "repetitions");
    eval->add_option("--report", eval_report, "report CSV path");
    eval->add_option("--init", eval_init, "nw|uniform");
    eval->add_option("--init-lo", eval_lo, "uniform init lower bound");
    eval->add_option("--init-hi", eval_hi, "uniform init upper bound");
    auto* eval_epochs_opt =
        eval->add_option("--epochs", eval_epochs, "override training epochs");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "topology sweep");
    CommonOpts sweep_common;
    add_common(sweep, sweep_common);
    std::string sweep_features, sweep_topos = "3;5;7;9", sweep_report;
    std::size_t sweep_synth = 30, sweep_runs = 10;
    double sweep_noise = 0.05;
    sweep->add_option("--features", sweep_features, "labeled feature CSV");
    sweep->add_option("--synth-per-class", sweep_synth,
                      "windows per class for the synthetic dataset");
    sweep->add_option("--noise", sweep_noise, "synthetic noise std in g");
    sweep->add_option("--topologies", sweep_topos,
                      "semicolon-separated hidden lists, e.g. 7,3;7,5;7,7");
    sweep->add_option("--runs", sweep_runs, "repetitions per topology");
    sweep->add_option("--report", sweep_report, "sweep CSV path");

    // predict
    auto* predict = app.add_subcommand("predict", "classify a trace or features");
    CommonOpts pred_common;
    add_common(predict, pred_common);
    std::string pred_model, pred_in, pred_kind = "auto", pred_cal;
    predict->add_option("--model", pred_model, "model JSON")->required();
    predict->add_option("--in", pred_in, "trace or feature CSV")->required();
    predict->add_option("--kind", pred_kind, "auto|trace|features");
    predict->add_option("--cal", pred_cal, "calibration JSON");

    // stream
    auto* stream =
        app.add_subcommand("stream", "classify stdin samples as they arrive");
    CommonOpts stream_common;
    add_common(stream, stream_common);
    std::string stream_model, stream_cal;
    stream->add_option("--model", stream_model, "model JSON")->required();
    stream->add_option("--cal", stream_cal, "calibration JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed())
            return cmd_synth(synth_common, synth_activity, synth_duration,
                             synth_noise, synth_fund, synth_amp,
                             fund_opt->count() > 0, amp_opt->count() > 0,
                             synth_out, synth_cal, synth_manifest);
        if (fdesign->parsed())
            return cmd_filter_design(fd_common, fd_order, fd_edge, fd_ripple,
                                     fd_atten);
        if (feat->parsed())
            return cmd_featurize(feat_common, feat_in, feat_out, feat_label,
                                 feat_cal);
        if (train->parsed())
            return cmd_train(train_common, train_features, train_out,
                             train_topo, train_init, train_lo, train_hi);
        if (eval->parsed())
            return cmd_eval(eval_common, eval_features, eval_synth, eval_noise,
                            eval_topo, eval_runs, eval_report, eval_init,
                            eval_lo, eval_hi, eval_epochs,
                            eval_epochs_opt->count() > 0);
        if (sweep->parsed())
            return cmd_sweep(sweep_common, sweep_features, sweep_synth,
                             sweep_noise, sweep_topos, sweep_runs,
                             sweep_report);
        if (predict->parsed())
            return cmd_predict(pred_common, pred_model, pred_in, pred_kind,
                               pred_cal);
        if (stream->parsed())
            return cmd_stream(stream_common, stream_model, stream_cal);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const TrainingError& e) {
        std::cerr << "training aborted: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
