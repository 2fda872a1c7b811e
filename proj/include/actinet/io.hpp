#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "actinet/evaluate.hpp"
#include "actinet/features.hpp"
#include "actinet/pipeline.hpp"
#include "actinet/signal.hpp"

namespace actinet {

// Trace CSV: header `t_ms,x_mV,y_mV,z_mV` (the t_ms column is optional and
// ignored; samples are taken as uniform at the configured rate). Malformed
// rows and non-finite values raise DataError with the line number.
RawTrace read_trace_csv(std::istream& is, double sample_rate_hz);
RawTrace read_trace_csv_file(const std::string& path, double sample_rate_hz);
void write_trace_csv(std::ostream& os, const RawTrace& trace);
void write_trace_csv_file(const std::string& path, const RawTrace& trace);

// Feature CSV: header `label,f0,...,f21`; an empty label column means
// unlabeled.
std::vector<FeatureVector> read_features_csv(std::istream& is);
std::vector<FeatureVector> read_features_csv_file(const std::string& path);
void write_features_csv(std::ostream& os,
                        const std::vector<FeatureVector>& rows);
void write_features_csv_file(const std::string& path,
                             const std::vector<FeatureVector>& rows);

// Calibration JSON: {"offset_mV": [..3], "sensitivity_mV_per_g": [..3]}.
CalibrationParams read_calibration_file(const std::string& path);
void write_calibration_file(const std::string& path,
                            const CalibrationParams& cal);

// Versioned model file: topology, transfer tags, weights and biases
// (row-major), the normalizer fitted at training time, and training
// metadata. Unsupported versions or inconsistent shapes raise DataError.
struct ModelFile {
    MlpParams params;
    NormStats norm;
    std::uint64_t seed = 0;
    std::string stop_reason;
    double final_mse = 0.0;
};

std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(const std::string& text);
ModelFile read_model_file(const std::string& path);
void write_model_file(const std::string& path, const ModelFile& model);

// Pipeline configuration JSON; serialize -> parse -> serialize is
// byte-identical.
std::string config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const std::string& text);
PipelineConfig read_config_file(const std::string& path);
void write_config_file(const std::string& path, const PipelineConfig& config);

// One "path,label" line per trace, as written by the synth subcommand.
void append_manifest_line(const std::string& manifest_path,
                          const std::string& trace_path, Activity label);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace actinet
