#include "actinet/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "actinet/errors.hpp"
#include "actinet/format.hpp"

namespace actinet {
namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        if (!std::isfinite(v))
            throw DataError("non-finite value at line " + std::to_string(line_no));
        return v;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception&) {
        throw DataError("malformed number '" + s + "' at line " +
                        std::to_string(line_no));
    }
}

} // namespace

RawTrace read_trace_csv(std::istream& is, double sample_rate_hz) {
    RawTrace trace;
    trace.sample_rate_hz = sample_rate_hz;

    std::string line;
    std::size_t line_no = 0;
    bool has_time = false;
    bool saw_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> cols = split_csv(line);
        if (!saw_header) {
            saw_header = true;
            if (cols.size() == 4 && cols[0] == "t_ms") {
                has_time = true;
                continue;
            }
            if (cols.size() == 3 && cols[0] == "x_mV") continue;
            throw DataError("trace CSV header must be t_ms,x_mV,y_mV,z_mV "
                            "or x_mV,y_mV,z_mV (line 1)");
        }
        const std::size_t expect = has_time ? 4 : 3;
        if (cols.size() != expect)
            throw DataError("expected " + std::to_string(expect) +
                            " columns at line " + std::to_string(line_no));
        const std::size_t off = has_time ? 1 : 0;
        RawSample s;
        s.x_mv = parse_double(cols[off + 0], line_no);
        s.y_mv = parse_double(cols[off + 1], line_no);
        s.z_mv = parse_double(cols[off + 2], line_no);
        trace.samples.push_back(s);
    }
    if (!saw_header) throw DataError("empty trace file");
    return trace;
}

RawTrace read_trace_csv_file(const std::string& path, double sample_rate_hz) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open trace file: " + path);
    return read_trace_csv(is, sample_rate_hz);
}

void write_trace_csv(std::ostream& os, const RawTrace& trace) {
    os << "t_ms,x_mV,y_mV,z_mV\n";
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const RawSample& s = trace.samples[i];
        const double t_ms =
            1000.0 * static_cast<double>(i) / trace.sample_rate_hz;
        os << format_double(t_ms) << ',' << format_double(s.x_mv) << ','
           << format_double(s.y_mv) << ',' << format_double(s.z_mv) << "\n";
    }
}

void write_trace_csv_file(const std::string& path, const RawTrace& trace) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write trace file: " + path);
    write_trace_csv(os, trace);
}

std::vector<FeatureVector> read_features_csv(std::istream& is) {
    std::vector<FeatureVector> rows;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> cols = split_csv(line);
        if (!saw_header) {
            saw_header = true;
            if (cols.size() != kFeatureCount + 1 || cols[0] != "label")
                throw DataError("feature CSV header must be label,f0,...,f21");
            continue;
        }
        if (cols.size() != kFeatureCount + 1)
            throw DataError("expected " + std::to_string(kFeatureCount + 1) +
                            " columns at line " + std::to_string(line_no));
        FeatureVector fv;
        if (!cols[0].empty()) {
            const auto label = activity_from_string(cols[0]);
            if (!label)
                throw DataError("unknown label '" + cols[0] + "' at line " +
                                std::to_string(line_no));
            fv.label = label;
        }
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            fv.features[c] = parse_double(cols[c + 1], line_no);
        rows.push_back(fv);
    }
    if (!saw_header) throw DataError("empty feature file");
    return rows;
}

std::vector<FeatureVector> read_features_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open feature file: " + path);
    return read_features_csv(is);
}

void write_features_csv(std::ostream& os,
                        const std::vector<FeatureVector>& rows) {
    os << "label";
    for (std::size_t c = 0; c < kFeatureCount; ++c) os << ",f" << c;
    os << "\n";
    for (const FeatureVector& fv : rows) {
        os << (fv.label ? to_string(*fv.label) : "");
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            os << ',' << format_double(fv.features[c]);
        os << "\n";
    }
}

void write_features_csv_file(const std::string& path,
                             const std::vector<FeatureVector>& rows) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write feature file: " + path);
    write_features_csv(os, rows);
}

CalibrationParams read_calibration_file(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad calibration JSON: " + std::string(e.what()));
    }
    CalibrationParams cal;
    try {
        for (int a = 0; a < 3; ++a) {
            cal.offset_mv[static_cast<std::size_t>(a)] =
                j.at("offset_mV").at(a).get<double>();
            cal.sensitivity_mv_per_g[static_cast<std::size_t>(a)] =
                j.at("sensitivity_mV_per_g").at(a).get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad calibration JSON: " + std::string(e.what()));
    }
    return cal;
}

void write_calibration_file(const std::string& path,
                            const CalibrationParams& cal) {
    Json j;
    j["offset_mV"] = cal.offset_mv;
    j["sensitivity_mV_per_g"] = cal.sensitivity_mv_per_g;
    write_text_file(path, j.dump(2) + "\n");
}

std::string model_to_json(const ModelFile& model) {
    Json j;
    j["format_version"] = 1;
    j["topology"] = {{"n_inputs", model.params.topology.n_inputs},
                     {"hidden_sizes", model.params.topology.hidden_sizes},
                     {"n_outputs", model.params.topology.n_outputs}};
    Json layers = Json::array();
    for (std::size_t l = 0; l < model.params.layers.size(); ++l) {
        const LayerParams& lp = model.params.layers[l];
        Json weights = Json::array();
        for (std::size_t r = 0; r < lp.weights.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < lp.weights.cols(); ++c)
                row.push_back(lp.weights(r, c));
            weights.push_back(std::move(row));
        }
        layers.push_back({{"transfer",
                           to_string(model.params.topology.transfer(l))},
                          {"weights", std::move(weights)},
                          {"bias", lp.bias}});
    }
    j["layers"] = std::move(layers);
    j["norm"] = {{"mean", model.norm.mean}, {"std", model.norm.stddev}};
    j["training"] = {{"seed", model.seed},
                     {"stop_reason", model.stop_reason},
                     {"final_mse", model.final_mse}};
    return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad model JSON: " + std::string(e.what()));
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw DataError("unsupported model format_version");
        ModelFile model;
        Topology topo;
        topo.n_inputs = j.at("topology").at("n_inputs").get<std::size_t>();
        topo.hidden_sizes = j.at("topology")
                                .at("hidden_sizes")
                                .get<std::vector<std::size_t>>();
        topo.n_outputs = j.at("topology").at("n_outputs").get<std::size_t>();
        topo.validate();
        model.params.topology = topo;

        const Json& layers = j.at("layers");
        if (layers.size() != topo.layer_count())
            throw DataError("model layer count does not match topology");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const Json& jl = layers[l];
            const std::size_t fo = topo.fan_out(l), fi = topo.fan_in(l);
            if (jl.at("transfer").get<std::string>() !=
                to_string(topo.transfer(l)))
                throw DataError("model transfer tag mismatch");
            LayerParams lp;
            lp.weights = Matrix(fo, fi);
            const Json& w = jl.at("weights");
            if (w.size() != fo) throw DataError("model weight shape mismatch");
            for (std::size_t r = 0; r < fo; ++r) {
                if (w[r].size() != fi)
                    throw DataError("model weight shape mismatch");
                for (std::size_t c = 0; c < fi; ++c)
                    lp.weights(r, c) = w[r][c].get<double>();
            }
            lp.bias = jl.at("bias").get<std::vector<double>>();
            if (lp.bias.size() != fo)
                throw DataError("model bias shape mismatch");
            model.params.layers.push_back(std::move(lp));
        }

        const Json& norm = j.at("norm");
        const auto mean = norm.at("mean").get<std::vector<double>>();
        const auto sd = norm.at("std").get<std::vector<double>>();
        if (mean.size() != topo.n_inputs || sd.size() != topo.n_inputs)
            throw DataError("model normalizer width mismatch");
        if (topo.n_inputs == kFeatureCount) {
            std::copy(mean.begin(), mean.end(), model.norm.mean.begin());
            std::copy(sd.begin(), sd.end(), model.norm.stddev.begin());
        } else {
            throw DataError("model input width is not the feature count");
        }

        model.seed = j.at("training").at("seed").get<std::uint64_t>();
        model.stop_reason =
            j.at("training").at("stop_reason").get<std::string>();
        model.final_mse = j.at("training").at("final_mse").get<double>();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad model JSON: " + std::string(e.what()));
    }
}

ModelFile read_model_file(const std::string& path) {
    return model_from_json(read_text_file(path));
}

void write_model_file(const std::string& path, const ModelFile& model) {
    write_text_file(path, model_to_json(model));
}

std::string config_to_json(const PipelineConfig& config) {
    Json j;
    j["sample_rate_hz"] = config.sample_rate_hz;
    j["smoothing_window"] = config.smoothing_window;
    j["filter"] = {{"order", config.filter_order},
                   {"edge_hz", config.filter_edge_hz},
                   {"ripple_db", config.filter_ripple_db},
                   {"atten_db", config.filter_atten_db}};
    j["window_hop"] = config.window_hop;
    j["hidden_sizes"] = config.hidden_sizes;
    Json train;
    train["epochs"] = config.train.epochs;
    train["goal"] = config.train.goal;
    train["max_fail"] = config.train.max_fail;
    train["mem_reduc"] = config.train.mem_reduc;
    train["min_grad"] = config.train.min_grad;
    train["mu"] = config.train.mu;
    train["mu_dec"] = config.train.mu_dec;
    train["mu_inc"] = config.train.mu_inc;
    train["mu_max"] = config.train.mu_max;
    train["show"] = config.train.show;
    // JSON has no infinity literal; the unbounded default round-trips as a
    // string.
    if (std::isfinite(config.train.time_limit_s))
        train["time_limit_s"] = config.train.time_limit_s;
    else
        train["time_limit_s"] = "inf";
    j["train"] = std::move(train);
    j["seed"] = config.seed;
    j["baseline_rest_threshold"] = config.baseline_rest_threshold;
    return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad config JSON: " + std::string(e.what()));
    }
    try {
        PipelineConfig c;
        c.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        c.smoothing_window = j.at("smoothing_window").get<int>();
        c.filter_order = j.at("filter").at("order").get<int>();
        c.filter_edge_hz = j.at("filter").at("edge_hz").get<double>();
        c.filter_ripple_db = j.at("filter").at("ripple_db").get<double>();
        c.filter_atten_db = j.at("filter").at("atten_db").get<double>();
        c.window_hop = j.at("window_hop").get<std::size_t>();
        c.hidden_sizes =
            j.at("hidden_sizes").get<std::vector<std::size_t>>();
        const Json& t = j.at("train");
        c.train.epochs = t.at("epochs").get<std::uint64_t>();
        c.train.goal = t.at("goal").get<double>();
        c.train.max_fail = t.at("max_fail").get<int>();
        c.train.mem_reduc = t.at("mem_reduc").get<int>();
        c.train.min_grad = t.at("min_grad").get<double>();
        c.train.mu = t.at("mu").get<double>();
        c.train.mu_dec = t.at("mu_dec").get<double>();
        c.train.mu_inc = t.at("mu_inc").get<double>();
        c.train.mu_max = t.at("mu_max").get<double>();
        c.train.show = t.at("show").get<int>();
        if (t.at("time_limit_s").is_string()) {
            if (t.at("time_limit_s").get<std::string>() != "inf")
                throw DataError("time_limit_s must be a number or \"inf\"");
            c.train.time_limit_s = std::numeric_limits<double>::infinity();
        } else {
            c.train.time_limit_s = t.at("time_limit_s").get<double>();
        }
        c.seed = j.at("seed").get<std::uint64_t>();
        c.baseline_rest_threshold =
            j.at("baseline_rest_threshold").get<double>();
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad config JSON: " + std::string(e.what()));
    }
}

PipelineConfig read_config_file(const std::string& path) {
    return config_from_json(read_text_file(path));
}

void write_config_file(const std::string& path, const PipelineConfig& config) {
    write_text_file(path, config_to_json(config));
}

void append_manifest_line(const std::string& manifest_path,
                          const std::string& trace_path, Activity label) {
    std::ofstream os(manifest_path, std::ios::app);
    if (!os) throw DataError("cannot open manifest: " + manifest_path);
    os << trace_path << ',' << to_string(label) << "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write file: " + path);
    os << text;
}

} // namespace actinet
