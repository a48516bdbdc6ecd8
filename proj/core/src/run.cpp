#include "lsdnet/run.hpp"

#include <charconv>
#include <chrono>
#include <fstream>

#include <json.hpp>

#include "lsdnet/errors.hpp"
#include "lsdnet/io.hpp"
#include "lsdnet/rng.hpp"

namespace lsdnet {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
    return out;
}

long parse_long(const std::string& key, const std::string& value) {
    long out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + value + "'");
    }
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
    const long out = parse_long(key, value);
    if (out < 1) {
        throw ConfigError("key '" + key + "': must be at least 1");
    }
    return static_cast<std::size_t>(out);
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "region.width") {
        config.region_width = parse_double(key, value);
    } else if (key == "region.height") {
        config.region_height = parse_double(key, value);
    } else if (key == "region.polygon") {
        config.region_polygon_path = value;
    } else if (key == "grid.spacing") {
        config.grid_spacing = parse_double(key, value);
    } else if (key == "sensors.count") {
        config.sensor_count = parse_count(key, value);
    } else if (key == "pattern.kind") {
        config.pattern.kind = pattern_kind_from_name(value);
    } else if (key == "pattern.mu") {
        config.pattern.mu = parse_double(key, value);
    } else if (key == "pattern.sigma_g") {
        config.pattern.sigma_g = parse_double(key, value);
    } else if (key == "pattern.sigma_l") {
        config.pattern.sigma_l = parse_double(key, value);
    } else if (key == "pattern.a") {
        config.pattern.a = parse_double(key, value);
    } else if (key == "pattern.b") {
        config.pattern.b = parse_double(key, value);
    } else if (key == "pattern.lambda") {
        config.pattern.rate = parse_double(key, value);
    } else if (key == "pattern.jitter") {
        config.pattern.jitter = parse_double(key, value);
    } else if (key == "pattern.path") {
        config.pattern.path = value;
    } else if (key == "sensing.r_s") {
        config.sensing.r_s = parse_double(key, value);
    } else if (key == "sensing.lambda") {
        config.sensing.lambda = parse_double(key, value);
    } else if (key == "sensing.beta") {
        config.sensing.beta = parse_double(key, value);
    } else if (key == "detect.p_th") {
        config.thresholds.p_th = parse_double(key, value);
    } else if (key == "detect.eta_th") {
        config.thresholds.eta_th = parse_double(key, value);
    } else if (key == "train.gamma_n") {
        config.training.gamma_n = parse_double(key, value);
    } else if (key == "train.gamma_c") {
        config.training.gamma_c = parse_double(key, value);
    } else if (key == "train.learning_rate") {
        config.training.learning_rate = parse_double(key, value);
    } else if (key == "train.max_epochs") {
        config.training.max_epochs = parse_long(key, value);
    } else if (key == "train.beta1") {
        config.training.adam_beta1 = parse_double(key, value);
    } else if (key == "train.beta2") {
        config.training.adam_beta2 = parse_double(key, value);
    } else if (key == "train.epsilon") {
        config.training.adam_epsilon = parse_double(key, value);
    } else if (key == "train.patience") {
        config.training.early_stop_patience = parse_long(key, value);
    } else if (key == "train.delta") {
        config.training.early_stop_delta = parse_double(key, value);
    } else if (key == "minsensors.r_a") {
        config.min_sensors.r_a = parse_double(key, value);
    } else if (key == "minsensors.initial_count") {
        config.min_sensors.initial_count = parse_count(key, value);
    } else if (key == "output.dir") {
        config.output_dir = value;
    } else if (key == "seed") {
        config.seed = parse_u64(key, value);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

void validate(const RunConfig& config, const std::filesystem::path& path) {
    const auto fail = [&](const std::string& what) {
        throw ConfigError(path.string() + ": " + what);
    };
    const bool has_rect = config.region_width || config.region_height;
    const bool has_poly = !config.region_polygon_path.empty();
    if (has_rect && has_poly) {
        fail("region.width/region.height and region.polygon are mutually exclusive");
    }
    if (!has_poly) {
        if (!config.region_width || !config.region_height) {
            fail("region needs region.width and region.height, or region.polygon");
        }
        if (!(*config.region_width > 0.0) || !(*config.region_height > 0.0)) {
            fail("region extents must be positive");
        }
    }
    if (!(config.grid_spacing > 0.0)) fail("grid.spacing must be positive");
    if (!(config.sensing.r_s > 0.0)) fail("sensing.r_s must be positive");
    if (!(config.sensing.lambda > 0.0)) fail("sensing.lambda must be positive");
    if (!(config.sensing.beta > 0.0)) fail("sensing.beta must be positive");
    if (!(config.thresholds.p_th > 0.0) || config.thresholds.p_th > 1.0) {
        fail("detect.p_th must be in (0, 1]");
    }
    if (config.thresholds.eta_th < 0.0 || config.thresholds.eta_th >= 1.0) {
        fail("detect.eta_th must be in [0, 1)");
    }
    if (config.training.gamma_n < 0.0 || config.training.gamma_c < 0.0) {
        fail("loss weights must be nonnegative");
    }
    if (!(config.training.learning_rate > 0.0)) fail("train.learning_rate must be positive");
    if (config.training.max_epochs < 0) fail("train.max_epochs must be nonnegative");
    if (config.training.early_stop_patience < 0) fail("train.patience must be nonnegative");
    if (config.training.early_stop_delta && *config.training.early_stop_delta < 0.0) {
        fail("train.delta must be nonnegative");
    }
    if (config.training.adam_beta1 < 0.0 || config.training.adam_beta1 >= 1.0 ||
        config.training.adam_beta2 < 0.0 || config.training.adam_beta2 >= 1.0) {
        fail("adam betas must be in [0, 1)");
    }
    if (!(config.training.adam_epsilon > 0.0)) fail("train.epsilon must be positive");
    if (config.pattern.jitter < 0.0) fail("pattern.jitter must be nonnegative");
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config: " + path.string());
    }
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": empty key or value");
        }
        for (const auto& [seen, _] : config.echo) {
            if (seen == key) {
                throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                  ": duplicate key '" + key + "'");
            }
        }
        try {
            apply_key(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        config.echo.emplace_back(key, value);
    }
    validate(config, path);
    return config;
}

Region region_from_config(const RunConfig& config) {
    if (config.region_polygon_path.empty()) {
        return Region::rectangle(*config.region_width, *config.region_height);
    }
    std::ifstream in(config.region_polygon_path);
    if (!in) {
        throw BadFile("cannot open polygon outline: " + config.region_polygon_path);
    }
    std::vector<Point> vertices;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto comma = stripped.find(',');
        if (comma == std::string::npos) {
            throw BadFile(config.region_polygon_path + ":" + std::to_string(line_no) +
                          ": expected 'x,y', got '" + stripped + "'");
        }
        try {
            vertices.push_back(Point{parse_double("x", trim(stripped.substr(0, comma))),
                                     parse_double("y", trim(stripped.substr(comma + 1)))});
        } catch (const ConfigError& e) {
            throw BadFile(config.region_polygon_path + ":" + std::to_string(line_no) + ": " +
                          e.what());
        }
    }
    return Region::polygon(std::move(vertices));
}

CoverageReport coverage_rate(const DetectionReport& report, const TargetGrid& grid) {
    CoverageReport out;
    out.n_targets = grid.n_targets;
    for (std::uint8_t d : report.detected) out.n_detected += d;
    out.rho = out.n_targets == 0
                  ? 0.0
                  : static_cast<double>(out.n_detected) / static_cast<double>(out.n_targets);
    return out;
}

bool operator==(const LossBreakdown& a, const LossBreakdown& b) {
    return a.loss_ni == b.loss_ni && a.loss_cov == b.loss_cov && a.total == b.total &&
           a.coverage_rate == b.coverage_rate;
}

bool operator==(const RunSummary& a, const RunSummary& b) {
    return a.coverage == b.coverage && a.final_k == b.final_k &&
           a.wall_time_seconds == b.wall_time_seconds &&
           a.epochs_executed == b.epochs_executed && a.final_loss == b.final_loss &&
           a.rng_algorithm == b.rng_algorithm && a.tool_version == b.tool_version &&
           a.config_echo == b.config_echo;
}

std::string summary_to_json(const RunSummary& summary) {
    nlohmann::ordered_json j;
    j["coverage"] = {{"n_detected", summary.coverage.n_detected},
                     {"n_targets", summary.coverage.n_targets},
                     {"rho", summary.coverage.rho}};
    j["final_k"] = summary.final_k;
    j["wall_time_seconds"] = summary.wall_time_seconds;
    j["epochs_executed"] = summary.epochs_executed;
    j["final_loss"] = {{"loss_ni", summary.final_loss.loss_ni},
                       {"loss_cov", summary.final_loss.loss_cov},
                       {"total", summary.final_loss.total},
                       {"coverage_rate", summary.final_loss.coverage_rate}};
    j["rng_algorithm"] = summary.rng_algorithm;
    j["tool_version"] = summary.tool_version;
    nlohmann::ordered_json echo = nlohmann::ordered_json::object();
    for (const auto& [key, value] : summary.config_echo) echo[key] = value;
    j["config"] = echo;
    return j.dump(2) + "\n";
}

RunSummary summary_from_json(const std::string& text) {
    const auto j = nlohmann::ordered_json::parse(text);
    RunSummary s;
    s.coverage.n_detected = j.at("coverage").at("n_detected").get<std::size_t>();
    s.coverage.n_targets = j.at("coverage").at("n_targets").get<std::size_t>();
    s.coverage.rho = j.at("coverage").at("rho").get<double>();
    s.final_k = j.at("final_k").get<std::size_t>();
    s.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    s.epochs_executed = j.at("epochs_executed").get<long>();
    s.final_loss.loss_ni = j.at("final_loss").at("loss_ni").get<double>();
    s.final_loss.loss_cov = j.at("final_loss").at("loss_cov").get<double>();
    s.final_loss.total = j.at("final_loss").at("total").get<double>();
    s.final_loss.coverage_rate = j.at("final_loss").at("coverage_rate").get<double>();
    s.rng_algorithm = j.at("rng_algorithm").get<std::string>();
    s.tool_version = j.at("tool_version").get<std::string>();
    for (const auto& [key, value] : j.at("config").items()) {
        s.config_echo.emplace_back(key, value.get<std::string>());
    }
    return s;
}

namespace {

struct Prepared {
    Region region;
    TargetGrid grid;
};

Prepared prepare(const RunConfig& config) {
    Region region = region_from_config(config);
    TargetGrid grid = discretize(region, config.grid_spacing);
    if (grid.n_targets == 0) {
        throw DegenerateRegion("region contains no lattice targets at this spacing");
    }
    return Prepared{std::move(region), std::move(grid)};
}

void write_coverage_grid(const std::filesystem::path& path, const TargetGrid& grid,
                         const DetectionReport& report) {
    std::string content = "x,y,p_fused,n_effect,detected\n";
    std::size_t j = 0;
    for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
        if (!grid.mask[idx]) continue;
        content += format_double(grid.points[idx].x);
        content += ',';
        content += format_double(grid.points[idx].y);
        content += ',';
        content += format_double_sig9(report.fused_probability[j]);
        content += ',';
        content += std::to_string(report.n_effect[j]);
        content += ',';
        content += report.detected[j] ? '1' : '0';
        content += '\n';
        ++j;
    }
    atomic_write_text(path, content);
}

void write_loss_history(const std::filesystem::path& path,
                        const std::vector<LossBreakdown>& history) {
    std::string content = "epoch,loss_ni,loss_cov,total,coverage_rate\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        content += std::to_string(i + 1);
        content += ',';
        content += format_double_sig9(history[i].loss_ni);
        content += ',';
        content += format_double_sig9(history[i].loss_cov);
        content += ',';
        content += format_double_sig9(history[i].total);
        content += ',';
        content += format_double_sig9(history[i].coverage_rate);
        content += '\n';
    }
    atomic_write_text(path, content);
}

void write_removals(const std::filesystem::path& path,
                    const std::vector<RemovalEvent>& removals) {
    std::string content = "pass,removed_sensor_id,remaining_k\n";
    for (const RemovalEvent& e : removals) {
        content += std::to_string(e.pass);
        content += ',';
        content += std::to_string(e.removed_sensor_id);
        content += ',';
        content += std::to_string(e.remaining_k);
        content += '\n';
    }
    atomic_write_text(path, content);
}

RunSummary base_summary(const RunConfig& config) {
    RunSummary s;
    s.rng_algorithm = CounterRng::kAlgorithmId;
    s.tool_version = kToolVersion;
    s.config_echo = config.echo;
    return s;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunSummary run_deploy(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    Prepared prep = prepare(config);
    PatternSpec pattern = config.pattern;
    pattern.seed = config.seed;
    if (pattern.kind != PatternKind::kFile && config.sensor_count == 0) {
        throw ConfigError("deploy needs sensors.count (or a file pattern)");
    }
    SensorField initial = generate(pattern, config.sensor_count, prep.region);
    if (initial.empty()) {
        throw BadFile("deploy: the pattern produced no sensors");
    }
    TrainResult trained =
        train(std::move(initial), prep.grid, config.sensing, config.thresholds, config.training);
    const ForwardResult fw = forward(trained.field, prep.grid, config.sensing, config.thresholds);

    RunSummary summary = base_summary(config);
    summary.coverage = coverage_rate(fw.report, prep.grid);
    summary.final_k = trained.field.size();
    summary.epochs_executed = static_cast<long>(trained.history.size());
    summary.final_loss = make_loss_breakdown(fw.report, fw.importance, config.training);
    summary.wall_time_seconds = seconds_since(start);

    std::filesystem::create_directories(config.output_dir);
    write_sensor_csv(config.output_dir / "sensors.csv", trained.field);
    write_coverage_grid(config.output_dir / "coverage_grid.csv", prep.grid, fw.report);
    write_loss_history(config.output_dir / "loss_history.csv", trained.history);
    atomic_write_text(config.output_dir / "summary.json", summary_to_json(summary));
    return summary;
}

RunSummary run_evaluate(const RunConfig& config, const std::filesystem::path& coords) {
    const auto start = std::chrono::steady_clock::now();
    Prepared prep = prepare(config);
    const SensorField field = read_sensor_csv(coords);
    if (field.empty()) {
        throw BadFile(coords.string() + ": no sensor rows");
    }
    const ForwardResult fw = forward(field, prep.grid, config.sensing, config.thresholds);

    RunSummary summary = base_summary(config);
    summary.coverage = coverage_rate(fw.report, prep.grid);
    summary.final_k = field.size();
    summary.epochs_executed = 0;
    summary.final_loss = make_loss_breakdown(fw.report, fw.importance, config.training);
    summary.wall_time_seconds = seconds_since(start);

    std::filesystem::create_directories(config.output_dir);
    write_coverage_grid(config.output_dir / "coverage_grid.csv", prep.grid, fw.report);
    atomic_write_text(config.output_dir / "summary.json", summary_to_json(summary));
    return summary;
}

RunSummary run_minsensors(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    Prepared prep = prepare(config);
    if (!(config.min_sensors.r_a > 0.0)) {
        throw ConfigError("minsensors.r_a is required");
    }
    const std::size_t k0 = config.min_sensors.initial_count.value_or(static_cast<std::size_t>(
        k_mbr_min(prep.grid.bounds.extent_x, prep.grid.bounds.extent_y, config.sensing.r_s)));
    PatternSpec pattern = config.pattern;
    pattern.seed = config.seed;
    SensorField initial = generate(pattern, k0, prep.region);
    if (initial.empty()) {
        throw BadFile("minsensors: the pattern produced no sensors");
    }
    MinSensorsConfig mc = config.min_sensors;
    mc.inner = config.training;
    const MinSensorsResult res =
        acquire_minimum(initial, prep.grid, config.sensing, config.thresholds, mc);
    const ForwardResult fw = forward(res.field, prep.grid, config.sensing, config.thresholds);

    RunSummary summary = base_summary(config);
    summary.coverage = coverage_rate(fw.report, prep.grid);
    summary.final_k = res.field.size();
    summary.epochs_executed = res.total_epochs;
    summary.final_loss = make_loss_breakdown(fw.report, fw.importance, config.training);
    summary.wall_time_seconds = seconds_since(start);

    std::filesystem::create_directories(config.output_dir);
    write_sensor_csv(config.output_dir / "sensors.csv", res.field);
    write_coverage_grid(config.output_dir / "coverage_grid.csv", prep.grid, fw.report);
    write_loss_history(config.output_dir / "loss_history.csv", res.final_history);
    write_removals(config.output_dir / "removals.csv", res.removals);
    atomic_write_text(config.output_dir / "summary.json", summary_to_json(summary));
    return summary;
}

RunSummary run_generate(const RunConfig& config, const std::filesystem::path& out_path) {
    const auto start = std::chrono::steady_clock::now();
    const Region region = region_from_config(config);
    PatternSpec pattern = config.pattern;
    pattern.seed = config.seed;
    if (pattern.kind != PatternKind::kFile && config.sensor_count == 0) {
        throw ConfigError("generate needs sensors.count (or a file pattern)");
    }
    const SensorField field = generate(pattern, config.sensor_count, region);

    RunSummary summary = base_summary(config);
    summary.final_k = field.size();
    summary.wall_time_seconds = seconds_since(start);
    if (out_path.has_parent_path()) {
        std::filesystem::create_directories(out_path.parent_path());
    }
    write_sensor_csv(out_path, field);
    return summary;
}

}  // namespace lsdnet
