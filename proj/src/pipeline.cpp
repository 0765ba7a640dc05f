#include "scalespace/pipeline.hpp"

#include "scalespace/errors.hpp"
#include "scalespace/rng.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

namespace scalespace {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// Distinct stream for synthetic noise so it never aliases the chain's draws
// when both derive from the one run seed.
std::uint64_t synth_stream_seed(std::uint64_t seed) { return seed ^ 0x5851f42d4c957f2dull; }

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCategory::Input, "FileNotFound", "cannot open input file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCategory::Io, "ReadFailure", "error reading " + path);
    return text;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::Io, "WriteFailure", "cannot open for writing: " + path);
    out << text;
    if (!out) throw Error(ErrorCategory::Io, "WriteFailure", "error writing " + path);
}

TimeSeries load_input(const RunConfig& config) {
    if (config.synth_preset.empty() == config.input_path.empty())
        throw Error(ErrorCategory::Usage, "InvalidConfig",
                    "exactly one of input path and synth preset must be given");
    if (!config.synth_preset.empty()) {
        SyntheticSpec spec = synthetic_preset(config.synth_preset);
        spec.seed = synth_stream_seed(config.model.seed);
        return generate_synthetic(spec);
    }
    std::filesystem::path p(config.input_path);
    return parse_series(read_text_file(config.input_path), p.stem().string());
}

AnalysisResult run_analysis(const RunConfig& config) {
    const auto t_total = std::chrono::steady_clock::now();
    AnalysisResult result;
    result.series = load_input(config);
    validate_series(result.series);

    auto t0 = std::chrono::steady_clock::now();
    result.draws = gibbs_sample(result.series, config.model);
    result.timings["sample"] = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    result.grid = make_scale_grid(result.series, config.scale_count, config.h_min, config.h_max,
                                  config.display);
    result.field = push_draws(result.draws, result.grid, config.model.ridge);
    result.smooths = display_smooths(result.field);
    result.timings["smooth"] = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    result.map = build_map(result.field, config.level, config.joint_mode);
    result.timings["select"] = ms_since(t0);

    result.timings["total"] = ms_since(t_total);
    return result;
}

void write_outputs(const AnalysisResult& result, const RunConfig& config,
                   const RenderStyle& style) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec)
        throw Error(ErrorCategory::Io, "WriteFailure",
                    "cannot create output directory: " + config.out_dir);
    const fs::path dir(config.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    write_text_file((dir / "map.csv").string(), write_map_csv(result.map));
    write_text_file((dir / "smooths.csv").string(), write_smooths_csv(result.smooths));
    write_text_file((dir / "figure.svg").string(),
                    render_map_svg(result.map, result.grid, result.series, result.smooths, style));
    if (config.emit_draws)
        write_text_file((dir / "draws.csv").string(), write_draws_csv(result.draws));

    Timings timings = result.timings;
    timings["render"] = ms_since(t0);
    write_text_file((dir / "summary.json").string(),
                    write_summary_json(result.map, result.grid, config.model,
                                       result.series.label, result.draws.draw_count(), timings));
}

} // namespace scalespace
