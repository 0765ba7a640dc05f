#pragma once

#include "scalespace/credibility.hpp"
#include "scalespace/model.hpp"
#include "scalespace/report.hpp"
#include "scalespace/series.hpp"
#include "scalespace/smoother.hpp"

#include <optional>
#include <string>

namespace scalespace {

/// Everything one `analyze` run needs; flag-for-flag mirror of the CLI.
struct RunConfig {
    std::string input_path;             ///< CSV input; empty when synth_preset is set
    std::string synth_preset;           ///< preset name; empty when reading a file
    std::string out_dir;
    ModelConfig model;
    int scale_count = 30;
    std::optional<double> h_min;
    std::optional<double> h_max;
    std::vector<double> display;        ///< up to 3 bandwidths, snapped to the grid
    double level = 0.95;
    JointMode joint_mode = JointMode::Row;
    bool emit_draws = false;
};

struct AnalysisResult {
    TimeSeries series;
    PosteriorDraws draws;
    ScaleGrid grid;
    DerivativeField field;
    CredibilityMap map;
    DisplaySmooths smooths;
    Timings timings;
};

/// Resolve the input series: read and parse input_path, or generate the
/// preset with its seed replaced by the run seed.
TimeSeries load_input(const RunConfig& config);

/// parse -> gibbs_sample -> make_scale_grid -> push_draws -> build_map.
AnalysisResult run_analysis(const RunConfig& config);

/// Write map.csv, smooths.csv, summary.json, figure.svg (and draws.csv when
/// requested) into config.out_dir, creating it if needed.
void write_outputs(const AnalysisResult& result, const RunConfig& config,
                   const RenderStyle& style = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace scalespace
