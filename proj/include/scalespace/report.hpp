#pragma once

#include "scalespace/credibility.hpp"
#include "scalespace/model.hpp"
#include "scalespace/series.hpp"
#include "scalespace/smoother.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace scalespace {

/// Colors and canvas for the two-panel figure.
struct RenderStyle {
    std::array<int, 3> rgb_increase{214, 39, 40};
    std::array<int, 3> rgb_decrease{31, 119, 180};
    std::array<int, 3> rgb_none{180, 180, 180};
    int width_px = 900;
    int height_px = 640;
    bool show_display_scale_lines = true;
};

void validate_style(const RenderStyle& style);

/// Posterior-mean smooth and smoothed derivative at the display scales only.
struct DisplaySmooths {
    std::vector<double> bandwidths;            ///< ascending display scales
    std::vector<double> times;                 ///< n
    std::vector<std::vector<double>> smooth;   ///< per scale: n
    std::vector<std::vector<double>> deriv;    ///< per scale: n
};

DisplaySmooths display_smooths(const DerivativeField& field);

/// Deterministic standalone SVG: upper panel the observed series (asterisks)
/// with the display-scale posterior-mean smooths, lower panel the K x n
/// credibility map colored by label, y = log10(h) with small scales at the
/// bottom. Byte-stable across runs: every number is printed with
/// locale-independent fixed formatting.
std::string render_map_svg(const CredibilityMap& map, const ScaleGrid& grid,
                           const TimeSeries& series, const DisplaySmooths& smooths,
                           const RenderStyle& style);

/// `map.csv`: one row per cell, header
/// scale_index,h,time_index,t,label,p_pos,p_neg with labels inc|dec|none.
std::string write_map_csv(const CredibilityMap& map);
CredibilityMap read_map_csv(const std::string& text);

/// `smooths.csv`: header h,t,post_mean_smooth,post_mean_deriv, one row per
/// display scale and time.
std::string write_smooths_csv(const DisplaySmooths& smooths);
DisplaySmooths read_smooths_csv(const std::string& text);

/// `draws.csv`: header draw,sigma2,lambda,mu_1..mu_n.
std::string write_draws_csv(const PosteriorDraws& draws);

/// Stage wall-clock timings in milliseconds.
using Timings = std::map<std::string, double>;

/// Versioned run summary: config echo, per-row selected counts and joint
/// probabilities, display scales, sampler diagnostics, timings.
std::string write_summary_json(const CredibilityMap& map, const ScaleGrid& grid,
                               const ModelConfig& config, const std::string& label,
                               int retained_draws, const Timings& timings);

/// Throws Error(Input, "InvalidSummary") when required fields are missing or
/// carry the wrong type.
void validate_summary_json(const std::string& text);

} // namespace scalespace
