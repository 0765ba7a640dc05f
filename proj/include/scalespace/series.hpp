#pragma once

#include <optional>
#include <string>
#include <vector>

namespace scalespace {

/// An observed reconstruction: strictly increasing times (years), one value
/// per time, optional per-point standard errors (same units as values).
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::optional<std::vector<double>> stderrs;
    std::string label;

    std::size_t size() const { return times.size(); }

    bool operator==(const TimeSeries&) const = default;
};

/// Throws Error(Input, ...) unless the series satisfies its invariants:
/// n >= 4, strictly increasing finite times, finite values, positive stderrs.
void validate_series(const TimeSeries& series);

/// Parse the canonical CSV format: header `t,y` or `t,y,se`, `#` comments,
/// decimal-point numbers only. Input is rejected, not repaired; every error
/// carries the offending 1-based physical line number.
TimeSeries parse_series(const std::string& text, const std::string& label = "");

/// Render to the canonical CSV format with 17 significant digits, so
/// parse(render(s)) == s exactly. A non-empty label is kept in a
/// `# label: ...` comment that parse_series recognizes.
std::string render_series(const TimeSeries& series);

/// Recipe for a synthetic series: linear trend + Gaussian bump + hinge ramp
/// + seeded Gaussian noise on an equally spaced grid.
struct SyntheticSpec {
    int n = 100;
    double t_start = 0.0;
    double t_end = 990.0;
    double trend_slope = 0.0;  // units/year
    double bump_center = 0.0;  // years
    double bump_width = 1.0;   // years, > 0
    double bump_depth = 0.0;   // units; negative = local minimum
    double ramp_start = 0.0;   // years
    double ramp_slope = 0.0;   // units/year after ramp_start
    double noise_sd = 0.0;     // units
    std::uint64_t seed = 42;
    std::string label;
};

/// Noiseless mean of the synthetic recipe at time t.
double synthetic_mean(const SyntheticSpec& spec, double t);

/// Deterministic pure function of the spec (including seed).
TimeSeries generate_synthetic(const SyntheticSpec& spec);

/// Named presets behind the CLI: "fig1-analogue", "flat", "trend".
SyntheticSpec synthetic_preset(const std::string& name);

} // namespace scalespace
