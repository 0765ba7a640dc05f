#include "scalespace/series.hpp"

#include "scalespace/errors.hpp"
#include "scalespace/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace scalespace {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

double parse_field(const std::string& field, long row) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || field.empty())
        throw Error(ErrorCategory::Input, "MalformedRow",
                    "row " + std::to_string(row) + ": non-numeric field '" + field + "'", row);
    if (!std::isfinite(v))
        throw Error(ErrorCategory::Input, "NonFiniteValue",
                    "row " + std::to_string(row) + ": non-finite value '" + field + "'", row);
    return v;
}

std::string format_g17(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace

void validate_series(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 4)
        throw Error(ErrorCategory::Input, "TooFewPoints",
                    "series has " + std::to_string(n) + " points, need at least 4",
                    static_cast<long>(n));
    if (series.values.size() != n)
        throw Error(ErrorCategory::Input, "DimensionMismatch",
                    "times and values differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(series.times[i]) || !std::isfinite(series.values[i]))
            throw Error(ErrorCategory::Input, "NonFiniteValue",
                        "non-finite entry at index " + std::to_string(i + 1));
        if (i > 0 && !(series.times[i] > series.times[i - 1]))
            throw Error(ErrorCategory::Input, "NonMonotoneTimes",
                        "times not strictly increasing at index " + std::to_string(i + 1));
    }
    if (series.stderrs) {
        if (series.stderrs->size() != n)
            throw Error(ErrorCategory::Input, "DimensionMismatch",
                        "stderrs length differs from times");
        for (std::size_t i = 0; i < n; ++i) {
            double s = (*series.stderrs)[i];
            if (!std::isfinite(s) || s <= 0.0)
                throw Error(ErrorCategory::Input, "NonPositiveStderr",
                            "standard error must be > 0 at index " + std::to_string(i + 1));
        }
    }
}

TimeSeries parse_series(const std::string& text, const std::string& label) {
    TimeSeries series;
    series.label = label;

    std::istringstream stream(text);
    std::string line;
    long row = 0;
    long last_data_row = 0;
    bool have_header = false;
    bool have_se = false;

    while (std::getline(stream, line)) {
        ++row;
        std::string body = trim(line);
        if (body.empty()) continue;
        if (body[0] == '#') {
            const std::string tag = "# label:";
            if (body.rfind(tag, 0) == 0 && series.label.empty())
                series.label = trim(body.substr(tag.size()));
            continue;
        }
        if (!have_header) {
            auto fields = split_csv(body);
            if (fields.size() == 2 && fields[0] == "t" && fields[1] == "y") {
                have_se = false;
            } else if (fields.size() == 3 && fields[0] == "t" && fields[1] == "y" &&
                       fields[2] == "se") {
                have_se = true;
            } else {
                throw Error(ErrorCategory::Input, "MalformedRow",
                            "row " + std::to_string(row) + ": header must be 't,y' or 't,y,se'",
                            row);
            }
            have_header = true;
            if (have_se) series.stderrs.emplace();
            continue;
        }
        auto fields = split_csv(body);
        const std::size_t expected = have_se ? 3 : 2;
        if (fields.size() != expected)
            throw Error(ErrorCategory::Input, "MalformedRow",
                        "row " + std::to_string(row) + ": expected " + std::to_string(expected) +
                            " fields, got " + std::to_string(fields.size()),
                        row);
        double t = parse_field(fields[0], row);
        double y = parse_field(fields[1], row);
        if (!series.times.empty() && !(t > series.times.back()))
            throw Error(ErrorCategory::Input, "NonMonotoneTimes",
                        "row " + std::to_string(row) + ": times not strictly increasing", row);
        series.times.push_back(t);
        series.values.push_back(y);
        if (have_se) {
            double s = parse_field(fields[2], row);
            if (s <= 0.0)
                throw Error(ErrorCategory::Input, "NonPositiveStderr",
                            "row " + std::to_string(row) + ": standard error must be > 0", row);
            series.stderrs->push_back(s);
        }
        last_data_row = row;
    }

    if (!have_header)
        throw Error(ErrorCategory::Input, "MalformedRow", "row 1: missing header", 1);
    if (series.size() < 4)
        throw Error(ErrorCategory::Input, "TooFewPoints",
                    "series has " + std::to_string(series.size()) + " points, need at least 4",
                    last_data_row == 0 ? row : last_data_row);
    return series;
}

std::string render_series(const TimeSeries& series) {
    std::string out;
    if (!series.label.empty()) out += "# label: " + series.label + "\n";
    const bool have_se = series.stderrs.has_value();
    out += have_se ? "t,y,se\n" : "t,y\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += format_g17(series.times[i]);
        out += ',';
        out += format_g17(series.values[i]);
        if (have_se) {
            out += ',';
            out += format_g17((*series.stderrs)[i]);
        }
        out += '\n';
    }
    return out;
}

double synthetic_mean(const SyntheticSpec& spec, double t) {
    double dt = t - spec.bump_center;
    double bump = spec.bump_depth * std::exp(-dt * dt / (2.0 * spec.bump_width * spec.bump_width));
    double ramp = spec.ramp_slope * std::max(0.0, t - spec.ramp_start);
    return spec.trend_slope * (t - spec.t_start) + bump + ramp;
}

TimeSeries generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n < 4 || !(spec.t_start < spec.t_end) || !(spec.bump_width > 0.0) ||
        spec.noise_sd < 0.0)
        throw Error(ErrorCategory::Input, "InvalidSpec",
                    "synthetic spec violates n>=4, t_start<t_end, bump_width>0, noise_sd>=0");

    TimeSeries series;
    series.label = spec.label;
    series.times.resize(spec.n);
    series.values.resize(spec.n);
    const double step = (spec.t_end - spec.t_start) / (spec.n - 1);
    Rng rng(spec.seed);
    for (int i = 0; i < spec.n; ++i) {
        double t = spec.t_start + step * i;
        series.times[i] = t;
        series.values[i] = synthetic_mean(spec, t) + spec.noise_sd * rng.gaussian();
    }
    return series;
}

SyntheticSpec synthetic_preset(const std::string& name) {
    SyntheticSpec spec;
    if (name == "fig1-analogue") {
        spec.n = 160;
        spec.t_start = 1200.0;
        spec.t_end = 2000.0;
        spec.trend_slope = -0.001;
        spec.bump_center = 1600.0;
        spec.bump_width = 120.0;
        spec.bump_depth = -0.8;
        spec.ramp_start = 1920.0;
        spec.ramp_slope = 0.02;
        spec.noise_sd = 0.3;
        spec.seed = 42;
        spec.label = "fig1-analogue";
    } else if (name == "flat") {
        spec.n = 100;
        spec.t_start = 1200.0;
        spec.t_end = 2000.0;
        spec.noise_sd = 0.3;
        spec.seed = 42;
        spec.label = "flat";
    } else if (name == "trend") {
        spec.n = 200;
        spec.t_start = 1200.0;
        spec.t_end = 2000.0;
        spec.trend_slope = 0.01;
        spec.noise_sd = 0.3;
        spec.seed = 42;
        spec.label = "trend";
    } else {
        throw Error(ErrorCategory::Usage, "UnknownPreset", "unknown synthetic preset '" + name + "'");
    }
    return spec;
}

} // namespace scalespace
