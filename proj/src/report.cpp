#include "scalespace/report.hpp"

#include "scalespace/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace scalespace {

namespace {

std::string num(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string px(double v) {
    if (v == 0.0) v = 0.0;  // never print -0.000
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 3);
    return std::string(buf, res.ptr);
}

std::string fixed1(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 1);
    return std::string(buf, res.ptr);
}

double parse_num(const std::string& field, long row) {
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw Error(ErrorCategory::Input, "MalformedRow",
                    "row " + std::to_string(row) + ": non-numeric field '" + field + "'", row);
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

CellLabel label_from(const std::string& s, long row) {
    if (s == "inc") return CellLabel::Increase;
    if (s == "dec") return CellLabel::Decrease;
    if (s == "none") return CellLabel::NoCredibleChange;
    throw Error(ErrorCategory::Input, "MalformedRow",
                "row " + std::to_string(row) + ": unknown label '" + s + "'", row);
}

// Cell boundaries from midpoints, end cells extended by half a spacing.
std::vector<double> midpoint_edges(const std::vector<double>& centers) {
    const std::size_t n = centers.size();
    std::vector<double> edges(n + 1);
    if (n == 1) {
        edges[0] = centers[0] - 0.5;
        edges[1] = centers[0] + 0.5;
        return edges;
    }
    edges[0] = centers[0] - 0.5 * (centers[1] - centers[0]);
    for (std::size_t i = 1; i < n; ++i) edges[i] = 0.5 * (centers[i - 1] + centers[i]);
    edges[n] = centers[n - 1] + 0.5 * (centers[n - 1] - centers[n - 2]);
    return edges;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
    const double range = hi - lo;
    if (!(range > 0.0)) return {lo};
    double raw = range / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> ticks;
    double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + 1e-9 * range; t += step) ticks.push_back(t);
    return ticks;
}

std::string rgb(const std::array<int, 3>& c) {
    return "rgb(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," +
           std::to_string(c[2]) + ")";
}

} // namespace

void validate_style(const RenderStyle& style) {
    if (style.width_px <= 0 || style.height_px <= 0)
        throw Error(ErrorCategory::Input, "InvalidStyle", "canvas must be positive");
    if (style.rgb_increase == style.rgb_decrease || style.rgb_increase == style.rgb_none ||
        style.rgb_decrease == style.rgb_none)
        throw Error(ErrorCategory::Input, "InvalidStyle", "label colors must be distinct");
}

DisplaySmooths display_smooths(const DerivativeField& field) {
    DisplaySmooths out;
    out.times = field.times;
    for (double h : field.grid.display_scales) {
        auto it = std::find(field.grid.bandwidths.begin(), field.grid.bandwidths.end(), h);
        if (it == field.grid.bandwidths.end())
            throw Error(ErrorCategory::Input, "DimensionMismatch",
                        "display scale is not a grid member");
        const auto k = static_cast<Eigen::Index>(it - field.grid.bandwidths.begin());
        out.bandwidths.push_back(h);
        out.smooth.emplace_back(field.smooth_means.row(k).begin(),
                                field.smooth_means.row(k).end());
        out.deriv.emplace_back(field.deriv_means.row(k).begin(), field.deriv_means.row(k).end());
    }
    return out;
}

std::string write_map_csv(const CredibilityMap& map) {
    std::string out = "scale_index,h,time_index,t,label,p_pos,p_neg\n";
    for (std::size_t k = 0; k < map.scale_count(); ++k)
        for (std::size_t i = 0; i < map.time_count(); ++i) {
            out += std::to_string(k) + ',' + num(map.bandwidths[k]) + ',' + std::to_string(i) +
                   ',' + num(map.times[i]) + ',' + to_string(map.labels[k][i]) + ',' +
                   num(map.p_pos(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i))) +
                   ',' +
                   num(map.p_neg(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i))) +
                   '\n';
        }
    return out;
}

CredibilityMap read_map_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    long row = 0;
    if (!std::getline(stream, line))
        throw Error(ErrorCategory::Input, "MalformedRow", "row 1: empty map.csv", 1);
    ++row;
    if (split(line) != std::vector<std::string>{"scale_index", "h", "time_index", "t", "label",
                                                "p_pos", "p_neg"})
        throw Error(ErrorCategory::Input, "MalformedRow", "row 1: bad map.csv header", 1);

    struct Cell {
        long k, i;
        double h, t, p_pos, p_neg;
        CellLabel label;
    };
    std::vector<Cell> cells;
    long max_k = -1, max_i = -1;
    while (std::getline(stream, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto f = split(line);
        if (f.size() != 7)
            throw Error(ErrorCategory::Input, "MalformedRow",
                        "row " + std::to_string(row) + ": expected 7 fields", row);
        Cell c;
        c.k = static_cast<long>(parse_num(f[0], row));
        c.h = parse_num(f[1], row);
        c.i = static_cast<long>(parse_num(f[2], row));
        c.t = parse_num(f[3], row);
        c.label = label_from(f[4], row);
        c.p_pos = parse_num(f[5], row);
        c.p_neg = parse_num(f[6], row);
        max_k = std::max(max_k, c.k);
        max_i = std::max(max_i, c.i);
        cells.push_back(c);
    }
    if (cells.empty() || static_cast<long>(cells.size()) != (max_k + 1) * (max_i + 1))
        throw Error(ErrorCategory::Input, "MalformedRow", "map.csv grid is incomplete", row);

    CredibilityMap map;
    const long K = max_k + 1, n = max_i + 1;
    map.bandwidths.resize(K);
    map.times.resize(n);
    map.labels.assign(K, std::vector<CellLabel>(n, CellLabel::NoCredibleChange));
    map.p_pos.resize(K, n);
    map.p_neg.resize(K, n);
    map.selected_count.assign(K, 0);
    map.joint_prob.assign(K, 1.0);
    for (const Cell& c : cells) {
        map.bandwidths[c.k] = c.h;
        map.times[c.i] = c.t;
        map.labels[c.k][c.i] = c.label;
        map.p_pos(c.k, c.i) = c.p_pos;
        map.p_neg(c.k, c.i) = c.p_neg;
        if (c.label != CellLabel::NoCredibleChange) ++map.selected_count[c.k];
    }
    return map;
}

std::string write_smooths_csv(const DisplaySmooths& smooths) {
    std::string out = "h,t,post_mean_smooth,post_mean_deriv\n";
    for (std::size_t s = 0; s < smooths.bandwidths.size(); ++s)
        for (std::size_t i = 0; i < smooths.times.size(); ++i)
            out += num(smooths.bandwidths[s]) + ',' + num(smooths.times[i]) + ',' +
                   num(smooths.smooth[s][i]) + ',' + num(smooths.deriv[s][i]) + '\n';
    return out;
}

DisplaySmooths read_smooths_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    long row = 0;
    if (!std::getline(stream, line))
        throw Error(ErrorCategory::Input, "MalformedRow", "row 1: empty smooths.csv", 1);
    ++row;
    if (split(line) !=
        std::vector<std::string>{"h", "t", "post_mean_smooth", "post_mean_deriv"})
        throw Error(ErrorCategory::Input, "MalformedRow", "row 1: bad smooths.csv header", 1);

    DisplaySmooths out;
    while (std::getline(stream, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto f = split(line);
        if (f.size() != 4)
            throw Error(ErrorCategory::Input, "MalformedRow",
                        "row " + std::to_string(row) + ": expected 4 fields", row);
        double h = parse_num(f[0], row);
        double t = parse_num(f[1], row);
        double sm = parse_num(f[2], row);
        double dv = parse_num(f[3], row);
        if (out.bandwidths.empty() || out.bandwidths.back() != h) {
            out.bandwidths.push_back(h);
            out.smooth.emplace_back();
            out.deriv.emplace_back();
        }
        if (out.bandwidths.size() == 1) out.times.push_back(t);
        out.smooth.back().push_back(sm);
        out.deriv.back().push_back(dv);
    }
    for (std::size_t s = 0; s < out.bandwidths.size(); ++s)
        if (out.smooth[s].size() != out.times.size())
            throw Error(ErrorCategory::Input, "MalformedRow", "smooths.csv blocks are ragged",
                        row);
    return out;
}

std::string write_draws_csv(const PosteriorDraws& draws) {
    std::string out = "draw,sigma2,lambda";
    for (std::size_t i = 0; i < draws.times.size(); ++i)
        out += ",mu_" + std::to_string(i + 1);
    out += '\n';
    for (int m = 0; m < draws.draw_count(); ++m) {
        out += std::to_string(m) + ',' + num(draws.sigma2_draws[m]) + ',' +
               num(draws.lambda_draws[m]);
        for (Eigen::Index i = 0; i < draws.mu_draws.cols(); ++i)
            out += ',' + num(draws.mu_draws(m, i));
        out += '\n';
    }
    return out;
}

std::string write_summary_json(const CredibilityMap& map, const ScaleGrid& grid,
                               const ModelConfig& config, const std::string& label,
                               int retained_draws, const Timings& timings) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["label"] = label;
    j["level"] = map.level;
    j["joint_mode"] = to_string(map.joint_mode);
    j["config"] = {{"a0", config.a0},
                   {"b0", config.b0},
                   {"a_lam", config.a_lam},
                   {"b_lam", config.b_lam},
                   {"rho", config.rho},
                   {"burn_in", config.burn_in},
                   {"n_draws", config.n_draws},
                   {"thin", config.thin},
                   {"seed", config.seed},
                   {"ridge", config.ridge}};
    j["scale_grid"] = {{"bandwidths", grid.bandwidths}, {"display_scales", grid.display_scales}};
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < map.scale_count(); ++k)
        rows.push_back({{"scale_index", k},
                        {"h", map.bandwidths[k]},
                        {"selected_count", map.selected_count[k]},
                        {"joint_prob", map.joint_prob[k]}});
    j["rows"] = rows;
    j["diagnostics"] = {{"n_times", map.time_count()},
                        {"retained_draws", retained_draws},
                        {"cholesky_ok", true}};
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [name, ms] : timings) t[name] = ms;
    j["timings_ms"] = t;
    return j.dump(2) + "\n";
}

void validate_summary_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCategory::Input, "InvalidSummary", e.what());
    }
    auto require = [&](const char* key, bool ok) {
        if (!ok)
            throw Error(ErrorCategory::Input, "InvalidSummary",
                        std::string("summary field missing or mistyped: ") + key);
    };
    require("format_version", j.contains("format_version") && j["format_version"].is_number_integer());
    require("label", j.contains("label") && j["label"].is_string());
    require("level", j.contains("level") && j["level"].is_number());
    require("joint_mode", j.contains("joint_mode") && j["joint_mode"].is_string());
    require("config", j.contains("config") && j["config"].is_object());
    for (const char* key : {"a0", "b0", "a_lam", "b_lam", "rho", "ridge"})
        require(key, j["config"].contains(key) && j["config"][key].is_number());
    for (const char* key : {"burn_in", "n_draws", "thin", "seed"})
        require(key, j["config"].contains(key) && j["config"][key].is_number());
    require("scale_grid", j.contains("scale_grid") && j["scale_grid"].is_object() &&
                              j["scale_grid"].contains("bandwidths") &&
                              j["scale_grid"]["bandwidths"].is_array() &&
                              j["scale_grid"].contains("display_scales") &&
                              j["scale_grid"]["display_scales"].is_array());
    require("rows", j.contains("rows") && j["rows"].is_array());
    for (const auto& r : j["rows"]) {
        require("rows[].scale_index", r.contains("scale_index") && r["scale_index"].is_number());
        require("rows[].h", r.contains("h") && r["h"].is_number());
        require("rows[].selected_count",
                r.contains("selected_count") && r["selected_count"].is_number_integer());
        require("rows[].joint_prob", r.contains("joint_prob") && r["joint_prob"].is_number());
    }
    require("diagnostics", j.contains("diagnostics") && j["diagnostics"].is_object() &&
                               j["diagnostics"].contains("retained_draws") &&
                               j["diagnostics"].contains("cholesky_ok") &&
                               j["diagnostics"].contains("n_times"));
    require("timings_ms", j.contains("timings_ms") && j["timings_ms"].is_object());
}

std::string render_map_svg(const CredibilityMap& map, const ScaleGrid& grid,
                           const TimeSeries& series, const DisplaySmooths& smooths,
                           const RenderStyle& style) {
    validate_style(style);
    const std::size_t K = map.scale_count();
    const std::size_t n = map.time_count();
    if (K == 0 || n == 0 || grid.bandwidths.size() != K)
        throw Error(ErrorCategory::Input, "DimensionMismatch", "map and grid sizes disagree");
    if (series.size() != n || smooths.times.size() != n)
        throw Error(ErrorCategory::Input, "DimensionMismatch",
                    "series and map use different time grids");

    const double ml = 62.0, mr = 16.0, mt = 18.0, mb = 44.0, gap = 34.0;
    const double inner_w = style.width_px - ml - mr;
    const double inner_h = style.height_px - mt - mb - gap;
    const double upper_h = 0.45 * inner_h;
    const double lower_h = inner_h - upper_h;
    const double upper_top = mt;
    const double lower_top = mt + upper_h + gap;

    const std::vector<double> x_edges = midpoint_edges(map.times);
    const double x_lo = x_edges.front(), x_hi = x_edges.back();
    auto x_of = [&](double t) { return ml + (t - x_lo) / (x_hi - x_lo) * inner_w; };

    double y_min = series.values[0], y_max = series.values[0];
    for (double v : series.values) {
        y_min = std::min(y_min, v);
        y_max = std::max(y_max, v);
    }
    for (const auto& curve : smooths.smooth)
        for (double v : curve) {
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    double pad = 0.05 * (y_max - y_min);
    if (!(pad > 0.0)) pad = 1.0;
    y_min -= pad;
    y_max += pad;
    auto y_upper = [&](double v) {
        return upper_top + upper_h - (v - y_min) / (y_max - y_min) * upper_h;
    };

    std::vector<double> log_h(K);
    for (std::size_t k = 0; k < K; ++k) log_h[k] = std::log10(map.bandwidths[k]);
    const std::vector<double> h_edges = midpoint_edges(log_h);
    const double h_lo = h_edges.front(), h_hi = h_edges.back();
    auto y_lower = [&](double logh) {
        return lower_top + lower_h - (logh - h_lo) / (h_hi - h_lo) * lower_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(style.width_px) + "\" height=\"" + std::to_string(style.height_px) +
           "\" viewBox=\"0 0 " + std::to_string(style.width_px) + " " +
           std::to_string(style.height_px) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width_px) + "\" height=\"" +
           std::to_string(style.height_px) + "\" fill=\"white\"/>\n";

    // ---- lower panel: the credibility map ----
    const std::array<std::string, 3> fills = {rgb(style.rgb_none), rgb(style.rgb_increase),
                                              rgb(style.rgb_decrease)};
    for (std::size_t k = 0; k < K; ++k) {
        const double y0 = y_lower(h_edges[k + 1]);
        const double y1 = y_lower(h_edges[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& fill = fills[static_cast<int>(map.labels[k][i])];
            svg += "<rect class=\"cell\" x=\"" + px(x_of(x_edges[i])) + "\" y=\"" + px(y0) +
                   "\" width=\"" + px(x_of(x_edges[i + 1]) - x_of(x_edges[i])) + "\" height=\"" +
                   px(y1 - y0) + "\" fill=\"" + fill + "\"/>\n";
        }
    }

    // display-scale rules, mirroring the smooths drawn above
    if (style.show_display_scale_lines) {
        for (double h : grid.display_scales) {
            const double y = y_lower(std::log10(h));
            svg += "<line class=\"hline\" x1=\"" + px(ml) + "\" y1=\"" + px(y) + "\" x2=\"" +
                   px(ml + inner_w) + "\" y2=\"" + px(y) +
                   "\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"5,3\"/>\n";
        }
    }

    // lower frame and axes
    svg += "<rect x=\"" + px(ml) + "\" y=\"" + px(lower_top) + "\" width=\"" + px(inner_w) +
           "\" height=\"" + px(lower_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double tick : nice_ticks(x_lo, x_hi, 6)) {
        const double x = x_of(tick);
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(lower_top + lower_h) + "\" x2=\"" + px(x) +
               "\" y2=\"" + px(lower_top + lower_h + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(x) + "\" y=\"" + px(lower_top + lower_h + 18) +
               "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" +
               num(tick) + "</text>\n";
    }
    for (double h : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
        const double logh = std::log10(h);
        if (logh < h_lo || logh > h_hi) continue;
        const double y = y_lower(logh);
        svg += "<line x1=\"" + px(ml - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml) +
               "\" y2=\"" + px(y) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(ml - 8) + "\" y=\"" + px(y + 4) +
               "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" + num(h) +
               "</text>\n";
    }
    svg += "<text x=\"" + px(ml + inner_w / 2) + "\" y=\"" + px(lower_top + lower_h + 34) +
           "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">year</text>\n";
    svg += "<text x=\"14\" y=\"" + px(lower_top + lower_h / 2) +
           "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 " +
           px(lower_top + lower_h / 2) + ")\">bandwidth (yr)</text>\n";

    // ---- upper panel: series and display smooths ----
    svg += "<rect x=\"" + px(ml) + "\" y=\"" + px(upper_top) + "\" width=\"" + px(inner_w) +
           "\" height=\"" + px(upper_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double tick : nice_ticks(y_min, y_max, 4)) {
        const double y = y_upper(tick);
        svg += "<line x1=\"" + px(ml - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml) +
               "\" y2=\"" + px(y) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(ml - 8) + "\" y=\"" + px(y + 4) +
               "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" + num(tick) +
               "</text>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        svg += "<text class=\"pt\" x=\"" + px(x_of(series.times[i])) + "\" y=\"" +
               px(y_upper(series.values[i]) + 4) +
               "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">*</text>\n";
    }
    const std::array<std::string, 3> strokes = {"#909090", "#505050", "#000000"};
    for (std::size_t s = 0; s < smooths.bandwidths.size(); ++s) {
        std::string points;
        for (std::size_t i = 0; i < n; ++i) {
            if (i) points += ' ';
            points += px(x_of(smooths.times[i])) + ',' + px(y_upper(smooths.smooth[s][i]));
        }
        svg += "<polyline class=\"smooth\" fill=\"none\" stroke=\"" +
               strokes[std::min<std::size_t>(s, strokes.size() - 1)] +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        svg += "<text x=\"" + px(ml + inner_w - 6) + "\" y=\"" +
               px(upper_top + 14 + 13 * static_cast<double>(s)) +
               "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\" fill=\"" +
               strokes[std::min<std::size_t>(s, strokes.size() - 1)] + "\">h=" +
               fixed1(smooths.bandwidths[s]) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace scalespace
