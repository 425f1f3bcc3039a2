#include "ffsim/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace ffsim {

namespace {

/// Shortest decimal form that parses back to the same double.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    if (std::strtod(buf, nullptr) == v) {
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

constexpr const char* kPalette[5] = {"#1b9e77", "#d95f02", "#7570b3",
                                     "#e7298a", "#66a61e"};

/// Minimal SVG assembly: fixed 2D canvas, shapes appended as strings.
class Svg {
public:
    Svg(int width, int height) : w_(width), h_(height) {
        char head[160];
        std::snprintf(head, sizeof head,
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                      "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                      w_, h_, w_, h_);
        body_ = head;
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const char* color,
              double width = 1.0) {
        char buf[220];
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"%s\" stroke-width=\"%.2f\"/>\n",
                      x1, y1, x2, y2, color, width);
        body_ += buf;
    }

    void polyline(const std::string& points, const char* color) {
        body_ += "<polyline fill=\"none\" stroke=\"";
        body_ += color;
        body_ += "\" stroke-width=\"1.5\" points=\"";
        body_ += points;
        body_ += "\"/>\n";
    }

    void rect(double x, double y, double w, double h, const char* fill) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                      "fill=\"%s\"/>\n",
                      x, y, w, h, fill);
        body_ += buf;
    }

    void text(double x, double y, const std::string& s, int size = 12,
              const char* anchor = "start") {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" "
                      "font-size=\"%d\" text-anchor=\"%s\">",
                      x, y, size, anchor);
        body_ += buf;
        body_ += s;
        body_ += "</text>\n";
    }

    std::string finish() { return body_ + "</svg>\n"; }

private:
    int w_;
    int h_;
    std::string body_;
};

struct Frame {
    double x, y, w, h; // plot area in canvas units
    double lo, hi;     // value range mapped onto the y axis
    double tmax;       // last tick on the x axis

    double px(double tick) const { return x + (tmax > 0 ? tick / tmax : 0.0) * w; }
    double py(double v) const { return y + h - (v - lo) / (hi - lo) * h; }
};

void draw_axes(Svg& svg, const Frame& f, const std::string& title) {
    svg.text(f.x, f.y - 8, title, 14);
    svg.line(f.x, f.y, f.x, f.y + f.h, "#333333");
    svg.line(f.x, f.y + f.h, f.x + f.w, f.y + f.h, "#333333");
    for (int i = 0; i <= 4; ++i) {
        double v = f.lo + (f.hi - f.lo) * i / 4.0;
        double y = f.py(v);
        svg.line(f.x, y, f.x + f.w, y, "#dddddd", 0.5);
        char label[40];
        std::snprintf(label, sizeof label, "%.3g", v);
        svg.text(f.x - 6, y + 4, label, 10, "end");
    }
    for (int i = 0; i <= 5; ++i) {
        double t = f.tmax * i / 5.0;
        double x = f.px(t);
        char label[40];
        std::snprintf(label, sizeof label, "%.0f", t);
        svg.text(x, f.y + f.h + 14, label, 10, "middle");
    }
    svg.text(f.x + f.w / 2.0, f.y + f.h + 28, "tick", 11, "middle");
}

void draw_series_panel(Svg& svg, const MetricsSeries& ms, bool net_change,
                       Frame f, const std::string& title) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t k = 0; k < ms.records(); ++k) {
            double v = net_change ? ms.net_change(a, k) : ms.variance[a][k];
            if (first) {
                lo = hi = v;
                first = false;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (hi - lo < 1e-12) {
        hi = lo + 1.0;
    }
    double pad = (hi - lo) * 0.05;
    f.lo = lo - pad;
    f.hi = hi + pad;
    f.tmax = static_cast<double>(ms.ticks.empty() ? 0 : ms.ticks.back());

    draw_axes(svg, f, title);
    for (std::size_t a = 0; a < 5; ++a) {
        std::string pts;
        for (std::size_t k = 0; k < ms.records(); ++k) {
            double v = net_change ? ms.net_change(a, k) : ms.variance[a][k];
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ",
                          f.px(static_cast<double>(ms.ticks[k])), f.py(v));
            pts += buf;
        }
        svg.polyline(pts, kPalette[a]);
    }
}

void draw_legend(Svg& svg, double x, double y) {
    for (std::size_t a = 0; a < 5; ++a) {
        svg.line(x, y - 4, x + 18, y - 4, kPalette[a], 2.5);
        svg.text(x + 24, y, kMetricAttrs[a], 11);
        x += 24 + 8.0 * std::string(kMetricAttrs[a]).size() + 24;
    }
}

} // namespace

std::array<std::size_t, 20> purchase_histogram(std::span<const AgentState> agents) {
    std::array<std::size_t, 20> bins{};
    for (const AgentState& a : agents) {
        auto b = static_cast<std::size_t>(a.purchase_prob / 0.05);
        bins[std::min<std::size_t>(b, 19)] += 1;
    }
    return bins;
}

std::string render_timeseries_csv(const MetricsSeries& ms) {
    std::string out = "tick,attr,mean,variance,net_change\n";
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t k = 0; k < ms.records(); ++k) {
            out += std::to_string(ms.ticks[k]);
            out += ",";
            out += kMetricAttrs[a];
            out += ",";
            out += fmt(ms.mean[a][k]);
            out += ",";
            out += fmt(ms.variance[a][k]);
            out += ",";
            out += fmt(ms.net_change(a, k));
            out += "\n";
        }
    }
    return out;
}

std::string render_snapshot_csv(std::span<const AgentState> agents) {
    std::string out =
        "id,sex,age,env,exp,wca,know,trust,access,freq,s_pp,s_sm,s_gov,purchase_prob\n";
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const AgentState& a = agents[i];
        out += std::to_string(i);
        for (double v : {a.sex, a.age, a.env, a.exp, a.wca, a.know, a.trust,
                         a.access, a.freq, a.s_pp, a.s_sm, a.s_gov,
                         a.purchase_prob}) {
            out += ",";
            out += fmt(v);
        }
        out += "\n";
    }
    return out;
}

std::string render_histogram_csv(std::span<const AgentState> agents) {
    std::array<std::size_t, 20> bins = purchase_histogram(agents);
    std::string out = "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < bins.size(); ++b) {
        // Divide rather than multiply by 0.05 so the edges come out as the
        // shortest decimals (19/20 is exactly the double 0.95; 19*0.05 is not).
        out += fmt(static_cast<double>(b) / 20.0);
        out += ",";
        out += fmt(static_cast<double>(b + 1) / 20.0);
        out += ",";
        out += std::to_string(bins[b]);
        out += "\n";
    }
    return out;
}

std::string render_svg_lines(const MetricsSeries& ms) {
    Svg svg(960, 700);
    draw_legend(svg, 70, 22);
    draw_series_panel(svg, ms, true, {70, 60, 840, 250, 0, 0, 0},
                      "Net change of mean attribute values");
    draw_series_panel(svg, ms, false, {70, 410, 840, 250, 0, 0, 0},
                      "Variance of attribute values");
    return svg.finish();
}

std::string render_svg_histogram(std::span<const AgentState> agents) {
    std::array<std::size_t, 20> bins = purchase_histogram(agents);
    std::size_t peak = 1;
    for (std::size_t c : bins) {
        peak = std::max(peak, c);
    }
    Svg svg(720, 480);
    const double x0 = 60, y0 = 50, w = 620, h = 360;
    svg.text(x0, y0 - 16, "Final purchase probability distribution", 14);
    svg.line(x0, y0, x0, y0 + h, "#333333");
    svg.line(x0, y0 + h, x0 + w, y0 + h, "#333333");
    for (int i = 0; i <= 4; ++i) {
        double frac = i / 4.0;
        double y = y0 + h - frac * h;
        char label[40];
        std::snprintf(label, sizeof label, "%.0f", frac * static_cast<double>(peak));
        svg.line(x0, y, x0 + w, y, "#dddddd", 0.5);
        svg.text(x0 - 6, y + 4, label, 10, "end");
    }
    double bar_w = w / 20.0;
    for (std::size_t b = 0; b < bins.size(); ++b) {
        double bh = h * static_cast<double>(bins[b]) / static_cast<double>(peak);
        svg.rect(x0 + static_cast<double>(b) * bar_w + 1, y0 + h - bh, bar_w - 2,
                 bh, "#7570b3");
    }
    for (int i = 0; i <= 5; ++i) {
        double v = i / 5.0;
        char label[40];
        std::snprintf(label, sizeof label, "%.1f", v);
        svg.text(x0 + v * w, y0 + h + 14, label, 10, "middle");
    }
    svg.text(x0 + w / 2.0, y0 + h + 30, "purchase probability", 11, "middle");
    return svg.finish();
}

std::string render_sweep_summary_csv(std::span<const CellSummary> cells) {
    std::string out = "cell,runs,attr,net_change_mean,net_change_sd\n";
    for (const CellSummary& c : cells) {
        for (std::size_t a = 0; a < 5; ++a) {
            out += c.label.empty() ? "base" : c.label;
            out += ",";
            out += std::to_string(c.runs);
            out += ",";
            out += kMetricAttrs[a];
            out += ",";
            out += fmt(c.net_mean[a]);
            out += ",";
            out += fmt(c.net_sd[a]);
            out += "\n";
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        out.close();
        std::error_code ec;
        std::filesystem::remove(p, ec);
        throw std::runtime_error("write failed, partial file removed: " + path);
    }
}

void emit_outputs(const MetricsSeries& ms, std::span<const AgentState> agents,
                  const OutputSpec& spec, const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    write_file((dir / spec.timeseries_csv).string(), render_timeseries_csv(ms));
    write_file((dir / spec.final_snapshot_csv).string(), render_snapshot_csv(agents));
    write_file((dir / spec.histogram_csv).string(), render_histogram_csv(agents));
    write_file((dir / spec.svg_lines).string(), render_svg_lines(ms));
    write_file((dir / spec.svg_histogram).string(), render_svg_histogram(agents));
}

} // namespace ffsim
