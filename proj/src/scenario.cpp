#include "ffsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace ffsim {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return {};
    }
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

/// Raw right-hand side of a config line.
struct Value {
    enum class Kind { number, string, boolean, list } kind;
    double num = 0.0;
    std::string str;
    bool flag = false;
    std::vector<double> list;
};

bool parse_number(const std::string& s, double* out) {
    if (s.empty()) {
        return false;
    }
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size()) {
        return false;
    }
    *out = v;
    return true;
}

Value parse_value(const std::string& raw, std::size_t line) {
    Value v;
    if (raw.empty()) {
        fail(line, "missing value");
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') {
            fail(line, "unterminated string");
        }
        v.kind = Value::Kind::string;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::boolean;
        v.flag = raw == "true";
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') {
            fail(line, "unterminated list");
        }
        v.kind = Value::Kind::list;
        std::string body = raw.substr(1, raw.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            double d = 0.0;
            if (!parse_number(item, &d)) {
                fail(line, "list element '" + item + "' is not a number");
            }
            v.list.push_back(d);
        }
        if (v.list.empty()) {
            fail(line, "empty list");
        }
        return v;
    }
    v.kind = Value::Kind::number;
    if (!parse_number(raw, &v.num)) {
        fail(line, "cannot parse value '" + raw + "'");
    }
    return v;
}

double need_number(const Value& v, const std::string& key, std::size_t line) {
    if (v.kind != Value::Kind::number) {
        fail(line, key + " expects a number");
    }
    return v.num;
}

std::int64_t need_int(const Value& v, const std::string& key, std::size_t line) {
    double d = need_number(v, key, line);
    if (d != std::floor(d) || std::abs(d) > 9.0e18) {
        fail(line, key + " expects an integer");
    }
    return static_cast<std::int64_t>(d);
}

bool need_bool(const Value& v, const std::string& key, std::size_t line) {
    if (v.kind != Value::Kind::boolean) {
        fail(line, key + " expects true or false");
    }
    return v.flag;
}

std::string need_string(const Value& v, const std::string& key, std::size_t line) {
    if (v.kind != Value::Kind::string) {
        fail(line, key + " expects a quoted string");
    }
    return v.str;
}

std::vector<double> number_or_list(const Value& v, const std::string& key,
                                   std::size_t line) {
    if (v.kind == Value::Kind::number) {
        return {v.num};
    }
    if (v.kind == Value::Kind::list) {
        return v.list;
    }
    fail(line, key + " expects a number or a list of numbers");
}

void check_axis_range(const std::vector<double>& values, const std::string& key,
                      double lo, double hi, std::size_t line) {
    for (double v : values) {
        if (v < lo || v > hi) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "%s = %g is outside the permitted range [%g, %g]",
                          key.c_str(), v, lo, hi);
            fail(line, buf);
        }
    }
}

BetaSpec need_beta_pair(const Value& v, const std::string& key, std::size_t line) {
    if (v.kind != Value::Kind::list || v.list.size() != 2) {
        fail(line, key + " expects [alpha, beta]");
    }
    if (!(v.list[0] > 0.0) || !(v.list[1] > 0.0)) {
        fail(line, key + " parameters must be positive");
    }
    return {v.list[0], v.list[1]};
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    double back = 0.0;
    if (parse_number(buf, &back) && back == v) {
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_axis(const std::vector<double>& values) {
    if (values.empty()) {
        return "\"none\"";
    }
    if (values.size() == 1) {
        return fmt_num(values[0]);
    }
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) {
            out += ", ";
        }
        out += fmt_num(values[i]);
    }
    out += "]";
    return out;
}

ScenarioDoc make_preset(std::vector<double> delta, std::vector<double> tau,
                        std::vector<double> sigma, std::vector<double> beta,
                        std::vector<double> zeta,
                        std::optional<std::int64_t> stop) {
    ScenarioDoc d;
    d.delta = std::move(delta);
    d.tau = std::move(tau);
    d.sigma = std::move(sigma);
    d.beta = std::move(beta);
    d.zeta = std::move(zeta);
    d.base.engine.campaign_stop_tick = stop;
    return d;
}

const std::map<std::string, ScenarioDoc>& catalog() {
    static const std::map<std::string, ScenarioDoc> presets = {
        {"A1", make_preset({0.1, 0.3, 0.5}, {}, {0.1}, {0.0}, {}, {})},
        {"A2", make_preset({0.1, 0.3, 0.5}, {0.15}, {0.1}, {0.0}, {}, {})},
        {"A3", make_preset({0.1, 0.3, 0.5}, {0.15}, {0.1}, {0.0}, {}, {})},
        {"B1", make_preset({0.1}, {}, {0.1, 0.3, 0.5}, {0.0}, {}, {})},
        {"B2", make_preset({0.10}, {}, {0.10}, {-0.30, -0.15, 0.00, 0.15, 0.30}, {}, {})},
        {"B3", make_preset({0.40}, {}, {0.40}, {-0.15, 0.15}, {}, {})},
        {"B4", make_preset({0.4}, {0.15}, {0.10, 0.30, 0.50}, {0.0}, {}, {})},
        {"B5", make_preset({0.1}, {0.15}, {0.35}, {-0.30, -0.15, 0.00, 0.15, 0.30}, {}, {})},
        {"C1", make_preset({0.4}, {}, {0.10}, {0.0}, {0.5, 0.8, 1.0, 1.2, 1.5}, {})},
        {"C2", make_preset({0.4}, {0.15}, {0.10}, {0.0}, {0.5, 0.8, 1.0, 1.2, 1.5}, {})},
        {"C3", make_preset({0.4}, {0.15}, {0.40}, {-0.30, 0.00, 0.30}, {1.2}, {})},
        {"C4", make_preset({0.4}, {0.10, 0.20, 0.30}, {0.10}, {0.0}, {1.2}, 250)},
        {"C5", make_preset({0.4}, {0.15}, {0.10}, {-0.30, 0.30}, {1.2}, 250)},
    };
    return presets;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, doc] : catalog()) {
            v.push_back(name);
        }
        return v;
    }();
    return names;
}

ScenarioDoc preset_doc(const std::string& name) {
    auto it = catalog().find(name);
    if (it == catalog().end()) {
        std::string known;
        for (const auto& n : preset_names()) {
            known += known.empty() ? n : ", " + n;
        }
        throw std::runtime_error("unknown preset '" + name + "' (known: " + known + ")");
    }
    return it->second;
}

ScenarioDoc parse_config(const std::string& text) {
    ScenarioDoc doc;
    std::istringstream in(text);
    std::string raw_line;
    std::size_t line_no = 0;
    bool any_key = false;

    while (std::getline(in, raw_line)) {
        ++line_no;
        if (!raw_line.empty() && raw_line.back() == '\r') {
            raw_line.pop_back();
        }
        // Cut a comment, respecting quoted strings.
        bool quoted = false;
        std::string line;
        for (char ch : raw_line) {
            if (ch == '"') {
                quoted = !quoted;
            }
            if (ch == '#' && !quoted) {
                break;
            }
            line += ch;
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail(line_no, "expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string rhs = trim(line.substr(eq + 1));
        if (key.empty()) {
            fail(line_no, "missing key");
        }
        if (key.find_first_not_of(
                "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.") !=
            std::string::npos) {
            fail(line_no, "invalid key '" + key + "'");
        }
        Value v = parse_value(rhs, line_no);

        if (key == "preset") {
            if (any_key) {
                fail(line_no, "preset must be the first key in the file");
            }
            doc = preset_doc(need_string(v, key, line_no));
            any_key = true;
            continue;
        }
        any_key = true;

        auto optional_axis = [&](double lo, double hi) -> std::vector<double> {
            if (v.kind == Value::Kind::string && v.str == "none") {
                return {};
            }
            std::vector<double> values = number_or_list(v, key, line_no);
            check_axis_range(values, key, lo, hi, line_no);
            return values;
        };

        if (key == "kernels.delta") {
            doc.delta = number_or_list(v, key, line_no);
            check_axis_range(doc.delta, key, 0.05, 0.5, line_no);
        } else if (key == "kernels.tau") {
            doc.tau = optional_axis(0.05, 0.5);
        } else if (key == "kernels.sigma") {
            doc.sigma = number_or_list(v, key, line_no);
            check_axis_range(doc.sigma, key, 0.05, 0.5, line_no);
        } else if (key == "kernels.beta") {
            doc.beta = number_or_list(v, key, line_no);
            check_axis_range(doc.beta, key, -0.30, 0.30, line_no);
        } else if (key == "kernels.zeta") {
            doc.zeta = optional_axis(0.5, 1.5);
        } else if (key == "kernels.gov_exposure_prob") {
            double d = need_number(v, key, line_no);
            check_axis_range({d}, key, 0.0, 1.0, line_no);
            doc.base.kernels.gov_exposure_prob = d;
        } else if (key == "kernels.blend_gamma") {
            double d = need_number(v, key, line_no);
            if (d < 0.0) {
                fail(line_no, "kernels.blend_gamma must be non-negative");
            }
            doc.base.kernels.blend_gamma = d;
        } else if (key == "kernels.fatigue_rate") {
            double d = need_number(v, key, line_no);
            if (d < 0.0) {
                fail(line_no, "kernels.fatigue_rate must be non-negative");
            }
            doc.base.kernels.fatigue_rate = d;
        } else if (key == "population.n_agents") {
            std::int64_t iv = need_int(v, key, line_no);
            if (iv <= 0) {
                fail(line_no, "population.n_agents must be positive");
            }
            doc.base.population.n_agents = static_cast<std::size_t>(iv);
        } else if (key == "population.female_fraction") {
            doc.base.population.female_fraction = need_number(v, key, line_no);
        } else if (key == "population.young_fraction") {
            doc.base.population.young_fraction = need_number(v, key, line_no);
        } else if (key == "population.beta.env") {
            doc.base.population.env = need_beta_pair(v, key, line_no);
        } else if (key == "population.beta.exp") {
            doc.base.population.exp = need_beta_pair(v, key, line_no);
        } else if (key == "population.beta.wca") {
            doc.base.population.wca = need_beta_pair(v, key, line_no);
        } else if (key == "population.beta.know") {
            doc.base.population.know = need_beta_pair(v, key, line_no);
        } else if (key == "population.beta.trust") {
            doc.base.population.trust = need_beta_pair(v, key, line_no);
        } else if (key == "population.beta.access") {
            doc.base.population.access = need_beta_pair(v, key, line_no);
        } else if (key == "population.beta.freq") {
            doc.base.population.freq = need_beta_pair(v, key, line_no);
        } else if (key == "population.susceptibility_range") {
            if (v.kind != Value::Kind::list || v.list.size() != 2) {
                fail(line_no, key + " expects [lo, hi]");
            }
            doc.base.population.susc_lo = v.list[0];
            doc.base.population.susc_hi = v.list[1];
        } else if (key == "population.csv") {
            doc.base.population.csv_path = need_string(v, key, line_no);
        } else if (key == "engine.ticks") {
            doc.base.engine.ticks = need_int(v, key, line_no);
        } else if (key == "engine.seed") {
            std::int64_t iv = need_int(v, key, line_no);
            if (iv < 0) {
                fail(line_no, "engine.seed must be non-negative");
            }
            doc.base.engine.seed = static_cast<std::uint64_t>(iv);
        } else if (key == "engine.record_every") {
            doc.base.engine.record_every = need_int(v, key, line_no);
        } else if (key == "engine.campaign_stop_tick") {
            if (v.kind == Value::Kind::string && v.str == "none") {
                doc.base.engine.campaign_stop_tick.reset();
            } else {
                doc.base.engine.campaign_stop_tick = need_int(v, key, line_no);
            }
        } else if (key == "engine.disable_peer") {
            doc.base.engine.disable_peer = need_bool(v, key, line_no);
        } else if (key == "engine.disable_media") {
            doc.base.engine.disable_media = need_bool(v, key, line_no);
        } else if (key == "engine.disable_gov") {
            doc.base.engine.disable_gov = need_bool(v, key, line_no);
        } else if (key == "engine.backend") {
            doc.base.engine.backend = need_string(v, key, line_no);
        } else if (key == "outputs.timeseries_csv") {
            doc.base.outputs.timeseries_csv = need_string(v, key, line_no);
        } else if (key == "outputs.final_snapshot_csv") {
            doc.base.outputs.final_snapshot_csv = need_string(v, key, line_no);
        } else if (key == "outputs.histogram_csv") {
            doc.base.outputs.histogram_csv = need_string(v, key, line_no);
        } else if (key == "outputs.svg_lines") {
            doc.base.outputs.svg_lines = need_string(v, key, line_no);
        } else if (key == "outputs.svg_histogram") {
            doc.base.outputs.svg_histogram = need_string(v, key, line_no);
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    if (doc.base.population.csv_path.empty()) {
        if (std::string err = validate_population_spec(doc.base.population); !err.empty()) {
            throw std::runtime_error("config: population." + err);
        }
    }
    if (std::string err = validate_engine_config(doc.base.engine); !err.empty()) {
        throw std::runtime_error("config: engine." + err);
    }
    // Cross-field kernel checks on a representative cell (axis values were
    // range-checked per line above).
    KernelParams probe = doc.base.kernels;
    probe.delta = doc.delta.front();
    probe.sigma = doc.sigma.front();
    probe.beta = doc.beta.front();
    if (!doc.tau.empty()) {
        probe.tau = doc.tau.front();
    }
    if (!doc.zeta.empty()) {
        probe.zeta = doc.zeta.front();
    }
    if (std::string err = validate_kernel_params(probe); !err.empty()) {
        throw std::runtime_error("config: kernels." + err);
    }
    return doc;
}

ScenarioDoc parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ScenarioDoc& doc) {
    const PopulationSpec& p = doc.base.population;
    const KernelParams& k = doc.base.kernels;
    const EngineConfig& e = doc.base.engine;
    const OutputSpec& o = doc.base.outputs;
    std::ostringstream out;
    out << "kernels.delta = " << fmt_axis(doc.delta) << "\n";
    out << "kernels.tau = " << fmt_axis(doc.tau) << "\n";
    out << "kernels.sigma = " << fmt_axis(doc.sigma) << "\n";
    out << "kernels.beta = " << fmt_axis(doc.beta) << "\n";
    out << "kernels.zeta = " << fmt_axis(doc.zeta) << "\n";
    out << "kernels.gov_exposure_prob = " << fmt_num(k.gov_exposure_prob) << "\n";
    out << "kernels.blend_gamma = " << fmt_num(k.blend_gamma) << "\n";
    out << "kernels.fatigue_rate = " << fmt_num(k.fatigue_rate) << "\n";
    out << "population.n_agents = " << p.n_agents << "\n";
    out << "population.female_fraction = " << fmt_num(p.female_fraction) << "\n";
    out << "population.young_fraction = " << fmt_num(p.young_fraction) << "\n";
    const struct { const char* name; const BetaSpec& b; } betas[] = {
        {"env", p.env},     {"exp", p.exp},       {"wca", p.wca},
        {"know", p.know},   {"trust", p.trust},   {"access", p.access},
        {"freq", p.freq},
    };
    for (const auto& bd : betas) {
        out << "population.beta." << bd.name << " = [" << fmt_num(bd.b.alpha)
            << ", " << fmt_num(bd.b.beta) << "]\n";
    }
    out << "population.susceptibility_range = [" << fmt_num(p.susc_lo) << ", "
        << fmt_num(p.susc_hi) << "]\n";
    if (!p.csv_path.empty()) {
        out << "population.csv = \"" << p.csv_path << "\"\n";
    }
    out << "engine.ticks = " << e.ticks << "\n";
    out << "engine.seed = " << e.seed << "\n";
    out << "engine.record_every = " << e.record_every << "\n";
    if (e.campaign_stop_tick) {
        out << "engine.campaign_stop_tick = " << *e.campaign_stop_tick << "\n";
    } else {
        out << "engine.campaign_stop_tick = \"none\"\n";
    }
    out << "engine.disable_peer = " << (e.disable_peer ? "true" : "false") << "\n";
    out << "engine.disable_media = " << (e.disable_media ? "true" : "false") << "\n";
    out << "engine.disable_gov = " << (e.disable_gov ? "true" : "false") << "\n";
    out << "engine.backend = \"" << e.backend << "\"\n";
    out << "outputs.timeseries_csv = \"" << o.timeseries_csv << "\"\n";
    out << "outputs.final_snapshot_csv = \"" << o.final_snapshot_csv << "\"\n";
    out << "outputs.histogram_csv = \"" << o.histogram_csv << "\"\n";
    out << "outputs.svg_lines = \"" << o.svg_lines << "\"\n";
    out << "outputs.svg_histogram = \"" << o.svg_histogram << "\"\n";
    return out.str();
}

std::vector<NamedCell> expand_cells(const ScenarioDoc& doc) {
    std::vector<NamedCell> cells;

    auto axis_or_none = [](const std::vector<double>& axis)
        -> std::vector<std::optional<double>> {
        if (axis.empty()) {
            return {std::nullopt};
        }
        std::vector<std::optional<double>> out;
        for (double v : axis) {
            out.emplace_back(v);
        }
        return out;
    };
    std::vector<std::optional<double>> taus = axis_or_none(doc.tau);
    std::vector<std::optional<double>> zetas = axis_or_none(doc.zeta);

    for (double dv : doc.delta) {
        for (const auto& tv : taus) {
            for (double sv : doc.sigma) {
                for (double bv : doc.beta) {
                    for (const auto& zv : zetas) {
                        NamedCell cell;
                        cell.config = doc.base;
                        cell.config.kernels.delta = dv;
                        cell.config.kernels.tau = tv;
                        cell.config.kernels.sigma = sv;
                        cell.config.kernels.beta = bv;
                        cell.config.kernels.zeta = zv;

                        std::string label;
                        auto tag = [&label](const char* name, double v) {
                            if (!label.empty()) {
                                label += "_";
                            }
                            label += name;
                            label += "=";
                            label += fmt_num(v);
                        };
                        if (doc.delta.size() > 1) {
                            tag("delta", dv);
                        }
                        if (doc.tau.size() > 1) {
                            tag("tau", *tv);
                        }
                        if (doc.sigma.size() > 1) {
                            tag("sigma", sv);
                        }
                        if (doc.beta.size() > 1) {
                            tag("beta", bv);
                        }
                        if (doc.zeta.size() > 1) {
                            tag("zeta", *zv);
                        }
                        cell.label = label;

                        if (std::string err = validate_kernel_params(cell.config.kernels);
                            !err.empty()) {
                            throw std::runtime_error("cell '" + label + "': " + err);
                        }
                        cells.push_back(std::move(cell));
                    }
                }
            }
        }
    }
    return cells;
}

} // namespace ffsim
