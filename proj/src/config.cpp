#include "drix/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "drix/errors.hpp"

namespace drix::config {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw ValidationError("config key '" + key + "': bad number '" + it->second + "'");
    }
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (...) {
        throw ValidationError("config key '" + key + "': bad integer '" + it->second + "'");
    }
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ValidationError("config key '" + key + "': bad boolean '" + it->second + "'");
}

KeyValues parse_text(const std::string& text, const std::string& origin) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                std::ostringstream msg;
                msg << origin << ":" << lineno << ": unterminated section header";
                throw ValidationError(msg.str());
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": expected 'key = value'";
            throw ValidationError(msg.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": empty key";
            throw ValidationError(msg.str());
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (!kv.values.emplace(full, value).second) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": duplicate key '" << full << "'";
            throw ValidationError(msg.str());
        }
    }
    return kv;
}

KeyValues parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

namespace {

const std::set<std::string> kKnownKeys = {
    "inputs.firms", "inputs.prices", "inputs.zratios", "inputs.ratings", "inputs.spreads",
    "inputs.weights", "inputs.macro.cpi", "inputs.macro.ipi", "inputs.macro.ffr",
    "inputs.macro.ppi", "inputs.macro.gdp",
    "output.dir",
    "model.alpha", "model.bg_lags", "model.reset_powers", "model.min_aligned_months",
    "spline.knot_placement",
    "proxies.cfv_window", "proxies.cfv_mean_epsilon", "proxies.z_coefficients",
    "index.delta",
    "regimes.windows",
    "unitroot.run", "unitroot.max_lag", "unitroot.pp_bandwidth",
    "robustness.run",
    "ingest.forward_fill", "ingest.ratings_allow_gaps",
    // generator section, handled by load_synth_config
    "synth.seed", "synth.n_firms", "synth.first_month", "synth.last_month", "synth.theta",
    "synth.alpha_cfv", "synth.alpha_dd", "synth.alpha_z", "synth.alpha_ir", "synth.gamma_cpi",
    "synth.gamma_ipi", "synth.gamma_ffr", "synth.gamma_lag", "synth.noise_sd", "synth.ar1_phi",
    "synth.shock_sd", "synth.dd_loading", "synth.dd_noise_sd", "synth.z_loading",
    "synth.z_noise_sd", "synth.cfv_base", "synth.cfv_loading", "synth.cfv_common_noise_sd",
    "synth.ir_base_pct", "synth.ir_loading", "synth.ir_noise_sd", "synth.crisis_start",
    "synth.crisis_end", "synth.crisis_amplification", "synth.firm_dispersion",
    "synth.daily_return_sd", "synth.trading_days", "synth.cfv_window_months",
    "synth.dd_level_base", "synth.z_level_base", "synth.ys_level_base",
};

void reject_unknown(const KeyValues& kv) {
    for (const auto& [key, value] : kv.values)
        if (!kKnownKeys.count(key))
            throw ValidationError("unknown config key '" + key + "'");
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty()) return path;
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (fs::path(base_dir) / p).string();
}

std::pair<YearMonth, YearMonth> parse_window(const std::string& text, const std::string& key) {
    const auto sep = text.find("..");
    if (sep == std::string::npos)
        throw ValidationError("config key '" + key + "': expected 'YYYY-MM..YYYY-MM'");
    return {parse_year_month(trim(text.substr(0, sep))), parse_year_month(trim(text.substr(sep + 2)))};
}

}  // namespace

pipeline::PipelineConfig load_pipeline_config(const KeyValues& kv, const std::string& base_dir) {
    reject_unknown(kv);
    pipeline::PipelineConfig c;
    c.firms_path = resolve(base_dir, kv.get("inputs.firms", ""));
    c.prices_path = resolve(base_dir, kv.get("inputs.prices", ""));
    c.zratios_path = resolve(base_dir, kv.get("inputs.zratios", ""));
    c.ratings_path = resolve(base_dir, kv.get("inputs.ratings", ""));
    c.spreads_path = resolve(base_dir, kv.get("inputs.spreads", ""));
    c.weights_path = resolve(base_dir, kv.get("inputs.weights", ""));
    for (const char* key : {"cpi", "ipi", "ffr", "ppi", "gdp"}) {
        const std::string path = kv.get(std::string("inputs.macro.") + key, "");
        if (!path.empty()) c.macro_paths[key] = resolve(base_dir, path);
    }
    c.output_dir = resolve(base_dir, kv.get("output.dir", "."));

    c.stages.alpha = kv.get_double("model.alpha", 0.10);
    c.stages.bg_lags = kv.get_int("model.bg_lags", 12);
    c.stages.min_aligned_months = kv.get_int("model.min_aligned_months", 24);
    c.stages.reset_powers.clear();
    for (const auto& p : split_list(kv.get("model.reset_powers", "2,3"), ','))
        c.stages.reset_powers.push_back(std::stoi(p));

    const std::string placement = kv.get("spline.knot_placement", "end");
    if (placement == "end")
        c.stages.spline.placement = prep::KnotPlacement::period_end;
    else if (placement == "mid")
        c.stages.spline.placement = prep::KnotPlacement::period_mid;
    else
        throw ValidationError("spline.knot_placement must be 'end' or 'mid'");

    c.stages.cfv.window_months = kv.get_int("proxies.cfv_window", 12);
    c.stages.cfv.mean_epsilon = kv.get_double("proxies.cfv_mean_epsilon", 1e-9);
    if (kv.has("proxies.z_coefficients")) {
        const auto parts = split_list(kv.get("proxies.z_coefficients", ""), ',');
        if (parts.size() != 5)
            throw ValidationError("proxies.z_coefficients needs exactly 5 numbers");
        c.stages.z_coefficients = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                                   std::stod(parts[3]), std::stod(parts[4])};
    }

    const std::string delta = kv.get("index.delta", "diff");
    if (delta == "diff")
        c.stages.delta_mode = posthoc::DeltaMode::first_difference;
    else if (delta == "pct")
        c.stages.delta_mode = posthoc::DeltaMode::pct_change;
    else
        throw ValidationError("index.delta must be 'diff' or 'pct'");

    // regimes.windows = label:YYYY-MM..YYYY-MM[, ...]; presets by bare name.
    if (kv.has("regimes.windows")) {
        c.stages.regime_windows.clear();
        for (const auto& item : split_list(kv.get("regimes.windows", ""), ',')) {
            if (item == "subprime") {
                c.stages.regime_windows.push_back(regimes::subprime_window());
                continue;
            }
            if (item == "dotcom") {
                c.stages.regime_windows.push_back(regimes::dotcom_window());
                continue;
            }
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ValidationError("regimes.windows entry '" + item +
                                      "': expected 'label:YYYY-MM..YYYY-MM' or a preset name");
            const auto [start, end] = parse_window(item.substr(colon + 1), "regimes.windows");
            c.stages.regime_windows.push_back({trim(item.substr(0, colon)), start, end});
        }
    }

    c.run_unit_roots = kv.get_bool("unitroot.run", true);
    c.unit_root_max_lag = kv.get_int("unitroot.max_lag", 12);
    c.pp_bandwidth = kv.get_int("unitroot.pp_bandwidth", -1);
    c.run_robustness = kv.get_bool("robustness.run", true);
    c.ingest.forward_fill_fundamentals = kv.get_bool("ingest.forward_fill", false);
    c.ingest.ratings_allow_gaps = kv.get_bool("ingest.ratings_allow_gaps", false);
    return c;
}

synth::SynthConfig load_synth_config(const KeyValues& kv) {
    reject_unknown(kv);
    synth::SynthConfig c;
    if (kv.has("synth.seed")) c.seed = static_cast<std::uint64_t>(std::stoull(kv.get("synth.seed", "42")));
    c.n_firms = kv.get_int("synth.n_firms", c.n_firms);
    if (kv.has("synth.first_month")) c.first_month = parse_year_month(kv.get("synth.first_month", ""));
    if (kv.has("synth.last_month")) c.last_month = parse_year_month(kv.get("synth.last_month", ""));
    c.theta = kv.get_double("synth.theta", c.theta);
    c.alpha_cfv = kv.get_double("synth.alpha_cfv", c.alpha_cfv);
    c.alpha_dd = kv.get_double("synth.alpha_dd", c.alpha_dd);
    c.alpha_z = kv.get_double("synth.alpha_z", c.alpha_z);
    c.alpha_ir = kv.get_double("synth.alpha_ir", c.alpha_ir);
    c.gamma_cpi = kv.get_double("synth.gamma_cpi", c.gamma_cpi);
    c.gamma_ipi = kv.get_double("synth.gamma_ipi", c.gamma_ipi);
    c.gamma_ffr = kv.get_double("synth.gamma_ffr", c.gamma_ffr);
    c.gamma_lag = kv.get_double("synth.gamma_lag", c.gamma_lag);
    c.noise_sd = kv.get_double("synth.noise_sd", c.noise_sd);
    c.ar1_phi = kv.get_double("synth.ar1_phi", c.ar1_phi);
    c.shock_sd = kv.get_double("synth.shock_sd", c.shock_sd);
    c.dd.loading = kv.get_double("synth.dd_loading", c.dd.loading);
    c.dd.noise_sd = kv.get_double("synth.dd_noise_sd", c.dd.noise_sd);
    c.z.loading = kv.get_double("synth.z_loading", c.z.loading);
    c.z.noise_sd = kv.get_double("synth.z_noise_sd", c.z.noise_sd);
    c.cfv_base = kv.get_double("synth.cfv_base", c.cfv_base);
    c.cfv_loading = kv.get_double("synth.cfv_loading", c.cfv_loading);
    c.cfv_common_noise_sd = kv.get_double("synth.cfv_common_noise_sd", c.cfv_common_noise_sd);
    c.ir_base_pct = kv.get_double("synth.ir_base_pct", c.ir_base_pct);
    c.ir_loading = kv.get_double("synth.ir_loading", c.ir_loading);
    c.ir_noise_sd = kv.get_double("synth.ir_noise_sd", c.ir_noise_sd);
    if (kv.has("synth.crisis_start")) c.crisis.start = parse_year_month(kv.get("synth.crisis_start", ""));
    if (kv.has("synth.crisis_end")) c.crisis.end = parse_year_month(kv.get("synth.crisis_end", ""));
    c.crisis.amplification = kv.get_double("synth.crisis_amplification", c.crisis.amplification);
    c.firm_dispersion = kv.get_double("synth.firm_dispersion", c.firm_dispersion);
    c.daily_return_sd = kv.get_double("synth.daily_return_sd", c.daily_return_sd);
    c.trading_days = kv.get_int("synth.trading_days", c.trading_days);
    c.cfv_window_months = kv.get_int("synth.cfv_window_months", c.cfv_window_months);
    c.dd_level_base = kv.get_double("synth.dd_level_base", c.dd_level_base);
    c.z_level_base = kv.get_double("synth.z_level_base", c.z_level_base);
    c.ys_level_base = kv.get_double("synth.ys_level_base", c.ys_level_base);
    return c;
}

std::string render_effective(const pipeline::PipelineConfig& c) {
    std::ostringstream out;
    out << "[inputs]\n";
    out << "firms = " << c.firms_path << "\n";
    out << "prices = " << c.prices_path << "\n";
    out << "zratios = " << c.zratios_path << "\n";
    out << "ratings = " << c.ratings_path << "\n";
    out << "spreads = " << c.spreads_path << "\n";
    if (!c.weights_path.empty()) out << "weights = " << c.weights_path << "\n";
    for (const auto& [key, path] : c.macro_paths) out << "macro." << key << " = " << path << "\n";
    out << "[output]\ndir = " << c.output_dir << "\n";
    out << "[model]\n";
    out << "alpha = " << c.stages.alpha << "\n";
    out << "bg_lags = " << c.stages.bg_lags << "\n";
    out << "reset_powers = ";
    for (size_t i = 0; i < c.stages.reset_powers.size(); ++i)
        out << (i ? "," : "") << c.stages.reset_powers[i];
    out << "\n";
    out << "min_aligned_months = " << c.stages.min_aligned_months << "\n";
    out << "[spline]\nknot_placement = "
        << (c.stages.spline.placement == prep::KnotPlacement::period_end ? "end" : "mid") << "\n";
    out << "[proxies]\n";
    out << "cfv_window = " << c.stages.cfv.window_months << "\n";
    out << "cfv_mean_epsilon = " << c.stages.cfv.mean_epsilon << "\n";
    const auto& z = c.stages.z_coefficients;
    out << "z_coefficients = " << z.c1 << "," << z.c2 << "," << z.c3 << "," << z.c4 << "," << z.c5
        << "\n";
    out << "[index]\ndelta = "
        << (c.stages.delta_mode == posthoc::DeltaMode::first_difference ? "diff" : "pct") << "\n";
    out << "[regimes]\nwindows = ";
    for (size_t i = 0; i < c.stages.regime_windows.size(); ++i) {
        const auto& w = c.stages.regime_windows[i];
        out << (i ? "," : "") << w.label << ":" << w.start.str() << ".." << w.end.str();
    }
    out << "\n";
    out << "[unitroot]\n";
    out << "run = " << (c.run_unit_roots ? "true" : "false") << "\n";
    out << "max_lag = " << c.unit_root_max_lag << "\n";
    out << "pp_bandwidth = " << c.pp_bandwidth << "\n";
    out << "[robustness]\nrun = " << (c.run_robustness ? "true" : "false") << "\n";
    out << "[ingest]\n";
    out << "forward_fill = " << (c.ingest.forward_fill_fundamentals ? "true" : "false") << "\n";
    out << "ratings_allow_gaps = " << (c.ingest.ratings_allow_gaps ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace drix::config
