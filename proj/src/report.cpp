#include "drix/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "drix/csv.hpp"
#include "drix/errors.hpp"

namespace drix::report {

namespace {

using nlohmann::json;

std::string two_dp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = nr > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nc; ++j) m(i, j) = rows[i][j].get<double>();
    return m;
}

json fit_to_json(const ols::RegressionFit& fit) {
    json j;
    j["names"] = fit.names;
    j["coef"] = vector_to_json(fit.coef);
    j["stderr"] = vector_to_json(fit.stderrs);
    j["t_stat"] = vector_to_json(fit.t_stat);
    j["p_value"] = vector_to_json(fit.p_value);
    j["residuals"] = vector_to_json(fit.residuals);
    json stars = json::array();
    for (Eigen::Index i = 0; i < fit.p_value.size(); ++i)
        stars.push_back(ols::significance_stars(fit.p_value(i)));
    j["stars"] = stars;
    j["r2"] = fit.r2;
    j["adj_r2"] = fit.adj_r2;
    j["aic"] = fit.aic;
    j["durbin_watson"] = fit.durbin_watson;
    j["ssr"] = fit.ssr;
    j["n_obs"] = fit.n_obs;
    j["k_params"] = fit.k_params;
    return j;
}

ols::RegressionFit fit_from_json(const json& j) {
    ols::RegressionFit fit;
    fit.names = j.at("names").get<std::vector<std::string>>();
    fit.coef = vector_from_json(j.at("coef"));
    fit.stderrs = vector_from_json(j.at("stderr"));
    fit.t_stat = vector_from_json(j.at("t_stat"));
    fit.p_value = vector_from_json(j.at("p_value"));
    fit.residuals = vector_from_json(j.at("residuals"));
    fit.r2 = j.at("r2").get<double>();
    fit.adj_r2 = j.at("adj_r2").get<double>();
    fit.aic = j.at("aic").get<double>();
    fit.durbin_watson = j.at("durbin_watson").get<double>();
    fit.ssr = j.at("ssr").get<double>();
    fit.n_obs = j.at("n_obs").get<int>();
    fit.k_params = j.at("k_params").get<int>();
    return fit;
}

json test_to_json(const diag::TestResult& t) {
    json j;
    j["name"] = t.name;
    j["statistic"] = t.statistic;
    j["df1"] = t.df1;
    j["df2"] = t.df2;
    j["p_value"] = t.p_value;
    j["reject_at_5pct"] = t.reject_at_5pct;
    return j;
}

diag::TestResult test_from_json(const json& j) {
    diag::TestResult t;
    t.name = j.at("name").get<std::string>();
    t.statistic = j.at("statistic").get<double>();
    t.df1 = j.at("df1").get<int>();
    t.df2 = j.at("df2").get<int>();
    t.p_value = j.at("p_value").get<double>();
    t.reject_at_5pct = j.at("reject_at_5pct").get<bool>();
    return t;
}

std::string role_name(prep::ColumnRole role) {
    switch (role) {
        case prep::ColumnRole::dependent: return "y";
        case prep::ColumnRole::proxy: return "proxy";
        case prep::ColumnRole::control: return "control";
    }
    return "?";
}

prep::ColumnRole role_from(const std::string& s) {
    if (s == "y") return prep::ColumnRole::dependent;
    if (s == "proxy") return prep::ColumnRole::proxy;
    return prep::ColumnRole::control;
}

json column_to_json(const prep::AlignedColumn& c) {
    json j;
    j["name"] = c.name;
    j["role"] = role_name(c.role);
    j["values"] = c.values;
    j["transforms"] = c.meta.transforms;
    j["native"] = c.meta.native_frequency;
    return j;
}

prep::AlignedColumn column_from_json(const json& j) {
    prep::AlignedColumn c;
    c.name = j.at("name").get<std::string>();
    c.role = role_from(j.at("role").get<std::string>());
    c.values = j.at("values").get<std::vector<double>>();
    c.meta.transforms = j.at("transforms").get<std::string>();
    c.meta.native_frequency = j.at("native").get<std::string>();
    return c;
}

json aligned_to_json(const prep::AlignedDataset& d) {
    json j;
    json dates = json::array();
    for (const auto& ym : d.dates) dates.push_back(ym.str());
    j["dates"] = dates;
    j["y"] = column_to_json(d.y);
    json proxies = json::array();
    for (const auto& c : d.proxies) proxies.push_back(column_to_json(c));
    j["proxies"] = proxies;
    json controls = json::array();
    for (const auto& c : d.controls) controls.push_back(column_to_json(c));
    j["controls"] = controls;
    return j;
}

prep::AlignedDataset aligned_from_json(const json& j) {
    prep::AlignedDataset d;
    for (const auto& s : j.at("dates")) d.dates.push_back(parse_year_month(s.get<std::string>()));
    d.y = column_from_json(j.at("y"));
    for (const auto& c : j.at("proxies")) d.proxies.push_back(column_from_json(c));
    for (const auto& c : j.at("controls")) d.controls.push_back(column_from_json(c));
    return d;
}

json unit_root_to_json(const pipeline::UnitRootEntry& e) {
    auto one = [](const prep::UnitRootResult& r) {
        json j;
        j["method"] = (r.method == prep::UnitRootMethod::adf) ? "adf" : "pp";
        j["statistic"] = r.test_statistic;
        j["lag_or_bandwidth"] = r.lag_or_bandwidth;
        j["critical_values"] = r.critical_values;
        j["reject_at_5pct"] = r.reject_unit_root_at_5pct;
        return j;
    };
    json j;
    j["column"] = e.column;
    j["adf"] = one(e.adf);
    j["pp"] = one(e.pp);
    return j;
}

pipeline::UnitRootEntry unit_root_from_json(const json& j) {
    auto one = [](const json& r) {
        prep::UnitRootResult out;
        out.method = r.at("method").get<std::string>() == "adf" ? prep::UnitRootMethod::adf
                                                                : prep::UnitRootMethod::phillips_perron;
        out.test_statistic = r.at("statistic").get<double>();
        out.lag_or_bandwidth = r.at("lag_or_bandwidth").get<int>();
        out.critical_values = r.at("critical_values").get<std::map<std::string, double>>();
        out.reject_unit_root_at_5pct = r.at("reject_at_5pct").get<bool>();
        return out;
    };
    pipeline::UnitRootEntry e;
    e.column = j.at("column").get<std::string>();
    e.adf = one(j.at("adf"));
    e.pp = one(j.at("pp"));
    return e;
}

json index_to_json(const posthoc::PosthocIndex& idx) {
    json j;
    j["principal"] = idx.principal;
    json members = json::array();
    for (const auto& m : idx.members) {
        json mj;
        mj["name"] = m.name;
        mj["beta"] = m.beta;
        mj["cov_ratio"] = m.cov_ratio;
        mj["weight"] = m.weight;
        members.push_back(std::move(mj));
    }
    j["members"] = members;
    json dates = json::array();
    for (const auto& ym : idx.dates) dates.push_back(ym.str());
    j["dates"] = dates;
    j["series"] = idx.series;
    j["delta_series"] = idx.delta_series;
    j["delta_mode"] =
        (idx.delta_mode == posthoc::DeltaMode::first_difference) ? "diff" : "pct";
    return j;
}

posthoc::PosthocIndex index_from_json(const json& j) {
    posthoc::PosthocIndex idx;
    idx.principal = j.at("principal").get<std::string>();
    for (const auto& mj : j.at("members")) {
        posthoc::IndexMember m;
        m.name = mj.at("name").get<std::string>();
        m.beta = mj.at("beta").get<double>();
        m.cov_ratio = mj.at("cov_ratio").get<double>();
        m.weight = mj.at("weight").get<double>();
        idx.members.push_back(std::move(m));
    }
    for (const auto& s : j.at("dates")) idx.dates.push_back(parse_year_month(s.get<std::string>()));
    idx.series = j.at("series").get<std::vector<double>>();
    idx.delta_series = j.at("delta_series").get<std::vector<double>>();
    idx.delta_mode = j.at("delta_mode").get<std::string>() == "diff"
                         ? posthoc::DeltaMode::first_difference
                         : posthoc::DeltaMode::pct_change;
    return idx;
}

json collinearity_to_json(const diag::CollinearityReport& r) {
    json j;
    j["names"] = r.names;
    j["correlation"] = matrix_to_json(r.correlation);
    j["vif"] = r.vif;
    j["belsley_names"] = r.belsley_names;
    j["condition_indices"] = r.condition_indices;
    j["variance_decomposition"] = matrix_to_json(r.variance_decomposition);
    return j;
}

diag::CollinearityReport collinearity_from_json(const json& j) {
    diag::CollinearityReport r;
    r.names = j.at("names").get<std::vector<std::string>>();
    r.correlation = matrix_from_json(j.at("correlation"));
    r.vif = j.at("vif").get<std::vector<double>>();
    r.belsley_names = j.at("belsley_names").get<std::vector<std::string>>();
    r.condition_indices = j.at("condition_indices").get<std::vector<double>>();
    r.variance_decomposition = matrix_from_json(j.at("variance_decomposition"));
    return r;
}

json regime_to_json(const pipeline::RegimeResult& r) {
    json j;
    j["label"] = r.label;
    j["fit"] = fit_to_json(r.fit.fit);
    j["collapsed"] = r.fit.collapsed;
    j["crisis_name"] = r.fit.crisis_name;
    j["non_crisis_name"] = r.fit.non_crisis_name;
    j["n_crisis"] = r.fit.n_crisis;
    j["n_non_crisis"] = r.fit.n_non_crisis;
    j["bg"] = test_to_json(r.bg);
    j["reset"] = test_to_json(r.reset);
    return j;
}

pipeline::RegimeResult regime_from_json(const json& j) {
    pipeline::RegimeResult r;
    r.label = j.at("label").get<std::string>();
    r.fit.fit = fit_from_json(j.at("fit"));
    r.fit.collapsed = j.at("collapsed").get<bool>();
    r.fit.crisis_name = j.at("crisis_name").get<std::string>();
    r.fit.non_crisis_name = j.at("non_crisis_name").get<std::string>();
    r.fit.n_crisis = j.at("n_crisis").get<int>();
    r.fit.n_non_crisis = j.at("n_non_crisis").get<int>();
    r.bg = test_from_json(j.at("bg"));
    r.reset = test_from_json(j.at("reset"));
    return r;
}

}  // namespace

std::string format_cell(double coef, double stderr_value, double p_value) {
    const std::string star = ols::significance_stars(p_value);
    std::string out = two_dp(coef);
    if (!star.empty()) out += " " + star;
    out += " (" + two_dp(stderr_value) + ")";
    return out;
}

std::string render_json(const pipeline::RunReport& r) {
    json j;
    j["schema_version"] = 1;
    j["software"] = r.version;
    j["config"] = r.config_echo;
    j["aligned"] = aligned_to_json(r.eq2_data);
    json singles = json::array();
    for (const auto& fit : r.single_proxy_fits) singles.push_back(fit_to_json(fit));
    j["single_proxy_fits"] = singles;
    j["full_fit"] = fit_to_json(r.full_fit);
    j["full_bg"] = test_to_json(r.full_bg);
    j["robustness_fit"] = r.robustness_fit ? fit_to_json(*r.robustness_fit) : json(nullptr);
    j["robustness_bg"] = r.robustness_bg ? test_to_json(*r.robustness_bg) : json(nullptr);
    j["collinearity"] = collinearity_to_json(r.collinearity);
    json roots = json::array();
    for (const auto& e : r.unit_roots) roots.push_back(unit_root_to_json(e));
    j["unit_roots"] = roots;
    json sel;
    sel["significant"] = r.selection.significant;
    sel["principal"] = r.selection.principal;
    sel["single_proxy_aic"] = r.selection.single_proxy_aic;
    j["selection"] = sel;
    j["index"] = index_to_json(r.index);
    j["eq4_fit"] = fit_to_json(r.eq4_fit);
    j["eq4_bg"] = test_to_json(r.eq4_bg);
    j["eq4_reset"] = test_to_json(r.eq4_reset);
    json regs = json::array();
    for (const auto& reg : r.regime_results) regs.push_back(regime_to_json(reg));
    j["regimes"] = regs;
    return j.dump(2) + "\n";
}

pipeline::RunReport parse_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != 1)
        throw ValidationError("report: unsupported schema version");
    pipeline::RunReport r;
    r.version = j.at("software").get<std::string>();
    r.config_echo = j.at("config").get<std::string>();
    r.eq2_data = aligned_from_json(j.at("aligned"));
    for (const auto& f : j.at("single_proxy_fits")) r.single_proxy_fits.push_back(fit_from_json(f));
    r.full_fit = fit_from_json(j.at("full_fit"));
    r.full_bg = test_from_json(j.at("full_bg"));
    if (!j.at("robustness_fit").is_null()) r.robustness_fit = fit_from_json(j.at("robustness_fit"));
    if (!j.at("robustness_bg").is_null()) r.robustness_bg = test_from_json(j.at("robustness_bg"));
    r.collinearity = collinearity_from_json(j.at("collinearity"));
    for (const auto& e : j.at("unit_roots")) r.unit_roots.push_back(unit_root_from_json(e));
    r.selection.significant = j.at("selection").at("significant").get<std::vector<std::string>>();
    r.selection.principal = j.at("selection").at("principal").get<std::string>();
    r.selection.single_proxy_aic =
        j.at("selection").at("single_proxy_aic").get<std::vector<double>>();
    r.index = index_from_json(j.at("index"));
    r.eq4_fit = fit_from_json(j.at("eq4_fit"));
    r.eq4_bg = test_from_json(j.at("eq4_bg"));
    r.eq4_reset = test_from_json(j.at("eq4_reset"));
    for (const auto& reg : j.at("regimes")) r.regime_results.push_back(regime_from_json(reg));
    return r;
}

namespace {

std::string cell_for(const ols::RegressionFit& fit, const std::string& name) {
    const int idx = fit.index_of(name);
    if (idx < 0) return "";
    return format_cell(fit.coef(idx), fit.stderrs(idx), fit.p_value(idx));
}

void print_row(std::ostringstream& out, const std::string& label,
               const std::vector<std::string>& cells) {
    out << std::left << std::setw(12) << label;
    for (const auto& c : cells) out << std::setw(18) << c;
    out << "\n";
}

}  // namespace

std::string render_text(const pipeline::RunReport& r) {
    std::ostringstream out;
    out << r.version << " run report\n";
    {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof(buf), "%Y-%m-%d %H:%M:%S", std::gmtime(&now));
        out << "generated at " << buf << " UTC\n";
    }
    out << "\nAligned sample: " << r.eq2_data.dates.front().str() << " .. "
        << r.eq2_data.dates.back().str() << " (" << r.eq2_data.rows() << " months)\n";

    // Table 1: single-proxy columns, the full specification, the robustness
    // variant with substituted controls.
    std::vector<const ols::RegressionFit*> fits;
    for (const auto& f : r.single_proxy_fits) fits.push_back(&f);
    fits.push_back(&r.full_fit);
    if (r.robustness_fit) fits.push_back(&*r.robustness_fit);

    out << "\nTable 1: spread change on default-risk proxies\n";
    {
        std::vector<std::string> header;
        for (size_t i = 0; i < fits.size(); ++i) header.push_back("(" + std::to_string(i + 1) + ")");
        print_row(out, "", header);

        std::vector<std::string> terms;
        for (const auto* fit : fits)
            for (const auto& name : fit->names)
                if (name != "const" && std::find(terms.begin(), terms.end(), name) == terms.end())
                    terms.push_back(name);
        for (const auto& term : terms) {
            std::vector<std::string> cells;
            for (const auto* fit : fits) cells.push_back(cell_for(*fit, term));
            print_row(out, term, cells);
        }
        std::vector<std::string> obs, ar2, dw, lm, lmp;
        for (const auto* fit : fits) {
            obs.push_back(std::to_string(fit->n_obs));
            ar2.push_back(two_dp(fit->adj_r2));
            dw.push_back(two_dp(fit->durbin_watson));
            lm.push_back("");
            lmp.push_back("");
        }
        lm[r.single_proxy_fits.size()] = two_dp(r.full_bg.statistic);
        lmp[r.single_proxy_fits.size()] = two_dp(r.full_bg.p_value);
        if (r.robustness_bg && fits.size() > r.single_proxy_fits.size() + 1) {
            lm.back() = two_dp(r.robustness_bg->statistic);
            lmp.back() = two_dp(r.robustness_bg->p_value);
        }
        print_row(out, "Obs", obs);
        print_row(out, "adj R2", ar2);
        print_row(out, "D-W", dw);
        print_row(out, "LM (B-G)", lm);
        print_row(out, "p (B-G)", lmp);
    }

    out << "\nSelected proxies:";
    for (const auto& name : r.selection.significant) out << " " << name;
    out << "\nPrincipal proxy (AIC): " << r.selection.principal << "\n";
    out << "Index weights:\n";
    for (const auto& m : r.index.members)
        out << "  " << std::left << std::setw(8) << m.name << " beta " << std::setw(12)
            << two_dp(m.beta) << " cov_ratio " << std::setw(12) << two_dp(m.cov_ratio) << " weight "
            << two_dp(m.weight) << "\n";

    out << "\nTable 2: spread change on the post-hoc index\n";
    {
        std::vector<const ols::RegressionFit*> fits2{&r.eq4_fit};
        std::vector<const pipeline::RegimeResult*> regs;
        for (const auto& reg : r.regime_results) {
            regs.push_back(&reg);
            fits2.push_back(&reg.fit.fit);
        }
        std::vector<std::string> header{"(1)"};
        for (size_t i = 0; i < regs.size(); ++i)
            header.push_back("(" + std::to_string(i + 2) + ": " + regs[i]->label + ")");
        print_row(out, "", header);
        std::vector<std::string> terms{"d_rho", "d_rho_crisis", "d_rho_noncrisis", "const"};
        for (const auto& term : terms) {
            std::vector<std::string> cells;
            bool any = false;
            for (const auto* fit : fits2) {
                cells.push_back(cell_for(*fit, term));
                if (!cells.back().empty()) any = true;
            }
            if (any) print_row(out, term, cells);
        }
        std::vector<std::string> obs, ar2, dw, lm, lmp, fstat, fp;
        obs.push_back(std::to_string(r.eq4_fit.n_obs));
        ar2.push_back(two_dp(r.eq4_fit.adj_r2));
        dw.push_back(two_dp(r.eq4_fit.durbin_watson));
        lm.push_back(two_dp(r.eq4_bg.statistic));
        lmp.push_back(two_dp(r.eq4_bg.p_value));
        fstat.push_back(two_dp(r.eq4_reset.statistic));
        fp.push_back(two_dp(r.eq4_reset.p_value));
        for (const auto* reg : regs) {
            obs.push_back(std::to_string(reg->fit.fit.n_obs));
            ar2.push_back(two_dp(reg->fit.fit.adj_r2));
            dw.push_back(two_dp(reg->fit.fit.durbin_watson));
            lm.push_back(two_dp(reg->bg.statistic));
            lmp.push_back(two_dp(reg->bg.p_value));
            fstat.push_back(two_dp(reg->reset.statistic));
            fp.push_back(two_dp(reg->reset.p_value));
        }
        print_row(out, "Obs", obs);
        print_row(out, "adj R2", ar2);
        print_row(out, "D-W", dw);
        print_row(out, "LM (B-G)", lm);
        print_row(out, "p (B-G)", lmp);
        print_row(out, "F (RESET)", fstat);
        print_row(out, "p (RESET)", fp);
    }

    if (r.regime_results.empty())
        out << "\n(no regime windows configured; crisis column omitted)\n";

    out << "\nCollinearity: max condition index "
        << two_dp(r.collinearity.condition_indices.empty()
                      ? 0.0
                      : r.collinearity.condition_indices.back())
        << "; VIF";
    for (size_t i = 0; i < r.collinearity.names.size(); ++i)
        out << " " << r.collinearity.names[i] << "=" << two_dp(r.collinearity.vif[i]);
    out << "\n";

    if (!r.unit_roots.empty()) {
        out << "\nUnit roots (ADF / PP statistics, 5% reject flag):\n";
        for (const auto& e : r.unit_roots)
            out << "  " << std::left << std::setw(10) << e.column << " adf "
                << two_dp(e.adf.test_statistic) << (e.adf.reject_unit_root_at_5pct ? "*" : " ")
                << "  pp " << two_dp(e.pp.test_statistic)
                << (e.pp.reject_unit_root_at_5pct ? "*" : " ") << "\n";
    }
    return out.str();
}

void write_csv_tables(const pipeline::RunReport& r, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const auto path = [&](const char* name) { return (fs::path(directory) / name).string(); };

    {
        std::vector<const ols::RegressionFit*> fits;
        for (const auto& f : r.single_proxy_fits) fits.push_back(&f);
        fits.push_back(&r.full_fit);
        if (r.robustness_fit) fits.push_back(&*r.robustness_fit);

        std::vector<std::string> header{"term"};
        for (size_t i = 0; i < fits.size(); ++i) header.push_back("col" + std::to_string(i + 1));
        std::vector<std::string> terms;
        for (const auto* fit : fits)
            for (const auto& name : fit->names)
                if (std::find(terms.begin(), terms.end(), name) == terms.end()) terms.push_back(name);
        std::vector<std::vector<std::string>> rows;
        for (const auto& term : terms) {
            std::vector<std::string> row{term};
            for (const auto* fit : fits) row.push_back(cell_for(*fit, term));
            rows.push_back(std::move(row));
        }
        auto stat_row = [&](const std::string& label, auto getter) {
            std::vector<std::string> row{label};
            for (const auto* fit : fits) row.push_back(getter(*fit));
            rows.push_back(std::move(row));
        };
        stat_row("observations",
                 [](const ols::RegressionFit& f) { return std::to_string(f.n_obs); });
        stat_row("adj_r2", [](const ols::RegressionFit& f) { return two_dp(f.adj_r2); });
        stat_row("durbin_watson",
                 [](const ols::RegressionFit& f) { return two_dp(f.durbin_watson); });
        csv::write_file(path("table1.csv"), header, rows);
    }

    {
        std::vector<std::string> header{"term", "col1"};
        for (const auto& reg : r.regime_results) header.push_back(reg.label);
        std::vector<std::vector<std::string>> rows;
        auto add = [&](const std::string& term) {
            std::vector<std::string> row{term, cell_for(r.eq4_fit, term)};
            for (const auto& reg : r.regime_results) row.push_back(cell_for(reg.fit.fit, term));
            rows.push_back(std::move(row));
        };
        add("d_rho");
        add("d_rho_crisis");
        add("d_rho_noncrisis");
        add("const");
        auto stat_row = [&](const std::string& label, auto eq4_value, auto reg_value) {
            std::vector<std::string> row{label, eq4_value()};
            for (const auto& reg : r.regime_results) row.push_back(reg_value(reg));
            rows.push_back(std::move(row));
        };
        stat_row("observations", [&] { return std::to_string(r.eq4_fit.n_obs); },
                 [](const pipeline::RegimeResult& reg) { return std::to_string(reg.fit.fit.n_obs); });
        stat_row("adj_r2", [&] { return two_dp(r.eq4_fit.adj_r2); },
                 [](const pipeline::RegimeResult& reg) { return two_dp(reg.fit.fit.adj_r2); });
        stat_row("durbin_watson", [&] { return two_dp(r.eq4_fit.durbin_watson); },
                 [](const pipeline::RegimeResult& reg) { return two_dp(reg.fit.fit.durbin_watson); });
        stat_row("lm_bg", [&] { return two_dp(r.eq4_bg.statistic); },
                 [](const pipeline::RegimeResult& reg) { return two_dp(reg.bg.statistic); });
        stat_row("p_bg", [&] { return two_dp(r.eq4_bg.p_value); },
                 [](const pipeline::RegimeResult& reg) { return two_dp(reg.bg.p_value); });
        stat_row("f_reset", [&] { return two_dp(r.eq4_reset.statistic); },
                 [](const pipeline::RegimeResult& reg) { return two_dp(reg.reset.statistic); });
        stat_row("p_reset", [&] { return two_dp(r.eq4_reset.p_value); },
                 [](const pipeline::RegimeResult& reg) { return two_dp(reg.reset.p_value); });
        csv::write_file(path("table2.csv"), header, rows);
    }

    {
        std::vector<std::vector<std::string>> rows;
        for (size_t t = 0; t < r.index.series.size(); ++t)
            rows.push_back({r.index.dates[t].str(), csv::format_double(r.index.series[t]),
                            t == 0 ? "" : csv::format_double(r.index.delta_series[t - 1])});
        csv::write_file(path("index.csv"), {"date", "rho", "delta_rho"}, rows);
    }

    {
        json weights;
        weights["principal"] = r.index.principal;
        json members = json::object();
        for (const auto& m : r.index.members) {
            json mj;
            mj["beta"] = m.beta;
            mj["cov_ratio"] = m.cov_ratio;
            mj["weight"] = m.weight;
            members[m.name] = mj;
        }
        weights["members"] = members;
        std::ofstream out(path("weights.json"));
        if (!out) throw IoError("cannot write weights.json");
        out << weights.dump(2) << "\n";
    }

    {
        std::vector<std::string> header{"name"};
        for (const auto& n : r.collinearity.names) header.push_back(n);
        std::vector<std::vector<std::string>> rows;
        for (size_t i = 0; i < r.collinearity.names.size(); ++i) {
            std::vector<std::string> row{r.collinearity.names[i]};
            for (size_t j = 0; j < r.collinearity.names.size(); ++j)
                row.push_back(csv::format_double(
                    r.collinearity.correlation(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j))));
            rows.push_back(std::move(row));
        }
        csv::write_file(path("correlation.csv"), header, rows);
    }

    {
        std::vector<std::string> header{"condition_index"};
        for (const auto& n : r.collinearity.belsley_names) header.push_back(n);
        std::vector<std::vector<std::string>> rows;
        for (size_t i = 0; i < r.collinearity.condition_indices.size(); ++i) {
            std::vector<std::string> row{csv::format_double(r.collinearity.condition_indices[i])};
            for (size_t j = 0; j < r.collinearity.belsley_names.size(); ++j)
                row.push_back(csv::format_double(r.collinearity.variance_decomposition(
                    static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
            rows.push_back(std::move(row));
        }
        csv::write_file(path("variance_decomposition.csv"), header, rows);
    }

    if (!r.unit_roots.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& e : r.unit_roots)
            rows.push_back({e.column, csv::format_double(e.adf.test_statistic),
                            std::to_string(e.adf.lag_or_bandwidth),
                            e.adf.reject_unit_root_at_5pct ? "1" : "0",
                            csv::format_double(e.pp.test_statistic),
                            std::to_string(e.pp.lag_or_bandwidth),
                            e.pp.reject_unit_root_at_5pct ? "1" : "0"});
        csv::write_file(path("unit_roots.csv"),
                        {"column", "adf_stat", "adf_lags", "adf_reject_5pct", "pp_stat",
                         "pp_bandwidth", "pp_reject_5pct"},
                        rows);
    }
}

void write_all(const pipeline::RunReport& r, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    {
        std::ofstream out(fs::path(directory) / "report.json", std::ios::binary);
        if (!out) throw IoError("cannot write report.json in '" + directory + "'");
        out << render_json(r);
    }
    {
        std::ofstream out(fs::path(directory) / "report.txt");
        if (!out) throw IoError("cannot write report.txt in '" + directory + "'");
        out << render_text(r);
    }
    write_csv_tables(r, directory);
}

}  // namespace drix::report
