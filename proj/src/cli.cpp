#include "panicsim/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "panicsim/analysis.hpp"
#include "panicsim/errors.hpp"
#include "panicsim/ingest_io.hpp"

namespace panicsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, Verb>& verb_names() {
    static const std::map<std::string, Verb> names{{"simulate", Verb::Simulate}, {"analyze", Verb::Analyze},
                                                   {"pca", Verb::Pca},           {"shist", Verb::Shist},
                                                   {"volvol", Verb::Volvol},     {"report", Verb::Report}};
    return names;
}

json default_config() {
    const ScenarioConfig d;
    json shocks = json::array();
    for (const Shock& s : d.schedule.shocks) shocks.push_back({{"start", s.start}, {"end", s.end}, {"magnitude", s.magnitude}});
    return {{"n_assets", d.n_assets},
            {"n_steps", d.n_steps},
            {"seed", d.seed},
            {"burn_in", d.burn_in},
            {"sigma_c", d.sigma_c},
            {"control_mode", "volatility"},
            {"r_c", d.r_c},
            {"allow_unstable", d.allow_unstable},
            {"feedback.g", d.feedback.g},
            {"feedback.gamma", d.feedback.gamma},
            {"feedback.memory", d.feedback.memory},
            {"order.b", d.order.b},
            {"order.noise_sd", d.order.noise_sd},
            {"order.drift_form", "plain"},
            {"order.s_hat0", d.s_hat0},
            {"schedule.base", d.schedule.base},
            {"schedule.shocks", shocks},
            {"mode", "returns"},
            {"pca.window", 100},
            {"pca.correlation", false},
            {"shist.bins", 20},
            {"volvol.ratios", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}},
            {"volvol.n_assets", 1500},
            {"volvol.n_trials", 200}};
}

// "start:end:magnitude[,start:end:magnitude...]" as an alternative to JSON for --set.
json parse_shock_list(const std::string& key, const std::string& text) {
    json out = json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t start = 0, end = 0;
        double magnitude = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream is(item);
        if (!(is >> start >> c1 >> end >> c2 >> magnitude) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof()) {
            throw ConfigError("invalid value for key '" + key + "': expected start:end:magnitude");
        }
        out.push_back({{"start", start}, {"end", end}, {"magnitude", magnitude}});
    }
    return out;
}

json parse_override_value(const std::string& key, const std::string& text) {
    json value = json::parse(text, nullptr, false);
    if (!value.is_discarded()) return value;
    if (key == "schedule.shocks") return parse_shock_list(key, text);
    return text;
}

template <typename T>
T get_number(const json& cfg, const std::string& key) {
    const json& v = cfg.at(key);
    if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("invalid value for key '" + key + "': expected a number");
        return v.get<double>();
    } else {
        if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0)) {
            throw ConfigError("invalid value for key '" + key + "': expected a non-negative integer");
        }
        return static_cast<T>(v.get<unsigned long long>());
    }
}

bool get_bool(const json& cfg, const std::string& key) {
    const json& v = cfg.at(key);
    if (!v.is_boolean()) throw ConfigError("invalid value for key '" + key + "': expected true/false");
    return v.get<bool>();
}

std::string get_string(const json& cfg, const std::string& key, std::initializer_list<const char*> allowed) {
    const json& v = cfg.at(key);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        for (const char* a : allowed) {
            if (s == a) return s;
        }
    }
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : "|") + a;
    throw ConfigError("invalid value for key '" + key + "': expected one of " + list);
}

std::vector<Shock> get_shocks(const json& cfg) {
    const std::string key = "schedule.shocks";
    const json& v = cfg.at(key);
    if (!v.is_array()) throw ConfigError("invalid value for key '" + key + "': expected an array");
    std::vector<Shock> shocks;
    for (const json& item : v) {
        json obj = item;
        if (item.is_array() && item.size() == 3) obj = {{"start", item[0]}, {"end", item[1]}, {"magnitude", item[2]}};
        if (!obj.is_object() || !obj.contains("start") || !obj.contains("end") || !obj.contains("magnitude")) {
            throw ConfigError("invalid value for key '" + key + "': each shock needs start, end, magnitude");
        }
        Shock s;
        s.start = get_number<std::size_t>(obj, "start");
        s.end = get_number<std::size_t>(obj, "end");
        s.magnitude = get_number<double>(obj, "magnitude");
        shocks.push_back(s);
    }
    return shocks;
}

VolTransform get_mode(const json& cfg) {
    const std::string m = get_string(cfg, "mode", {"returns", "abs", "diff_abs"});
    if (m == "abs") return VolTransform::AbsReturns;
    if (m == "diff_abs") return VolTransform::DiffAbsReturns;
    return VolTransform::Returns;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_series_file(const fs::path& path, const std::vector<NamedSeries>& columns) {
    std::ostringstream s;
    write_series(columns, s);
    write_file(path, s.str());
}

void write_json_file(const fs::path& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

std::vector<NamedSeries> xsec_columns(const std::vector<CrossSectionSummary>& rows) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<NamedSeries> cols{{"mean", {}},   {"dispersion", {}}, {"skew", {}},   {"excess_kurtosis", {}},
                                  {"s", {}},      {"n_up", {}},       {"n_down", {}}, {"n_zero", {}}};
    for (const auto& r : rows) {
        cols[0].values.push_back(r.mean);
        cols[1].values.push_back(r.dispersion);
        cols[2].values.push_back(r.skew.value_or(nan));
        cols[3].values.push_back(r.excess_kurtosis.value_or(nan));
        cols[4].values.push_back(r.s);
        cols[5].values.push_back(static_cast<double>(r.n_up));
        cols[6].values.push_back(static_cast<double>(r.n_down));
        cols[7].values.push_back(static_cast<double>(r.n_zero));
    }
    return cols;
}

std::vector<double> row_means(const ReturnsPanel& panel) {
    std::vector<double> m;
    for (std::size_t t = 0; t < panel.n_times(); ++t) {
        double sum = 0.0;
        for (double v : panel.row(t)) sum += v;
        m.push_back(sum / static_cast<double>(panel.n_assets()));
    }
    return m;
}

// Windows passed on the command line; each bound pair must be complete and ordered.
std::optional<RowWindow> explicit_window(const std::optional<std::size_t>& first, const std::optional<std::size_t>& last,
                                         const char* name) {
    if (!first && !last) return std::nullopt;
    if (!first || !last) throw UsageError(std::string("--") + name + "-start and --" + name + "-end must be given together");
    if (*first > *last) throw UsageError(std::string("--") + name + "-start must not exceed --" + name + "-end");
    return RowWindow{*first, *last};
}

struct LoadedData {
    ReturnsPanel panel;
    std::vector<double> rho;
    AnalysisWindows windows;
    bool simulated = false;
    json info;
};

ReturnsPanel load_input(const Command& cmd, json& info) {
    std::ifstream in(*cmd.input, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input " + cmd.input->string());
    LoadResult loaded = load_panel(in);
    info["input"] = cmd.input->string();
    info["load_report"] = {{"parsed_rows", loaded.report.parsed_rows},
                           {"dropped_rows", loaded.report.dropped_rows},
                           {"assets", loaded.report.assets}};
    if (cmd.prices) {
        return prices_to_returns(loaded.panel, *cmd.prices == "log" ? ReturnKind::Log : ReturnKind::Simple);
    }
    return std::move(loaded.panel);
}

// Ingested panel when --input is given, the configured scenario otherwise.
LoadedData obtain_panel(const Command& cmd, const json& cfg) {
    LoadedData data;
    if (cmd.input) {
        data.panel = load_input(cmd, data.info);
        const std::size_t t = data.panel.n_times();
        data.windows.correlation = {0, t - 1};
    } else {
        const ScenarioConfig config = scenario_from_config(cfg);
        ScenarioOutput sim = run_scenario(config);
        data.panel = std::move(sim.panel);
        data.rho = std::move(sim.rho_path);
        data.windows = default_windows(config);
        data.simulated = true;
    }
    if (auto w = explicit_window(cmd.panic_start, cmd.panic_end, "panic")) data.windows.panic = w;
    if (auto w = explicit_window(cmd.normal_start, cmd.normal_end, "normal")) data.windows.normal = w;
    return data;
}

int do_simulate(const Command& cmd, const json& cfg, std::ostream& log) {
    const ScenarioConfig config = scenario_from_config(cfg);
    const ScenarioOutput sim = run_scenario(config);
    AnalysisWindows windows = default_windows(config);
    if (auto w = explicit_window(cmd.panic_start, cmd.panic_end, "panic")) windows.panic = w;
    if (auto w = explicit_window(cmd.normal_start, cmd.normal_end, "normal")) windows.normal = w;
    const PanelStatistics stats = analyze_panel(sim.panel, windows, sim.rho_path);

    {
        std::ostringstream s;
        write_panel(sim.panel, s);
        write_file(cmd.out_dir / "panel.csv", s.str());
    }
    write_series_file(cmd.out_dir / "rho.csv", {{"rho", sim.rho_path}, {"s_hat", sim.s_hat_path}});
    write_series_file(cmd.out_dir / "sigma0.csv", {{"sigma0", sim.sigma0_path}});
    write_series_file(cmd.out_dir / "market.csv", {{"market", sim.market}});
    write_series_file(cmd.out_dir / "xsec.csv", xsec_columns(stats.rows));

    json summary = to_json(stats);
    const std::size_t tail = std::min<std::size_t>(100, sim.rho_path.size());
    double tail_rho = 0.0;
    for (std::size_t t = sim.rho_path.size() - tail; t < sim.rho_path.size(); ++t) tail_rho += sim.rho_path[t];
    summary["mean_rho_last_100"] = tail_rho / static_cast<double>(tail);
    summary["clamp_events"] = sim.clamp_events;
    summary["seed"] = config.seed;
    write_json_file(cmd.out_dir / "summary.json", summary);
    log << "simulate: " << config.n_steps << " steps x " << config.n_assets << " assets -> " << cmd.out_dir.string()
        << "\n";
    return 0;
}

int do_analyze(const Command& cmd, const json& cfg, std::ostream& log) {
    if (!cmd.input) throw UsageError("analyze requires --input FILE");
    LoadedData data = obtain_panel(cmd, cfg);
    const PanelStatistics stats = analyze_panel(data.panel, data.windows, data.rho);
    write_series_file(cmd.out_dir / "xsec.csv", xsec_columns(stats.rows));
    write_series_file(cmd.out_dir / "market.csv", {{"market", row_means(data.panel)}});

    // Cross-sectional spread of volatility (|r| per asset) and its moving average.
    const std::size_t window = cmd.window.value_or(get_number<std::size_t>(cfg, "pca.window"));
    std::vector<double> ratio;
    for (std::size_t t = 0; t < data.panel.n_times(); ++t) {
        std::vector<double> vols;
        for (double v : data.panel.row(t)) vols.push_back(std::abs(v));
        ratio.push_back(vol_dispersion_ratio(vols).value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    std::vector<double> finite_ratio = ratio;
    for (double& v : finite_ratio) {
        if (!std::isfinite(v)) v = 0.0;
    }
    write_series_file(cmd.out_dir / "volratio.csv",
                      {{"vol_ratio", ratio}, {"vol_ratio_ma", moving_average(finite_ratio, std::max<std::size_t>(window, 1))}});

    json summary = to_json(stats);
    summary.update(data.info);
    std::vector<double> pooled(data.panel.values.data(), data.panel.values.data() + data.panel.values.size());
    if (pooled.size() >= 100) {
        const StudentTFit fit = fit_student_t(pooled);
        summary["tail_fit"] = fit.applicable ? json{{"dof", fit.dof}, {"scale", fit.scale}, {"excess_kurtosis", fit.excess_kurtosis}}
                                             : json{{"applicable", false}, {"excess_kurtosis", fit.excess_kurtosis}};
    }
    write_json_file(cmd.out_dir / "summary.json", summary);
    log << "analyze: " << data.panel.n_times() << " rows x " << data.panel.n_assets() << " assets\n";
    return 0;
}

int do_pca(const Command& cmd, const json& cfg, std::ostream& log) {
    LoadedData data = obtain_panel(cmd, cfg);
    PcaOptions options;
    options.window = cmd.window.value_or(get_number<std::size_t>(cfg, "pca.window"));
    options.mode = get_mode(cfg);
    options.use_correlation = get_bool(cfg, "pca.correlation");
    const PcaSeries series = rolling_first_pc_share(data.panel, options);
    std::vector<double> times(series.times.begin(), series.times.end());
    write_series_file(cmd.out_dir / "pca.csv", {{"time", times}, {"share1", series.share1}});
    log << "pca: " << series.share1.size() << " windows of " << options.window << " rows\n";
    return 0;
}

int do_shist(const Command& cmd, const json& cfg, std::ostream& log) {
    LoadedData data = obtain_panel(cmd, cfg);
    if (!data.windows.panic) throw UsageError("shist on external data requires --panic-start and --panic-end");
    const RowWindow panic = *data.windows.panic;
    const std::size_t bins = cmd.bins.value_or(get_number<std::size_t>(cfg, "shist.bins"));
    if (panic.last >= data.panel.n_times()) throw UsageError("panic window outside the panel");
    std::vector<double> s_normal, s_panic;
    for (std::size_t t = 0; t < data.panel.n_times(); ++t) {
        const double s = sign_statistic(data.panel.row(t)).s;
        if (panic.contains(t)) {
            s_panic.push_back(s);
        } else if (data.windows.normal ? data.windows.normal->contains(t) : true) {
            s_normal.push_back(s);
        }
    }
    if (s_normal.empty() || s_panic.empty()) throw UsageError("shist: empty normal or panic window");
    auto emit = [&](const fs::path& path, const std::vector<double>& samples) {
        const Histogram h = histogram(samples, bins, HistRange{-1.0, 1.0});
        std::vector<NamedSeries> cols{{"lo", {}}, {"hi", {}}, {"count", {}}};
        for (std::size_t k = 0; k < h.counts.size(); ++k) {
            cols[0].values.push_back(h.edges[k]);
            cols[1].values.push_back(h.edges[k + 1]);
            cols[2].values.push_back(static_cast<double>(h.counts[k]));
        }
        write_series_file(path, cols);
    };
    emit(cmd.out_dir / "s_normal.csv", s_normal);
    emit(cmd.out_dir / "s_panic.csv", s_panic);
    log << "shist: " << s_normal.size() << " normal / " << s_panic.size() << " panic samples\n";
    return 0;
}

int do_volvol(const Command& cmd, const json& cfg, std::ostream& log) {
    const json& r = cfg.at("volvol.ratios");
    if (!r.is_array()) throw ConfigError("invalid value for key 'volvol.ratios': expected an array");
    std::vector<double> ratios;
    for (const json& v : r) {
        if (!v.is_number()) throw ConfigError("invalid value for key 'volvol.ratios': expected numbers");
        ratios.push_back(v.get<double>());
    }
    std::vector<VolVolPoint> points;
    try {
        points = volvol_experiment(ratios, get_number<std::size_t>(cfg, "volvol.n_assets"),
                                   get_number<std::size_t>(cfg, "volvol.n_trials"), get_number<std::uint64_t>(cfg, "seed"));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    std::vector<NamedSeries> cols{{"ratio", {}}, {"excess_kurtosis", {}}};
    for (const auto& p : points) {
        cols[0].values.push_back(p.ratio);
        cols[1].values.push_back(p.mean_excess_kurtosis);
    }
    write_series_file(cmd.out_dir / "volvol.csv", cols);
    log << "volvol: " << points.size() << " ratios\n";
    return 0;
}

json column_stats(const std::vector<double>& values) {
    std::vector<double> finite;
    for (double v : values) {
        if (std::isfinite(v)) finite.push_back(v);
    }
    if (finite.empty()) return {{"n", 0}};
    double sum = 0.0;
    for (double v : finite) sum += v;
    return {{"n", finite.size()},
            {"mean", sum / static_cast<double>(finite.size())},
            {"median", median(finite)},
            {"min", *std::min_element(finite.begin(), finite.end())},
            {"max", *std::max_element(finite.begin(), finite.end())}};
}

int do_report(const Command& cmd, std::ostream& log) {
    json report;
    const fs::path summary_path = cmd.out_dir / "summary.json";
    if (fs::exists(summary_path)) {
        std::ifstream in(summary_path);
        json previous = json::parse(in, nullptr, false);
        if (!previous.is_discarded()) {
            report = previous.contains("files") && previous.contains("run") ? previous["run"] : previous;
        }
    }
    json files = json::object();
    for (const char* name : {"rho.csv", "sigma0.csv", "market.csv", "xsec.csv", "pca.csv", "volvol.csv", "s_normal.csv",
                             "s_panic.csv", "volratio.csv"}) {
        const fs::path path = cmd.out_dir / name;
        if (!fs::exists(path)) continue;
        std::ifstream in(path, std::ios::binary);
        json cols = json::object();
        for (const auto& c : read_series(in)) cols[c.name] = column_stats(c.values);
        files[name] = cols;
    }
    json out = {{"run", report}, {"files", files}};
    write_json_file(summary_path, out);
    log << "report: aggregated " << files.size() << " files\n";
    return 0;
}

}  // namespace

Command parse_args(const std::vector<std::string>& argv) {
    if (argv.empty()) throw UsageError("empty argument vector");
    Command cmd;
    CLI::App app{"Self-organizing market panic simulator and cross-sectional statistics", "panicsim"};
    app.require_subcommand(1, 1);
    app.fallthrough(false);

    std::string config_path, out_dir = ".", input, prices;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    std::size_t window = 0, bins = 0, panic_start = 0, panic_end = 0, normal_start = 0, normal_end = 0;

    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, verb] : verb_names()) {
        static const std::map<Verb, const char*> blurbs{
            {Verb::Simulate, "run a scenario and write the panel, paths and cross-section statistics"},
            {Verb::Analyze, "cross-section statistics for a CSV panel"},
            {Verb::Pca, "rolling first-principal-component variance share"},
            {Verb::Shist, "histograms of the sign statistic in the normal and panic windows"},
            {Verb::Volvol, "cross-sectional kurtosis against the vol-of-vol ratio"},
            {Verb::Report, "summarise the CSV outputs already present in --out"}};
        CLI::App* sub = app.add_subcommand(name, blurbs.at(verb));
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--set", sets, "key=value override (repeatable)")->allow_extra_args(false);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed");
        if (verb == Verb::Analyze || verb == Verb::Pca) sub->add_option("--window", window, "rolling window length");
        if (verb == Verb::Shist) sub->add_option("--bins", bins, "histogram bins");
        if (verb == Verb::Analyze || verb == Verb::Pca || verb == Verb::Shist) {
            sub->add_option("--input", input, "wide CSV panel (date,TICKER...)");
            sub->add_option("--prices", prices, "treat input as prices: log | simple")
                ->check(CLI::IsMember({"log", "simple"}));
        }
        if (verb != Verb::Volvol && verb != Verb::Report) {
            sub->add_option("--panic-start", panic_start);
            sub->add_option("--panic-end", panic_end);
            sub->add_option("--normal-start", normal_start);
            sub->add_option("--normal-end", normal_end);
        }
        subs[name] = sub;
    }

    std::vector<const char*> raw;
    raw.reserve(argv.size());
    for (const auto& a : argv) raw.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string(e.what()) + "\n" + app.help());
    }

    for (const auto& [name, sub] : subs) {
        if (!sub->parsed()) continue;
        cmd.verb = verb_names().at(name);
        auto given = [&](const char* flag) { return sub->count(flag) > 0; };
        if (given("--config")) cmd.config_path = config_path;
        cmd.out_dir = out_dir;
        if (given("--seed")) cmd.seed = seed;
        if (sub->get_option_no_throw("--window") && given("--window")) cmd.window = window;
        if (sub->get_option_no_throw("--bins") && given("--bins")) cmd.bins = bins;
        if (sub->get_option_no_throw("--input") && given("--input")) cmd.input = input;
        if (sub->get_option_no_throw("--prices") && given("--prices")) cmd.prices = prices;
        if (sub->get_option_no_throw("--panic-start")) {
            if (given("--panic-start")) cmd.panic_start = panic_start;
            if (given("--panic-end")) cmd.panic_end = panic_end;
            if (given("--normal-start")) cmd.normal_start = normal_start;
            if (given("--normal-end")) cmd.normal_end = normal_end;
        }
    }
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + kv + "'");
        cmd.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (cmd.prices && !cmd.input) throw UsageError("--prices requires --input");
    if (cmd.window && *cmd.window < 1) throw UsageError("--window must be >= 1");
    if (cmd.bins && *cmd.bins < 2) throw UsageError("--bins must be >= 2");
    explicit_window(cmd.panic_start, cmd.panic_end, "panic");
    explicit_window(cmd.normal_start, cmd.normal_end, "normal");
    return cmd;
}

json effective_config(const Command& cmd) {
    json cfg = default_config();
    auto apply = [&](const std::string& key, json value) {
        if (!cfg.contains(key)) throw ConfigError("unknown config key '" + key + "'");
        cfg[key] = std::move(value);
    };
    if (cmd.config_path) {
        std::ifstream in(*cmd.config_path);
        if (!in) throw ConfigError("cannot read config file " + cmd.config_path->string());
        json file = json::parse(in, nullptr, false);
        if (file.is_discarded() || !file.is_object()) {
            throw ConfigError("config file " + cmd.config_path->string() + " is not a JSON object");
        }
        // Nested objects are accepted as an alternative spelling of dotted keys.
        std::function<void(const json&, const std::string&)> walk = [&](const json& node, const std::string& prefix) {
            for (auto it = node.begin(); it != node.end(); ++it) {
                const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
                if (it.value().is_object() && !cfg.contains(key)) {
                    walk(it.value(), key);
                } else {
                    apply(key, it.value());
                }
            }
        };
        walk(file, "");
    }
    for (const auto& [key, text] : cmd.overrides) apply(key, parse_override_value(key, text));
    if (cmd.seed) cfg["seed"] = *cmd.seed;
    return cfg;
}

ScenarioConfig scenario_from_config(const json& cfg) {
    ScenarioConfig c;
    c.n_assets = get_number<std::size_t>(cfg, "n_assets");
    c.n_steps = get_number<std::size_t>(cfg, "n_steps");
    c.seed = get_number<std::uint64_t>(cfg, "seed");
    c.burn_in = get_number<std::size_t>(cfg, "burn_in");
    c.sigma_c = get_number<double>(cfg, "sigma_c");
    c.control_mode = get_string(cfg, "control_mode", {"volatility", "return"}) == "return" ? ControlMode::Return
                                                                                          : ControlMode::Volatility;
    c.r_c = get_number<double>(cfg, "r_c");
    c.allow_unstable = get_bool(cfg, "allow_unstable");
    c.feedback.g = get_number<double>(cfg, "feedback.g");
    c.feedback.gamma = get_number<double>(cfg, "feedback.gamma");
    c.feedback.memory = get_number<std::size_t>(cfg, "feedback.memory");
    c.order.b = get_number<double>(cfg, "order.b");
    c.order.noise_sd = get_number<double>(cfg, "order.noise_sd");
    c.order.form = get_string(cfg, "order.drift_form", {"plain", "halved"}) == "halved" ? DriftForm::Halved
                                                                                        : DriftForm::Plain;
    c.s_hat0 = get_number<double>(cfg, "order.s_hat0");
    c.schedule.base = get_number<double>(cfg, "schedule.base");
    c.schedule.shocks = get_shocks(cfg);
    c.validate();
    return c;
}

int run_command(const Command& cmd, std::ostream& log, std::ostream& err) {
    json cfg;
    try {
        cfg = effective_config(cmd);
        if (cmd.verb == Verb::Simulate || (!cmd.input && (cmd.verb == Verb::Pca || cmd.verb == Verb::Shist))) {
            scenario_from_config(cfg);
        }
        get_mode(cfg);
        get_bool(cfg, "pca.correlation");
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    }
    try {
        std::error_code ec;
        fs::create_directories(cmd.out_dir, ec);
        if (ec || !fs::is_directory(cmd.out_dir)) {
            err << "cannot create output directory " << cmd.out_dir.string() << "\n";
            return 1;
        }
        if (cmd.verb != Verb::Report) write_json_file(cmd.out_dir / "effective_config.json", cfg);
        switch (cmd.verb) {
            case Verb::Simulate: return do_simulate(cmd, cfg, log);
            case Verb::Analyze: return do_analyze(cmd, cfg, log);
            case Verb::Pca: return do_pca(cmd, cfg, log);
            case Verb::Shist: return do_shist(cmd, cfg, log);
            case Verb::Volvol: return do_volvol(cmd, cfg, log);
            case Verb::Report: return do_report(cmd, log);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int main_entry(const std::vector<std::string>& argv, std::ostream& log, std::ostream& err) {
    Command cmd;
    try {
        cmd = parse_args(argv);
    } catch (const HelpRequested& h) {
        log << h.what();
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    return run_command(cmd, log, err);
}

}  // namespace panicsim::cli
