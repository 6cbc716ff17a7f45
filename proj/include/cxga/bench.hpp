#pragma once

/// @file bench.hpp
/// @brief Multi-seed experiment harness: algorithm presets, experiment config
/// files, parallel execution, per-run CSV, aggregate CSV/JSON and comparisons.
///
/// Config file syntax (a small TOML-like subset):
///
///     # comment
///     instances  = ["tsplib/eil51.tsp", "tsplib/pr76.tsp"]   # relative to the file
///     algorithms = ["GA3", "CXGA", "GA1_r5"]
///     repeats    = 10
///     base_seed  = 2024
///     budget     = 200000
///     output_dir = "results/desk"
///
///     [algorithm.GA1_r5]
///     base = "GA1"
///     r    = 5

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "engine.hpp"
#include "error.hpp"
#include "hrx.hpp"
#include "tsplib.hpp"

namespace cxga {

struct AlgorithmConfig {
    std::string name;
    GaConfig ga;
    std::optional<HrxConfig> hrx; // set: CXGA-style run

    RunReport run(const Instance& inst) const { return hrx ? run_cxga(inst, ga, *hrx) : run_ga(inst, ga); }
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"GA1", "GA2", "GA3", "CXGA"};
    return names;
}

/// GA1 = MSCX_Radius(r=2), GA2 = RX(pr=10), GA3 = MSCX, CXGA = MSCX + HRX
/// (90% first part, prx 40, pr 30, r 5, ng 1, every ~15% of generations).
/// All use ps = 100, pc = 0.9, pm = 1/n, elitism 1, 1,000,000 evaluations.
inline AlgorithmConfig preset(std::string_view name) {
    AlgorithmConfig a;
    a.name = std::string(name);
    if (name == "GA1") {
        a.ga.crossover = MscxRadius{2};
    } else if (name == "GA2") {
        a.ga.crossover = Rx{10.0};
    } else if (name == "GA3") {
        a.ga.crossover = Mscx{};
    } else if (name == "CXGA") {
        a.ga.crossover = Mscx{};
        a.hrx = HrxConfig{};
    } else {
        throw ConfigError("unknown algorithm preset '" + std::string(name) + "' (available: GA1, GA2, GA3, CXGA)");
    }
    return a;
}

inline void validate(const AlgorithmConfig& a) {
    validate_config(a.ga);
    if (a.hrx) validate_config(*a.hrx);
}

/// Seed of run k of `algorithm` on `instance`: base_seed XOR a hash of the triple.
inline std::uint64_t run_seed(std::uint64_t base_seed, std::string_view algorithm, std::string_view instance,
                              std::uint64_t k) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    auto mix = [&](std::string_view s) {
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    mix(algorithm);
    mix(instance);
    return base_seed ^ splitmix64(h ^ splitmix64(k));
}

struct ExperimentSpec {
    std::vector<std::string> instances;
    std::vector<AlgorithmConfig> algorithms;
    std::size_t repeats = 10;
    std::uint64_t base_seed = 0;
    std::uint64_t budget = 1'000'000;
    std::string output_dir = "results";
    std::size_t threads = 0; // 0: hardware concurrency
    Rounding rounding = Rounding::nint;
};

// ---------------------------------------------------------------------------
// Config file parsing

namespace detail {

using ConfigValue = std::variant<double, bool, std::string, std::vector<std::string>, std::vector<double>>;

[[noreturn]] inline void config_fail(std::size_t line_no, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
}

inline std::string strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
    }
    return std::string(line);
}

inline ConfigValue parse_scalar_or_array(std::string_view text, std::size_t line_no) {
    text = trim(text);
    if (text.empty()) config_fail(line_no, "missing value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') config_fail(line_no, "unterminated string");
        return std::string(text.substr(1, text.size() - 2));
    }
    if (text == "true") return true;
    if (text == "false") return false;
    if (text.front() == '[') {
        if (text.back() != ']') config_fail(line_no, "unterminated array");
        std::vector<std::string> strings;
        std::vector<double> numbers;
        std::string_view body = trim(text.substr(1, text.size() - 2));
        while (!body.empty()) {
            std::size_t end = 0;
            if (body.front() == '"') {
                end = body.find('"', 1);
                if (end == std::string_view::npos) config_fail(line_no, "unterminated string in array");
                strings.emplace_back(body.substr(1, end - 1));
                ++end;
            } else {
                end = std::min(body.find(','), body.size());
                const auto v = to_double(trim(body.substr(0, end)));
                if (!v) config_fail(line_no, "bad array element");
                numbers.push_back(*v);
            }
            body = trim(body.substr(end));
            if (!body.empty()) {
                if (body.front() != ',') config_fail(line_no, "expected ',' in array");
                body = trim(body.substr(1));
            }
        }
        if (!strings.empty() && !numbers.empty()) config_fail(line_no, "mixed array element types");
        if (!numbers.empty()) return numbers;
        return strings;
    }
    if (const auto v = to_double(text)) return *v;
    config_fail(line_no, "cannot parse value '" + std::string(text) + "'");
}

struct ConfigEntry {
    ConfigValue value;
    std::size_t line = 0;
};

class ConfigReader {
  public:
    ConfigReader(std::map<std::string, ConfigEntry> entries, std::string where)
        : entries_(std::move(entries)), where_(std::move(where)) {}

    bool has(const std::string& key) const { return entries_.contains(key); }

    double number(const std::string& key, double fallback) {
        auto* e = take(key);
        if (!e) return fallback;
        if (const auto* v = std::get_if<double>(&e->value)) return *v;
        config_fail(e->line, key + " must be a number");
    }

    std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
        auto* e = take(key);
        if (!e) return fallback;
        const auto* v = std::get_if<double>(&e->value);
        if (!v || *v < 0 || *v != std::floor(*v) || *v > 1.8e19) {
            config_fail(e->line, key + " must be a non-negative integer");
        }
        return static_cast<std::uint64_t>(*v);
    }

    std::string text(const std::string& key, const std::string& fallback) {
        auto* e = take(key);
        if (!e) return fallback;
        if (const auto* v = std::get_if<std::string>(&e->value)) return *v;
        config_fail(e->line, key + " must be a string");
    }

    bool flag(const std::string& key, bool fallback) {
        auto* e = take(key);
        if (!e) return fallback;
        if (const auto* v = std::get_if<bool>(&e->value)) return *v;
        config_fail(e->line, key + " must be true or false");
    }

    std::optional<std::vector<std::string>> strings(const std::string& key) {
        auto* e = take(key);
        if (!e) return std::nullopt;
        if (const auto* v = std::get_if<std::vector<std::string>>(&e->value)) return *v;
        config_fail(e->line, key + " must be an array of strings");
    }

    void ignore_with_warning(const std::string& key, const std::string& why) {
        if (take(key)) warn(where_ + ": '" + key + "' " + why);
    }

    void reject_leftovers() const {
        for (const auto& [key, e] : entries_) {
            if (!used_.contains(key)) config_fail(e.line, "unknown key '" + key + "' in " + where_);
        }
    }

  private:
    ConfigEntry* take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        used_[key] = true;
        return &it->second;
    }

    std::map<std::string, ConfigEntry> entries_;
    std::map<std::string, bool> used_;
    std::string where_;
};

inline AlgorithmConfig custom_algorithm(const std::string& name, ConfigReader& r) {
    AlgorithmConfig a = preset(r.text("base", "GA3"));
    a.name = name;
    GaConfig& ga = a.ga;
    ga.population_size = r.integer("ps", ga.population_size);
    ga.crossover_rate = r.number("pc", ga.crossover_rate);
    if (r.has("pm")) ga.mutation_rate = r.number("pm", 0.0);
    ga.elitism = r.integer("elitism", ga.elitism);

    if (r.has("crossover")) {
        const std::string kind = r.text("crossover", "");
        if (kind == "mscx") {
            ga.crossover = Mscx{};
        } else if (kind == "mscx_radius") {
            ga.crossover = MscxRadius{2};
        } else if (kind == "rx") {
            ga.crossover = Rx{10.0};
        } else {
            throw ConfigError(name + ": unknown crossover '" + kind + "' (mscx, mscx_radius, rx)");
        }
    }
    if (r.has("r")) {
        auto* radius = std::get_if<MscxRadius>(&ga.crossover);
        if (!radius) throw ConfigError(name + ": 'r' needs crossover = \"mscx_radius\"");
        radius->r = static_cast<int>(r.integer("r", 2));
    }
    if (r.has("pr")) {
        auto* rx_kind = std::get_if<Rx>(&ga.crossover);
        if (!rx_kind) throw ConfigError(name + ": 'pr' needs crossover = \"rx\"");
        rx_kind->pr = r.number("pr", 10.0);
    }

    if (r.flag("hrx", a.hrx.has_value()) && !a.hrx) a.hrx = HrxConfig{};
    if (a.hrx) {
        HrxConfig& h = *a.hrx;
        h.first_part_pct = r.number("first_part_pct", h.first_part_pct);
        h.prx = r.number("prx", h.prx);
        h.pr = r.number("hrx_pr", h.pr);
        h.r = static_cast<int>(r.integer("hrx_r", static_cast<std::uint64_t>(h.r)));
        h.ng = static_cast<int>(r.integer("ng", static_cast<std::uint64_t>(h.ng)));
        h.pc_hrx = r.number("pc_hrx", h.pc_hrx);
        const std::string schedule = r.text("hrx_schedule", "even");
        if (schedule == "even") {
            h.schedule = HrxSchedule::even;
        } else if (schedule == "bernoulli") {
            h.schedule = HrxSchedule::bernoulli;
        } else {
            throw ConfigError(name + ": hrx_schedule must be \"even\" or \"bernoulli\"");
        }
    }
    r.ignore_with_warning("pn", "has no defined meaning and is ignored");
    r.reject_leftovers();
    return a;
}

} // namespace detail

/// Parse an experiment config. Relative instance paths resolve against `base_dir`.
inline ExperimentSpec parse_experiment(std::istream& in, const std::filesystem::path& base_dir = {}) {
    std::map<std::string, detail::ConfigEntry> top;
    std::vector<std::pair<std::string, std::map<std::string, detail::ConfigEntry>>> sections;
    auto* current = &top;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string cleaned = detail::strip_comment(raw);
        const std::string_view line = detail::trim(cleaned);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') detail::config_fail(line_no, "malformed section header");
            const std::string_view header = detail::trim(line.substr(1, line.size() - 2));
            constexpr std::string_view prefix = "algorithm.";
            if (!header.starts_with(prefix) || header.size() == prefix.size()) {
                detail::config_fail(line_no, "sections must be [algorithm.NAME]");
            }
            sections.emplace_back(std::string(header.substr(prefix.size())), std::map<std::string, detail::ConfigEntry>{});
            current = &sections.back().second;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) detail::config_fail(line_no, "expected key = value");
        const std::string key(detail::trim(line.substr(0, eq)));
        if (key.empty()) detail::config_fail(line_no, "empty key");
        if (current->contains(key)) detail::config_fail(line_no, "duplicate key '" + key + "'");
        std::string value(detail::trim(line.substr(eq + 1)));
        const std::size_t key_line = line_no;
        // arrays may continue over several lines until the closing bracket
        while (value.starts_with('[') && !value.ends_with(']')) {
            if (!std::getline(in, raw)) detail::config_fail(key_line, "unterminated array");
            ++line_no;
            const std::string more = detail::strip_comment(raw);
            value += ' ';
            value += detail::trim(more);
        }
        (*current)[key] = {detail::parse_scalar_or_array(value, key_line), key_line};
    }

    ExperimentSpec spec;
    detail::ConfigReader r(std::move(top), "experiment");
    for (const auto& path : r.strings("instances").value_or(std::vector<std::string>{})) {
        const std::filesystem::path p(path);
        spec.instances.push_back((p.is_absolute() || base_dir.empty() ? p : base_dir / p).string());
    }
    if (spec.instances.empty()) throw ConfigError("experiment lists no instances");
    spec.repeats = r.integer("repeats", spec.repeats);
    if (spec.repeats < 1) throw ConfigError("repeats must be >= 1");
    spec.base_seed = r.integer("base_seed", spec.base_seed);
    spec.budget = r.integer("budget", spec.budget);
    spec.output_dir = r.text("output_dir", spec.output_dir);
    spec.threads = r.integer("threads", spec.threads);
    const std::string rounding = r.text("rounding", "nint");
    if (rounding == "nint") {
        spec.rounding = Rounding::nint;
    } else if (rounding == "exact") {
        spec.rounding = Rounding::exact;
    } else {
        throw ConfigError("rounding must be \"nint\" or \"exact\"");
    }
    const auto listed = r.strings("algorithms");
    r.ignore_with_warning("pn", "has no defined meaning and is ignored");
    r.reject_leftovers();

    std::map<std::string, AlgorithmConfig> custom;
    for (auto& [name, entries] : sections) {
        if (custom.contains(name)) throw ConfigError("duplicate section [algorithm." + name + "]");
        detail::ConfigReader sr(std::move(entries), "[algorithm." + name + "]");
        custom.emplace(name, detail::custom_algorithm(name, sr));
    }

    std::vector<std::string> names = listed.value_or(preset_names());
    if (!listed) {
        for (const auto& [name, cfg] : custom) names.push_back(name);
    } else {
        for (const auto& [name, cfg] : custom) {
            if (std::find(names.begin(), names.end(), name) == names.end()) {
                warn("[algorithm." + name + "] is defined but not listed in algorithms; skipped");
            }
        }
    }
    if (names.empty()) throw ConfigError("experiment lists no algorithms");
    for (const auto& name : names) {
        auto it = custom.find(name);
        spec.algorithms.push_back(it != custom.end() ? it->second : preset(name));
    }
    for (auto& a : spec.algorithms) {
        a.ga.budget = spec.budget;
        validate(a);
    }
    return spec;
}

inline ExperimentSpec load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open experiment config: " + path);
    return parse_experiment(in, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Reports

struct RunRecord {
    std::string instance;
    std::string algorithm;
    std::uint64_t seed = 0;
    double best_cost = 0.0;
    std::uint64_t evaluations = 0;
    double wall_seconds = 0.0;
    std::uint64_t budget = 0;
    std::size_t cities = 0;
};

struct AggregateRow {
    std::string instance;
    std::string algorithm;
    std::size_t cities = 0;
    double min_cost = 0.0;
    double mean_cost = 0.0;
    double std_cost = 0.0; // sample standard deviation of per-run best costs
    double mean_runtime_seconds = 0.0;
    std::vector<double> best_costs;
    std::vector<std::uint64_t> seeds;
};

struct AggregateReport {
    std::vector<AggregateRow> rows;

    const AggregateRow* find(std::string_view instance, std::string_view algorithm) const {
        for (const auto& row : rows) {
            if (row.instance == instance && row.algorithm == algorithm) return &row;
        }
        return nullptr;
    }
};

/// Group runs by (instance, algorithm) in first-appearance order.
inline AggregateReport aggregate(const std::vector<RunRecord>& runs) {
    AggregateReport report;
    std::vector<std::vector<const RunRecord*>> groups;
    for (const auto& run : runs) {
        std::size_t g = 0;
        while (g < report.rows.size() &&
               (report.rows[g].instance != run.instance || report.rows[g].algorithm != run.algorithm)) {
            ++g;
        }
        if (g == report.rows.size()) {
            report.rows.push_back({run.instance, run.algorithm, run.cities, 0, 0, 0, 0, {}, {}});
            groups.emplace_back();
        }
        groups[g].push_back(&run);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        AggregateRow& row = report.rows[g];
        double sum = 0.0;
        double time = 0.0;
        row.min_cost = groups[g].front()->best_cost;
        for (const RunRecord* run : groups[g]) {
            row.best_costs.push_back(run->best_cost);
            row.seeds.push_back(run->seed);
            row.min_cost = std::min(row.min_cost, run->best_cost);
            sum += run->best_cost;
            time += run->wall_seconds;
        }
        const auto k = static_cast<double>(groups[g].size());
        row.mean_cost = sum / k;
        row.mean_runtime_seconds = time / k;
        double sq = 0.0;
        for (const double c : row.best_costs) sq += (c - row.mean_cost) * (c - row.mean_cost);
        row.std_cost = groups[g].size() > 1 ? std::sqrt(sq / (k - 1.0)) : 0.0;
    }
    return report;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

inline constexpr std::string_view kRunsCsvHeader = "instance,algorithm,seed,best_cost,evaluations,wall_seconds,budget";

inline void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
    out << kRunsCsvHeader << '\n';
    for (const auto& r : runs) {
        out << r.instance << ',' << r.algorithm << ',' << r.seed << ',' << detail::fmt_double(r.best_cost) << ','
            << r.evaluations << ',' << detail::fmt_double(r.wall_seconds) << ',' << r.budget << '\n';
    }
}

inline std::vector<RunRecord> read_runs_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRunsCsvHeader) throw IoError("runs csv: unexpected header");
    std::vector<RunRecord> runs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        if (f.size() != 7) throw IoError("runs csv line " + std::to_string(line_no) + ": expected 7 fields");
        RunRecord r;
        r.instance = f[0];
        r.algorithm = f[1];
        r.seed = std::stoull(f[2]);
        r.best_cost = std::strtod(f[3].c_str(), nullptr);
        r.evaluations = std::stoull(f[4]);
        r.wall_seconds = std::strtod(f[5].c_str(), nullptr);
        r.budget = std::stoull(f[6]);
        runs.push_back(std::move(r));
    }
    return runs;
}

inline nlohmann::json to_json(const AggregateReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json runs = nlohmann::json::array();
        for (std::size_t i = 0; i < row.best_costs.size(); ++i) {
            runs.push_back({{"seed", row.seeds[i]}, {"best_cost", row.best_costs[i]}});
        }
        rows.push_back({{"instance", row.instance},
                        {"algorithm", row.algorithm},
                        {"cities", row.cities},
                        {"min", row.min_cost},
                        {"mean", row.mean_cost},
                        {"std", row.std_cost},
                        {"mean_runtime_seconds", row.mean_runtime_seconds},
                        {"runs", runs}});
    }
    return {{"rows", rows}};
}

inline AggregateReport aggregate_from_json(const nlohmann::json& j) {
    AggregateReport report;
    for (const auto& r : j.at("rows")) {
        AggregateRow row;
        row.instance = r.at("instance").get<std::string>();
        row.algorithm = r.at("algorithm").get<std::string>();
        row.cities = r.at("cities").get<std::size_t>();
        row.min_cost = r.at("min").get<double>();
        row.mean_cost = r.at("mean").get<double>();
        row.std_cost = r.at("std").get<double>();
        row.mean_runtime_seconds = r.at("mean_runtime_seconds").get<double>();
        for (const auto& run : r.at("runs")) {
            row.seeds.push_back(run.at("seed").get<std::uint64_t>());
            row.best_costs.push_back(run.at("best_cost").get<double>());
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline AggregateReport load_aggregate(const std::string& path) {
    std::filesystem::path p(path);
    if (std::filesystem::is_directory(p)) p /= "aggregate.json";
    std::ifstream in(p);
    if (!in) throw IoError("cannot open report: " + p.string());
    try {
        return aggregate_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed report " + p.string() + ": " + e.what());
    }
}

inline void write_aggregate_csv(std::ostream& out, const AggregateReport& report) {
    out << "instance,algorithm,cities,min,mean,std,mean_runtime_seconds,runs\n";
    for (const auto& row : report.rows) {
        out << row.instance << ',' << row.algorithm << ',' << row.cities << ',' << detail::fmt_double(row.min_cost)
            << ',' << detail::fmt_double(row.mean_cost) << ',' << detail::fmt_double(row.std_cost) << ','
            << detail::fmt_double(row.mean_runtime_seconds) << ',' << row.best_costs.size() << '\n';
    }
}

/// Table with the columns Instance, NCity, Algorithm, Min, Mean, Std, R_Time(s).
inline std::string format_summary(const AggregateReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "Instance" << std::right << std::setw(7) << "NCity" << "  " << std::left
        << std::setw(14) << "Algorithm" << std::right << std::setw(14) << "Min" << std::setw(14) << "Mean"
        << std::setw(12) << "Std" << std::setw(12) << "R_Time(s)" << '\n';
    out << std::fixed;
    for (const auto& row : report.rows) {
        out << std::left << std::setw(12) << row.instance << std::right << std::setw(7) << row.cities << "  "
            << std::left << std::setw(14) << row.algorithm << std::right << std::setprecision(2) << std::setw(14)
            << row.min_cost << std::setw(14) << row.mean_cost << std::setw(12) << row.std_cost
            << std::setprecision(3) << std::setw(12) << row.mean_runtime_seconds << '\n';
    }
    return out.str();
}

struct ComparisonRow {
    std::string instance;
    double mean_delta_pct = 0.0; // positive: challenger better
    double min_delta_pct = 0.0;
};

inline double delta_pct(double baseline, double challenger) { return 100.0 * (baseline - challenger) / baseline; }

inline std::vector<ComparisonRow> compare(const AggregateReport& report, std::string_view baseline,
                                          std::string_view challenger) {
    std::vector<std::string> instances;
    std::vector<std::string> algorithms;
    for (const auto& row : report.rows) {
        if (std::find(instances.begin(), instances.end(), row.instance) == instances.end()) {
            instances.push_back(row.instance);
        }
        if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) == algorithms.end()) {
            algorithms.push_back(row.algorithm);
        }
    }
    std::vector<ComparisonRow> out;
    for (const auto& inst : instances) {
        const AggregateRow* base = report.find(inst, baseline);
        const AggregateRow* chal = report.find(inst, challenger);
        if (!base || !chal) {
            std::string available;
            for (const auto& a : algorithms) available += (available.empty() ? "" : ", ") + a;
            throw ConfigError("instance " + inst + " lacks algorithm '" +
                              std::string(!base ? baseline : challenger) + "' (available: " + available + ")");
        }
        out.push_back({inst, delta_pct(base->mean_cost, chal->mean_cost), delta_pct(base->min_cost, chal->min_cost)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Execution

struct PlannedRun {
    std::size_t instance_index = 0;
    std::size_t algorithm_index = 0;
    std::uint64_t repeat = 0;
};

/// instance-major, then algorithm, then repeat.
inline std::vector<PlannedRun> plan_runs(const ExperimentSpec& spec) {
    std::vector<PlannedRun> plan;
    for (std::size_t i = 0; i < spec.instances.size(); ++i) {
        for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
            for (std::uint64_t k = 0; k < spec.repeats; ++k) plan.push_back({i, a, k});
        }
    }
    return plan;
}

struct ExperimentResult {
    std::vector<RunRecord> runs;
    AggregateReport report;
    std::filesystem::path output_dir;
};

/// Everything that can fail is checked before the first run starts: instance
/// files (IoError / ParseError), configs (ConfigError), output dir (IoError).
inline ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream* progress = nullptr) {
    std::vector<Instance> instances;
    for (const auto& path : spec.instances) instances.push_back(load_instance(path, spec.rounding));
    if (spec.repeats < 1) throw ConfigError("repeats must be >= 1");
    if (spec.algorithms.empty()) throw ConfigError("experiment lists no algorithms");
    std::vector<AlgorithmConfig> algorithms = spec.algorithms;
    for (auto& a : algorithms) {
        a.ga.budget = spec.budget;
        validate(a);
    }

    std::filesystem::path out_dir(spec.output_dir);
    if (const char* env = std::getenv("CXGA_OUTPUT_DIR"); env && *env) out_dir = env;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const auto runs_path = out_dir / "runs.csv";
    {
        std::ofstream probe(runs_path);
        if (ec || !probe) throw IoError("output directory is not writable: " + out_dir.string());
    }

    const auto plan = plan_runs(spec);
    std::vector<RunRecord> records(plan.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&] {
        for (std::size_t t = next++; t < plan.size(); t = next++) {
            const auto& task = plan[t];
            const Instance& inst = instances[task.instance_index];
            AlgorithmConfig algo = algorithms[task.algorithm_index];
            algo.ga.seed = run_seed(spec.base_seed, algo.name, inst.name(), task.repeat);
            const RunReport rep = algo.run(inst);
            records[t] = {inst.name(),        algo.name,        rep.seed,    rep.best_cost, rep.evaluations_used,
                          rep.wall_seconds, algo.ga.budget, inst.size()};
            const std::size_t finished = ++done;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                *progress << "[" << finished << "/" << plan.size() << "] " << inst.name() << ' ' << algo.name
                          << " seed=" << rep.seed << " best=" << rep.best_cost << '\n';
            }
        }
    };
    std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(plan.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }

    ExperimentResult result{std::move(records), {}, out_dir};
    result.report = aggregate(result.runs);

    std::ofstream runs_out(runs_path);
    write_runs_csv(runs_out, result.runs);
    std::ofstream agg_csv(out_dir / "aggregate.csv");
    write_aggregate_csv(agg_csv, result.report);
    std::ofstream agg_json(out_dir / "aggregate.json");
    agg_json << to_json(result.report).dump(2) << '\n';
    if (!runs_out || !agg_csv || !agg_json) throw IoError("failed writing reports to " + out_dir.string());
    return result;
}

} // namespace cxga
