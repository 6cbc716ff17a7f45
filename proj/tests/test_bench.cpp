#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "test_helpers.hpp"

using namespace cxga;
namespace fs = std::filesystem;

namespace {

class TempDir {
  public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("cxga_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

  private:
    fs::path path_;
    static inline int counter_ = 0;
};

ExperimentSpec parse(const std::string& text, const fs::path& base = {}) {
    std::istringstream in(text);
    return parse_experiment(in, base);
}

ExperimentSpec tiny_spec(const fs::path& out) {
    ExperimentSpec spec;
    spec.instances = {testing_support::test_data_path("square4.tsp"), testing_support::data_path("eil51.tsp")};
    spec.algorithms = {preset("GA3"), preset("CXGA")};
    for (auto& a : spec.algorithms) a.ga.population_size = 20;
    spec.repeats = 3;
    spec.budget = 2000;
    spec.base_seed = 7;
    spec.threads = 2;
    spec.output_dir = out.string();
    return spec;
}

struct EnvGuard {
    EnvGuard() { ::unsetenv("CXGA_OUTPUT_DIR"); }
    ~EnvGuard() { ::unsetenv("CXGA_OUTPUT_DIR"); }
};

} // namespace

TEST(Presets, Parameters) {
    const auto ga1 = preset("GA1");
    EXPECT_EQ(std::get<MscxRadius>(ga1.ga.crossover).r, 2);
    EXPECT_EQ(std::get<Rx>(preset("GA2").ga.crossover).pr, 10.0);
    EXPECT_TRUE(std::holds_alternative<Mscx>(preset("GA3").ga.crossover));
    const auto cx = preset("CXGA");
    ASSERT_TRUE(cx.hrx.has_value());
    EXPECT_EQ(cx.hrx->first_part_pct, 90.0);
    EXPECT_EQ(cx.hrx->prx, 40.0);
    EXPECT_EQ(cx.hrx->pr, 30.0);
    EXPECT_EQ(cx.hrx->r, 5);
    EXPECT_EQ(cx.hrx->ng, 1);
    EXPECT_EQ(cx.hrx->pc_hrx, 15.0);
    for (const auto& name : preset_names()) {
        const auto a = preset(name);
        EXPECT_EQ(a.ga.population_size, 100u);
        EXPECT_EQ(a.ga.crossover_rate, 0.9);
        EXPECT_FALSE(a.ga.mutation_rate.has_value());
        EXPECT_EQ(a.ga.budget, 1'000'000u);
        EXPECT_EQ(a.ga.elitism, 1u);
    }
}

TEST(Presets, UnknownNameListsAvailable) {
    try {
        preset("GA9");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("GA1, GA2, GA3, CXGA"), std::string::npos);
    }
}

TEST(RunSeed, DistinctAndStable) {
    EXPECT_EQ(run_seed(0, "GA3", "eil51", 0), run_seed(0, "GA3", "eil51", 0));
    EXPECT_NE(run_seed(0, "GA3", "eil51", 0), run_seed(0, "GA3", "eil51", 1));
    EXPECT_NE(run_seed(0, "GA3", "eil51", 0), run_seed(0, "CXGA", "eil51", 0));
    EXPECT_NE(run_seed(0, "GA3", "eil51", 0), run_seed(1, "GA3", "eil51", 0));
}

TEST(Config, FullExperimentPlansAllRuns) {
    std::ifstream in(std::string(CXGA_CONFIG_DIR) + "/full.cfg");
    ASSERT_TRUE(in);
    const auto spec = parse_experiment(in, CXGA_CONFIG_DIR);
    EXPECT_EQ(spec.instances.size(), 12u);
    EXPECT_EQ(spec.algorithms.size(), 4u);
    EXPECT_EQ(spec.repeats, 10u);
    EXPECT_EQ(spec.budget, 1'000'000u);
    EXPECT_EQ(plan_runs(spec).size(), 480u);
}

TEST(Config, DeskConfigParses) {
    const auto spec = load_experiment(std::string(CXGA_CONFIG_DIR) + "/desk.cfg");
    ASSERT_EQ(spec.algorithms.size(), 5u);
    EXPECT_EQ(std::get<MscxRadius>(spec.algorithms[4].ga.crossover).r, 5);
    EXPECT_EQ(spec.algorithms[4].ga.budget, 200'000u);
    EXPECT_TRUE(fs::exists(spec.instances[0]));
}

TEST(Config, CustomSectionsAndDefaults) {
    const auto spec = parse(R"(
instances = ["a.tsp"]   # relative to base dir
budget = 5000
[algorithm.wide]
base = "CXGA"
ps = 40
pc_hrx = 50
hrx_schedule = "bernoulli"
[algorithm.keep30]
crossover = "rx"
pr = 30
)",
                            "/tmp/x");
    EXPECT_EQ(spec.instances, std::vector<std::string>{"/tmp/x/a.tsp"});
    ASSERT_EQ(spec.algorithms.size(), 6u); // four presets, then custom sections by name
    EXPECT_EQ(spec.algorithms[4].name, "keep30");
    EXPECT_EQ(std::get<Rx>(spec.algorithms[4].ga.crossover).pr, 30.0);
    EXPECT_EQ(spec.algorithms[5].name, "wide");
    EXPECT_EQ(spec.algorithms[5].ga.population_size, 40u);
    EXPECT_EQ(spec.algorithms[5].hrx->pc_hrx, 50.0);
    EXPECT_EQ(spec.algorithms[5].hrx->schedule, HrxSchedule::bernoulli);
    for (const auto& a : spec.algorithms) EXPECT_EQ(a.ga.budget, 5000u);
}

TEST(Config, MultiLineArray) {
    const auto spec = parse("instances = [\"a.tsp\",\n  \"b.tsp\", # second\n  \"c.tsp\"]\nalgorithms = [\"GA3\"]\n");
    EXPECT_EQ(spec.instances.size(), 3u);
    EXPECT_THROW(parse("instances = [\"a.tsp\",\n"), ConfigError);
}

TEST(Config, Errors) {
    EXPECT_THROW(parse("algorithms = [\"GA3\"]\n"), ConfigError);                       // no instances
    EXPECT_THROW(parse("instances = [\"a\"]\nbogus = 1\n"), ConfigError);               // unknown key
    EXPECT_THROW(parse("instances = [\"a\"]\nalgorithms = [\"GA7\"]\n"), ConfigError);  // unknown preset
    EXPECT_THROW(parse("instances = [\"a\"]\nrepeats = 0\n"), ConfigError);
    EXPECT_THROW(parse("instances = [\"a\"]\nrounding = \"ceil\"\n"), ConfigError);
    EXPECT_THROW(parse("instances = [\"a\"]\n[algorithm.x]\nr = 3\n"), ConfigError);    // r needs mscx_radius
    EXPECT_THROW(parse("instances = [\"a\"]\n[algorithm.x]\nbase = \"CXGA\"\nng = 0\n"), ConfigError);
    EXPECT_THROW(parse("instances = [\"a\"]\n[other]\n"), ConfigError);
    EXPECT_THROW(parse("instances = [\"a\"]\ninstances = [\"b\"]\n"), ConfigError);
    EXPECT_THROW(parse("instances = [\"a\"\n"), ConfigError);
    EXPECT_THROW(load_experiment("/nonexistent/dir/exp.cfg"), IoError);
}

TEST(Config, PnIgnoredWithWarning) {
    std::vector<std::string> seen;
    const auto saved = warning_sink();
    warning_sink() = [&](std::string_view m) { seen.emplace_back(m); };
    const auto spec = parse("instances = [\"a\"]\npn = 5\nalgorithms = [\"GA3\"]\n");
    warning_sink() = saved;
    EXPECT_EQ(spec.algorithms.size(), 1u);
    ASSERT_EQ(seen.size(), 1u);
    EXPECT_NE(seen[0].find("pn"), std::string::npos);
}

TEST(Aggregate, Statistics) {
    std::vector<RunRecord> runs{{"i", "A", 1, 10.0, 100, 0.5, 100, 5},
                                {"i", "A", 2, 12.0, 100, 1.5, 100, 5},
                                {"i", "B", 3, 7.0, 100, 1.0, 100, 5}};
    const auto rep = aggregate(runs);
    ASSERT_EQ(rep.rows.size(), 2u);
    const auto* a = rep.find("i", "A");
    ASSERT_NE(a, nullptr);
    EXPECT_EQ(a->min_cost, 10.0);
    EXPECT_EQ(a->mean_cost, 11.0);
    EXPECT_DOUBLE_EQ(a->std_cost, std::sqrt(2.0));
    EXPECT_EQ(a->mean_runtime_seconds, 1.0);
    EXPECT_EQ(rep.find("i", "B")->std_cost, 0.0);
    EXPECT_EQ(rep.find("j", "A"), nullptr);
}

TEST(Compare, Arithmetic) {
    AggregateReport rep;
    rep.rows.push_back({"eil51", "GA3", 51, 430, 440, 0, 0, {}, {}});
    rep.rows.push_back({"eil51", "CXGA", 51, 428, 435.6, 0, 0, {}, {}});
    const auto rows = compare(rep, "GA3", "CXGA");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].mean_delta_pct, 1.0, 1e-12);
    EXPECT_NEAR(rows[0].min_delta_pct, 100.0 * 2 / 430, 1e-12);
    const auto same = compare(rep, "GA3", "GA3");
    EXPECT_EQ(same[0].mean_delta_pct, 0.0);
    EXPECT_EQ(same[0].min_delta_pct, 0.0);
    try {
        compare(rep, "GA3", "GA2");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("available: GA3, CXGA"), std::string::npos);
    }
}

TEST(Experiment, RunsAndWritesReports) {
    EnvGuard env;
    TempDir dir;
    const auto spec = tiny_spec(dir.path() / "out");
    const auto result = run_experiment(spec);
    ASSERT_EQ(result.runs.size(), 12u);
    EXPECT_EQ(result.runs[0].instance, "square4");
    EXPECT_EQ(result.runs[0].algorithm, "GA3");
    EXPECT_EQ(result.runs.back().algorithm, "CXGA");
    for (const auto& r : result.runs) {
        EXPECT_GE(r.evaluations, spec.budget);
        EXPECT_LE(r.evaluations, spec.budget + 20);
        EXPECT_EQ(r.budget, spec.budget);
    }
    // the square is solved by every run
    const auto* sq = result.report.find("square4", "CXGA");
    ASSERT_NE(sq, nullptr);
    EXPECT_EQ(sq->min_cost, 4.0);
    EXPECT_EQ(sq->mean_cost, 4.0);
    EXPECT_EQ(sq->std_cost, 0.0);
    for (const char* f : {"runs.csv", "aggregate.csv", "aggregate.json"}) EXPECT_TRUE(fs::exists(result.output_dir / f));
}

TEST(Experiment, RerunIsIdenticalAndCsvMatchesJson) {
    EnvGuard env;
    TempDir dir;
    auto spec = tiny_spec(dir.path() / "a");
    const auto first = run_experiment(spec);
    spec.output_dir = (dir.path() / "b").string();
    spec.threads = 1;
    const auto second = run_experiment(spec);
    ASSERT_EQ(first.runs.size(), second.runs.size());
    for (std::size_t i = 0; i < first.runs.size(); ++i) {
        EXPECT_EQ(first.runs[i].seed, second.runs[i].seed);
        EXPECT_EQ(first.runs[i].best_cost, second.runs[i].best_cost);
        EXPECT_EQ(first.runs[i].evaluations, second.runs[i].evaluations);
    }

    std::ifstream csv(dir.path() / "a" / "runs.csv");
    const auto from_csv = aggregate(read_runs_csv(csv));
    const auto from_json = load_aggregate((dir.path() / "a").string());
    ASSERT_EQ(from_csv.rows.size(), from_json.rows.size());
    for (std::size_t i = 0; i < from_csv.rows.size(); ++i) {
        const auto& c = from_csv.rows[i];
        const auto& j = from_json.rows[i];
        EXPECT_EQ(c.instance, j.instance);
        EXPECT_EQ(c.algorithm, j.algorithm);
        EXPECT_EQ(c.min_cost, j.min_cost);
        EXPECT_EQ(c.mean_cost, j.mean_cost);
        EXPECT_EQ(c.std_cost, j.std_cost);
        EXPECT_EQ(c.mean_runtime_seconds, j.mean_runtime_seconds);
        EXPECT_EQ(c.best_costs, j.best_costs);
        EXPECT_EQ(c.seeds, j.seeds);
    }
}

TEST(Experiment, SingleRowReexecutes) {
    EnvGuard env;
    TempDir dir;
    const auto spec = tiny_spec(dir.path());
    const auto result = run_experiment(spec);
    const auto& row = result.runs[7]; // eil51, GA3, third repeat
    ASSERT_EQ(row.instance, "eil51");
    auto algo = preset(row.algorithm);
    algo.ga.population_size = 20;
    algo.ga.budget = row.budget;
    algo.ga.seed = row.seed;
    const auto again = algo.run(load_instance(testing_support::data_path("eil51.tsp")));
    EXPECT_EQ(again.best_cost, row.best_cost);
    EXPECT_EQ(again.evaluations_used, row.evaluations);
}

TEST(Experiment, FailsBeforeAnyRun) {
    EnvGuard env;
    TempDir dir;
    auto spec = tiny_spec(dir.path() / "out");
    spec.instances.push_back((dir.path() / "missing.tsp").string());
    EXPECT_THROW(run_experiment(spec), IoError);
    EXPECT_FALSE(fs::exists(dir.path() / "out" / "runs.csv"));

    spec = tiny_spec(dir.path() / "out2");
    spec.algorithms[1].hrx->ng = 0;
    EXPECT_THROW(run_experiment(spec), ConfigError);
    EXPECT_FALSE(fs::exists(dir.path() / "out2"));

    std::ofstream(dir.path() / "blocker") << "x";
    spec = tiny_spec(dir.path() / "blocker" / "sub");
    EXPECT_THROW(run_experiment(spec), IoError);
}

TEST(Experiment, OutputDirFromEnvironment) {
    EnvGuard env;
    TempDir dir;
    auto spec = tiny_spec(dir.path() / "configured");
    spec.instances.resize(1);
    spec.repeats = 1;
    ::setenv("CXGA_OUTPUT_DIR", (dir.path() / "env").string().c_str(), 1);
    const auto result = run_experiment(spec);
    EXPECT_EQ(result.output_dir, dir.path() / "env");
    EXPECT_TRUE(fs::exists(dir.path() / "env" / "aggregate.json"));
    EXPECT_FALSE(fs::exists(dir.path() / "configured"));
}

TEST(Reports, SummaryHasColumns) {
    AggregateReport rep;
    rep.rows.push_back({"eil51", "GA3", 51, 430, 440, 3.5, 0.25, {}, {}});
    const auto text = format_summary(rep);
    for (const char* col : {"Instance", "NCity", "Algorithm", "Min", "Mean", "Std", "R_Time(s)", "eil51", "440.00"}) {
        EXPECT_NE(text.find(col), std::string::npos) << col;
    }
}

TEST(Reports, RunsCsvRoundTrip) {
    std::vector<RunRecord> runs{{"x", "GA3", 18446744073709551615ull, 0.1 + 0.2, 12345, 1.0 / 3, 99, 0}};
    std::stringstream ss;
    write_runs_csv(ss, runs);
    const auto back = read_runs_csv(ss);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].seed, runs[0].seed);
    EXPECT_EQ(back[0].best_cost, runs[0].best_cost);
    EXPECT_EQ(back[0].wall_seconds, runs[0].wall_seconds);
    std::stringstream bad("nope\n");
    EXPECT_THROW(read_runs_csv(bad), IoError);
}
