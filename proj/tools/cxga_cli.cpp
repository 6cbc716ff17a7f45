// cxga: command-line front end for the crossover GA toolkit.
//
//   cxga solve <instance> --algo GA3 --seed 1 --budget 200000
//   cxga bench <experiment.cfg>
//   cxga compare <aggregate.json|dir> --baseline GA3 --challenger CXGA
//   cxga exact <instance>
//
// Exit codes: 0 success, 2 configuration / input error, 3 I/O error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cxga/cxga.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

cxga::Rounding parse_rounding(const std::string& s) {
    if (s == "nint") return cxga::Rounding::nint;
    if (s == "exact") return cxga::Rounding::exact;
    throw cxga::ConfigError("rounding must be nint or exact");
}

void print_tour(const cxga::Tour& tour) {
    for (std::size_t i = 0; i < tour.size(); ++i) std::cout << (i ? " " : "") << tour[i];
    std::cout << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genetic algorithms with MSCX, MSCX_Radius, RX and HRX crossover for the Euclidean TSP"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Run one algorithm once on one instance");
    std::string solve_instance;
    std::string algo = "GA3";
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> budget;
    std::string rounding = "nint";
    std::optional<int> radius;
    std::optional<double> keep_pct;
    std::optional<std::size_t> pop_size;
    std::string log_csv;
    solve->add_option("instance", solve_instance, "TSPLIB EUC_2D file")->required();
    solve->add_option("--algo", algo, "GA1, GA2, GA3 or CXGA")->capture_default_str();
    solve->add_option("--seed", seed, "Random seed")->capture_default_str();
    solve->add_option("--budget", budget, "Cost evaluations (default 1000000)");
    solve->add_option("--rounding", rounding, "nint or exact distances")->capture_default_str();
    solve->add_option("--r", radius, "MSCX_Radius radius (GA1) or HRX radius (CXGA)");
    solve->add_option("--pr", keep_pct, "RX keep percentage (GA2) or HRX pr (CXGA)");
    solve->add_option("--ps", pop_size, "Population size");
    solve->add_option("--log-csv", log_csv, "Write per-generation best/mean to this CSV");

    // bench
    auto* bench = app.add_subcommand("bench", "Run an experiment described by a config file");
    std::string bench_config;
    std::optional<std::size_t> threads;
    bool quiet = false;
    bench->add_option("config", bench_config, "Experiment config file")->required();
    bench->add_option("--threads", threads, "Worker threads (default: config, else all cores)");
    bench->add_flag("--quiet", quiet, "Do not print per-run progress");

    // compare
    auto* cmp = app.add_subcommand("compare", "Percentage improvement of one algorithm over another");
    std::string report_path;
    std::string baseline = "GA3";
    std::string challenger = "CXGA";
    cmp->add_option("report", report_path, "aggregate.json or the directory containing it")->required();
    cmp->add_option("--baseline", baseline)->capture_default_str();
    cmp->add_option("--challenger", challenger)->capture_default_str();

    // exact
    auto* exact = app.add_subcommand("exact", "Brute-force optimum (at most 11 cities)");
    std::string exact_instance;
    std::string exact_rounding = "nint";
    exact->add_option("instance", exact_instance, "TSPLIB EUC_2D file")->required();
    exact->add_option("--rounding", exact_rounding, "nint or exact distances")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*solve) {
            const auto inst = cxga::load_instance(solve_instance, parse_rounding(rounding));
            auto cfg = cxga::preset(algo);
            cfg.ga.seed = seed;
            if (budget) cfg.ga.budget = *budget;
            if (pop_size) cfg.ga.population_size = *pop_size;
            cfg.ga.record_generations = !log_csv.empty();
            if (radius) {
                if (cfg.hrx) cfg.hrx->r = *radius;
                else if (auto* k = std::get_if<cxga::MscxRadius>(&cfg.ga.crossover)) k->r = *radius;
                else throw cxga::ConfigError("--r applies to GA1 or CXGA");
            }
            if (keep_pct) {
                if (cfg.hrx) cfg.hrx->pr = *keep_pct;
                else if (auto* k = std::get_if<cxga::Rx>(&cfg.ga.crossover)) k->pr = *keep_pct;
                else throw cxga::ConfigError("--pr applies to GA2 or CXGA");
            }
            cxga::validate(cfg);
            const auto rep = cfg.run(inst);
            std::cout << "instance     " << inst.name() << " (" << inst.size() << " cities)\n"
                      << "algorithm    " << cfg.name << '\n'
                      << "seed         " << rep.seed << '\n'
                      << "best_cost    " << std::setprecision(17) << rep.best_cost << '\n'
                      << "evaluations  " << rep.evaluations_used << '\n'
                      << "generations  " << rep.generations << '\n'
                      << "wall_seconds " << std::setprecision(4) << rep.wall_seconds << '\n'
                      << "tour         ";
            print_tour(rep.best_tour);
            if (!log_csv.empty()) {
                std::ofstream out(log_csv);
                if (!out) throw cxga::IoError("cannot write " + log_csv);
                out << "generation,best,mean,population,evaluations,hrx\n" << std::setprecision(17);
                for (const auto& g : rep.generation_log) {
                    out << g.generation << ',' << g.best << ',' << g.mean << ',' << g.population_size << ','
                        << g.evaluations << ',' << (g.hrx ? 1 : 0) << '\n';
                }
            }
        } else if (*bench) {
            auto spec = cxga::load_experiment(bench_config);
            if (threads) spec.threads = *threads;
            const auto result = cxga::run_experiment(spec, quiet ? nullptr : &std::cerr);
            std::cout << cxga::format_summary(result.report) << "reports written to " << result.output_dir.string()
                      << '\n';
        } else if (*cmp) {
            const auto report = cxga::load_aggregate(report_path);
            std::cout << "instance,mean_delta_pct,min_delta_pct  (" << challenger << " vs " << baseline
                      << "; positive = " << challenger << " better)\n"
                      << std::fixed << std::setprecision(3);
            for (const auto& row : cxga::compare(report, baseline, challenger)) {
                std::cout << row.instance << ',' << row.mean_delta_pct << ',' << row.min_delta_pct << '\n';
            }
        } else if (*exact) {
            const auto inst = cxga::load_instance(exact_instance, parse_rounding(exact_rounding));
            const auto sol = cxga::brute_force_optimum(inst);
            std::cout << "cost " << std::setprecision(17) << sol.cost << "\ntour ";
            print_tour(sol.tour);
        }
    } catch (const cxga::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        // ConfigError, ParseError, InvalidTour, InvalidInstance, bad arguments
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
