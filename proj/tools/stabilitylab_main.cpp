#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stabilitylab/errors.hpp"
#include "stabilitylab/experiment.hpp"

namespace {

int run_kind(stab::exp::Kind kind, const std::string& config_path,
             long long seed_override, bool seed_given, std::size_t jobs,
             bool jobs_given, const std::string& out_dir,
             const std::string& format) {
    using namespace stab;
    exp::ExperimentSpec spec = exp::load_config(config_path, kind);
    // precedence: --seed, then STABILITYLAB_SEED, then the config value
    if (const char* env = std::getenv("STABILITYLAB_SEED")) {
        try {
            spec.master_seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError("STABILITYLAB_SEED is not an integer");
        }
    }
    if (seed_given) spec.master_seed = static_cast<std::uint64_t>(seed_override);
    if (jobs_given) spec.jobs = jobs;
    if (!out_dir.empty()) spec.out_dir = out_dir;
    if (!format.empty()) spec.format = format;
    exp::validate(spec);

    const exp::ExperimentRecord record = exp::run_experiment(spec);
    const auto files = exp::emit_results(record);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    std::size_t failed = 0;
    for (const auto& r : record.rows)
        if (r.statistic_name == "error") ++failed;
    if (failed > 0) {
        std::cerr << failed << " replication(s) failed; see failure markers\n";
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stabilitylab: resampling-stability experiments for random "
                 "optimization problems"};
    app.require_subcommand(1);

    std::string config_path;
    long long seed_override = 0;
    std::size_t jobs = 1;
    std::string out_dir;
    std::string format;

    const std::vector<std::pair<std::string, stab::exp::Kind>> kinds = {
        {"calibrate", stab::exp::Kind::Calibrate},
        {"stability", stab::exp::Kind::Stability},
        {"tightness", stab::exp::Kind::Tightness},
        {"oracle-check", stab::exp::Kind::OracleCheck},
    };
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> seed_opts, jobs_opts;
    for (const auto& [name, kind] : kinds) {
        (void)kind;
        CLI::App* sub = app.add_subcommand(name, name + " experiment");
        sub->add_option("--config", config_path, "experiment config file")
            ->required();
        seed_opts.push_back(
            sub->add_option("--seed", seed_override, "master seed override"));
        jobs_opts.push_back(
            sub->add_option("--jobs", jobs, "concurrent replications"));
        sub->add_option("--out", out_dir, "output directory override");
        sub->add_option("--format", format, "csv|json|both");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i]->parsed()) {
                return run_kind(kinds[i].second, config_path, seed_override,
                                seed_opts[i]->count() > 0, jobs,
                                jobs_opts[i]->count() > 0, out_dir, format);
            }
        }
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const stab::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const stab::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const stab::UnsupportedLaw& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}
