#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stabilitylab/problem.hpp"
#include "stabilitylab/stats.hpp"

// Configuration, orchestration, seeding and machine-readable output for
// the four experiment kinds.

namespace stab::exp {

enum class Kind { Calibrate, Stability, Tightness, OracleCheck };

const char* kind_name(Kind k);

struct ExperimentSpec {
    Kind kind = Kind::Calibrate;
    core::Family family = core::Family::Sk;
    std::vector<std::size_t> n_grid = {8};
    std::size_t d = 2;
    double q = 1.0;
    std::size_t m_rows = 0;
    std::vector<std::size_t> lattice_shape;
    wgraph::GraphKind graph_kind = wgraph::GraphKind::Tour;
    core::SchemeVariant variant = core::SchemeVariant::SingleBlock;
    std::vector<double> epsilon_grid = {0.25};
    std::vector<double> theta_c_grid = {1.0};
    core::LawSpec input_law;
    bool law_given = false; // config supplied a law; otherwise family default
    std::size_t replications = 10;
    std::uint64_t master_seed = 1;
    std::size_t block_subsample = 64;
    std::size_t jobs = 1;
    // BRW controls
    std::vector<double> progeny_pmf = {0.0, 0.0, 1.0}; // binary splitting
    bool brw_condition_survival = true;
    bool brw_resample_tree = false;
    std::string out_dir = ".";
    std::string format = "csv"; // csv | json | both
};

// Flat key = value file with optional [kind] sections; unknown keys are
// errors. The CLI subcommand picks the section.
ExperimentSpec load_config(const std::string& path, Kind kind);
ExperimentSpec parse_config_text(const std::string& text, Kind kind);

// Validates caps and ranges; throws ValidationError naming the offending
// key and its cap.
void validate(const ExperimentSpec& spec);

struct Row {
    std::string family;
    std::size_t n = 0;
    std::size_t d = 0;
    double q = 0.0;
    std::string variant;
    double epsilon = 0.0;
    double theta = 0.0;
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    std::string statistic_name;
    double value = 0.0;
    double runtime_ms = 0.0;
};

struct CellSummary {
    std::string key; // family/n/epsilon/statistic
    stats::Summary summary;
};

struct ExperimentRecord {
    ExperimentSpec spec;
    std::vector<Row> rows;
    std::vector<CellSummary> summaries;
};

// Runs the kind's pipeline; replication r uses substream
// hash64(master_seed, r). Aggregation is order-insensitive, so the output
// is byte-identical for every --jobs value.
ExperimentRecord run_experiment(const ExperimentSpec& spec);

// results.csv / results.json under spec.out_dir; 17 significant digits,
// single trailing newline.
std::vector<std::string> emit_results(const ExperimentRecord& record);

std::string format_double(double v); // %.17g

} // namespace stab::exp
