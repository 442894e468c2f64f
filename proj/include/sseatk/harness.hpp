#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sseatk/attack.hpp"
#include "sseatk/corpus.hpp"
#include "sseatk/countermeasures.hpp"
#include "sseatk/sse.hpp"

namespace sseatk {

enum class DatasetKind { enron, apache, apache_reduced, synthetic, cross };
enum class AttackKind { base, refined };

const char* to_string(DatasetKind kind);
const char* to_string(AttackKind kind);

struct ExperimentConfig {
    std::string label = "experiment";
    DatasetKind dataset = DatasetKind::synthetic;
    std::string sim_dataset;   // cross only: attacker-side dataset name
    std::string real_dataset;  // cross only: indexed dataset name
    double fraction_real = 0.6;
    std::size_t sim_size = 0;  // subsample D_sim to this size after splitting (0 = keep)
    std::size_t m_sim = 0;
    std::size_t m_real = 0;
    std::size_t query_count = 0;
    std::size_t known_count = 0;
    KnownPolicy known_policy = KnownPolicy::uniform;
    QueryDistribution distribution;
    AttackKind attack = AttackKind::refined;
    AttackConfig attack_config;
    CountermeasureConfig countermeasure;
    std::size_t repetitions = 20;
    std::uint64_t base_seed = 1;
    SyntheticConfig synthetic;
    std::filesystem::path corpus_dir = "corpora";
    std::filesystem::path prediction_dump_dir;  // empty: no per-run dumps
    std::size_t memory_budget_bytes = 6ull << 30;
};

struct RunResult {
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    double epsilon = 0.0;
    double vocab_overlap = 0.0;
    // Fraction of unknown queries whose underlying keyword lies in the
    // attacker vocabulary: the realized per-run form of the overlap bound.
    double eligible_share = 0.0;
    double runtime_ms_total = 0.0;
    double runtime_ms_attack = 0.0;
    std::string prediction_dump;              // path, empty when not dumped
    std::vector<std::uint32_t> cluster_sizes; // per unknown query, clustering mode
    double n_real_estimate = 0.0;             // traffic-observer runs
    double padding_overhead = 0.0;            // padding runs
};

struct AccuracyStats {
    double mu = 0.0, sigma = 0.0;
    double min = 0.0, max = 0.0;
    double q25 = 0.0, q75 = 0.0, q80 = 0.0, q85 = 0.0, q95 = 0.0, q99 = 0.0;
};

struct ExperimentOutcome {
    std::vector<RunResult> runs;
    AccuracyStats stats;
};

// Sample mean / standard deviation and nearest-rank quantiles.
AccuracyStats aggregate_stats(std::span<const double> values);

// Caches named preprocessed corpora loaded from <dir>/<name>.corpus; tests
// and the synthetic path can inject corpora directly.
class CorpusStore {
public:
    explicit CorpusStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const Corpus& get(const std::string& name);
    void put(const std::string& name, Corpus corpus);
    bool available(const std::string& name) const;

private:
    std::filesystem::path dir_;
    std::unordered_map<std::string, Corpus> cache_;
};

// Validates the configuration (throws before any run on inconsistencies) and
// executes `repetitions` independent runs with seeds base_seed+i.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, CorpusStore* store = nullptr);

void validate_config(const ExperimentConfig& cfg);

// --- reports -----------------------------------------------------------------

void write_runs_csv(const ExperimentConfig& cfg, std::span<const RunResult> runs,
                    std::ostream& out);

// runs.csv + stats.csv + chart.svg + config.resolved.txt under out_dir.
void emit_report(const ExperimentConfig& cfg, const ExperimentOutcome& outcome,
                 const std::filesystem::path& out_dir);

// Campaign: per-experiment subdirectories plus combined stats and one grouped
// bar chart.
void emit_campaign_report(std::span<const std::pair<ExperimentConfig, ExperimentOutcome>> results,
                          const std::filesystem::path& out_dir);

// --- config files --------------------------------------------------------------

// Flat key=value format, '#' comments; unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& file);
void write_resolved_config(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace sseatk
