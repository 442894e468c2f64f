#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "sseatk/common.hpp"
#include "sseatk/harness.hpp"
#include "sseatk/parallel.hpp"

namespace {

using namespace sseatk;

// ---------------------------------------------------------------------------
// Bundled experiment campaigns behind `reproduce <id>`. Shared setting: the
// Enron set splits 12K attacker-side / 18K server-side (fraction_real 0.6).
// ---------------------------------------------------------------------------

ExperimentConfig enron_defaults() {
    ExperimentConfig cfg;
    cfg.dataset = DatasetKind::enron;
    cfg.fraction_real = 0.6;
    cfg.attack = AttackKind::refined;
    cfg.attack_config.ref_speed = 10;
    return cfg;
}

std::vector<ExperimentConfig> bundle_fig1() {
    std::vector<ExperimentConfig> out;
    for (std::size_t m : {500, 1000, 2000, 4000}) {
        for (std::size_t k : {15, 30, 60}) {
            ExperimentConfig cfg = enron_defaults();
            cfg.attack = AttackKind::base;
            cfg.m_sim = cfg.m_real = m;
            cfg.query_count = static_cast<std::size_t>(0.15 * static_cast<double>(m));
            cfg.known_count = k;
            cfg.label = msg("base_m", m, "_k", k);
            out.push_back(cfg);
        }
    }
    return out;
}

std::vector<ExperimentConfig> bundle_fig3() {
    std::vector<ExperimentConfig> out;
    for (AttackKind kind : {AttackKind::base, AttackKind::refined}) {
        for (std::size_t k : {5, 10, 20, 40}) {
            ExperimentConfig cfg = enron_defaults();
            cfg.attack = kind;
            cfg.m_sim = 1200;
            cfg.m_real = 1000;
            cfg.query_count = 150;
            cfg.known_count = k;
            cfg.label = msg(to_string(kind), "_k", k);
            out.push_back(cfg);
        }
    }
    return out;
}

std::vector<ExperimentConfig> bundle_fig4() {
    std::vector<ExperimentConfig> out;
    for (DatasetKind ds : {DatasetKind::enron, DatasetKind::apache, DatasetKind::apache_reduced}) {
        for (std::size_t l : {75, 150, 300, 600}) {
            ExperimentConfig cfg = enron_defaults();
            cfg.dataset = ds;
            cfg.m_sim = cfg.m_real = 1000;
            cfg.query_count = l;
            cfg.known_count = 15;
            cfg.label = msg(to_string(ds), "_q", l);
            out.push_back(cfg);
        }
    }
    return out;
}

std::vector<ExperimentConfig> bundle_fig5() {
    std::vector<ExperimentConfig> out;
    for (std::size_t sim : {1500, 3000, 6000, 0}) {  // 0 = whole 12K attacker side
        ExperimentConfig cfg = enron_defaults();
        cfg.m_sim = cfg.m_real = 1000;
        cfg.query_count = 150;
        cfg.known_count = 15;
        cfg.sim_size = sim;
        cfg.label = msg("sim", sim == 0 ? 12044 : sim);
        out.push_back(cfg);
    }
    return out;
}

std::vector<ExperimentConfig> bundle_fig6() {
    std::vector<ExperimentConfig> out;
    for (CountermeasureKind cm :
         {CountermeasureKind::none, CountermeasureKind::padding, CountermeasureKind::obfuscation}) {
        for (std::size_t m : {500, 1000, 2000, 4000}) {
            ExperimentConfig cfg = enron_defaults();
            cfg.m_sim = cfg.m_real = m;
            cfg.query_count = static_cast<std::size_t>(0.15 * static_cast<double>(m));
            cfg.known_count = 15;
            cfg.countermeasure.kind = cm;
            cfg.countermeasure.n_pad = 500;
            cfg.countermeasure.p = 0.88703;
            cfg.countermeasure.q = 0.04416;
            cfg.label = msg(to_string(cm), "_m", m);
            out.push_back(cfg);
        }
    }
    return out;
}

std::vector<ExperimentConfig> bundle_fig7() {
    std::vector<ExperimentConfig> out;
    for (DistributionKind dist :
         {DistributionKind::uniform, DistributionKind::zipfian, DistributionKind::inv_zipfian}) {
        for (std::size_t m : {500, 1000, 2000, 4000}) {
            ExperimentConfig cfg = enron_defaults();
            cfg.m_sim = cfg.m_real = m;
            cfg.query_count = static_cast<std::size_t>(0.15 * static_cast<double>(m));
            cfg.known_count = 15;
            cfg.distribution.kind = dist;
            cfg.label = msg(to_string(dist), "_m", m);
            out.push_back(cfg);
        }
    }
    return out;
}

std::vector<ExperimentConfig> bundle_fig8() {
    std::vector<ExperimentConfig> out;
    for (AttackKind kind : {AttackKind::base, AttackKind::refined}) {
        for (std::size_t max_size : {0, 10}) {
            ExperimentConfig cfg = enron_defaults();
            cfg.attack = kind;
            cfg.m_sim = 1200;
            cfg.m_real = 1000;
            cfg.query_count = 150;
            cfg.known_count = 10;
            cfg.attack_config.max_cluster_size = max_size;
            cfg.label = msg(to_string(kind), max_size ? "_clustered" : "_plain");
            out.push_back(cfg);
        }
    }
    return out;
}

std::vector<ExperimentConfig> bundle_table2() {
    std::vector<ExperimentConfig> out;
    for (std::size_t order : {2, 3}) {
        ExperimentConfig cfg = enron_defaults();
        cfg.m_sim = cfg.m_real = 300;
        cfg.query_count = 75;
        cfg.known_count = 10;
        cfg.attack_config.order = order;
        cfg.label = msg("order", order);
        out.push_back(cfg);
    }
    return out;
}

std::vector<ExperimentConfig> bundle_table3() {
    std::vector<ExperimentConfig> out;
    for (KnownPolicy policy : {KnownPolicy::uniform, KnownPolicy::top_quartile}) {
        ExperimentConfig cfg = enron_defaults();
        cfg.m_sim = cfg.m_real = 1000;
        cfg.query_count = 150;
        cfg.known_count = 5;
        cfg.known_policy = policy;
        cfg.label = to_string(policy);
        out.push_back(cfg);
    }
    return out;
}

std::vector<ExperimentConfig> bundle_table4() {
    std::vector<ExperimentConfig> out;
    for (std::size_t m : {1000, 2000}) {
        for (std::size_t max_size : {1, 5, 10, 20, 50}) {
            if (m == 2000 && (max_size == 1 || max_size == 50)) continue;
            ExperimentConfig cfg = enron_defaults();
            cfg.m_sim = cfg.m_real = m;
            cfg.query_count = 150;
            cfg.known_count = 15;
            cfg.attack_config.max_cluster_size = max_size;
            cfg.label = msg("m", m, "_maxsize", max_size);
            out.push_back(cfg);
        }
    }
    return out;
}

const std::map<std::string, std::vector<ExperimentConfig> (*)()>& bundles() {
    static const std::map<std::string, std::vector<ExperimentConfig> (*)()> map = {
        {"fig1", bundle_fig1},     {"fig3", bundle_fig3},   {"fig4", bundle_fig4},
        {"fig5", bundle_fig5},     {"fig6", bundle_fig6},   {"fig7", bundle_fig7},
        {"fig8", bundle_fig8},     {"table2", bundle_table2}, {"table3", bundle_table3},
        {"table4", bundle_table4},
    };
    return map;
}

void run_campaign(std::vector<ExperimentConfig> configs, const std::filesystem::path& out_dir,
                  const std::filesystem::path& corpus_dir, std::size_t reps,
                  std::uint64_t seed) {
    CorpusStore store(corpus_dir);
    std::vector<std::pair<ExperimentConfig, ExperimentOutcome>> results;
    results.reserve(configs.size());
    for (auto& cfg : configs) {
        cfg.repetitions = reps;
        cfg.base_seed = seed;
        cfg.corpus_dir = corpus_dir;
        std::cerr << "[" << results.size() + 1 << "/" << configs.size() << "] " << cfg.label
                  << " ..." << std::flush;
        results.emplace_back(cfg, run_experiment(cfg, &store));
        std::cerr << " mu=" << results.back().second.stats.mu << "\n";
    }
    emit_campaign_report(results, out_dir);
    std::cout << "report written to " << out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"score-attack simulations against access-pattern-leaking SSE"};
    app.require_subcommand(1);

    // --- ingest -------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "preprocess a raw email archive into a corpus cache");
    std::string enron_dir, out_file, corpus_name;
    std::vector<std::string> apache_files;
    bool synthetic = false;
    SyntheticConfig syn;
    ingest->add_option("--enron", enron_dir, "Enron maildir root directory");
    ingest->add_option("--apache", apache_files, "Apache mbox archive files");
    ingest->add_flag("--synthetic", synthetic, "generate a synthetic corpus");
    ingest->add_option("--docs", syn.n_docs, "synthetic: number of documents");
    ingest->add_option("--vocab", syn.vocab_size, "synthetic: distinct keywords");
    ingest->add_option("--zipf", syn.zipf_exponent, "synthetic: Zipf exponent");
    ingest->add_option("--topics", syn.topics, "synthetic: topic count");
    ingest->add_option("--seed", syn.seed, "synthetic: generator seed");
    ingest->add_option("--name", corpus_name, "corpus name stored in the cache header");
    ingest->add_option("--out", out_file, "output corpus cache file")->required();
    ingest->callback([&] {
        Corpus corpus;
        ParseStats stats;
        if (!enron_dir.empty()) {
            auto docs = parse_enron(enron_dir, &stats);
            corpus = preprocess(docs, english_stopwords(),
                                corpus_name.empty() ? "enron" : corpus_name);
        } else if (!apache_files.empty()) {
            std::vector<std::filesystem::path> paths(apache_files.begin(), apache_files.end());
            auto docs = parse_apache(paths, &stats);
            corpus = preprocess(docs, english_stopwords(),
                                corpus_name.empty() ? "apache" : corpus_name);
        } else if (synthetic) {
            corpus = synthetic_corpus(syn);
            if (!corpus_name.empty()) corpus.name = corpus_name;
            stats.parsed = corpus.size();
        } else {
            throw CLI::ValidationError("ingest", "one of --enron, --apache, --synthetic is required");
        }
        if (auto parent = std::filesystem::path(out_file).parent_path(); !parent.empty())
            std::filesystem::create_directories(parent);
        save_corpus(corpus, out_file);
        std::cout << "ingested " << corpus.size() << " documents ("
                  << corpus.keywords.size() << " distinct keywords, " << stats.skipped
                  << " files skipped) -> " << out_file << "\n";
    });

    // --- attack (single run + prediction dump) -------------------------------
    auto* attack = app.add_subcommand("attack", "run one seeded attack and dump its predictions");
    std::string attack_config_file, attack_out = "attack-out";
    std::uint64_t attack_seed = 0;
    unsigned attack_workers = 0;
    bool have_attack_seed = false;
    attack->add_option("config", attack_config_file, "experiment config file")->required();
    attack->add_option("--out", attack_out, "output directory");
    attack->add_option("--seed", attack_seed, "seed override")->each([&](const std::string&) {
        have_attack_seed = true;
    });
    attack->add_option("--workers", attack_workers, "worker thread count");
    attack->callback([&] {
        if (attack_workers) set_default_workers(attack_workers);
        ExperimentConfig cfg = parse_config_file(attack_config_file);
        cfg.repetitions = 1;
        if (have_attack_seed) cfg.base_seed = attack_seed;
        cfg.prediction_dump_dir = attack_out;
        auto outcome = run_experiment(cfg);
        emit_report(cfg, outcome, attack_out);
        const auto& run = outcome.runs.front();
        std::cout << "accuracy=" << run.accuracy << " epsilon=" << run.epsilon
                  << " vocab_overlap=" << run.vocab_overlap << "\npredictions: "
                  << run.prediction_dump << "\n";
    });

    // --- experiment -----------------------------------------------------------
    auto* experiment = app.add_subcommand("experiment", "run a config file and emit a report");
    std::string exp_config_file, exp_out = "experiment-out";
    std::uint64_t exp_seed = 0;
    unsigned exp_workers = 0;
    std::size_t exp_reps = 0;
    bool have_exp_seed = false;
    experiment->add_option("config", exp_config_file, "experiment config file")->required();
    experiment->add_option("--out", exp_out, "output directory");
    experiment->add_option("--seed", exp_seed, "base seed override")->each([&](const std::string&) {
        have_exp_seed = true;
    });
    experiment->add_option("--workers", exp_workers, "worker thread count");
    experiment->add_option("--reps", exp_reps, "repetition override");
    experiment->callback([&] {
        if (exp_workers) set_default_workers(exp_workers);
        ExperimentConfig cfg = parse_config_file(exp_config_file);
        if (have_exp_seed) cfg.base_seed = exp_seed;
        if (exp_reps) cfg.repetitions = exp_reps;
        auto outcome = run_experiment(cfg);
        emit_report(cfg, outcome, exp_out);
        std::cout << "mu=" << outcome.stats.mu << " sigma=" << outcome.stats.sigma
                  << "\nreport written to " << exp_out << "\n";
    });

    // --- reproduce --------------------------------------------------------------
    auto* reproduce = app.add_subcommand("reproduce", "re-run a bundled figure/table campaign");
    std::string figure_id, rep_out, rep_corpus_dir = "corpora";
    std::uint64_t rep_seed = 1;
    unsigned rep_workers = 0;
    std::size_t rep_reps = 0;
    bool full = false;
    reproduce->add_option("id", figure_id, "fig1 fig3 fig4 fig5 fig6 fig7 fig8 table2 table3 table4")
        ->required();
    reproduce->add_option("--out", rep_out, "output directory (default reproduce-<id>)");
    reproduce->add_option("--corpus-dir", rep_corpus_dir, "directory with ingested corpus caches");
    reproduce->add_option("--seed", rep_seed, "base seed");
    reproduce->add_option("--workers", rep_workers, "worker thread count");
    reproduce->add_option("--reps", rep_reps, "repetitions per experiment (default 20)");
    reproduce->add_flag("--full", full, "run 50 repetitions instead of the default 20");
    reproduce->callback([&] {
        if (rep_workers) set_default_workers(rep_workers);
        auto it = bundles().find(figure_id);
        if (it == bundles().end()) {
            std::string known;
            for (const auto& [id, fn] : bundles()) known += id + " ";
            throw CLI::ValidationError("reproduce",
                                       "unknown figure id '" + figure_id + "'; available: " + known);
        }
        std::size_t reps = rep_reps ? rep_reps : (full ? 50 : 20);
        std::filesystem::path out_dir = rep_out.empty() ? "reproduce-" + figure_id : rep_out;
        run_campaign(it->second(), out_dir, rep_corpus_dir, reps, rep_seed);
        if (figure_id == "table2") {
            std::ofstream note(out_dir / "notes.txt");
            note << "The order-comparison campaign runs with known_count=10. Reported\n"
                    "settings for this experiment are ambiguous between 10 and 15 known\n"
                    "queries; rerun with a config overriding known_count to compare.\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
