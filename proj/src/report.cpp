#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sseatk/common.hpp"
#include "sseatk/harness.hpp"

namespace sseatk {

namespace {

std::string fixed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string dataset_field(const ExperimentConfig& cfg) {
    if (cfg.dataset == DatasetKind::cross)
        return "cross:" + cfg.sim_dataset + ":" + cfg.real_dataset;
    return to_string(cfg.dataset);
}

void stats_header(std::ostream& out) {
    out << "label,repetitions,mu,sigma,min,max,q25,q75,q80,q85,q95,q99\n";
}

void stats_row(const ExperimentConfig& cfg, const ExperimentOutcome& outcome,
               std::ostream& out) {
    const auto& s = outcome.stats;
    out << cfg.label << ',' << outcome.runs.size() << ',' << fixed6(s.mu) << ','
        << fixed6(s.sigma) << ',' << fixed6(s.min) << ',' << fixed6(s.max) << ','
        << fixed6(s.q25) << ',' << fixed6(s.q75) << ',' << fixed6(s.q80) << ','
        << fixed6(s.q85) << ',' << fixed6(s.q95) << ',' << fixed6(s.q99) << '\n';
}

struct Bar {
    std::string label;
    double mu;
    double sigma;
};

void write_bar_chart(const std::vector<Bar>& bars, const std::string& title,
                     const std::filesystem::path& file) {
    const double bar_w = 46.0, gap = 26.0;
    const double left = 70.0, top = 46.0, plot_h = 320.0, bottom = 96.0;
    const double width = left + 30.0 + bars.size() * (bar_w + gap);
    const double height = top + plot_h + bottom;

    std::ofstream out(file, std::ios::binary);
    if (!out) fail("cannot open chart for writing: ", file.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";

    auto y_of = [&](double v) { return top + plot_h * (1.0 - v); };
    for (int grid = 0; grid <= 5; ++grid) {
        double v = grid / 5.0;
        out << "<line x1=\"" << left << "\" y1=\"" << y_of(v) << "\" x2=\"" << width - 20
            << "\" y2=\"" << y_of(v) << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << y_of(v) + 4
            << "\" text-anchor=\"end\">" << fixed6(v).substr(0, 3) << "</text>\n";
    }

    for (std::size_t i = 0; i < bars.size(); ++i) {
        double x = left + 10.0 + i * (bar_w + gap);
        double mu = std::clamp(bars[i].mu, 0.0, 1.0);
        out << "<rect x=\"" << x << "\" y=\"" << y_of(mu) << "\" width=\"" << bar_w
            << "\" height=\"" << plot_h * mu << "\" fill=\"#4878a8\"/>\n";
        double lo = std::clamp(bars[i].mu - bars[i].sigma, 0.0, 1.0);
        double hi = std::clamp(bars[i].mu + bars[i].sigma, 0.0, 1.0);
        double cx = x + bar_w / 2;
        out << "<line x1=\"" << cx << "\" y1=\"" << y_of(lo) << "\" x2=\"" << cx
            << "\" y2=\"" << y_of(hi) << "\" stroke=\"#222222\" stroke-width=\"2\"/>\n";
        out << "<line x1=\"" << cx - 7 << "\" y1=\"" << y_of(lo) << "\" x2=\"" << cx + 7
            << "\" y2=\"" << y_of(lo) << "\" stroke=\"#222222\" stroke-width=\"2\"/>\n";
        out << "<line x1=\"" << cx - 7 << "\" y1=\"" << y_of(hi) << "\" x2=\"" << cx + 7
            << "\" y2=\"" << y_of(hi) << "\" stroke=\"#222222\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << cx << "\" y=\"" << top + plot_h + 16
            << "\" text-anchor=\"end\" transform=\"rotate(-35 " << cx << ' '
            << top + plot_h + 16 << ")\">" << bars[i].label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) fail("error while writing chart: ", file.string());
}

}  // namespace

void write_runs_csv(const ExperimentConfig& cfg, std::span<const RunResult> runs,
                    std::ostream& out) {
    out << "run_id,seed,dataset,m_sim,m_real,query_count,known_count,known_policy,"
           "distribution,attack,order,ref_speed,max_cluster_size,countermeasure,n_pad,p,q,"
           "accuracy,epsilon,vocab_overlap,runtime_ms_total,runtime_ms_attack\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        out << i << ',' << r.seed << ',' << dataset_field(cfg) << ',' << cfg.m_sim << ','
            << cfg.m_real << ',' << cfg.query_count << ',' << cfg.known_count << ','
            << to_string(cfg.known_policy) << ',' << to_string(cfg.distribution.kind) << ','
            << to_string(cfg.attack) << ',' << cfg.attack_config.order << ','
            << cfg.attack_config.ref_speed << ',';
        if (cfg.attack_config.max_cluster_size > 0) out << cfg.attack_config.max_cluster_size;
        out << ',' << to_string(cfg.countermeasure.kind) << ',';
        if (cfg.countermeasure.kind == CountermeasureKind::padding)
            out << cfg.countermeasure.n_pad;
        out << ',';
        if (cfg.countermeasure.kind == CountermeasureKind::obfuscation)
            out << num(cfg.countermeasure.p);
        out << ',';
        if (cfg.countermeasure.kind == CountermeasureKind::obfuscation)
            out << num(cfg.countermeasure.q);
        out << ',' << fixed6(r.accuracy) << ',' << fixed6(r.epsilon) << ','
            << fixed6(r.vocab_overlap) << ',' << std::llround(r.runtime_ms_total) << ','
            << std::llround(r.runtime_ms_attack) << '\n';
    }
}

void emit_report(const ExperimentConfig& cfg, const ExperimentOutcome& outcome,
                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "runs.csv", std::ios::binary);
        if (!out) fail("cannot write ", (out_dir / "runs.csv").string());
        write_runs_csv(cfg, outcome.runs, out);
    }
    {
        std::ofstream out(out_dir / "stats.csv", std::ios::binary);
        if (!out) fail("cannot write ", (out_dir / "stats.csv").string());
        stats_header(out);
        stats_row(cfg, outcome, out);
    }
    {
        std::ofstream out(out_dir / "config.resolved.txt", std::ios::binary);
        if (!out) fail("cannot write ", (out_dir / "config.resolved.txt").string());
        write_resolved_config(cfg, out);
    }
    write_bar_chart({{cfg.label, outcome.stats.mu, outcome.stats.sigma}},
                    "mean accuracy over " + std::to_string(outcome.runs.size()) + " runs",
                    out_dir / "chart.svg");
}

void emit_campaign_report(std::span<const std::pair<ExperimentConfig, ExperimentOutcome>> results,
                          const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::ofstream stats(out_dir / "stats.csv", std::ios::binary);
    if (!stats) fail("cannot write ", (out_dir / "stats.csv").string());
    stats_header(stats);

    std::vector<Bar> bars;
    for (const auto& [cfg, outcome] : results) {
        emit_report(cfg, outcome, out_dir / cfg.label);
        stats_row(cfg, outcome, stats);
        bars.push_back({cfg.label, outcome.stats.mu, outcome.stats.sigma});
    }
    write_bar_chart(bars, "mean accuracy with mu +/- sigma error bars",
                    out_dir / "chart.svg");
}

// --- config files --------------------------------------------------------------

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out{};
    in >> out;
    if (in.fail() || !in.eof())
        throw std::invalid_argument(msg("invalid numeric value for ", key, ": '", value, "'"));
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t");
        auto e = line.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        line = line.substr(b, e - b + 1);
        auto eq = line.find('=');
        require(eq != std::string::npos, "config line ", line_no, " is not key=value: '", line,
                "'");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto b2 = s.find_first_not_of(" \t");
            if (b2 == std::string::npos) return std::string();
            auto e2 = s.find_last_not_of(" \t");
            return s.substr(b2, e2 - b2 + 1);
        };
        key = trim(key);
        value = trim(value);

        if (key == "label") cfg.label = value;
        else if (key == "dataset") {
            if (value == "enron") cfg.dataset = DatasetKind::enron;
            else if (value == "apache") cfg.dataset = DatasetKind::apache;
            else if (value == "apache_reduced") cfg.dataset = DatasetKind::apache_reduced;
            else if (value == "synthetic") cfg.dataset = DatasetKind::synthetic;
            else if (value == "cross") cfg.dataset = DatasetKind::cross;
            else throw std::invalid_argument(msg("unknown dataset '", value, "'"));
        }
        else if (key == "sim_dataset") cfg.sim_dataset = value;
        else if (key == "real_dataset") cfg.real_dataset = value;
        else if (key == "fraction_real") cfg.fraction_real = parse_number<double>(key, value);
        else if (key == "sim_size") cfg.sim_size = parse_number<std::size_t>(key, value);
        else if (key == "m_sim") cfg.m_sim = parse_number<std::size_t>(key, value);
        else if (key == "m_real") cfg.m_real = parse_number<std::size_t>(key, value);
        else if (key == "query_count") cfg.query_count = parse_number<std::size_t>(key, value);
        else if (key == "known_count") cfg.known_count = parse_number<std::size_t>(key, value);
        else if (key == "known_policy") {
            if (value == "uniform") cfg.known_policy = KnownPolicy::uniform;
            else if (value == "top_quartile") cfg.known_policy = KnownPolicy::top_quartile;
            else throw std::invalid_argument(msg("unknown known_policy '", value, "'"));
        }
        else if (key == "distribution") {
            if (value == "uniform") cfg.distribution.kind = DistributionKind::uniform;
            else if (value == "zipfian") cfg.distribution.kind = DistributionKind::zipfian;
            else if (value == "inv_zipfian") cfg.distribution.kind = DistributionKind::inv_zipfian;
            else throw std::invalid_argument(msg("unknown distribution '", value, "'"));
        }
        else if (key == "attack") {
            if (value == "base") cfg.attack = AttackKind::base;
            else if (value == "refined") cfg.attack = AttackKind::refined;
            else throw std::invalid_argument(msg("unknown attack '", value, "'"));
        }
        else if (key == "norm") {
            if (value == "l2") cfg.attack_config.norm = Norm::l2;
            else if (value == "l1") cfg.attack_config.norm = Norm::l1;
            else if (value == "linf") cfg.attack_config.norm = Norm::linf;
            else throw std::invalid_argument(msg("unknown norm '", value, "'"));
        }
        else if (key == "ref_speed") cfg.attack_config.ref_speed = parse_number<std::size_t>(key, value);
        else if (key == "order") cfg.attack_config.order = parse_number<std::size_t>(key, value);
        else if (key == "attacker_model") {
            if (value == "honest_server")
                cfg.attack_config.attacker_model = AttackerModel::honest_server;
            else if (value == "traffic_observer")
                cfg.attack_config.attacker_model = AttackerModel::traffic_observer;
            else throw std::invalid_argument(msg("unknown attacker_model '", value, "'"));
        }
        else if (key == "max_cluster_size")
            cfg.attack_config.max_cluster_size = parse_number<std::size_t>(key, value);
        else if (key == "countermeasure") {
            if (value == "none") cfg.countermeasure.kind = CountermeasureKind::none;
            else if (value == "padding") cfg.countermeasure.kind = CountermeasureKind::padding;
            else if (value == "obfuscation")
                cfg.countermeasure.kind = CountermeasureKind::obfuscation;
            else throw std::invalid_argument(msg("unknown countermeasure '", value, "'"));
        }
        else if (key == "n_pad") cfg.countermeasure.n_pad = parse_number<std::size_t>(key, value);
        else if (key == "p") cfg.countermeasure.p = parse_number<double>(key, value);
        else if (key == "q") cfg.countermeasure.q = parse_number<double>(key, value);
        else if (key == "repetitions") cfg.repetitions = parse_number<std::size_t>(key, value);
        else if (key == "base_seed") cfg.base_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "corpus_dir") cfg.corpus_dir = value;
        else if (key == "prediction_dump_dir") cfg.prediction_dump_dir = value;
        else if (key == "memory_budget_mb")
            cfg.memory_budget_bytes = parse_number<std::size_t>(key, value) << 20;
        else if (key == "synthetic_docs") cfg.synthetic.n_docs = parse_number<std::size_t>(key, value);
        else if (key == "synthetic_vocab")
            cfg.synthetic.vocab_size = parse_number<std::size_t>(key, value);
        else if (key == "synthetic_zipf")
            cfg.synthetic.zipf_exponent = parse_number<double>(key, value);
        else if (key == "synthetic_topics")
            cfg.synthetic.topics = parse_number<std::size_t>(key, value);
        else if (key == "synthetic_keywords_per_doc")
            cfg.synthetic.keywords_per_doc = parse_number<double>(key, value);
        else throw std::invalid_argument(msg("unknown config key '", key, "' on line ", line_no));
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail("cannot open experiment config: ", file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void write_resolved_config(const ExperimentConfig& cfg, std::ostream& out) {
    out << "label=" << cfg.label << '\n';
    out << "dataset=" << to_string(cfg.dataset) << '\n';
    if (cfg.dataset == DatasetKind::cross) {
        out << "sim_dataset=" << cfg.sim_dataset << '\n';
        out << "real_dataset=" << cfg.real_dataset << '\n';
    } else {
        out << "fraction_real=" << num(cfg.fraction_real) << '\n';
    }
    if (cfg.sim_size > 0) out << "sim_size=" << cfg.sim_size << '\n';
    out << "m_sim=" << cfg.m_sim << '\n';
    out << "m_real=" << cfg.m_real << '\n';
    out << "query_count=" << cfg.query_count << '\n';
    out << "known_count=" << cfg.known_count << '\n';
    out << "known_policy=" << to_string(cfg.known_policy) << '\n';
    out << "distribution=" << to_string(cfg.distribution.kind) << '\n';
    out << "attack=" << to_string(cfg.attack) << '\n';
    out << "norm=" << to_string(cfg.attack_config.norm) << '\n';
    out << "ref_speed=" << cfg.attack_config.ref_speed << '\n';
    out << "order=" << cfg.attack_config.order << '\n';
    out << "attacker_model="
        << (cfg.attack_config.attacker_model == AttackerModel::honest_server
                ? "honest_server"
                : "traffic_observer")
        << '\n';
    out << "max_cluster_size=" << cfg.attack_config.max_cluster_size << '\n';
    out << "countermeasure=" << to_string(cfg.countermeasure.kind) << '\n';
    if (cfg.countermeasure.kind == CountermeasureKind::padding)
        out << "n_pad=" << cfg.countermeasure.n_pad << '\n';
    if (cfg.countermeasure.kind == CountermeasureKind::obfuscation) {
        out << "p=" << num(cfg.countermeasure.p) << '\n';
        out << "q=" << num(cfg.countermeasure.q) << '\n';
    }
    out << "repetitions=" << cfg.repetitions << '\n';
    out << "base_seed=" << cfg.base_seed << '\n';
    out << "corpus_dir=" << cfg.corpus_dir.string() << '\n';
    if (cfg.dataset == DatasetKind::synthetic) {
        out << "synthetic_docs=" << cfg.synthetic.n_docs << '\n';
        out << "synthetic_vocab=" << cfg.synthetic.vocab_size << '\n';
        out << "synthetic_zipf=" << num(cfg.synthetic.zipf_exponent) << '\n';
        out << "synthetic_topics=" << cfg.synthetic.topics << '\n';
        out << "synthetic_keywords_per_doc=" << num(cfg.synthetic.keywords_per_doc) << '\n';
    }
    out << "memory_budget_mb=" << (cfg.memory_budget_bytes >> 20) << '\n';
}

}  // namespace sseatk
