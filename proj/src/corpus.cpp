#include "sseatk/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sseatk/common.hpp"
#include "sseatk/porter.hpp"
#include "sseatk/rng.hpp"
#include "stopwords_data.hpp"

namespace sseatk {

const std::unordered_set<std::string>& english_stopwords() {
    static const std::unordered_set<std::string> words = [] {
        std::unordered_set<std::string> out;
        std::istringstream in(detail::kStopwordsText);
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                line.pop_back();
            if (!line.empty()) out.insert(line);
        }
        return out;
    }();
    return words;
}

std::vector<std::string> tokenize_body(std::string_view body,
                                       const std::unordered_set<std::string>& stopwords) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 2 && stopwords.find(cur) == stopwords.end())
            tokens.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : body) {
        if (c >= 'a' && c <= 'z') {
            cur.push_back(static_cast<char>(c));
        } else if (c >= 'A' && c <= 'Z') {
            cur.push_back(static_cast<char>(c - 'A' + 'a'));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

Corpus preprocess(const std::vector<RawDocument>& docs,
                  const std::unordered_set<std::string>& stopwords,
                  std::string name) {
    Corpus corpus;
    corpus.name = std::move(name);
    corpus.doc_ids.reserve(docs.size());
    corpus.docs.reserve(docs.size());
    std::unordered_map<std::string, std::uint32_t> lexicon;

    for (const auto& doc : docs) {
        corpus.doc_ids.push_back(doc.doc_id);
        std::vector<std::uint32_t> ids;
        for (const auto& token : tokenize_body(doc.body, stopwords)) {
            std::string stem = porter_stem(token);
            if (stem.empty()) continue;
            auto [it, inserted] = lexicon.try_emplace(
                std::move(stem), static_cast<std::uint32_t>(corpus.keywords.size()));
            if (inserted) corpus.keywords.push_back(it->first);
            ids.push_back(it->second);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        corpus.docs.push_back(std::move(ids));
    }
    return corpus;
}

std::vector<std::uint32_t> Corpus::doc_frequencies() const {
    std::vector<std::uint32_t> df(keywords.size(), 0);
    for (const auto& doc : docs)
        for (std::uint32_t id : doc) ++df[id];
    return df;
}

Vocabulary extract_vocabulary(const Corpus& corpus, std::size_t m) {
    const auto df = corpus.doc_frequencies();
    std::vector<std::uint32_t> present;
    present.reserve(df.size());
    for (std::uint32_t id = 0; id < df.size(); ++id)
        if (df[id] > 0) present.push_back(id);
    require(m <= present.size(), "requested vocabulary size ", m, " exceeds the ",
            present.size(), " distinct keywords in corpus '", corpus.name, "'");

    std::sort(present.begin(), present.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (df[a] != df[b]) return df[a] > df[b];
        return corpus.keywords[a] < corpus.keywords[b];
    });

    Vocabulary vocab;
    vocab.words.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        vocab.words.push_back(corpus.keywords[present[i]]);
        vocab.positions.emplace(vocab.words.back(), static_cast<std::uint32_t>(i));
    }
    return vocab;
}

namespace {

Corpus take_documents(const Corpus& corpus, const std::vector<std::uint32_t>& indices,
                      std::string name) {
    Corpus out;
    out.name = std::move(name);
    out.keywords = corpus.keywords;
    out.doc_ids.reserve(indices.size());
    out.docs.reserve(indices.size());
    for (std::uint32_t i : indices) {
        out.doc_ids.push_back(corpus.doc_ids[i]);
        out.docs.push_back(corpus.docs[i]);
    }
    return out;
}

}  // namespace

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double fraction_real,
                                       std::uint64_t seed) {
    require(fraction_real > 0.0 && fraction_real < 1.0,
            "fraction_real must lie in (0,1), got ", fraction_real);
    const auto n = static_cast<std::uint32_t>(corpus.size());
    const auto n_real = static_cast<std::uint32_t>(std::floor(fraction_real * n));

    Rng rng(seed);
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
    shuffle(order, rng);

    std::vector<std::uint32_t> real_idx(order.begin(), order.begin() + n_real);
    std::vector<std::uint32_t> sim_idx(order.begin() + n_real, order.end());
    std::sort(real_idx.begin(), real_idx.end());
    std::sort(sim_idx.begin(), sim_idx.end());

    return {take_documents(corpus, real_idx, corpus.name + ":real"),
            take_documents(corpus, sim_idx, corpus.name + ":sim")};
}

Corpus subsample_corpus(const Corpus& corpus, std::size_t count, std::uint64_t seed) {
    if (count >= corpus.size()) return corpus;
    Rng rng(seed);
    auto idx = sample_without_replacement(static_cast<std::uint32_t>(corpus.size()),
                                          static_cast<std::uint32_t>(count), rng);
    std::sort(idx.begin(), idx.end());
    return take_documents(corpus, idx, corpus.name);
}

Corpus synthetic_corpus(const SyntheticConfig& cfg) {
    Corpus corpus;
    corpus.name = "synthetic";
    corpus.keywords.reserve(cfg.vocab_size);
    int width = 1;
    for (std::size_t v = cfg.vocab_size; v >= 10; v /= 10) ++width;
    for (std::size_t i = 0; i < cfg.vocab_size; ++i) {
        std::string num = std::to_string(i);
        corpus.keywords.push_back("kw" + std::string(width - num.size(), '0') + num);
    }

    // Zipf-shaped inclusion probabilities scaled to the requested density.
    std::vector<double> base(cfg.vocab_size);
    double total = 0.0;
    for (std::size_t r = 0; r < cfg.vocab_size; ++r) {
        base[r] = 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_exponent);
        total += base[r];
    }
    const double scale = cfg.keywords_per_doc / total;
    for (auto& p : base) p = std::min(0.95, p * scale);

    // Mixed-membership topic model. Every keyword carries an idiosyncratic
    // affinity split between two topics, so its co-occurrence profile is a
    // model-level identity shared by disjoint document subsets, which is what
    // makes split-corpus recovery meaningful.
    const std::size_t topics = std::max<std::size_t>(1, cfg.topics);
    Rng keyword_rng(mix_seed(cfg.seed, 0x6b77));
    std::vector<std::uint32_t> topic1(cfg.vocab_size), topic2(cfg.vocab_size);
    std::vector<double> affinity(cfg.vocab_size);
    for (std::size_t i = 0; i < cfg.vocab_size; ++i) {
        topic1[i] = static_cast<std::uint32_t>(keyword_rng.below(topics));
        topic2[i] = static_cast<std::uint32_t>(keyword_rng.below(topics));
        affinity[i] = 0.2 + 0.6 * keyword_rng.real();
    }
    const double damp = topics > 1 ? 0.3 : 1.0;
    const double gain = topics > 1 ? (1.0 - damp) * static_cast<double>(topics) : 0.0;

    Rng rng(cfg.seed);
    corpus.doc_ids.reserve(cfg.n_docs);
    corpus.docs.reserve(cfg.n_docs);
    for (std::size_t d = 0; d < cfg.n_docs; ++d) {
        corpus.doc_ids.push_back("syn" + std::to_string(d));
        const auto primary = static_cast<std::uint32_t>(rng.below(topics));
        const auto secondary = static_cast<std::uint32_t>(rng.below(topics));
        const double lambda = 0.5 + 0.5 * rng.real();
        std::vector<std::uint32_t> ids;
        for (std::uint32_t r = 0; r < cfg.vocab_size; ++r) {
            auto match = [&](std::uint32_t t) {
                return t == primary ? lambda : t == secondary ? 1.0 - lambda : 0.0;
            };
            double topical =
                affinity[r] * match(topic1[r]) + (1.0 - affinity[r]) * match(topic2[r]);
            double p = base[r] * (damp + gain * topical);
            if (rng.bernoulli(std::min(0.98, p))) ids.push_back(r);
        }
        corpus.docs.push_back(std::move(ids));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) fail("cannot open corpus cache for writing: ", file.string());
    out << "sseatk-corpus\tv1\t" << corpus.name << '\t' << corpus.size() << '\n';
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        out << corpus.doc_ids[d] << '\t';
        const auto& doc = corpus.docs[d];
        for (std::size_t i = 0; i < doc.size(); ++i) {
            if (i) out << ' ';
            out << corpus.keywords[doc[i]];
        }
        out << '\n';
    }
    if (!out) fail("error while writing corpus cache: ", file.string());
}

Corpus load_corpus(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail("cannot open corpus cache: ", file.string());
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic, version, name, count;
    std::getline(hs, magic, '\t');
    std::getline(hs, version, '\t');
    std::getline(hs, name, '\t');
    std::getline(hs, count, '\t');
    if (magic != "sseatk-corpus" || version != "v1")
        fail("unrecognized corpus cache header in ", file.string());

    Corpus corpus;
    corpus.name = name;
    std::unordered_map<std::string, std::uint32_t> lexicon;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) fail("malformed corpus cache row in ", file.string());
        corpus.doc_ids.push_back(line.substr(0, tab));
        std::vector<std::uint32_t> ids;
        std::istringstream ws(line.substr(tab + 1));
        std::string word;
        while (ws >> word) {
            auto [it, inserted] = lexicon.try_emplace(
                std::move(word), static_cast<std::uint32_t>(corpus.keywords.size()));
            if (inserted) corpus.keywords.push_back(it->first);
            ids.push_back(it->second);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        corpus.docs.push_back(std::move(ids));
    }
    const auto declared = static_cast<std::size_t>(std::stoull(count));
    if (declared != corpus.size())
        fail("corpus cache ", file.string(), " declares ", declared, " documents but contains ",
             corpus.size());
    return corpus;
}

}  // namespace sseatk
