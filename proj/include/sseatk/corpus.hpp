#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sseatk {

// An email reduced to identifier + body text (headers already stripped).
struct RawDocument {
    std::string doc_id;
    std::string body;
};

struct ParseStats {
    std::size_t parsed = 0;
    std::size_t skipped = 0;  // unreadable / malformed inputs
};

// Preprocessed document set: per-document keyword sets over a corpus-local
// lexicon. Keyword ids are indices into `keywords`; every per-document list
// is sorted and duplicate-free (set semantics).
struct Corpus {
    std::string name;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<std::uint32_t>> docs;
    std::vector<std::string> keywords;

    std::size_t size() const { return docs.size(); }

    const std::string& keyword(std::uint32_t id) const { return keywords[id]; }

    // Document frequency per lexicon keyword id.
    std::vector<std::uint32_t> doc_frequencies() const;
};

// Ranked keyword list: position i holds the i-th most document-frequent
// keyword, ties broken lexicographically.
struct Vocabulary {
    std::vector<std::string> words;
    std::unordered_map<std::string, std::uint32_t> positions;

    std::size_t size() const { return words.size(); }
    bool contains(std::string_view w) const {
        return positions.find(std::string(w)) != positions.end();
    }
    // Position of `w`, or npos if absent.
    static constexpr std::uint32_t npos = 0xffffffffu;
    std::uint32_t position(std::string_view w) const {
        auto it = positions.find(std::string(w));
        return it == positions.end() ? npos : it->second;
    }
};

// Bundled English stopword list (frozen NLTK snapshot shipped under data/).
const std::unordered_set<std::string>& english_stopwords();

// --- ingestion -------------------------------------------------------------

// Every email file under any `_sent_mail` directory of an Enron-style
// maildir tree, sorted by relative path. Unreadable files are counted in
// stats and skipped.
std::vector<RawDocument> parse_enron(const std::filesystem::path& maildir_root,
                                     ParseStats* stats = nullptr);

// Messages of mbox archives, with MIME text parts decoded and the mailing
// list unsubscribe footer removed from each body.
std::vector<RawDocument> parse_apache(const std::vector<std::filesystem::path>& mbox_files,
                                      ParseStats* stats = nullptr);

// --- preprocessing ---------------------------------------------------------

// Lowercase, tokenize on non-alphabetic boundaries, drop tokens shorter than
// two letters, remove stopwords, Porter-stem, deduplicate.
Corpus preprocess(const std::vector<RawDocument>& docs,
                  const std::unordered_set<std::string>& stopwords,
                  std::string name = "corpus");

std::vector<std::string> tokenize_body(std::string_view body,
                                       const std::unordered_set<std::string>& stopwords);

// The m most document-frequent keywords, descending, ties lexicographic.
Vocabulary extract_vocabulary(const Corpus& corpus, std::size_t m);

// Deterministic random partition: (real side with floor(fraction_real*n)
// documents, sim side with the remainder). Partitions are disjoint and
// exhaustive; the shared lexicon is kept.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double fraction_real,
                                       std::uint64_t seed);

// Uniform random subsample of `count` documents (all of them if count >= n).
Corpus subsample_corpus(const Corpus& corpus, std::size_t count, std::uint64_t seed);

// --- synthetic corpora -----------------------------------------------------

// Seeded generator used by tests and CI: Zipf-ranked keyword frequencies with
// topic structure so co-occurrence signatures are informative.
struct SyntheticConfig {
    std::size_t n_docs = 2000;
    std::size_t vocab_size = 200;
    double zipf_exponent = 1.0;
    std::size_t topics = 8;
    double keywords_per_doc = 30.0;  // expected within-vocabulary keywords
    std::uint64_t seed = 1;
};

Corpus synthetic_corpus(const SyntheticConfig& cfg);

// --- cache file ------------------------------------------------------------

// Line format: versioned header, then one `doc_id TAB space-joined keywords`
// row per document.
void save_corpus(const Corpus& corpus, const std::filesystem::path& file);
Corpus load_corpus(const std::filesystem::path& file);

}  // namespace sseatk
