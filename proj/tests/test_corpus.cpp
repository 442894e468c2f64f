#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "sseatk/corpus.hpp"
#include "sseatk/rng.hpp"

using namespace sseatk;
namespace fs = std::filesystem;

namespace {

Corpus toy_corpus() {
    // {d1:{aa,bb}, d2:{aa}, d3:{aa,cc}}
    Corpus corpus;
    corpus.name = "toy";
    corpus.keywords = {"aa", "bb", "cc"};
    corpus.doc_ids = {"d1", "d2", "d3"};
    corpus.docs = {{0, 1}, {0}, {0, 2}};
    return corpus;
}

std::set<std::string> keyword_set(const Corpus& corpus, std::size_t doc) {
    std::set<std::string> out;
    for (auto id : corpus.docs[doc]) out.insert(corpus.keywords[id]);
    return out;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("sseatk_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("tokenizer lowercases, splits on non-alphabetic, drops short tokens") {
    std::unordered_set<std::string> stop{"the"};
    auto tokens = tokenize_body("The42 quick-brown_fox! a I9[ok]", stop);
    CHECK(tokens == std::vector<std::string>{"quick", "brown", "fox", "ok"});
}

TEST_CASE("preprocess stems and deduplicates") {
    std::unordered_set<std::string> stop{"the"};
    auto corpus = preprocess({{"d1", "Running runs the runner"}}, stop);
    CHECK(keyword_set(corpus, 0) == std::set<std::string>{"run", "runner"});
}

TEST_CASE("preprocess of stopword-only body yields empty keyword set") {
    auto corpus = preprocess({{"d1", "the and is of"}, {"d2", ""}}, english_stopwords());
    CHECK(corpus.docs[0].empty());
    CHECK(corpus.docs[1].empty());
}

TEST_CASE("preprocess is stable run to run") {
    std::vector<RawDocument> docs{{"d1", "Analyses of hopefulness and sized complications"},
                                  {"d2", "running RUNNING runs"}};
    auto a = preprocess(docs, english_stopwords());
    auto b = preprocess(docs, english_stopwords());
    REQUIRE(a.size() == b.size());
    for (std::size_t d = 0; d < a.size(); ++d) CHECK(keyword_set(a, d) == keyword_set(b, d));
    for (std::size_t d = 0; d < a.size(); ++d) {
        auto ids = a.docs[d];
        std::set<std::uint32_t> uniq(ids.begin(), ids.end());
        CHECK(uniq.size() == ids.size());  // deduplicated
    }
}

TEST_CASE("bundled stopword list") {
    const auto& stop = english_stopwords();
    CHECK(stop.size() == 179);
    CHECK(stop.count("the") == 1);
    CHECK(stop.count("don") == 1);
    CHECK(stop.count("ourselves") == 1);
    CHECK(stop.count("keyword") == 0);
}

TEST_CASE("extract_vocabulary ranks by document frequency then lexicographically") {
    auto vocab = extract_vocabulary(toy_corpus(), 2);
    CHECK(vocab.words == std::vector<std::string>{"aa", "bb"});
    CHECK(vocab.position("aa") == 0);
    CHECK(vocab.position("bb") == 1);
    CHECK(vocab.position("cc") == Vocabulary::npos);
}

TEST_CASE("extract_vocabulary edge sizes") {
    auto empty = extract_vocabulary(toy_corpus(), 0);
    CHECK(empty.size() == 0);
    auto all = extract_vocabulary(toy_corpus(), 3);
    CHECK(all.words == std::vector<std::string>{"aa", "bb", "cc"});
    CHECK_THROWS_WITH_AS(extract_vocabulary(toy_corpus(), 4),
                         doctest::Contains("exceeds the 3 distinct keywords"),
                         std::invalid_argument);
}

TEST_CASE("extract_vocabulary prefix property") {
    SyntheticConfig syn;
    syn.n_docs = 300;
    syn.vocab_size = 60;
    syn.seed = 5;
    Corpus corpus = synthetic_corpus(syn);
    auto v20 = extract_vocabulary(corpus, 20);
    auto v50 = extract_vocabulary(corpus, 50);
    for (std::size_t i = 0; i < 20; ++i) CHECK(v20.words[i] == v50.words[i]);
}

TEST_CASE("split_corpus partitions disjointly and deterministically") {
    SyntheticConfig syn;
    syn.n_docs = 101;
    syn.vocab_size = 40;
    syn.seed = 9;
    Corpus corpus = synthetic_corpus(syn);

    auto [real1, sim1] = split_corpus(corpus, 0.6, 42);
    auto [real2, sim2] = split_corpus(corpus, 0.6, 42);
    CHECK(real1.doc_ids == real2.doc_ids);
    CHECK(sim1.doc_ids == sim2.doc_ids);

    CHECK(real1.size() == 60);  // floor(0.6 * 101)
    CHECK(sim1.size() == 41);

    std::set<std::string> all(corpus.doc_ids.begin(), corpus.doc_ids.end());
    std::set<std::string> merged(real1.doc_ids.begin(), real1.doc_ids.end());
    merged.insert(sim1.doc_ids.begin(), sim1.doc_ids.end());
    CHECK(merged == all);
    CHECK(real1.size() + sim1.size() == corpus.size());

    auto [real3, sim3] = split_corpus(corpus, 0.6, 43);
    CHECK(real3.doc_ids != real1.doc_ids);
}

TEST_CASE("split_corpus trivial and error cases") {
    Corpus two;
    two.keywords = {"aa"};
    two.doc_ids = {"d1", "d2"};
    two.docs = {{0}, {0}};
    auto [real, sim] = split_corpus(two, 0.5, 1);
    CHECK(real.size() == 1);
    CHECK(sim.size() == 1);
    CHECK_THROWS_AS(split_corpus(two, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_corpus(two, 1.0, 1), std::invalid_argument);
}

TEST_CASE("subsample_corpus picks a deterministic subset") {
    Corpus corpus = toy_corpus();
    auto sub1 = subsample_corpus(corpus, 2, 7);
    auto sub2 = subsample_corpus(corpus, 2, 7);
    CHECK(sub1.doc_ids == sub2.doc_ids);
    CHECK(sub1.size() == 2);
    CHECK(subsample_corpus(corpus, 10, 7).size() == 3);
}

TEST_CASE("corpus cache round trip") {
    auto dir = fresh_dir("cache");
    Corpus corpus = toy_corpus();
    corpus.docs[1] = {};  // empty keyword set survives the round trip
    save_corpus(corpus, dir / "toy.corpus");
    Corpus loaded = load_corpus(dir / "toy.corpus");
    REQUIRE(loaded.size() == corpus.size());
    CHECK(loaded.name == "toy");
    CHECK(loaded.doc_ids == corpus.doc_ids);
    for (std::size_t d = 0; d < corpus.size(); ++d)
        CHECK(keyword_set(loaded, d) == keyword_set(corpus, d));

    std::ofstream bad(dir / "bad.corpus");
    bad << "something-else\tv9\tx\t1\n";
    bad.close();
    CHECK_THROWS_AS(load_corpus(dir / "bad.corpus"), std::runtime_error);
    CHECK_THROWS_AS(load_corpus(dir / "missing.corpus"), std::runtime_error);
}

TEST_CASE("synthetic corpus is seeded and sized") {
    SyntheticConfig syn;
    syn.n_docs = 200;
    syn.vocab_size = 50;
    syn.seed = 3;
    Corpus a = synthetic_corpus(syn);
    Corpus b = synthetic_corpus(syn);
    CHECK(a.size() == 200);
    CHECK(a.keywords.size() == 50);
    CHECK(a.docs == b.docs);
    syn.seed = 4;
    CHECK(synthetic_corpus(syn).docs != a.docs);
}

TEST_CASE("enron maildir parsing") {
    auto root = fresh_dir("enron");
    fs::create_directories(root / "user1" / "_sent_mail");
    fs::create_directories(root / "user1" / "inbox");
    fs::create_directories(root / "user2" / "_sent_mail" / "archive");

    auto write = [](const fs::path& p, const std::string& content) {
        std::ofstream out(p);
        out << content;
    };
    write(root / "user1" / "_sent_mail" / "1.",
          "Message-ID: <1>\nFrom: alice@corp.com\nSubject: greetings\n\nhello quarterly report\n");
    write(root / "user1" / "_sent_mail" / "2.",
          "Message-ID: <2>\nFrom: alice@corp.com\n\nsecond message body\n");
    write(root / "user2" / "_sent_mail" / "archive" / "3.",
          "Message-ID: <3>\nFrom: bob@corp.com\n\nthird body text\n");
    write(root / "user1" / "inbox" / "4.",
          "Message-ID: <4>\nFrom: carol@corp.com\n\nshould not be ingested\n");
    write(root / "user2" / "_sent_mail" / "broken", "no blank separator line at all");

    ParseStats stats;
    auto docs = parse_enron(root, &stats);
    REQUIRE(docs.size() == 3);
    CHECK(stats.parsed == 3);
    CHECK(stats.skipped == 1);
    CHECK(docs[0].body == "hello quarterly report\n");
    CHECK(docs[0].body.find("Subject") == std::string::npos);  // headers stripped
    // deterministic path order
    CHECK(docs[0].doc_id < docs[1].doc_id);
    CHECK(docs[1].doc_id < docs[2].doc_id);

    CHECK(parse_enron(fresh_dir("enron_empty")).empty());
    CHECK_THROWS_AS(parse_enron(root / "nowhere"), std::runtime_error);
}

TEST_CASE("apache mbox parsing strips the unsubscribe footer") {
    auto dir = fresh_dir("apache");
    std::ofstream out(dir / "list.mbox");
    out << "From alice@lucene Mon Jan  7 10:00:00 2002\n"
        << "From: alice\nSubject: index question\n\n"
        << "how do I rebuild the index cheaply\n"
        << "---------------------------------------------------------------------\n"
        << "To unsubscribe, e-mail: java-user-unsubscribe@lucene.example\n"
        << "For additional commands, e-mail: zzsignaturetoken@lucene.example\n"
        << "\n"
        << "From bob@lucene Mon Jan  7 11:00:00 2002\n"
        << "From: bob\nSubject: re\n\n"
        << "try the merge policy\n"
        << "To Unsubscribe, e-mail: java-user-unsubscribe@lucene.example\n";
    out.close();

    ParseStats stats;
    auto docs = parse_apache({dir / "list.mbox"}, &stats);
    REQUIRE(docs.size() == 2);
    CHECK(stats.parsed == 2);
    CHECK(docs[0].body.find("rebuild the index") != std::string::npos);
    for (const auto& doc : docs) {
        CHECK(doc.body.find("unsubscribe") == std::string::npos);
        CHECK(doc.body.find("zzsignaturetoken") == std::string::npos);
    }

    std::ofstream(dir / "empty.mbox").close();
    CHECK(parse_apache({dir / "empty.mbox"}).empty());
    CHECK_THROWS_AS(parse_apache({dir / "missing.mbox"}), std::runtime_error);
}

TEST_CASE("apache mbox decodes MIME text parts") {
    auto dir = fresh_dir("apache_mime");
    std::ofstream out(dir / "mime.mbox");
    out << "From carol@lucene Tue Jan  8 10:00:00 2002\n"
        << "From: carol\n"
        << "Content-Type: multipart/mixed; boundary=\"XYZ\"\n\n"
        << "--XYZ\n"
        << "Content-Type: text/plain\n"
        << "Content-Transfer-Encoding: quoted-printable\n\n"
        << "tokenizer=20question about=3Dlimits\n"
        << "--XYZ\n"
        << "Content-Type: application/octet-stream\n"
        << "Content-Transfer-Encoding: base64\n\n"
        << "c2VjcmV0YmluYXJ5\n"
        << "--XYZ\n"
        << "Content-Type: text/plain\n"
        << "Content-Transfer-Encoding: base64\n\n"
        << "aGVsbG8gZnJvbSBiYXNlNjQ=\n"
        << "--XYZ--\n";
    out.close();

    auto docs = parse_apache({dir / "mime.mbox"});
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].body.find("tokenizer question") != std::string::npos);
    CHECK(docs[0].body.find("about=limits") != std::string::npos);
    CHECK(docs[0].body.find("hello from base64") != std::string::npos);
    CHECK(docs[0].body.find("secretbinary") == std::string::npos);
}
