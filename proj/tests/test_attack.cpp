#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "sseatk/attack.hpp"
#include "sseatk/rng.hpp"

using namespace sseatk;

namespace {

Corpus make_corpus(std::vector<std::vector<std::uint32_t>> docs,
                   std::vector<std::string> keywords) {
    Corpus corpus;
    corpus.name = "test";
    corpus.keywords = std::move(keywords);
    for (std::size_t d = 0; d < docs.size(); ++d)
        corpus.doc_ids.push_back("d" + std::to_string(d));
    corpus.docs = std::move(docs);
    return corpus;
}

Vocabulary vocab_of(std::vector<std::string> words) {
    Vocabulary vocab;
    for (auto& w : words) {
        vocab.positions.emplace(w, static_cast<std::uint32_t>(vocab.words.size()));
        vocab.words.push_back(std::move(w));
    }
    return vocab;
}

CoocTensor tensor2(std::size_t dim, std::vector<double> values, std::size_t n_basis = 1) {
    CoocTensor t(2, dim, n_basis);
    REQUIRE(values.size() == dim * dim);
    std::copy(values.begin(), values.end(), t.values().begin());
    return t;
}

// Self-attack fixture: D_sim = D_real with pairwise distinct co-occurrence
// columns; the attack must recover every query.
struct SelfAttack {
    Corpus corpus;
    Vocabulary vocab;
    IndexMatrix index;
    CoocTensor c_kw;
    CoocTensor c_td;
    ObservedQueries observed;
    std::vector<std::string> truth;
};

SelfAttack self_attack_fixture(std::size_t n_known = 1) {
    SelfAttack fx;
    // Keyword 0 co-occurs with keyword i in exactly 6-i documents, so its
    // column separates every keyword even with a single known query.
    fx.corpus = make_corpus(
        {
            {0, 1, 2, 3, 4, 5},
            {0, 1, 2, 3, 4},
            {0, 1, 2, 3},
            {0, 1, 2},
            {0, 1},
            {0},
            {1, 2, 5},
            {2, 4},
            {3, 5},
            {1, 3},
        },
        {"alpha", "bravo", "charli", "delta", "echo", "foxtrot"});
    fx.vocab = vocab_of({"alpha", "bravo", "charli", "delta", "echo", "foxtrot"});
    fx.index = build_index(fx.corpus, fx.vocab);
    fx.c_kw = cooccurrence(fx.index, 2);

    // Every keyword is queried; trapdoor order permutes the vocabulary. The
    // first trapdoor (first known query) belongs to keyword 0.
    std::vector<std::uint32_t> order{0, 3, 5, 2, 4, 1};
    for (std::uint32_t pos : order) {
        fx.observed.trapdoors.push_back("td_" + std::to_string(pos));
        fx.observed.responses.push_back(fx.index.columns[pos].ones());
        fx.truth.push_back(fx.vocab.words[pos]);
    }
    for (std::uint32_t j = 0; j < n_known; ++j)
        fx.observed.known.push_back({j, fx.truth[j]});
    fx.c_td = trapdoor_cooccurrence(fx.observed, fx.index.n_docs, 2);

    // the anchor column must separate all keywords
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = a + 1; b < 6; ++b)
            REQUIRE(fx.c_kw.at2(a, 0) != fx.c_kw.at2(b, 0));
    return fx;
}

double accuracy_of(const std::vector<Prediction>& preds, const SelfAttack& fx) {
    std::size_t unknown = 0, correct = 0;
    for (const auto& p : preds) {
        if (p.initially_known) continue;
        ++unknown;
        for (auto c : p.candidates)
            if (fx.vocab.words[c] == fx.truth[p.query_index]) {
                ++correct;
                break;
            }
    }
    return unknown ? static_cast<double>(correct) / unknown : 0.0;
}

}  // namespace

TEST_CASE("estimate_n_real single and averaged ratios") {
    // 100 similar docs; keyword "kw" occurs in 5 of them
    std::vector<std::vector<std::uint32_t>> docs(100);
    for (std::size_t d = 0; d < 5; ++d) docs[d] = {0};
    Corpus d_sim = make_corpus(std::move(docs), {"kw"});

    ObservedQueries observed;
    observed.trapdoors = {"t0"};
    observed.responses = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};  // |R| = 10
    observed.known = {{0, "kw"}};
    CHECK(estimate_n_real(observed, d_sim) == doctest::Approx(200.0));

    // two pairs with ratios 0.5 and 1.5 over n_sim = 1000
    std::vector<std::vector<std::uint32_t>> docs2(1000);
    for (std::size_t d = 0; d < 2; ++d) docs2[d].push_back(0);   // df(kw0) = 2
    for (std::size_t d = 0; d < 4; ++d) docs2[d].push_back(1);   // df(kw1) = 4
    Corpus d_sim2 = make_corpus(std::move(docs2), {"kwa", "kwb"});
    ObservedQueries obs2;
    obs2.trapdoors = {"t0", "t1"};
    obs2.responses = {{0}, {0, 1, 2, 3, 4, 5}};  // ratios 1/2 and 6/4
    obs2.known = {{0, "kwa"}, {1, "kwb"}};
    CHECK(estimate_n_real(obs2, d_sim2) == doctest::Approx(1000.0));
}

TEST_CASE("estimate_n_real skips absent keywords and is exact on self-attacks") {
    auto fx = self_attack_fixture(3);
    CHECK(estimate_n_real(fx.observed, fx.corpus) == static_cast<double>(fx.corpus.size()));

    ObservedQueries with_absent = fx.observed;
    with_absent.known.push_back({4, "nonexistent"});
    CHECK(estimate_n_real(with_absent, fx.corpus) == static_cast<double>(fx.corpus.size()));

    ObservedQueries all_absent = fx.observed;
    for (auto& kq : all_absent.known) kq.keyword = "nonexistent";
    CHECK_THROWS_AS(estimate_n_real(all_absent, fx.corpus), std::runtime_error);
    ObservedQueries no_known = fx.observed;
    no_known.known.clear();
    CHECK_THROWS_AS(estimate_n_real(no_known, fx.corpus), std::invalid_argument);
}

TEST_CASE("project_submatrices gathers the known-query columns") {
    CoocTensor c_kw = tensor2(3, {0.10, 0.11, 0.12,
                                  0.11, 0.20, 0.21,
                                  0.12, 0.21, 0.30});
    CoocTensor c_td = tensor2(3, {0.40, 0.41, 0.42,
                                  0.41, 0.50, 0.51,
                                  0.42, 0.51, 0.60});
    Vocabulary vocab = vocab_of({"ka", "kb", "kc"});
    ObservedQueries observed;
    observed.trapdoors = {"t0", "t1", "t2"};
    observed.responses = {{0}, {1}, {2}};
    // known: trapdoor 1 <-> "kc" (column 2), trapdoor 2 <-> "ka" (column 0)
    std::vector<KnownQuery> known{{1, "kc"}, {2, "ka"}};

    SubMatrices sub = project_submatrices(c_kw, c_td, known, vocab, observed);
    CHECK(sub.signature_len == 2);
    // kw_side column j equals C_kw column pos(kw_j)
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(sub.keyword_signature(i)[0] == c_kw.at2(i, 2));
        CHECK(sub.keyword_signature(i)[1] == c_kw.at2(i, 0));
        CHECK(sub.trapdoor_signature(i)[0] == c_td.at2(i, 1));
        CHECK(sub.trapdoor_signature(i)[1] == c_td.at2(i, 2));
    }

    SubMatrices one = project_submatrices(c_kw, c_td, {{0, "kb"}}, vocab, observed);
    CHECK(one.signature_len == 1);
    CHECK(one.keyword_signature(2)[0] == c_kw.at2(2, 1));

    CHECK_THROWS_WITH_AS(
        project_submatrices(c_kw, c_td, {{0, "missing"}}, vocab, observed),
        doctest::Contains("outside the attack vocabulary"), std::runtime_error);
}

TEST_CASE("score clamps zero distances and maps e^-d to d") {
    CoocTensor c_kw = tensor2(2, {0.5, 0.0, 0.0, 0.5});
    CoocTensor c_td = tensor2(2, {0.5, 0.0, 0.0, 0.5});
    Vocabulary vocab = vocab_of({"ka", "kb"});
    ObservedQueries observed;
    observed.trapdoors = {"t0", "t1"};
    observed.responses = {{0}, {1}};
    SubMatrices sub = project_submatrices(c_kw, c_td, {{0, "ka"}}, vocab, observed);

    // identical signatures: clamped at -ln(1e-20)
    CHECK(score(sub, 0, 0) == doctest::Approx(-std::log(1e-20)));

    // hand-crafted distances
    sub.signature_len = 2;
    sub.m = 2;
    sub.l = 2;
    sub.kw_side = {0.5, 0.0, 0.5, 0.3};
    sub.td_side = {0.5, 0.0, 0.5, 0.3};
    CHECK(score(sub, 0, 1, Norm::l2) == doctest::Approx(-std::log(0.3)));

    sub.kw_side = {0.5, 0.0, 0.5, 0.0};
    sub.td_side = {0.5, std::exp(-11.0), 0.5, 0.0};
    CHECK(score(sub, 0, 0, Norm::l2) == doctest::Approx(11.0));

    // norms differ as expected
    sub.kw_side = {0.1, 0.2, 0.0, 0.0};
    sub.td_side = {0.4, 0.6, 0.0, 0.0};
    CHECK(score(sub, 0, 0, Norm::l1) == doctest::Approx(-std::log(0.3 + 0.4)));
    CHECK(score(sub, 0, 0, Norm::linf) == doctest::Approx(-std::log(0.4)));
    CHECK(score(sub, 0, 0, Norm::l2) ==
          doctest::Approx(-std::log(std::sqrt(0.09 + 0.16))));

    CHECK_THROWS_AS(score(sub, 5, 0), std::invalid_argument);
}

TEST_CASE("certainty is best minus second best") {
    std::vector<double> scores{9.0, 6.3, 6.2, 6.0};
    CHECK(certainty_from_scores(scores) == doctest::Approx(2.7));
    std::vector<double> tied{4.0, 4.0, 1.0};
    CHECK(certainty_from_scores(tied) == doctest::Approx(0.0));
    std::vector<double> single{5.0};
    CHECK(certainty_from_scores(single) == std::numeric_limits<double>::infinity());
}

TEST_CASE("base score attack recovers a self-attack instance completely") {
    auto fx = self_attack_fixture(1);
    SubMatrices sub = project_submatrices(fx.c_kw, fx.c_td, fx.observed.known, fx.vocab,
                                          fx.observed);
    auto preds = base_score_attack(sub, fx.vocab, fx.observed);
    REQUIRE(preds.size() == 6);
    CHECK(accuracy_of(preds, fx) == doctest::Approx(1.0));
    CHECK(preds[0].initially_known);
    for (const auto& p : preds)
        if (!p.initially_known) {
            CHECK(p.candidates.size() == 1);
            CHECK(p.score == doctest::Approx(-std::log(1e-20)));
            CHECK(std::isfinite(p.score));
        }
}

TEST_CASE("base attack with a single keyword predicts it everywhere") {
    CoocTensor c_kw = tensor2(1, {0.5});
    CoocTensor c_td = tensor2(3, {0.5, 0.1, 0.1,
                                  0.1, 0.4, 0.1,
                                  0.1, 0.1, 0.3});
    Vocabulary vocab = vocab_of({"only"});
    ObservedQueries observed;
    observed.trapdoors = {"t0", "t1", "t2"};
    observed.responses = {{0}, {1}, {2}};
    observed.known = {{0, "only"}};
    SubMatrices sub = project_submatrices(c_kw, c_td, observed.known, vocab, observed);
    auto preds = base_score_attack(sub, vocab, observed);
    for (const auto& p : preds)
        if (!p.initially_known) {
            CHECK(p.candidates == std::vector<std::uint32_t>{0});
            CHECK(p.certainty == std::numeric_limits<double>::infinity());
        }
}

TEST_CASE("refined attack equals the base attack when ref_speed covers all unknowns") {
    auto fx = self_attack_fixture(2);
    AttackConfig cfg;
    cfg.ref_speed = 10;  // > 4 unknown queries: immediate stopping branch
    SubMatrices sub = project_submatrices(fx.c_kw, fx.c_td, fx.observed.known, fx.vocab,
                                          fx.observed);
    auto base = base_score_attack(sub, fx.vocab, fx.observed, cfg);
    auto refined = refined_score_attack(fx.c_kw, fx.c_td, fx.vocab, fx.observed, cfg);
    REQUIRE(base.size() == refined.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].query_index == refined[i].query_index);
        CHECK(base[i].candidates == refined[i].candidates);
        CHECK(base[i].score == refined[i].score);
        CHECK(base[i].initially_known == refined[i].initially_known);
        CHECK(refined[i].iteration_promoted == -1);
    }
}

TEST_CASE("refined attack promotes ref_speed predictions per iteration") {
    auto fx = self_attack_fixture(1);
    AttackConfig cfg;
    cfg.ref_speed = 2;
    auto preds = refined_score_attack(fx.c_kw, fx.c_td, fx.vocab, fx.observed, cfg);
    CHECK(accuracy_of(preds, fx) == doctest::Approx(1.0));

    // 5 unknown, ref_speed 2: iterations promote 2 + 2, final round covers 1.
    std::map<int, int> per_iteration;
    std::set<std::uint32_t> seen;
    for (const auto& p : preds) {
        CHECK(seen.insert(p.query_index).second);  // each query answered once
        if (p.iteration_promoted >= 0) ++per_iteration[p.iteration_promoted];
    }
    CHECK(seen.size() == 6);
    REQUIRE(per_iteration.size() == 2);
    CHECK(per_iteration[1] == 2);
    CHECK(per_iteration[2] == 2);
}

TEST_CASE("scaling both tensors leaves predictions and promotion order unchanged") {
    auto fx = self_attack_fixture(1);
    AttackConfig cfg;
    cfg.ref_speed = 2;
    auto plain = refined_score_attack(fx.c_kw, fx.c_td, fx.vocab, fx.observed, cfg);

    CoocTensor kw_scaled = fx.c_kw;
    CoocTensor td_scaled = fx.c_td;
    for (auto& v : kw_scaled.values()) v *= 3.7;
    for (auto& v : td_scaled.values()) v *= 3.7;
    auto scaled = refined_score_attack(kw_scaled, td_scaled, fx.vocab, fx.observed, cfg);

    REQUIRE(plain.size() == scaled.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(plain[i].candidates == scaled[i].candidates);
        CHECK(plain[i].iteration_promoted == scaled[i].iteration_promoted);
    }
}

TEST_CASE("attack results are worker-count independent") {
    auto fx = self_attack_fixture(1);
    AttackConfig one;
    one.ref_speed = 2;
    one.workers = 1;
    AttackConfig many = one;
    many.workers = 4;
    auto a = refined_score_attack(fx.c_kw, fx.c_td, fx.vocab, fx.observed, one);
    auto b = refined_score_attack(fx.c_kw, fx.c_td, fx.vocab, fx.observed, many);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].candidates == b[i].candidates);
        CHECK(a[i].score == b[i].score);
        CHECK(a[i].certainty == b[i].certainty);
        CHECK(a[i].iteration_promoted == b[i].iteration_promoted);
    }
}

TEST_CASE("order-3 signatures use all known-query pairs") {
    auto fx = self_attack_fixture(2);
    CoocTensor kw3 = cooccurrence(fx.index, 3);
    CoocTensor td3 = trapdoor_cooccurrence(fx.observed, fx.index.n_docs, 3);
    SubMatrices sub = project_submatrices(kw3, td3, fx.observed.known, fx.vocab, fx.observed);
    CHECK(sub.order == 3);
    CHECK(sub.signature_len == 4);  // k^2 tuples

    // self-attack at order 3 still matches exactly
    auto preds = base_score_attack(sub, fx.vocab, fx.observed);
    CHECK(accuracy_of(preds, fx) == doctest::Approx(1.0));

    // signature values are tensor entries at the known tuple positions
    auto k0 = fx.vocab.position(fx.observed.known[0].keyword);
    auto k1 = fx.vocab.position(fx.observed.known[1].keyword);
    std::array<std::size_t, 3> idx{2, k0, k1};
    CHECK(sub.keyword_signature(2)[1] == kw3.at(idx));
}

TEST_CASE("clustered attack promotes only singleton clusters") {
    auto fx = self_attack_fixture(1);
    AttackConfig cfg;
    cfg.ref_speed = 2;
    cfg.max_cluster_size = 3;
    auto preds = refined_score_attack(fx.c_kw, fx.c_td, fx.vocab, fx.observed, cfg);
    CHECK(accuracy_of(preds, fx) == doctest::Approx(1.0));
    for (const auto& p : preds) {
        CHECK(p.candidates.size() >= 1);
        CHECK(p.candidates.size() <= 3);
        if (p.iteration_promoted >= 0) CHECK(p.candidates.size() == 1);
    }
}

TEST_CASE("prediction dump format") {
    auto fx = self_attack_fixture(1);
    AttackConfig cfg;
    cfg.ref_speed = 2;
    auto preds = refined_score_attack(fx.c_kw, fx.c_td, fx.vocab, fx.observed, cfg);
    auto dir = std::filesystem::temp_directory_path() / "sseatk_pred";
    std::filesystem::create_directories(dir);
    write_prediction_csv(preds, fx.observed, fx.vocab, dir / "preds.csv");

    std::ifstream in(dir / "preds.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "trapdoor_id,predicted_keywords,score,certainty,iteration_promoted,is_initially_known");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == preds.size());
}
