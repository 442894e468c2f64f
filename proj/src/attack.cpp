#include "sseatk/attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "sseatk/clustering.hpp"
#include "sseatk/common.hpp"
#include "sseatk/parallel.hpp"

namespace sseatk {

const char* to_string(Norm norm) {
    switch (norm) {
        case Norm::l2: return "l2";
        case Norm::l1: return "l1";
        case Norm::linf: return "linf";
    }
    return "?";
}

double estimate_n_real(const ObservedQueries& observed, const Corpus& d_sim) {
    require(!observed.known.empty(), "estimating n_real requires at least one known query");

    std::unordered_map<std::string_view, std::uint32_t> lexicon;
    lexicon.reserve(d_sim.keywords.size());
    for (std::uint32_t id = 0; id < d_sim.keywords.size(); ++id)
        lexicon.emplace(d_sim.keywords[id], id);
    const auto df = d_sim.doc_frequencies();

    double ratio_sum = 0.0;
    std::size_t used = 0;
    for (const auto& kq : observed.known) {
        auto it = lexicon.find(kq.keyword);
        if (it == lexicon.end() || df[it->second] == 0) continue;  // pair skipped
        ratio_sum += static_cast<double>(observed.responses[kq.query_index].size()) /
                     static_cast<double>(df[it->second]);
        ++used;
    }
    if (used == 0)
        fail("cannot estimate n_real: none of the ", observed.known.size(),
             " known keywords occurs in the similar document set");
    return ratio_sum / static_cast<double>(used) * static_cast<double>(d_sim.size());
}

SubMatrices project_submatrices(const CoocTensor& c_kw, const CoocTensor& c_td,
                                const std::vector<KnownQuery>& known,
                                const Vocabulary& vocab, const ObservedQueries& observed,
                                unsigned workers) {
    require(!known.empty(), "sub-matrix projection requires at least one known query");
    require(c_kw.order() == c_td.order(), "tensor orders differ: ", c_kw.order(), " vs ",
            c_td.order());
    const std::size_t order = c_kw.order();
    const std::size_t m = c_kw.dim();
    const std::size_t l = c_td.dim();
    const std::size_t k = known.size();
    require(l == observed.query_count(), "trapdoor tensor spans ", l,
            " queries but the log observed ", observed.query_count());

    std::vector<std::size_t> kw_pos(k), td_pos(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::uint32_t pos = vocab.position(known[j].keyword);
        if (pos == Vocabulary::npos)
            fail("known query ", j, " (trapdoor #", known[j].query_index, ", keyword '",
                 known[j].keyword, "') lies outside the attack vocabulary");
        require(known[j].query_index < l, "known query ", j, " references trapdoor #",
                known[j].query_index, " beyond the ", l, " observed queries");
        kw_pos[j] = pos;
        td_pos[j] = known[j].query_index;
    }

    std::size_t signature = 1;
    for (std::size_t a = 1; a < order; ++a) {
        signature *= k;
        require(signature <= (1ull << 31), "signature of ", k, "^", order - 1,
                " known-query tuples is too large");
    }

    // Per-tuple offsets inside one tensor row, tuples in lexicographic order
    // of known-query indices.
    std::vector<std::size_t> off_kw(signature, 0), off_td(signature, 0);
    std::vector<std::size_t> tuple(order - 1, 0);
    for (std::size_t t = 0; t < signature; ++t) {
        std::size_t okw = 0, otd = 0;
        for (std::size_t a = 0; a + 1 < order; ++a) {
            okw = okw * m + kw_pos[tuple[a]];
            otd = otd * l + td_pos[tuple[a]];
        }
        off_kw[t] = okw;
        off_td[t] = otd;
        for (std::size_t a = order - 1; a-- > 0;) {
            if (++tuple[a] < k) break;
            tuple[a] = 0;
        }
    }

    SubMatrices sub;
    sub.order = order;
    sub.m = m;
    sub.l = l;
    sub.signature_len = signature;
    sub.known_order = known;
    sub.kw_side.resize(m * signature);
    sub.td_side.resize(l * signature);

    const auto kw_values = c_kw.values();
    const auto td_values = c_td.values();
    std::size_t kw_row = kw_values.size() / m;
    std::size_t td_row = td_values.size() / l;
    parallel_for(
        m,
        [&](std::size_t i) {
            const double* row = kw_values.data() + i * kw_row;
            double* out = sub.kw_side.data() + i * signature;
            for (std::size_t t = 0; t < signature; ++t) out[t] = row[off_kw[t]];
        },
        workers);
    parallel_for(
        l,
        [&](std::size_t j) {
            const double* row = td_values.data() + j * td_row;
            double* out = sub.td_side.data() + j * signature;
            for (std::size_t t = 0; t < signature; ++t) out[t] = row[off_td[t]];
        },
        workers);
    return sub;
}

namespace {

double distance(const double* a, const double* b, std::size_t n, Norm norm) {
    switch (norm) {
        case Norm::l2: {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double d = a[i] - b[i];
                acc += d * d;
            }
            return std::sqrt(acc);
        }
        case Norm::l1: {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
            return acc;
        }
        case Norm::linf: {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
            return acc;
        }
    }
    return 0.0;
}

double to_score(double dist) { return -std::log(std::max(dist, kDistFloor)); }

struct Candidate {
    std::uint32_t query_index;
    std::vector<std::uint32_t> keywords;  // best first
    double score;
    double certainty;
    bool promotable;
};

// Scores one trapdoor against every keyword and extracts either the argmax
// (+ best-minus-second certainty) or the best-candidate cluster. Ties on
// equal scores go to the lower vocabulary position.
Candidate score_trapdoor(const SubMatrices& sub, std::uint32_t qi, const AttackConfig& cfg,
                         std::vector<std::pair<double, std::uint32_t>>& scratch) {
    const double* td = sub.td_side.data() + qi * sub.signature_len;
    const std::size_t m = sub.m;
    Candidate cand;
    cand.query_index = qi;

    if (cfg.max_cluster_size > 0 && m >= 2) {
        scratch.clear();
        scratch.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = to_score(
                distance(sub.kw_side.data() + i * sub.signature_len, td, sub.signature_len,
                         cfg.norm));
            scratch.emplace_back(-s, static_cast<std::uint32_t>(i));
        }
        const std::size_t top = std::min(cfg.max_cluster_size + 1, m);
        std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(top),
                          scratch.end());
        std::vector<double> top_scores(top);
        for (std::size_t i = 0; i < top; ++i) top_scores[i] = -scratch[i].first;
        auto cut = best_candidate_cluster(top_scores, std::min(cfg.max_cluster_size, top - 1));
        cand.keywords.reserve(cut.size);
        for (std::size_t i = 0; i < cut.size; ++i) cand.keywords.push_back(scratch[i].second);
        cand.score = top_scores[0];
        cand.certainty = cut.certainty;
        cand.promotable = cut.size == 1;
        return cand;
    }

    double best = -std::numeric_limits<double>::infinity();
    double second = -std::numeric_limits<double>::infinity();
    std::uint32_t best_idx = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = to_score(distance(sub.kw_side.data() + i * sub.signature_len, td,
                                     sub.signature_len, cfg.norm));
        if (s > best) {
            second = best;
            best = s;
            best_idx = static_cast<std::uint32_t>(i);
        } else if (s > second) {
            second = s;
        }
    }
    cand.keywords = {best_idx};
    cand.score = best;
    cand.certainty = best - second;  // +inf when m == 1
    cand.promotable = true;
    return cand;
}

std::vector<Candidate> score_unknown(const SubMatrices& sub,
                                     const std::vector<std::uint32_t>& unknown,
                                     const AttackConfig& cfg) {
    std::vector<Candidate> out(unknown.size());
    parallel_chunks(
        unknown.size(), 16,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            std::vector<std::pair<double, std::uint32_t>> scratch;
            for (std::size_t u = lo; u < hi; ++u)
                out[u] = score_trapdoor(sub, unknown[u], cfg, scratch);
        },
        cfg.workers);
    return out;
}

Prediction known_prediction(const KnownQuery& kq, const Vocabulary& vocab) {
    Prediction pred;
    pred.query_index = kq.query_index;
    pred.candidates = {vocab.position(kq.keyword)};
    pred.score = std::numeric_limits<double>::infinity();
    pred.certainty = std::numeric_limits<double>::infinity();
    pred.initially_known = true;
    return pred;
}

Prediction to_prediction(const Candidate& cand, int iteration) {
    Prediction pred;
    pred.query_index = cand.query_index;
    pred.candidates = cand.keywords;
    pred.score = cand.score;
    pred.certainty = cand.certainty;
    pred.iteration_promoted = iteration;
    return pred;
}

}  // namespace

double score(const SubMatrices& sub, std::size_t td, std::size_t kw, Norm norm) {
    require(td < sub.l && kw < sub.m, "score indices out of range");
    return to_score(distance(sub.kw_side.data() + kw * sub.signature_len,
                             sub.td_side.data() + td * sub.signature_len, sub.signature_len,
                             norm));
}

double certainty_from_scores(std::span<const double> scores) {
    require(!scores.empty(), "certainty requires at least one score");
    if (scores.size() == 1) return std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    double second = -std::numeric_limits<double>::infinity();
    for (double s : scores) {
        if (s > best) {
            second = best;
            best = s;
        } else if (s > second) {
            second = s;
        }
    }
    return best - second;
}

std::vector<Prediction> base_score_attack(const SubMatrices& sub, const Vocabulary& vocab,
                                          const ObservedQueries& observed,
                                          const AttackConfig& cfg) {
    require(!sub.known_order.empty(), "the score attack needs k >= 1 known queries");
    const std::size_t l = observed.query_count();

    std::vector<bool> is_known(l, false);
    std::vector<Prediction> predictions;
    predictions.reserve(l);
    for (const auto& kq : sub.known_order) {
        if (is_known[kq.query_index]) continue;
        is_known[kq.query_index] = true;
        predictions.push_back(known_prediction(kq, vocab));
    }

    std::vector<std::uint32_t> unknown;
    for (std::uint32_t qi = 0; qi < l; ++qi)
        if (!is_known[qi]) unknown.push_back(qi);

    for (const auto& cand : score_unknown(sub, unknown, cfg))
        predictions.push_back(to_prediction(cand, -1));

    std::sort(predictions.begin(), predictions.end(),
              [](const Prediction& a, const Prediction& b) {
                  return a.query_index < b.query_index;
              });
    return predictions;
}

std::vector<Prediction> refined_score_attack(const CoocTensor& c_kw, const CoocTensor& c_td,
                                             const Vocabulary& vocab,
                                             const ObservedQueries& observed,
                                             const AttackConfig& cfg) {
    require(cfg.ref_speed >= 1, "refinement speed must be at least 1");
    require(!observed.known.empty(), "the refined score attack needs k >= 1 known queries");
    const std::size_t l = observed.query_count();

    std::vector<Prediction> predictions(l);
    std::vector<bool> is_known(l, false);
    std::vector<KnownQuery> known = observed.known;
    for (const auto& kq : known) {
        is_known[kq.query_index] = true;
        predictions[kq.query_index] = known_prediction(kq, vocab);
    }

    for (int iteration = 1;; ++iteration) {
        std::vector<std::uint32_t> unknown;
        for (std::uint32_t qi = 0; qi < l; ++qi)
            if (!is_known[qi]) unknown.push_back(qi);

        SubMatrices sub = project_submatrices(c_kw, c_td, known, vocab, observed, cfg.workers);
        auto candidates = score_unknown(sub, unknown, cfg);

        bool final_round = unknown.size() < cfg.ref_speed;
        std::vector<std::size_t> pool;  // candidate slots eligible for promotion
        if (!final_round) {
            for (std::size_t u = 0; u < candidates.size(); ++u)
                if (candidates[u].promotable) pool.push_back(u);
            // With clustering, refinement stops once fewer than ref_speed
            // single-point clusters remain.
            if (pool.size() < cfg.ref_speed) final_round = true;
        }

        if (final_round) {
            for (const auto& cand : candidates)
                predictions[cand.query_index] = to_prediction(cand, -1);
            break;
        }

        std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
            if (candidates[a].certainty != candidates[b].certainty)
                return candidates[a].certainty > candidates[b].certainty;
            return candidates[a].query_index < candidates[b].query_index;
        });
        pool.resize(cfg.ref_speed);
        for (std::size_t slot : pool) {
            const auto& cand = candidates[slot];
            predictions[cand.query_index] = to_prediction(cand, iteration);
            is_known[cand.query_index] = true;
            known.push_back({cand.query_index, vocab.words[cand.keywords.front()]});
        }
    }
    return predictions;
}

void write_prediction_csv(std::span<const Prediction> predictions,
                          const ObservedQueries& observed, const Vocabulary& vocab,
                          const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) fail("cannot open prediction dump for writing: ", file.string());
    out << "trapdoor_id,predicted_keywords,score,certainty,iteration_promoted,is_initially_known\n";
    char buf[64];
    for (const auto& pred : predictions) {
        out << observed.trapdoors[pred.query_index] << ',';
        for (std::size_t i = 0; i < pred.candidates.size(); ++i) {
            if (i) out << '|';
            out << vocab.words[pred.candidates[i]];
        }
        out << ',';
        if (std::isfinite(pred.score)) {
            std::snprintf(buf, sizeof(buf), "%.9g", pred.score);
            out << buf;
        }
        out << ',';
        if (std::isfinite(pred.certainty)) {
            std::snprintf(buf, sizeof(buf), "%.9g", pred.certainty);
            out << buf;
        }
        out << ',';
        if (pred.iteration_promoted >= 0) out << pred.iteration_promoted;
        out << ',' << (pred.initially_known ? 1 : 0) << '\n';
    }
    if (!out) fail("error while writing prediction dump: ", file.string());
}

}  // namespace sseatk
