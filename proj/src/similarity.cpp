#include "sseatk/similarity.hpp"

#include <cmath>

#include "sseatk/common.hpp"
#include "sseatk/parallel.hpp"

namespace sseatk {

namespace {

void check_nonempty(const Corpus& d1, const Corpus& d2) {
    require(d1.size() > 0 && d2.size() > 0,
            "similarity is undefined for empty document sets (|d1|=", d1.size(),
            ", |d2|=", d2.size(), ")");
}

}  // namespace

std::vector<double> sim_matrix(const Corpus& d1, const Corpus& d2, const Vocabulary& vocab) {
    check_nonempty(d1, d2);
    const IndexMatrix a = build_index(d1, vocab);
    const IndexMatrix b = build_index(d2, vocab);
    const std::size_t m = vocab.size();
    const double inv1 = 1.0 / static_cast<double>(d1.size());
    const double inv2 = 1.0 / static_cast<double>(d2.size());

    std::vector<double> diff(m * m);
    parallel_chunks(m, 8, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                double v =
                    static_cast<double>(i == j ? a.columns[i].count()
                                               : BitVector::and_count(a.columns[i], a.columns[j])) *
                        inv1 -
                    static_cast<double>(i == j ? b.columns[i].count()
                                               : BitVector::and_count(b.columns[i], b.columns[j])) *
                        inv2;
                diff[i * m + j] = v;
                diff[j * m + i] = v;
            }
        }
    });
    return diff;
}

SimilarityReport epsilon_similarity(const Corpus& d1, const Corpus& d2,
                                    const Vocabulary& vocab) {
    check_nonempty(d1, d2);
    const IndexMatrix a = build_index(d1, vocab);
    const IndexMatrix b = build_index(d2, vocab);
    const std::size_t m = vocab.size();
    const double inv1 = 1.0 / static_cast<double>(d1.size());
    const double inv2 = 1.0 / static_cast<double>(d2.size());

    // Frobenius norm accumulated per fixed-size row chunk; chunk partials are
    // reduced in chunk order so the result is worker-count independent.
    const std::size_t chunk = 8;
    const std::size_t n_chunks = (m + chunk - 1) / chunk;
    std::vector<double> partial(n_chunks, 0.0);
    parallel_chunks(m, chunk, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        double sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            double d = static_cast<double>(a.columns[i].count()) * inv1 -
                       static_cast<double>(b.columns[i].count()) * inv2;
            sum += d * d;  // diagonal, counted once
            for (std::size_t j = i + 1; j < m; ++j) {
                double v = static_cast<double>(BitVector::and_count(a.columns[i], a.columns[j])) *
                               inv1 -
                           static_cast<double>(BitVector::and_count(b.columns[i], b.columns[j])) *
                               inv2;
                sum += 2.0 * v * v;  // both triangles
            }
        }
        partial[c] = sum;
    });
    double total = 0.0;
    for (double s : partial) total += s;

    SimilarityReport report;
    report.epsilon = std::sqrt(total);
    report.vocab_size = m;

    std::size_t present = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (a.columns[i].count() > 0) ++present;
    report.vocab_overlap = m == 0 ? 0.0 : static_cast<double>(present) / static_cast<double>(m);
    return report;
}

double vocabulary_overlap(const Vocabulary& k_ref, const Vocabulary& k_other) {
    if (k_ref.size() == 0) return 0.0;
    std::size_t shared = 0;
    for (const auto& w : k_ref.words)
        if (k_other.contains(w)) ++shared;
    return static_cast<double>(shared) / static_cast<double>(k_ref.size());
}

}  // namespace sseatk
