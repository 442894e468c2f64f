#pragma once

#include <vector>

#include "sseatk/corpus.hpp"
#include "sseatk/index.hpp"

namespace sseatk {

struct SimilarityReport {
    double epsilon = 0.0;        // Frobenius norm of the co-frequency difference
    double vocab_overlap = 0.0;  // fraction of the vocabulary present in d1
    std::size_t vocab_size = 0;  // vocabulary the matrix was evaluated over
};

// m x m matrix with entry (i,j) = C(d1,kw_i,kw_j)/|d1| - C(d2,kw_i,kw_j)/|d2|.
// Keywords absent from a corpus contribute zero counts.
std::vector<double> sim_matrix(const Corpus& d1, const Corpus& d2, const Vocabulary& vocab);

SimilarityReport epsilon_similarity(const Corpus& d1, const Corpus& d2,
                                    const Vocabulary& vocab);

// |k_ref ∩ k_other| / |k_ref| — the attack accuracy upper bound when k_ref is
// the queryable vocabulary and k_other the attacker one.
double vocabulary_overlap(const Vocabulary& k_ref, const Vocabulary& k_other);

}  // namespace sseatk
