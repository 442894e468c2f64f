#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "sseatk/index.hpp"

namespace sseatk {

// A correct (trapdoor, keyword) pair the attacker holds.
struct KnownQuery {
    std::uint32_t query_index;  // position of the trapdoor in Q
    std::string keyword;
};

// Everything the attacker observes: trapdoors, access patterns and known
// pairs. Deliberately excludes the underlying keywords.
struct ObservedQueries {
    std::vector<std::string> trapdoors;            // Q, unique opaque tokens
    std::vector<std::vector<std::uint32_t>> responses;  // R_td as document rows
    std::vector<KnownQuery> known;                 // KnownQ

    std::size_t query_count() const { return trapdoors.size(); }
};

// Observed queries plus the hidden truth map. Attack entry points take
// ObservedQueries only; the truth is read by the harness accuracy scorer.
struct QueryLog {
    ObservedQueries observed;
    std::vector<std::string> truth;  // underlying keyword per query
};

enum class DistributionKind { uniform, zipfian, inv_zipfian };

struct QueryDistribution {
    DistributionKind kind = DistributionKind::uniform;
    double s = 1.0;  // fixed at 1 for (inv-)zipfian
};

const char* to_string(DistributionKind kind);

// P(rank k of N). Uniform: 1/N. Zipfian: k^-1/H_N. Inverted zipfian:
// (N-k+1)^-1/H_N.
double pmf(const QueryDistribution& dist, std::size_t rank, std::size_t n);

// Draws l distinct underlying keywords (weights pmf over frequency ranks,
// sequential rejection), assigns fresh random trapdoor tokens and computes
// responses from the served index columns. Rank r = vocabulary position r-1.
QueryLog sample_queries(const IndexMatrix& index_real, const QueryDistribution& dist,
                        std::size_t l, std::uint64_t seed);

enum class KnownPolicy { uniform, top_quartile };

const char* to_string(KnownPolicy policy);

// Fills log.observed.known with k truth pairs. uniform: drawn from all
// queries; top_quartile: drawn from the ceil(l/4) largest-response queries.
// When eligible_keywords is given (the attacker vocabulary), only queries
// whose underlying keyword it contains are candidates, matching the KnownQ
// definition over the vocabulary intersection.
QueryLog select_known_queries(QueryLog log, std::size_t k, KnownPolicy policy,
                              std::uint64_t seed,
                              const std::unordered_set<std::string>* eligible_keywords = nullptr);

// Order-d trapdoor co-occurrence tensor from the observed responses, divided
// by n_divisor (true n_real, or the estimate_n_real output for a traffic
// observer).
CoocTensor trapdoor_cooccurrence(const ObservedQueries& observed, std::size_t n_divisor,
                                 std::size_t order, const CoocOptions& opts = {});

// JSON-lines replay file; redacted drops the truth map.
void save_query_log(const QueryLog& log, const std::filesystem::path& file, bool redacted);
QueryLog load_query_log(const std::filesystem::path& file);

}  // namespace sseatk
