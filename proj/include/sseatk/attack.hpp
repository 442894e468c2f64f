#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sseatk/corpus.hpp"
#include "sseatk/index.hpp"
#include "sseatk/sse.hpp"

namespace sseatk {

// Distances are clamped here before -ln so that exact signature matches
// (possible when the attacker set equals the indexed set) stay finite without
// disturbing any ranking.
inline constexpr double kDistFloor = 1e-20;

enum class Norm { l2, l1, linf };

const char* to_string(Norm norm);

enum class AttackerModel { honest_server, traffic_observer };

struct AttackConfig {
    Norm norm = Norm::l2;
    std::size_t ref_speed = 10;
    std::size_t order = 2;
    AttackerModel attacker_model = AttackerModel::honest_server;
    std::size_t max_cluster_size = 0;  // 0 disables cluster predictions
    unsigned workers = 0;
};

// Known-query projections of the co-occurrence tensors. Each keyword or
// trapdoor is described by its signature: the co-occurrence values against
// every (order-1)-tuple of known queries, tuple axes ordered
// lexicographically by known-query index. For order 2 these are the classic
// k-column sub-matrices.
struct SubMatrices {
    std::size_t order = 2;
    std::size_t m = 0;              // keywords (rows of kw_side)
    std::size_t l = 0;              // trapdoors (rows of td_side)
    std::size_t signature_len = 0;  // k^(order-1)
    std::vector<double> kw_side;    // m x signature_len, row-major
    std::vector<double> td_side;    // l x signature_len, row-major
    std::vector<KnownQuery> known_order;

    std::span<const double> keyword_signature(std::size_t i) const {
        return {kw_side.data() + i * signature_len, signature_len};
    }
    std::span<const double> trapdoor_signature(std::size_t j) const {
        return {td_side.data() + j * signature_len, signature_len};
    }
};

struct Prediction {
    std::uint32_t query_index = 0;
    std::vector<std::uint32_t> candidates;  // vocabulary positions, best first
    double score = 0.0;
    double certainty = 0.0;
    int iteration_promoted = -1;  // refinement iteration, -1 if never promoted
    bool initially_known = false;
};

// Document-count estimate for the traffic-observer model:
// mean over known pairs of |R_td| / |D_sim(kw)|, scaled by n_sim. Pairs whose
// keyword does not occur in d_sim are skipped.
double estimate_n_real(const ObservedQueries& observed, const Corpus& d_sim);

SubMatrices project_submatrices(const CoocTensor& c_kw, const CoocTensor& c_td,
                                const std::vector<KnownQuery>& known,
                                const Vocabulary& vocab, const ObservedQueries& observed,
                                unsigned workers = 0);

// -ln(max(||kw_sig - td_sig||, kDistFloor)).
double score(const SubMatrices& sub, std::size_t td, std::size_t kw, Norm norm = Norm::l2);

// Best minus second-best score; +inf when only one candidate exists.
double certainty_from_scores(std::span<const double> scores);

// Scores every non-known trapdoor against all keywords and keeps the argmax
// (or the best-candidate cluster when cfg.max_cluster_size > 0). Known
// trapdoors are passed through with their known keyword.
std::vector<Prediction> base_score_attack(const SubMatrices& sub, const Vocabulary& vocab,
                                          const ObservedQueries& observed,
                                          const AttackConfig& cfg = {});

// Iterative refinement: per round, score all unknown trapdoors, then promote
// the ref_speed most certain predictions into the known set and extend both
// sub-matrices, until fewer than ref_speed unknown queries (or, with
// clustering, fewer than ref_speed single-point clusters) remain.
std::vector<Prediction> refined_score_attack(const CoocTensor& c_kw, const CoocTensor& c_td,
                                             const Vocabulary& vocab,
                                             const ObservedQueries& observed,
                                             const AttackConfig& cfg = {});

void write_prediction_csv(std::span<const Prediction> predictions,
                          const ObservedQueries& observed, const Vocabulary& vocab,
                          const std::filesystem::path& file);

}  // namespace sseatk
