#include "sseatk/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sseatk/common.hpp"

namespace sseatk {

ClusterCut best_candidate_cluster(std::span<const double> scores_desc,
                                  std::size_t max_size) {
    require(scores_desc.size() >= 2, "clustering needs at least two scores, got ",
            scores_desc.size());
    require(max_size >= 1 && max_size < scores_desc.size(),
            "max cluster size must lie in [1, ", scores_desc.size() - 1, "], got ",
            max_size);

    ClusterCut cut{1, scores_desc[0] - scores_desc[1]};
    for (std::size_t i = 2; i <= max_size; ++i) {
        double gap = scores_desc[i - 1] - scores_desc[i];
        if (gap > cut.certainty) {
            cut.certainty = gap;
            cut.size = i;
        }
    }
    return cut;
}

namespace {

using Cluster = std::vector<std::size_t>;

double dmin(const std::vector<double>& s, const Cluster& a, const Cluster& b) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : a)
        for (std::size_t j : b) best = std::min(best, std::abs(s[i] - s[j]));
    return best;
}

// Sorted union of two index clusters, used both as merge result and as the
// deterministic tie key (lexicographically larger = further down the scores).
Cluster merged_indices(const Cluster& a, const Cluster& b) {
    Cluster u;
    u.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

}  // namespace

LinkageSequence naive_single_linkage(std::span<const double> scores) {
    require(!scores.empty(), "cannot cluster an empty score list");
    require(scores.size() <= 200, "naive single-linkage oracle is capped at 200 points, got ",
            scores.size());

    LinkageSequence seq;
    seq.sorted_scores.assign(scores.begin(), scores.end());
    std::stable_sort(seq.sorted_scores.begin(), seq.sorted_scores.end(), std::greater<>());
    const auto& s = seq.sorted_scores;
    const std::size_t n = s.size();

    LinkageStep current;
    current.level = 0.0;
    for (std::size_t i = 0; i < n; ++i) current.clusters.push_back({i});
    seq.steps.push_back(current);

    for (std::size_t it = 1; it < n; ++it) {
        auto& clusters = current.clusters;
        std::size_t best_a = 0, best_b = 1;
        double best_d = std::numeric_limits<double>::infinity();
        Cluster best_union;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                double d = dmin(s, clusters[a], clusters[b]);
                if (d > best_d) continue;
                Cluster u = merged_indices(clusters[a], clusters[b]);
                if (d < best_d || std::lexicographical_compare(best_union.begin(),
                                                               best_union.end(), u.begin(),
                                                               u.end())) {
                    best_d = d;
                    best_union = std::move(u);
                    best_a = a;
                    best_b = b;
                }
            }
        }
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_a));
        clusters.push_back(std::move(best_union));
        current.level = best_d;
        seq.steps.push_back(current);
    }
    return seq;
}

}  // namespace sseatk
