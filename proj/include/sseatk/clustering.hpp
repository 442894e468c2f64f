#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sseatk {

// Prefix of a descending score list delimited by the maximum consecutive gap
// among the top max_size+1 scores. certainty is that gap.
struct ClusterCut {
    std::size_t size = 1;
    double certainty = 0.0;
};

// O(max_size) best-candidate extraction; inspects only scores[0..max_size].
// Ties between equal gaps resolve to the smallest cluster.
ClusterCut best_candidate_cluster(std::span<const double> scores_desc,
                                  std::size_t max_size);

// One state of the naive agglomeration: the partition after i merges (clusters
// hold indices into sorted_scores) and the level (merge distance) producing it.
struct LinkageStep {
    std::vector<std::vector<std::size_t>> clusters;
    double level = 0.0;
};

struct LinkageSequence {
    std::vector<double> sorted_scores;  // canonical descending order
    std::vector<LinkageStep> steps;     // n partitions, singletons first
};

// Naive single-linkage clustering over one-dimensional scores. Cubic oracle
// used by tests to validate best_candidate_cluster; capped at 200 points.
// Ties in the minimal inter-cluster distance merge the pair furthest down the
// score order.
LinkageSequence naive_single_linkage(std::span<const double> scores);

}  // namespace sseatk
