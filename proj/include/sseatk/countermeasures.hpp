#pragma once

#include <cstdint>

#include "sseatk/index.hpp"

namespace sseatk {

enum class CountermeasureKind { none, padding, obfuscation };

const char* to_string(CountermeasureKind kind);

struct CountermeasureConfig {
    CountermeasureKind kind = CountermeasureKind::none;
    std::size_t n_pad = 500;
    // Obfuscation: each true entry is kept with probability p, each absent
    // entry is added with probability q. The reference parameter pair
    // (0.88703, 0.04416) minimizes overhead; it only makes sense with p
    // read as the retention rate and q as the addition rate.
    double p = 0.88703;
    double q = 0.04416;
    std::uint64_t seed = 0;
};

struct PaddingStats {
    std::uint64_t entries_before = 0;
    std::uint64_t entries_after = 0;
    std::size_t saturated_columns = 0;  // columns padded to all documents

    double overhead() const {
        return entries_before == 0
                   ? 0.0
                   : static_cast<double>(entries_after - entries_before) /
                         static_cast<double>(entries_before);
    }
};

// Adds fake entries to uniformly chosen non-matching documents until every
// column count reaches the next multiple of n_pad (capped at n documents).
// Real entries are never removed. Column RNG streams are split by column
// index, so the result does not depend on the worker count.
IndexMatrix pad_index(const IndexMatrix& index, std::size_t n_pad, std::uint64_t seed,
                      PaddingStats* stats = nullptr);

// Keeps each true entry with probability p and flips each absent entry on
// with probability q, independently per entry.
IndexMatrix obfuscate_index(const IndexMatrix& index, double p, double q,
                            std::uint64_t seed);

IndexMatrix apply_countermeasure(const IndexMatrix& index, const CountermeasureConfig& cfg,
                                 PaddingStats* stats = nullptr);

}  // namespace sseatk
