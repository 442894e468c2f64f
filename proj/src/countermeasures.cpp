#include "sseatk/countermeasures.hpp"

#include <atomic>

#include "sseatk/common.hpp"
#include "sseatk/parallel.hpp"
#include "sseatk/rng.hpp"

namespace sseatk {

const char* to_string(CountermeasureKind kind) {
    switch (kind) {
        case CountermeasureKind::none: return "none";
        case CountermeasureKind::padding: return "padding";
        case CountermeasureKind::obfuscation: return "obfuscation";
    }
    return "?";
}

IndexMatrix pad_index(const IndexMatrix& index, std::size_t n_pad, std::uint64_t seed,
                      PaddingStats* stats) {
    require(n_pad >= 1, "padding size must be at least 1");
    const std::size_t n = index.n_docs;

    IndexMatrix padded = index;
    std::atomic<std::size_t> saturated{0};
    parallel_for(padded.m(), [&](std::size_t c) {
        BitVector& col = padded.columns[c];
        const std::size_t count = col.count();
        if (count % n_pad == 0) return;
        std::size_t target = (count / n_pad + 1) * n_pad;
        if (target >= n) {
            target = n;
            saturated.fetch_add(1, std::memory_order_relaxed);
        }
        std::vector<std::uint32_t> zeros;
        zeros.reserve(n - count);
        for (std::uint32_t d = 0; d < n; ++d)
            if (!col.test(d)) zeros.push_back(d);

        Rng rng(mix_seed(seed, c));
        const auto need = static_cast<std::uint32_t>(target - count);
        auto picks = sample_without_replacement(static_cast<std::uint32_t>(zeros.size()),
                                                need, rng);
        for (auto pick : picks) col.set(zeros[pick]);
    });

    if (stats) {
        stats->entries_before = index.total_entries();
        stats->entries_after = padded.total_entries();
        stats->saturated_columns = saturated.load();
    }
    return padded;
}

IndexMatrix obfuscate_index(const IndexMatrix& index, double p, double q,
                            std::uint64_t seed) {
    require(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0,
            "obfuscation rates must be probabilities, got p=", p, " q=", q);
    const std::size_t n = index.n_docs;

    IndexMatrix obfuscated = index;
    parallel_for(obfuscated.m(), [&](std::size_t c) {
        BitVector& col = obfuscated.columns[c];
        Rng rng(mix_seed(seed, c));
        for (std::uint32_t d = 0; d < n; ++d) {
            double x = rng.real();
            if (col.test(d)) {
                if (x >= p) col.reset(d);
            } else {
                if (x < q) col.set(d);
            }
        }
    });
    return obfuscated;
}

IndexMatrix apply_countermeasure(const IndexMatrix& index, const CountermeasureConfig& cfg,
                                 PaddingStats* stats) {
    switch (cfg.kind) {
        case CountermeasureKind::none:
            return index;
        case CountermeasureKind::padding:
            return pad_index(index, cfg.n_pad, cfg.seed, stats);
        case CountermeasureKind::obfuscation:
            return obfuscate_index(index, cfg.p, cfg.q, cfg.seed);
    }
    return index;
}

}  // namespace sseatk
