#include "sseatk/index.hpp"

#include <atomic>
#include <cstring>
#include <fstream>

#include "sseatk/common.hpp"
#include "sseatk/parallel.hpp"

namespace sseatk {

std::vector<std::uint32_t> IndexMatrix::column_counts() const {
    std::vector<std::uint32_t> counts(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
        counts[c] = static_cast<std::uint32_t>(columns[c].count());
    return counts;
}

std::uint64_t IndexMatrix::total_entries() const {
    std::uint64_t total = 0;
    for (const auto& col : columns) total += col.count();
    return total;
}

std::vector<std::vector<std::uint32_t>> IndexMatrix::rows() const {
    std::vector<std::vector<std::uint32_t>> rows(n_docs);
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::uint32_t doc : columns[c].ones()) rows[doc].push_back(static_cast<std::uint32_t>(c));
    for (auto& r : rows) std::sort(r.begin(), r.end());
    return rows;
}

IndexMatrix build_index(const Corpus& corpus, const Vocabulary& vocab) {
    IndexMatrix index;
    index.n_docs = corpus.size();
    index.vocab = vocab;
    index.columns.assign(vocab.size(), BitVector(corpus.size()));

    // corpus lexicon id -> vocabulary position (npos when unranked)
    std::vector<std::uint32_t> vocab_pos(corpus.keywords.size(), Vocabulary::npos);
    for (std::uint32_t id = 0; id < corpus.keywords.size(); ++id)
        vocab_pos[id] = vocab.position(corpus.keywords[id]);

    for (std::size_t d = 0; d < corpus.size(); ++d)
        for (std::uint32_t id : corpus.docs[d]) {
            std::uint32_t pos = vocab_pos[id];
            if (pos != Vocabulary::npos) index.columns[pos].set(d);
        }
    return index;
}

namespace {

// Canonical ascending-combination increments for one document's keyword list.
void enumerate_combinations(const std::vector<std::uint32_t>& kws, std::size_t depth,
                            std::size_t order, std::size_t start, std::size_t prefix,
                            std::size_t dim, std::vector<std::atomic<std::uint32_t>>& counts) {
    if (depth == order) {
        counts[prefix].fetch_add(1, std::memory_order_relaxed);
        return;
    }
    const std::size_t need = order - depth;
    for (std::size_t i = start; i + need <= kws.size(); ++i)
        enumerate_combinations(kws, depth + 1, order, i + 1, prefix * dim + kws[i], dim,
                               counts);
}

std::size_t checked_cells(std::size_t dim, std::size_t order, std::size_t bytes_per_cell,
                          std::size_t budget) {
    long double cells = 1.0L;
    for (std::size_t i = 0; i < order; ++i) cells *= static_cast<long double>(dim);
    long double required = cells * static_cast<long double>(bytes_per_cell);
    if (required > static_cast<long double>(budget))
        fail("order-", order, " co-occurrence tensor over ", dim, " keywords requires ",
             static_cast<unsigned long long>(required),
             " bytes, exceeding the memory budget of ", budget, " bytes");
    return static_cast<std::size_t>(cells);
}

}  // namespace

CoocTensor cooccurrence_from_columns(const std::vector<BitVector>& columns,
                                     std::size_t n_rows, std::size_t order,
                                     std::size_t n_divisor, const CoocOptions& opts) {
    require(order >= 2, "co-occurrence order must be at least 2, got ", order);
    require(n_divisor > 0, "co-occurrence divisor must be positive");
    const std::size_t m = columns.size();
    const double inv_n = 1.0 / static_cast<double>(n_divisor);

    if (order == 2) {
        checked_cells(m, 2, sizeof(double), opts.memory_budget_bytes);
        CoocTensor tensor(2, m, n_divisor);
        parallel_chunks(
            m, 8,
            [&](std::size_t, std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i) {
                    tensor.at2(i, i) = static_cast<double>(columns[i].count()) * inv_n;
                    for (std::size_t j = i + 1; j < m; ++j) {
                        double v =
                            static_cast<double>(BitVector::and_count(columns[i], columns[j])) *
                            inv_n;
                        tensor.at2(i, j) = v;
                        tensor.at2(j, i) = v;
                    }
                }
            },
            opts.workers);
        return tensor;
    }

    // Higher orders: per-row combination enumeration into integer counts
    // (atomic adds commute exactly, so results are worker-count independent),
    // then dense symmetrization. Cells with repeated indices reduce to the
    // co-occurrence of their distinct index set, taken from the next lower
    // order.
    const std::size_t cells =
        checked_cells(m, order, sizeof(double) + sizeof(std::uint32_t),
                      opts.memory_budget_bytes);
    CoocTensor lower =
        cooccurrence_from_columns(columns, n_rows, order - 1, n_divisor, opts);

    std::vector<std::vector<std::uint32_t>> rows(n_rows);
    for (std::size_t c = 0; c < m; ++c)
        for (std::uint32_t r : columns[c].ones()) rows[r].push_back(static_cast<std::uint32_t>(c));

    std::vector<std::atomic<std::uint32_t>> counts(cells);
    parallel_chunks(
        n_rows, 256,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r)
                enumerate_combinations(rows[r], 0, order, 0, 0, m, counts);
        },
        opts.workers);

    CoocTensor tensor(order, m, n_divisor);
    auto out = tensor.values();
    parallel_chunks(
        m, 1,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            std::vector<std::size_t> idx(order), sorted(order);
            for (std::size_t first = lo; first < hi; ++first) {
                idx.assign(order, 0);
                idx[0] = first;
                const std::size_t block = cells / m;
                std::size_t lin = first * block;
                for (std::size_t cell = 0; cell < block; ++cell, ++lin) {
                    sorted.assign(idx.begin(), idx.end());
                    std::sort(sorted.begin(), sorted.end());
                    bool strict = true;
                    for (std::size_t a = 1; a < order; ++a)
                        if (sorted[a] == sorted[a - 1]) strict = false;
                    if (strict) {
                        out[lin] = static_cast<double>(
                                       counts[tensor.linear(sorted)].load(
                                           std::memory_order_relaxed)) *
                                   inv_n;
                    } else {
                        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
                        if (sorted.size() == 1) {
                            out[lin] =
                                static_cast<double>(columns[sorted[0]].count()) * inv_n;
                        } else {
                            // Pad with repeats of the last index to the lower
                            // order; the lower tensor already resolves them.
                            while (sorted.size() < order - 1) sorted.push_back(sorted.back());
                            out[lin] = lower.at(sorted);
                        }
                    }
                    // Advance the multi-index within the fixed first axis.
                    for (std::size_t a = order; a-- > 1;) {
                        if (++idx[a] < m) break;
                        idx[a] = 0;
                    }
                }
            }
        },
        opts.workers);
    return tensor;
}

CoocTensor cooccurrence(const IndexMatrix& index, std::size_t order,
                        const CoocOptions& opts) {
    return cooccurrence_from_columns(index.columns, index.n_docs, order, index.n_docs,
                                     opts);
}

// --- cache -------------------------------------------------------------------

namespace {
std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}
constexpr std::uint64_t kFnvSeed = 0xcbf29ce484222325ULL;
}  // namespace

std::uint64_t corpus_hash(const Corpus& corpus) {
    std::uint64_t h = kFnvSeed;
    h = fnv1a(h, corpus.name.data(), corpus.name.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        h = fnv1a(h, corpus.doc_ids[d].data(), corpus.doc_ids[d].size());
        for (std::uint32_t id : corpus.docs[d]) {
            const std::string& kw = corpus.keywords[id];
            h = fnv1a(h, kw.data(), kw.size());
            h = fnv1a(h, "\x1f", 1);
        }
        h = fnv1a(h, "\x1e", 1);
    }
    return h;
}

std::uint64_t vocab_hash(const Vocabulary& vocab) {
    std::uint64_t h = kFnvSeed;
    for (const auto& w : vocab.words) {
        h = fnv1a(h, w.data(), w.size());
        h = fnv1a(h, "\x1f", 1);
    }
    return h;
}

std::string tensor_cache_name(std::uint64_t corpus_h, std::uint64_t vocab_h,
                              std::size_t order) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "cooc-%016llx-%016llx-d%zu.tensor",
                  static_cast<unsigned long long>(corpus_h),
                  static_cast<unsigned long long>(vocab_h), order);
    return buf;
}

void save_tensor(const CoocTensor& tensor, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) fail("cannot open tensor cache for writing: ", file.string());
    const char magic[8] = {'s', 's', 'a', 't', 'k', 'T', 'v', '1'};
    std::uint64_t meta[3] = {tensor.order(), tensor.dim(), tensor.n_basis()};
    out.write(magic, sizeof(magic));
    out.write(reinterpret_cast<const char*>(meta), sizeof(meta));
    out.write(reinterpret_cast<const char*>(tensor.values().data()),
              static_cast<std::streamsize>(tensor.values().size() * sizeof(double)));
    if (!out) fail("error while writing tensor cache: ", file.string());
}

CoocTensor load_tensor(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail("cannot open tensor cache: ", file.string());
    char magic[8];
    std::uint64_t meta[3];
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(meta), sizeof(meta));
    if (!in || std::memcmp(magic, "ssatkTv1", 8) != 0)
        fail("unrecognized tensor cache header in ", file.string());
    CoocTensor tensor(meta[0], meta[1], meta[2]);
    in.read(reinterpret_cast<char*>(tensor.values().data()),
            static_cast<std::streamsize>(tensor.values().size() * sizeof(double)));
    if (!in) fail("truncated tensor cache: ", file.string());
    return tensor;
}

}  // namespace sseatk
