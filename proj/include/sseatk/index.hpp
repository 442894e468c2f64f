#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sseatk/corpus.hpp"

namespace sseatk {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    void set(std::size_t i) { words_[i >> 6] |= 1ull << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    static std::size_t and_count(const BitVector& a, const BitVector& b) {
        std::size_t c = 0;
        for (std::size_t w = 0; w < a.words_.size(); ++w)
            c += std::popcount(a.words_[w] & b.words_[w]);
        return c;
    }

    std::vector<std::uint32_t> ones() const {
        std::vector<std::uint32_t> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Binary document-keyword incidence matrix, stored column-major: one packed
// bit column per vocabulary position, indexed by document row.
struct IndexMatrix {
    std::size_t n_docs = 0;
    std::vector<BitVector> columns;
    Vocabulary vocab;

    std::size_t n() const { return n_docs; }
    std::size_t m() const { return columns.size(); }

    std::vector<std::uint32_t> column_counts() const;
    std::uint64_t total_entries() const;

    // Per-document sorted lists of present vocabulary positions.
    std::vector<std::vector<std::uint32_t>> rows() const;
};

IndexMatrix build_index(const Corpus& corpus, const Vocabulary& vocab);

// Dense fully-symmetric order-d tensor of relative co-occurrence
// frequencies; entry (j1..jd) is |docs containing all of kw_j1..kw_jd| / n.
class CoocTensor {
public:
    CoocTensor() = default;
    CoocTensor(std::size_t order, std::size_t dim, std::size_t n_basis)
        : order_(order), dim_(dim), n_basis_(n_basis) {
        std::size_t cells = 1;
        for (std::size_t i = 0; i < order; ++i) cells *= dim;
        values_.assign(cells, 0.0);
    }

    std::size_t order() const { return order_; }
    std::size_t dim() const { return dim_; }
    std::size_t n_basis() const { return n_basis_; }

    double at2(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }
    double& at2(std::size_t i, std::size_t j) { return values_[i * dim_ + j]; }

    double at(std::span<const std::size_t> idx) const { return values_[linear(idx)]; }
    double& at(std::span<const std::size_t> idx) { return values_[linear(idx)]; }

    std::size_t linear(std::span<const std::size_t> idx) const {
        std::size_t lin = 0;
        for (std::size_t a : idx) lin = lin * dim_ + a;
        return lin;
    }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return {values_.data(), values_.size()}; }

private:
    std::size_t order_ = 0;
    std::size_t dim_ = 0;
    std::size_t n_basis_ = 0;
    std::vector<double> values_;
};

struct CoocOptions {
    std::size_t memory_budget_bytes = 6ull << 30;
    unsigned workers = 0;  // 0 = default_workers()
};

CoocTensor cooccurrence(const IndexMatrix& index, std::size_t order,
                        const CoocOptions& opts = {});

// Shared kernel: co-occurrence over arbitrary packed columns (keyword columns
// or trapdoor response columns) with an explicit divisor.
CoocTensor cooccurrence_from_columns(const std::vector<BitVector>& columns,
                                     std::size_t n_rows, std::size_t order,
                                     std::size_t n_divisor, const CoocOptions& opts = {});

// --- optional tensor cache ---------------------------------------------------

std::uint64_t corpus_hash(const Corpus& corpus);
std::uint64_t vocab_hash(const Vocabulary& vocab);
std::string tensor_cache_name(std::uint64_t corpus_h, std::uint64_t vocab_h,
                              std::size_t order);
void save_tensor(const CoocTensor& tensor, const std::filesystem::path& file);
CoocTensor load_tensor(const std::filesystem::path& file);

}  // namespace sseatk
