#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sseatk {

// Worker count used when a caller passes 0. Set once by the CLI (--workers).
unsigned default_workers();
void set_default_workers(unsigned n);

// Runs body(chunk_index, begin, end) over [0,n) split into fixed-size chunks.
// Chunk boundaries depend only on n and chunk_size, never on the worker
// count, so any output written per index or per chunk slot is bit-identical
// for 1 or 64 threads.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t chunk_size, Body&& body,
                     unsigned workers = 0) {
    if (n == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
    if (workers == 0) workers = default_workers();
    if (workers > n_chunks) workers = static_cast<unsigned>(n_chunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            std::size_t lo = c * chunk_size;
            std::size_t hi = lo + chunk_size < n ? lo + chunk_size : n;
            body(c, lo, hi);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= n_chunks || failed.load(std::memory_order_relaxed)) return;
                std::size_t lo = c * chunk_size;
                std::size_t hi = lo + chunk_size < n ? lo + chunk_size : n;
                try {
                    body(c, lo, hi);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Per-index convenience wrapper.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned workers = 0) {
    std::size_t chunk = n / 64 + 1;
    parallel_chunks(
        n, chunk,
        [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        },
        workers);
}

}  // namespace sseatk
