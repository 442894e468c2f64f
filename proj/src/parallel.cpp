#include "sseatk/parallel.hpp"

namespace sseatk {

namespace {
std::atomic<unsigned> g_workers{0};
}

unsigned default_workers() {
    unsigned w = g_workers.load(std::memory_order_relaxed);
    if (w) return w;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

void set_default_workers(unsigned n) { g_workers.store(n, std::memory_order_relaxed); }

}  // namespace sseatk
