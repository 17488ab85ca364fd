#include "lockleak/wordops.hpp"

#include <atomic>
#include <cstring>

namespace lockleak {

namespace {
std::atomic<const WordOps*> g_forced{nullptr};

const WordOps* pick_auto() {
    if (const WordOps* v = wordops_avx2()) return v;
    return &wordops_scalar();
}
} // namespace

const WordOps& wordops() {
    if (const WordOps* f = g_forced.load(std::memory_order_relaxed)) return *f;
    static const WordOps* chosen = pick_auto();
    return *chosen;
}

bool set_wordops_backend(const char* name) {
    if (!name || std::strcmp(name, "auto") == 0) {
        g_forced.store(nullptr, std::memory_order_relaxed);
        return true;
    }
    if (std::strcmp(name, "scalar") == 0) {
        g_forced.store(&wordops_scalar(), std::memory_order_relaxed);
        return true;
    }
    if (std::strcmp(name, "avx2") == 0) {
        if (const WordOps* v = wordops_avx2()) {
            g_forced.store(v, std::memory_order_relaxed);
            return true;
        }
        return false;
    }
    return false;
}

} // namespace lockleak
