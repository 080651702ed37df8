#include "slicesim/agents/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace slicesim::agents::kernels {

bool cpu_has_avx2_fma() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const KernelTable* pick_default() {
    const char* env = std::getenv("SLICESIM_KERNELS");
    if (env && std::string(env) == "scalar") return &scalar_table();
    if (avx2_table() && cpu_has_avx2_fma()) return avx2_table();
    return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{pick_default()};
    return table;
}

} // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
    if (name == "scalar") {
        current().store(&scalar_table());
        return true;
    }
    if (name == "avx2" && avx2_table() && cpu_has_avx2_fma()) {
        current().store(avx2_table());
        return true;
    }
    return false;
}

} // namespace slicesim::agents::kernels
