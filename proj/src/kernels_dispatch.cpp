#include "kernels_impl.hpp"

namespace ffsim {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

} // namespace

const BatchKernels* avx2_batch() {
    if (!cpu_has_avx2()) {
        return nullptr;
    }
    return avx2_batch_impl();
}

const BatchKernels* select_batch(std::string_view name) {
    if (name == "scalar") {
        return &scalar_batch();
    }
    if (name == "avx2") {
        return avx2_batch();
    }
    if (name == "auto") {
        const BatchKernels* v = avx2_batch();
        return v ? v : &scalar_batch();
    }
    return nullptr;
}

std::vector<std::string> available_backends() {
    std::vector<std::string> names = {"scalar"};
    if (avx2_batch()) {
        names.emplace_back("avx2");
    }
    names.emplace_back("auto");
    return names;
}

} // namespace ffsim
