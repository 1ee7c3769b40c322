// Global operator new/delete replacements that feed the allocation
// probe. Built as an object library and linked into binaries that want
// exact accounting; gu_core itself never forces the override on
// consumers. Sizes are recovered through malloc_usable_size, so sized
// and unsized deletes agree.

#include "gu/profile.hpp"

#include <cstddef>
#include <cstdlib>
#include <malloc.h>
#include <new>

namespace {

struct HookRegistrar {
    HookRegistrar() { gu::memprobe::register_alloc_hooks(); }
};
HookRegistrar registrar;

void* tracked_alloc(std::size_t size, std::size_t alignment) {
    void* p = alignment > alignof(std::max_align_t)
                  ? std::aligned_alloc(alignment, (size + alignment - 1) / alignment * alignment)
                  : std::malloc(size ? size : 1);
    if (!p) throw std::bad_alloc();
    gu::memprobe::on_alloc(malloc_usable_size(p));
    return p;
}

void tracked_free(void* p) noexcept {
    if (!p) return;
    gu::memprobe::on_free(malloc_usable_size(p));
    std::free(p);
}

} // namespace

void* operator new(std::size_t size) { return tracked_alloc(size, 0); }
void* operator new[](std::size_t size) { return tracked_alloc(size, 0); }
void* operator new(std::size_t size, std::align_val_t align) {
    return tracked_alloc(size, static_cast<std::size_t>(align));
}
void* operator new[](std::size_t size, std::align_val_t align) {
    return tracked_alloc(size, static_cast<std::size_t>(align));
}
void* operator new(std::size_t size, const std::nothrow_t&) noexcept {
    try {
        return tracked_alloc(size, 0);
    } catch (...) {
        return nullptr;
    }
}
void* operator new[](std::size_t size, const std::nothrow_t&) noexcept {
    try {
        return tracked_alloc(size, 0);
    } catch (...) {
        return nullptr;
    }
}

void operator delete(void* p) noexcept { tracked_free(p); }
void operator delete[](void* p) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete(void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::align_val_t) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t, std::align_val_t) noexcept { tracked_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
