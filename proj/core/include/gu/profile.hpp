#pragma once

#include <chrono>
#include <cstdint>
#include <string_view>
#include <utility>

namespace gu {

enum class MemProbe { AllocCounting, ResidentSize, None };

std::string_view mem_probe_name(MemProbe probe);

namespace memprobe {

/// Called by the optional allocation-accounting object library; once
/// registered, profile() reports exact operator new/delete traffic.
void register_alloc_hooks();
bool alloc_hooks_active();

void on_alloc(std::size_t bytes);
void on_free(std::size_t bytes);

std::int64_t live_bytes();
/// Peak live bytes since the given baseline was captured.
std::int64_t peak_since(std::int64_t baseline_marker);
std::int64_t capture_baseline();

/// VmHWM from /proc/self/status, in bytes; -1 if unavailable.
std::int64_t resident_peak_bytes();

} // namespace memprobe

template <typename T>
struct Profiled {
    T value;
    double wall_seconds = 0.0;
    std::int64_t peak_bytes = 0;
    MemProbe probe = MemProbe::None;
};

struct ProfiledVoid {
    double wall_seconds = 0.0;
    std::int64_t peak_bytes = 0;
    MemProbe probe = MemProbe::None;
};

namespace detail {

struct ProfileScope {
    std::chrono::steady_clock::time_point start;
    std::int64_t marker = 0;
    std::int64_t rss_before = -1;
    bool accounting = false;

    ProfileScope();
    void finish(double& wall_seconds, std::int64_t& peak_bytes, MemProbe& probe);
};

} // namespace detail

/// Runs the deferred computation and reports wall time plus the peak
/// memory increase observed through the active probe.
template <typename F>
auto profile(F&& run) {
    using R = std::invoke_result_t<F>;
    detail::ProfileScope scope;
    if constexpr (std::is_void_v<R>) {
        std::forward<F>(run)();
        ProfiledVoid out;
        scope.finish(out.wall_seconds, out.peak_bytes, out.probe);
        return out;
    } else {
        Profiled<R> out{std::forward<F>(run)(), 0.0, 0, MemProbe::None};
        scope.finish(out.wall_seconds, out.peak_bytes, out.probe);
        return out;
    }
}

} // namespace gu
