#include "gu/profile.hpp"

#include <atomic>
#include <fstream>
#include <string>

namespace gu {

std::string_view mem_probe_name(MemProbe probe) {
    switch (probe) {
        case MemProbe::AllocCounting: return "alloc_count";
        case MemProbe::ResidentSize: return "resident_size";
        case MemProbe::None: return "none";
    }
    return "?";
}

namespace memprobe {

namespace {
std::atomic<bool> hooks_active{false};
std::atomic<std::int64_t> live{0};
std::atomic<std::int64_t> peak{0};
} // namespace

void register_alloc_hooks() { hooks_active.store(true, std::memory_order_relaxed); }

bool alloc_hooks_active() { return hooks_active.load(std::memory_order_relaxed); }

void on_alloc(std::size_t bytes) {
    std::int64_t now = live.fetch_add(static_cast<std::int64_t>(bytes),
                                      std::memory_order_relaxed) +
                       static_cast<std::int64_t>(bytes);
    std::int64_t prev = peak.load(std::memory_order_relaxed);
    while (now > prev && !peak.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
    }
}

void on_free(std::size_t bytes) {
    live.fetch_sub(static_cast<std::int64_t>(bytes), std::memory_order_relaxed);
}

std::int64_t live_bytes() { return live.load(std::memory_order_relaxed); }

std::int64_t capture_baseline() {
    std::int64_t now = live.load(std::memory_order_relaxed);
    peak.store(now, std::memory_order_relaxed);
    return now;
}

std::int64_t peak_since(std::int64_t baseline_marker) {
    return peak.load(std::memory_order_relaxed) - baseline_marker;
}

std::int64_t resident_peak_bytes() {
    std::ifstream status("/proc/self/status");
    std::string line;
    while (std::getline(status, line)) {
        if (line.rfind("VmHWM:", 0) == 0) {
            std::int64_t kb = std::stoll(line.substr(6));
            return kb * 1024;
        }
    }
    return -1;
}

} // namespace memprobe

namespace detail {

ProfileScope::ProfileScope() {
    accounting = memprobe::alloc_hooks_active();
    if (accounting)
        marker = memprobe::capture_baseline();
    else
        rss_before = memprobe::resident_peak_bytes();
    start = std::chrono::steady_clock::now();
}

void ProfileScope::finish(double& wall_seconds, std::int64_t& peak_bytes, MemProbe& probe) {
    auto end = std::chrono::steady_clock::now();
    wall_seconds = std::chrono::duration<double>(end - start).count();
    if (accounting) {
        peak_bytes = memprobe::peak_since(marker);
        probe = MemProbe::AllocCounting;
    } else {
        std::int64_t after = memprobe::resident_peak_bytes();
        if (rss_before >= 0 && after >= 0) {
            peak_bytes = after - rss_before;
            probe = MemProbe::ResidentSize;
        } else {
            peak_bytes = 0;
            probe = MemProbe::None;
        }
    }
    if (peak_bytes < 0) peak_bytes = 0;
}

} // namespace detail

} // namespace gu
