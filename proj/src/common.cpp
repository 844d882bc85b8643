#include "arena/common.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

namespace arena {

int worker_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("ARENA_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0 && cap < n) n = cap;
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int workers = worker_threads();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char trial[64];
        std::snprintf(trial, sizeof(trial), "%.*g", prec, v);
        if (std::strtod(trial, nullptr) == v) return trial;
    }
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace arena
