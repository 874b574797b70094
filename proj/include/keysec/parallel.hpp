#pragma once

// Deterministic work splitting. A range is cut into a fixed number of chunks
// regardless of thread count and per-chunk results are combined in chunk
// order, so every reduction returns bit-identical results whether it runs on
// one worker or many.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace keysec {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// map_chunk(begin, end) -> T over [0, count), combined left-to-right with
// combine(acc, chunk_result).
template <class T, class MapChunk, class Combine>
T chunked_reduce(std::uint64_t count, T init, MapChunk map_chunk, Combine combine,
                 int workers = 0) {
    if (count == 0) return init;
    constexpr std::uint64_t kChunks = 64;
    const std::uint64_t chunks = count < kChunks ? count : kChunks;
    const std::uint64_t step = (count + chunks - 1) / chunks;

    std::vector<T> results(chunks, init);
    int n_workers = resolve_workers(workers);
    if (n_workers <= 1 || chunks == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) {
            std::uint64_t b = c * step;
            std::uint64_t e = std::min(count, b + step);
            results[c] = map_chunk(b, e);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::uint64_t c = next.fetch_add(1);
                if (c >= chunks) return;
                std::uint64_t b = c * step;
                std::uint64_t e = std::min(count, b + step);
                results[c] = map_chunk(b, e);
            }
        };
        std::vector<std::thread> pool;
        int spawn = int(std::min<std::uint64_t>(std::uint64_t(n_workers), chunks));
        pool.reserve(std::size_t(spawn));
        for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    T acc = init;
    for (std::uint64_t c = 0; c < chunks; ++c) acc = combine(acc, results[c]);
    return acc;
}

}  // namespace keysec
