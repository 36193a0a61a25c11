#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace metricgeo {

/// Deterministic parallel map over [0, n): the index space is split into
/// fixed chunks independent of the worker count, each chunk produces a
/// partial result, and partials are combined in chunk order. Results are
/// therefore identical for any number of workers, provided `combine` is
/// applied left to right over the same partials.
///
/// map:     (size_t begin, size_t end) -> R        (partial for one chunk)
/// combine: (R& acc, const R& partial) -> void
template <typename R, typename Map, typename Combine>
R parallel_chunked(std::size_t n, R init, Map map, Combine combine,
                   unsigned jobs = 1) {
    if (n == 0) return init;
    if (jobs == 0) jobs = 1;
    // Chunk granularity is fixed; only scheduling depends on `jobs`.
    std::size_t chunk = n / 64 + 1;
    std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<R> partials(nchunks, init);
    if (jobs == 1 || nchunks == 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            partials[c] = map(c * chunk, std::min(n, (c + 1) * chunk));
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                partials[c] = map(c * chunk, std::min(n, (c + 1) * chunk));
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    R acc = init;
    for (const R& p : partials) combine(acc, p);
    return acc;
}

} // namespace metricgeo
