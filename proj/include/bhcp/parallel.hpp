#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bhcp {

/// Static-partition parallel loop over [0, n). Each worker gets one
/// contiguous chunk, so which indices end up together never depends on timing.
/// `body(begin, end)` is called once per chunk. If several chunks throw, the
/// exception from the lowest chunk is rethrown.
template <class Body>
void parallel_for_chunks(std::size_t n, unsigned workers, Body&& body)
{
    if (n == 0) return;
    const std::size_t w = std::clamp<std::size_t>(workers, 1, n);
    if (w == 1) {
        body(std::size_t{0}, n);
        return;
    }
    const std::size_t base = n / w, extra = n % w;
    std::vector<std::exception_ptr> errors(w);
    std::vector<std::jthread> threads;
    threads.reserve(w - 1);
    auto run = [&](std::size_t c) {
        const std::size_t begin = c * base + std::min(c, extra);
        const std::size_t end = begin + base + (c < extra ? 1 : 0);
        try {
            body(begin, end);
        } catch (...) {
            errors[c] = std::current_exception();
        }
    };
    for (std::size_t c = 1; c < w; ++c) threads.emplace_back(run, c);
    run(0);
    threads.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

inline unsigned hardware_workers() noexcept
{
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bhcp
