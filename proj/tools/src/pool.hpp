#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace ergo::tools {

/// Evaluates fn(items[i]) on up to `jobs` threads. Results (and the first
/// exception, by item order) do not depend on scheduling.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, std::size_t jobs, Fn fn) {
    using R = decltype(fn(items.front()));
    std::vector<std::optional<R>> slots(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            try {
                slots[i].emplace(fn(items[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, items.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    }

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<R> out;
    out.reserve(items.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace ergo::tools
