#include "svasym/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace svasym {

int workers_from_env(int fallback) {
    const char* env = std::getenv("SVASYM_THREADS");
    if (env == nullptr) return fallback;
    try {
        const int w = std::stoi(env);
        return w >= 1 ? w : fallback;
    } catch (const std::exception&) {
        return fallback;
    }
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t w = std::min<std::size_t>(std::max(workers, 1), n);
    if (w == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> threads;
    std::exception_ptr failure;
    std::mutex mu;
    const std::size_t chunk = (n + w - 1) / w;
    for (std::size_t t = 0; t < w; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace svasym
