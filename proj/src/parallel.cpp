#include "parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace tsc {

namespace {
std::atomic<int> g_thread_cap{0};
}

void set_thread_count(int n) {
    if (n < 0) fail_invalid("thread count must be >= 0");
    g_thread_cap.store(n);
}

int thread_count() {
    int cap = g_thread_cap.load();
    if (cap > 0) return cap;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

void parallel_for(int64_t n, const std::function<void(int64_t)>& fn) {
    if (n <= 0) return;
    int workers = thread_count();
    if (workers > n) workers = int(n);
    if (workers <= 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<int64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&]() {
        for (;;) {
            int64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n);  // drain remaining work
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(size_t(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();

    if (first_error) std::rethrow_exception(first_error);
}

double pairwise_sum(std::span<const double> values) {
    const size_t n = values.size();
    if (n <= 16) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double pairwise_mean(std::span<const double> values) {
    if (values.empty()) fail_invalid("pairwise_mean: empty input");
    return pairwise_sum(values) / double(values.size());
}

}  // namespace tsc
