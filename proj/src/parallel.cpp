#include "dimcert/parallel.hpp"

namespace dimcert {

namespace {
std::atomic<int> g_jobs{0}; // 0 = auto
}

int worker_count() {
    int j = g_jobs.load();
    if (j > 0) return j;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void set_worker_count(int jobs) { g_jobs.store(jobs > 0 ? jobs : 0); }

void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t, int)>& fn) {
    if (n <= 0) return;
    int jobs = worker_count();
    if (jobs > n) jobs = static_cast<int>(n);
    if (jobs <= 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs - 1));
    int64_t chunk = (n + jobs - 1) / jobs;
    for (int w = 1; w < jobs; ++w) {
        int64_t b = w * chunk;
        int64_t e = std::min<int64_t>(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e, w] { fn(b, e, w); });
    }
    fn(0, std::min<int64_t>(n, chunk), 0);
    for (auto& th : pool) th.join();
}

} // namespace dimcert
