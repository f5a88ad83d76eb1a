#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace dnls {

enum class Exec { Serial, Parallel };

// Pure map over [0, n). Each index must write only its own slot.
template <class F>
void parallel_for(std::size_t n, Exec ex, F&& f)
{
    if (ex == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::exception_ptr err;
    std::mutex err_lock;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> g(err_lock);
            if (!err)
                err = std::current_exception();
        }
    }
    if (err)
        std::rethrow_exception(err);
}

void set_thread_count(int n);
int thread_count();
// fixed team size, no dynamic adjustment; maps are already order-free
void set_deterministic(bool on);
bool deterministic();

}  // namespace dnls
