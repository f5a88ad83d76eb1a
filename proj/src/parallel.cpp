#include "dnls/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dnls {

void set_thread_count(int n)
{
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int thread_count()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {
bool g_deterministic = false;
}

void set_deterministic(bool on)
{
    g_deterministic = on;
#ifdef _OPENMP
    if (on)
        omp_set_dynamic(0);
#endif
}

bool deterministic() { return g_deterministic; }

}  // namespace dnls
