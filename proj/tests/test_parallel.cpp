#include "doctest.h"

#include "dnls/direct_scattering.hpp"
#include "dnls/parallel.hpp"
#include "dnls/rh_inverse.hpp"

#include <atomic>
#include <stdexcept>

using namespace dnls;

TEST_SUITE("parallel")
{
    TEST_CASE("parallel_for visits every index once")
    {
        std::vector<int> hits(1000, 0);
        parallel_for(hits.size(), Exec::Parallel, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits)
            CHECK(h == 1);
    }

    TEST_CASE("exceptions propagate")
    {
        for (Exec ex : {Exec::Serial, Exec::Parallel})
            CHECK_THROWS_AS(parallel_for(64, ex,
                                         [](std::size_t i) {
                                             if (i == 17)
                                                 throw std::runtime_error("boom");
                                         }),
                            std::runtime_error);
    }

    TEST_CASE("thread settings")
    {
        set_thread_count(2);
        CHECK(thread_count() >= 1);
        set_deterministic(true);
        CHECK(deterministic());
        set_deterministic(false);
        set_thread_count(1);
    }

    TEST_CASE("serial and parallel kernels are bit-identical")
    {
        auto [xg, zg] = make_grids(10.0, 256, 10.0, 512);
        const auto u = sample_potential([](double x) { return 0.3 * std::exp(-x * x) * std::polar(1.0, 0.2 * x); }, xg);
        const auto a = scattering_coefficients(u, zg, {}, Exec::Serial);
        const auto b = scattering_coefficients(u, zg, {}, Exec::Parallel);
        CHECK(a.a == b.a);
        CHECK(a.r_plus == b.r_plus);
        CHECK(a.r_minus == b.r_minus);
        const auto ha = spectral_health(u, a, {}, Exec::Serial);
        const auto hb = spectral_health(u, a, {}, Exec::Parallel);
        CHECK(ha.winding_number_upper_half == hb.winding_number_upper_half);
        CHECK(ha.min_abs_a_real_line == hb.min_abs_a_real_line);
        const auto r = reflection_from(a);
        const auto ra = reconstruct(r, xg, a.a_inf, {}, Exec::Serial);
        const auto rb = reconstruct(r, xg, a.a_inf, {}, Exec::Parallel);
        CHECK(ra.values == rb.values);
        CHECK(ra.gluing_defect == rb.gluing_defect);
    }
}
