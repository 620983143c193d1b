// Timing comparison of the OpenMP kernels against their serial references,
// plus one end-to-end fit+debias pass per size.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "leanreg/debias.hpp"
#include "leanreg/dgp.hpp"
#include "leanreg/estimation.hpp"
#include "leanreg/kernels.hpp"

using namespace leanreg;

namespace {

double time_ms(const std::function<void()>& f, int repeats) {
    f();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / (std::abs(b) + 1e-300);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("threads: %d (set OMP_NUM_THREADS to vary)\n", max_threads());
    std::printf("%8s %6s | %12s %12s %8s | %10s\n", "n", "d", "serial_ms", "omp_ms",
                "speedup", "max_rel_diff");

    const std::pair<std::size_t, std::size_t> sizes[] = {
        {2000, 50}, {10000, 100}, {50000, 200}, {100000, 300}};
    for (const auto& [n, d] : sizes) {
        const DgpSpec spec{DgpKind::MisspecifiedCubic, n, d, 0.2, ThetaKind::UniformUnit, 1};
        const Sample sample = generate(spec, RngStream(1, 42));
        Vector w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = std::sin(double(i));

        Matrix g_ser, g_par;
        Vector s_ser, s_par;
        double c_ser = 0.0, c_par = 0.0;
        const double t_gram_s = time_ms([&] { g_ser = serial::gram_matrix(sample.x); }, repeats);
        const double t_gram_p = time_ms([&] { g_par = gram_matrix(sample.x); }, repeats);
        const double t_sum_s =
            time_ms([&] { s_ser = serial::weighted_rowsum(sample.x, w); }, repeats);
        const double t_sum_p = time_ms([&] { s_par = weighted_rowsum(sample.x, w); }, repeats);
        const double t_con_s = time_ms(
            [&] { c_ser = serial::weighted_sq_contraction(sample.x, s_ser, w); }, repeats);
        const double t_con_p =
            time_ms([&] { c_par = weighted_sq_contraction(sample.x, s_par, w); }, repeats);

        double max_rel = rel_diff(c_par, c_ser);
        for (std::size_t i = 0; i < g_ser.data().size(); ++i)
            max_rel = std::max(max_rel, rel_diff(g_par.data()[i], g_ser.data()[i]));
        for (std::size_t i = 0; i < s_ser.size(); ++i)
            max_rel = std::max(max_rel, rel_diff(s_par[i], s_ser[i]));

        const double serial_total = t_gram_s + t_sum_s + t_con_s;
        const double parallel_total = t_gram_p + t_sum_p + t_con_p;
        std::printf("%8zu %6zu | %12.2f %12.2f %8.2fx | %10.2e\n", n, d, serial_total,
                    parallel_total, serial_total / parallel_total, max_rel);

        const double t_fit = time_ms(
            [&] {
                const FitResult fit = ols_fit(sample);
                const DebiasResult db = moment_bias(sample, fit);
                (void)db;
            },
            repeats);
        std::printf("%8s %6s | fit+debias %10.2f ms\n", "", "", t_fit);
    }
    return 0;
}
