// Serial vs parallel timings of the heavy kernels. The parallel paths must
// reproduce the serial results bit for bit; this binary reports the speedups
// and re-asserts that equality on the benchmarked inputs.
#include <cmath>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "thermo/backward_tree.hpp"
#include "thermo/potential.hpp"
#include "thermo/pullback.hpp"
#include "thermo/thermo_analysis.hpp"
#include "thermo/transfer_operator.hpp"

using namespace thermo;

namespace {

template <typename F>
double timed(F&& fn) {
    double t0 = omp_get_wtime();
    fn();
    return omp_get_wtime() - t0;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, serial,
                parallel, serial / parallel, identical ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    IntervalMap f = make_intermittent(0.5);
    Potential phi = make_cosine(1.0, 1.0);

    {
        BackwardTree s, p;
        double ts = timed([&] { s = build_tree(f, phi, 0.3, 20, Exec::Serial); });
        double tp = timed([&] { p = build_tree(f, phi, 0.3, 20, Exec::Parallel); });
        report("build_tree depth 20", ts, tp, s.log_partition == p.log_partition);
    }

    {
        std::vector<PullBack> s, p;
        double ts = timed([&] { s = interval_pullbacks(f, 0.4, 0.6, 18, Exec::Serial); });
        double tp = timed([&] { p = interval_pullbacks(f, 0.4, 0.6, 18, Exec::Parallel); });
        bool same = s.size() == p.size();
        for (size_t i = 0; same && i < s.size(); ++i)
            same = s[i].lo == p[i].lo && s[i].hi == p[i].hi;
        report("interval_pullbacks n=18", ts, tp, same);
    }

    {
        double ls = 0.0, lp = 0.0;
        double ts = timed([&] {
            ls = leading_eigen(build_operator(f, phi, 8192, Exec::Serial)).lambda;
        });
        double tp = timed([&] {
            lp = leading_eigen(build_operator(f, phi, 8192, Exec::Parallel)).lambda;
        });
        report("operator build+eig k=8192", ts, tp, ls == lp);
    }

    {
        std::vector<double> grid;
        for (int i = 0; i <= 32; ++i) grid.push_back(0.05 * i);
        Potential geo = make_geometric(f, 1.0, 0.5);
        PressureCurve s, p;
        double ts = timed(
            [&] { s = pressure_scan(f, make_constant(0.0), geo, grid, 1024, Exec::Serial); });
        double tp = timed(
            [&] { p = pressure_scan(f, make_constant(0.0), geo, grid, 1024, Exec::Parallel); });
        report("pressure_scan 33 x k=1024", ts, tp, s.P == p.P);
    }

    {
        double es = 0.0, ep = 0.0;
        double ts = timed([&] { es = empirical_distortion(f, phi, 0.25, 0.2, 14, Exec::Serial); });
        double tp = timed([&] { ep = empirical_distortion(f, phi, 0.25, 0.2, 14, Exec::Parallel); });
        report("empirical_distortion n=14", ts, tp, es == ep);
    }

    return 0;
}
