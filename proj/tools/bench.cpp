// Compares the serial reference saturation against the OpenMP path on
// progressively larger figures and checks that both produce the same graph.
#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geo/saturate.hpp"
#include "geo/synth.hpp"

using namespace geo;

namespace {

// ladder of n rungs: two rails with crossing diagonals, midpoints everywhere
std::string ladder_figure(int rungs) {
    std::ostringstream os;
    os << "figure ladder" << rungs << "\n";
    for (int i = 0; i < rungs; ++i) {
        os << "point L" << i << " 0 " << i << "\n";
        os << "point R" << i << " 3 " << i << "\n";
        os << "point M" << i << " 1.5 " << i << "\n";
    }
    for (int i = 0; i < rungs; ++i) os << "segment L" << i << " R" << i << "\n";
    for (int i = 0; i + 1 < rungs; ++i) {
        os << "segment L" << i << " L" << i + 1 << "\n";
        os << "segment R" << i << " R" << i + 1 << "\n";
        os << "segment L" << i << " R" << i + 1 << "\n";
        os << "segment R" << i << " L" << i + 1 << "\n";
    }
    for (int i = 0; i < rungs; ++i)
        os << "assume midpoint M" << i << " L" << i << " R" << i << "\n";
    os << "assume angle-measure R1 L0 L1 45\n";
    return os.str();
}

double run_once(const Figure& fig, bool parallel, std::size_t* nodes, std::size_t* edges,
                std::string* sig) {
    RuleConfig cfg;
    GeomContext ctx{&fig, kDefaultEps};
    SaturateOptions opt;
    opt.parallel = parallel;
    auto t0 = std::chrono::steady_clock::now();
    Hypergraph g = saturate(figure_seed(fig, kDefaultEps), cfg, ctx, opt);
    auto t1 = std::chrono::steady_clock::now();
    *nodes = g.node_count();
    *edges = g.edge_count();
    *sig = graph_signature(g, fig.symbols);
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int max_rungs = argc > 1 ? std::atoi(argv[1]) : 5;
#ifdef _OPENMP
    printf("threads: %d\n", omp_get_max_threads());
#else
    printf("threads: 1 (no OpenMP)\n");
#endif
    printf("%-10s %10s %10s %12s %12s %8s  %s\n", "figure", "nodes", "edges", "serial(s)",
           "openmp(s)", "speedup", "identical");
    for (int r = 2; r <= max_rungs; ++r) {
        FigureError err;
        auto fig = parse_figure(ladder_figure(r), &err);
        if (!fig) {
            fprintf(stderr, "bad generated figure: %s\n", err.message.c_str());
            return 2;
        }
        std::size_t n1, e1, n2, e2;
        std::string s1, s2;
        double ts = run_once(*fig, false, &n1, &e1, &s1);
        double tp = run_once(*fig, true, &n2, &e2, &s2);
        bool same = (s1 == s2);
        printf("ladder%-4d %10zu %10zu %12.3f %12.3f %8.2f  %s\n", r, n1, e1, ts, tp,
               tp > 0 ? ts / tp : 0.0, same ? "yes" : "NO");
        if (!same) return 2;
    }
    return 0;
}
