// Jacobian rank of the isotropy map on the default grid, k = 4 - l.

#include <quadbundle/dominance.hpp>

#include <cstdio>

using namespace quadbundle;

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 0;
    std::printf("%3s %3s %3s %6s %6s %9s\n", "r", "l", "k", "rank", "target", "dominant");
    for (const auto& row : dominance_table(default_dominance_grid(), 32003, seed)) {
        std::printf("%3d %3d %3d %6d %6d %9s\n", row.instance.r, row.instance.l, row.instance.k, row.result.rank,
                    row.result.target_dim, row.result.dominant ? "yes" : "no");
    }
    const auto big = dominance_check(DominanceInstance{12, 0, 4, 3, 32003, seed, false});
    std::printf("(12,0,4): rank %d of %d, %s\n", big.rank, big.target_dim,
                big.dominant ? "certified" : "no certificate");
}
