// Random net of conics with smooth sextic discriminant, its bordering by a unit,
// and the invariants they share.

#include <quadbundle/gallery.hpp>

#include <iostream>

using namespace quadbundle;

int main(int argc, char** argv) {
    const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 0;
    const auto ring = make_ring(FieldSpec::rational(), {"x", "y", "z"});
    const auto chain = nodal_gm_chain<Rational>(ring, seed);

    std::cout << "N3 =\n";
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) std::cout << "  [" << to_string(chain.n3.matrix()(i, j)) << "]";
        std::cout << "\n";
    }
    const auto c = check_smoothness(discriminant(chain.n3), seed);
    std::cout << "C: " << to_string(c.f) << "\n  degree " << c.degree << ", " << to_string(c.smooth) << "\n";
    std::cout << "N4 pattern (-1,-1,-1,0), det equal: " << (chain.discriminants_equal ? "yes" : "no") << "\n";
    std::cout << "profile: " << to_string(chain.profile3.kind) << ", h0 at t* = " << chain.profile3.normalization
              << " is " << chain.profile3.h0_normalized << "\n";
    std::cout << "residues: " << to_string(chain.residues.verdict) << " (" << chain.residues.valid_samples
              << " samples)\n";
}
