// Hyperbolic extension of a plane quartic model and the reduction back along
// the planted isotropic subbundle.

#include <quadbundle/gallery.hpp>
#include <quadbundle/reduction.hpp>

#include <iostream>

using namespace quadbundle;

int main() {
    const auto ring = make_ring(FieldSpec::prime(32003), {"x", "y", "z"});
    const auto qt = even_theta_pattern<ModP>(ring, 2, 0, 8);
    std::cout << "Q_T: " << qt.size() << "x" << qt.size() << ", " << to_string(classify(qt).kind) << "\n";

    Rng rng(1);
    PolyMatrix<ModP> rho(ring, 5, 1);
    for (std::size_t i = 0; i < 5; ++i) rho(i, 0) = rng.form<ModP>(ring, 1);
    const auto ext = extend_hyperbolic(qt, {0, 0, 0, 0, 0}, {-1}, rho, -1);
    std::cout << "extension: " << ext.q.size() << "x" << ext.q.size() << ", det degree "
              << ext.q.determinant().degree() << "\n";

    const auto iso = verify_isotropic(ext.q, ext.planted, default_regularity_primes(), 2);
    std::cout << "planted subbundle: isotropic " << iso.isotropy_ok << ", regularity "
              << to_string(iso.regularity.kind) << "\n";
    const auto red = reduce(ext.q, iso);
    std::cout << "reduced: " << red.size() << "x" << red.size() << "\n";

    const auto line = parse_poly<ModP>("x+2*y+3*z", ring);
    const auto s0 = residue_along_curve(qt, line, 3);
    const auto s1 = residue_along_curve(red, line, discriminant(qt), 4);
    const auto cmp = square_class_equal(s0, s1);
    std::cout << "residue classes: " << to_string(cmp.verdict) << ", confidence 1-2^-" << cmp.valid_samples << "\n";
}
