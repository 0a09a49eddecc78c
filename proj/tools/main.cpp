#include "serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace quadbundle;
using io::json;

namespace {

constexpr int kExitError = 3;

json read_doc(const std::string& path) {
    if (path.empty() || path == "-") return json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open " + path);
    return json::parse(in);
}

void write_doc(const json& doc, const std::string& path = "") {
    if (path.empty() || path == "-") {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write " + path);
    out << doc.dump(2) << '\n';
}

/// Calls f.template operator()<K>(ring) with K chosen by the document's field.
template <class F>
auto with_field(const json& doc, F&& f) {
    const auto ring = io::ring_from_doc(doc);
    if (ring->field.is_rational()) return f.template operator()<Rational>(ring);
    return f.template operator()<ModP>(ring);
}

RingPtr field_ring(const std::string& field) {
    const std::vector<std::string> vars{"x", "y", "z"};
    if (field == "QQ" || field == "rational") return make_ring(FieldSpec::rational(), vars);
    std::uint64_t p = 0;
    std::istringstream is(field);
    if (!(is >> p) || !is.eof()) throw Error("bad_field", "field must be QQ or a prime, got " + field);
    return make_ring(FieldSpec::prime(p), vars);
}

template <Coefficient K>
K scalar_from_string(const std::string& s, const RingPtr& ring) {
    const auto c = parse_poly<K>(s, ring);
    if (!c.is_constant()) throw Error("bad_parameters", "expected a constant, got " + s);
    return c.constant_value();
}

int exit_code(ClassVerdict v) {
    switch (v) {
        case ClassVerdict::ProbablyEqual: return 0;
        case ClassVerdict::NotEqual: return 1;
        default: return 2;
    }
}

void error_json(const std::string& kind, const std::string& msg) {
    std::cerr << json{{"error", kind}, {"message", msg}}.dump() << '\n';
}

}  // namespace

namespace cmd {

struct Common {
    std::string in;
    std::uint64_t seed = 0;
};

int discriminant(const Common& o) {
    const auto doc = read_doc(o.in);
    write_doc(with_field(doc, [&]<Coefficient K>(const RingPtr& ring) {
        const auto q = io::form_from_doc<K>(doc, ring);
        return io::curve_doc(check_smoothness(quadbundle::discriminant(q), o.seed));
    }));
    return 0;
}

int classify(const Common& o) {
    const auto doc = read_doc(o.in);
    write_doc(with_field(doc, [&]<Coefficient K>(const RingPtr& ring) {
        return io::profile_doc(quadbundle::classify(io::form_from_doc<K>(doc, ring)));
    }));
    return 0;
}

struct ResidueOpts : Common {
    std::string line = "z";
    std::string curve;
};

template <Coefficient K>
SquareClass<K> residue_of(const json& doc, const RingPtr& ring, const std::string& line,
                          const std::optional<PlaneCurve<K>>& curve, std::uint64_t seed) {
    const auto q = io::form_from_doc<K>(doc, ring);
    const auto l = parse_poly<K>(line, ring);
    return curve ? residue_along_curve(q, l, *curve, seed) : residue_along_curve(q, l, seed);
}

int residue(const ResidueOpts& o) {
    const auto doc = read_doc(o.in);
    write_doc(with_field(doc, [&]<Coefficient K>(const RingPtr& ring) {
        std::optional<PlaneCurve<K>> curve;
        if (!o.curve.empty()) curve = io::curve_from_doc<K>(read_doc(o.curve), ring);
        return io::square_class_doc(residue_of<K>(doc, ring, o.line, curve, o.seed));
    }));
    return 0;
}

struct EquivOpts : Common {
    std::string other;
    std::string line = "z";
    std::size_t trials = 32;
    std::vector<std::uint32_t> primes;
};

/// Matrices become residues along A's discriminant curve; square classes pass through.
int equiv(const EquivOpts& o) {
    const auto da = read_doc(o.in);
    const auto db = read_doc(o.other);
    if (!same_ring(io::ring_from_doc(da), io::ring_from_doc(db))) {
        throw Error("ring_mismatch", "A and B live over different rings");
    }
    const auto primes = o.primes.empty() ? default_class_primes() : o.primes;
    ClassComparison cmp = with_field(da, [&]<Coefficient K>(const RingPtr& ring) {
        auto load = [&](const json& d, const std::optional<PlaneCurve<K>>& curve) {
            if (d.at("kind") == "square_class") return io::square_class_from_doc<K>(d, ring);
            return residue_of<K>(d, ring, o.line, curve, o.seed);
        };
        const auto sa = load(da, std::nullopt);
        const auto sb = load(db, sa.curve);
        return square_class_equal(sa, sb, o.trials, primes, o.seed);
    });
    write_doc(io::comparison_doc(cmp));
    return exit_code(cmp.verdict);
}

struct ReduceOpts : Common {
    std::string isotropic;
    std::vector<std::uint32_t> primes;
};

int reduce(const ReduceOpts& o) {
    const auto doc = read_doc(o.in);
    write_doc(with_field(doc, [&]<Coefficient K>(const RingPtr& ring) {
        const auto q = io::form_from_doc<K>(doc, ring);
        const auto n = io::matrix_from_doc<K>(read_doc(o.isotropic), ring);
        const auto iso = verify_isotropic(q, n, o.primes.empty() ? default_regularity_primes() : o.primes, o.seed);
        return io::matrix_doc(quadbundle::reduce(q, iso));
    }));
    return 0;
}

struct ExtendOpts : Common {
    std::string rho;
    std::vector<int> adeg, bdeg;
    std::optional<int> twist;
    std::string planted;
};

int extend(const ExtendOpts& o) {
    const auto doc = read_doc(o.in);
    write_doc(with_field(doc, [&]<Coefficient K>(const RingPtr& ring) {
        const auto qt = io::form_from_doc<K>(doc, ring);
        const auto rho = io::matrix_from_doc<K>(read_doc(o.rho), ring);
        const int twist = o.twist ? *o.twist : qt.grading().twist;
        const auto ext = extend_hyperbolic(qt, o.adeg, o.bdeg, rho, twist);
        if (!ext.h2_condition) error_json("warning", "H2 vanishing condition fails for the B degrees");
        if (!o.planted.empty()) write_doc(io::matrix_doc(ext.planted), o.planted);
        return io::matrix_doc(ext.q);
    }));
    return 0;
}

}  // namespace cmd

namespace cmd {

int dominance(const DominanceInstance& in) {
    write_doc(io::dominance_doc(in, dominance_check(in)));
    return 0;
}

struct TableOpts {
    std::uint32_t p = 32003;
    std::uint64_t seed = 0;
    bool text = false;
};

int dominance_table(const TableOpts& o) {
    const auto rows = quadbundle::dominance_table(default_dominance_grid(), o.p, o.seed);
    if (o.text) {
        std::cout << std::setw(3) << "r" << std::setw(4) << "l" << std::setw(4) << "k" << std::setw(8) << "rank"
                  << std::setw(8) << "target" << std::setw(10) << "unknowns" << std::setw(10) << "dominant"
                  << std::setw(8) << "range" << std::setw(10) << "seconds" << '\n';
        for (const auto& row : rows) {
            const auto& r = row.result;
            std::cout << std::setw(3) << row.instance.r << std::setw(4) << row.instance.l << std::setw(4)
                      << row.instance.k << std::setw(8) << r.rank << std::setw(8) << r.target_dim << std::setw(10)
                      << r.unknowns << std::setw(10) << (r.dominant ? "yes" : "no") << std::setw(8)
                      << (r.hypothesis ? "yes" : "no") << std::setw(10) << std::fixed << std::setprecision(3)
                      << r.seconds << (row.discrepancy ? "  DISCREPANCY" : "") << '\n';
        }
        return 0;
    }
    auto doc = io::report_header("dominance_table");
    doc["rows"] = json::array();
    for (const auto& row : rows) {
        auto entry = io::dominance_doc(row.instance, row.result);
        entry["discrepancy"] = row.discrepancy;
        doc["rows"].push_back(std::move(entry));
    }
    write_doc(doc);
    return 0;
}

struct GalleryOpts {
    std::string recipe;
    int d = 3, k = 0;
    std::uint64_t seed = 0;
    std::string field = "32003";
    std::string family = "halfperiod";
};

template <Coefficient K>
json gallery_object(const GalleryOpts& o, const RingPtr& ring) {
    if (o.recipe == "halfperiod") return io::matrix_doc(halfperiod_pattern<K>(ring, o.d, o.k, o.seed));
    if (o.recipe == "even_theta") return io::matrix_doc(even_theta_pattern<K>(ring, o.d, o.k, o.seed));
    if (o.recipe == "odd_theta") return io::matrix_doc(odd_theta_pattern<K>(ring, o.d, o.k, o.seed));
    if (o.recipe == "hpt") return io::matrix_doc(hpt_form<K>(ring));
    if (o.recipe == "ansatz") return io::ansatz_doc(ring, ansatz_solutions<K>(ring));
    if (o.recipe == "nodal_gm") return io::nodal_doc(nodal_gm_chain<K>(ring, o.seed));
    if (o.recipe == "cor12") return io::pattern_doc(cor12_patterns(o.d, o.family, o.k));
    throw Error("bad_parameters", "unknown recipe " + o.recipe);
}

int gallery(const GalleryOpts& o) {
    const auto ring = field_ring(o.field);
    write_doc(ring->field.is_rational() ? gallery_object<Rational>(o, ring) : gallery_object<ModP>(o, ring));
    return 0;
}

struct PsiOpts {
    std::string in;
    bool example = false;
    bool emit_data = false;
    std::size_t h = 2;
    std::string t = "1";
    std::uint64_t seed = 0;
    std::string field = "101";
};

int psi_family(const PsiOpts& o) {
    if (o.example == !o.in.empty()) throw Error("bad_parameters", "give exactly one of IN.json and --example");
    auto run = [&]<Coefficient K>(const RingPtr& ring, const DegenerationData<K>& data) {
        if (o.emit_data) return io::psi_data_doc(data);
        return io::matrix_doc(data.at(scalar_from_string<K>(o.t, ring)));
    };
    if (o.example) {
        const auto ring = field_ring(o.field);
        if (ring->field.is_rational()) {
            write_doc(run.template operator()<Rational>(ring, random_degeneration_data<Rational>(ring, o.h, o.seed)));
        } else {
            write_doc(run.template operator()<ModP>(ring, random_degeneration_data<ModP>(ring, o.h, o.seed)));
        }
        return 0;
    }
    const auto doc = read_doc(o.in);
    write_doc(with_field(doc, [&]<Coefficient K>(const RingPtr& ring) {
        return run.template operator()<K>(ring, io::psi_data_from_doc<K>(doc, ring));
    }));
    return 0;
}

}  // namespace cmd

int main(int argc, char** argv) {
    CLI::App app{"Quadric bundles over the plane: discriminants, residues, reductions"};
    app.require_subcommand(1);
    std::function<int()> action;

    cmd::Common disc;
    auto* s = app.add_subcommand("discriminant", "discriminant curve with degree and smoothness verdict");
    s->add_option("in", disc.in, "matrix JSON (default stdin)");
    s->add_option("--seed", disc.seed);
    s->callback([&] { action = [&] { return cmd::discriminant(disc); }; });

    cmd::Common cls;
    s = app.add_subcommand("classify", "cokernel profile of a graded model");
    s->add_option("in", cls.in, "matrix JSON (default stdin)");
    s->callback([&] { action = [&] { return cmd::classify(cls); }; });

    cmd::ResidueOpts res;
    s = app.add_subcommand("residue", "square class of the residue along the discriminant");
    s->add_option("in", res.in, "matrix JSON (default stdin)");
    s->add_option("--line", res.line, "normalization line")->capture_default_str();
    s->add_option("--curve", res.curve, "curve JSON for a non-squarefree determinant");
    s->add_option("--seed", res.seed);
    s->callback([&] { action = [&] { return cmd::residue(res); }; });

    cmd::EquivOpts eq;
    s = app.add_subcommand("equiv", "compare residue classes; exit 0 equal, 1 not equal, 2 inconclusive");
    s->add_option("a", eq.in, "matrix or square_class JSON")->required();
    s->add_option("b", eq.other, "matrix or square_class JSON")->required();
    s->add_option("--line", eq.line)->capture_default_str();
    s->add_option("--trials", eq.trials)->capture_default_str();
    s->add_option("--primes", eq.primes)->delimiter(',');
    s->add_option("--seed", eq.seed);
    s->callback([&] { action = [&] { return cmd::equiv(eq); }; });

    cmd::ReduceOpts red;
    s = app.add_subcommand("reduce", "quadric reduction along a verified isotropic subbundle");
    s->add_option("in", red.in, "matrix JSON (default stdin)");
    s->add_option("--isotropic", red.isotropic, "matrix JSON with the columns of N")->required();
    s->add_option("--primes", red.primes)->delimiter(',');
    s->add_option("--seed", red.seed);
    s->callback([&] { action = [&] { return cmd::reduce(red); }; });

    cmd::ExtendOpts ext;
    s = app.add_subcommand("extend", "hyperbolic extension of a model");
    s->add_option("in", ext.in, "matrix JSON (default stdin)");
    s->add_option("--rho", ext.rho, "matrix JSON for rho: B -> A")->required();
    s->add_option("--adeg", ext.adeg)->delimiter(',')->required();
    s->add_option("--bdeg", ext.bdeg)->delimiter(',')->required();
    s->add_option("--twist", ext.twist);
    s->add_option("--planted", ext.planted, "write the planted isotropic columns here");
    s->callback([&] { action = [&] { return cmd::extend(ext); }; });

    DominanceInstance dom;
    s = app.add_subcommand("dominance", "Jacobian rank certificate for the isotropy map");
    s->add_option("--r", dom.r)->required();
    s->add_option("--l", dom.l)->required();
    s->add_option("--k", dom.k)->required();
    s->add_option("--n", dom.n)->capture_default_str();
    s->add_option("--p", dom.p)->capture_default_str();
    s->add_option("--seed", dom.seed);
    s->add_flag("--rational", dom.rational, "work over QQ");
    s->callback([&] { action = [&] { return cmd::dominance(dom); }; });

    cmd::TableOpts tab;
    s = app.add_subcommand("dominance-table", "rank certificates on the default grid");
    s->add_option("--p", tab.p)->capture_default_str();
    s->add_option("--seed", tab.seed);
    s->add_flag("--text", tab.text, "aligned text instead of JSON");
    s->callback([&] { action = [&] { return cmd::dominance_table(tab); }; });

    cmd::GalleryOpts gal;
    s = app.add_subcommand("gallery", "explicit models");
    s->add_option("--recipe", gal.recipe)
        ->required()
        ->check(CLI::IsMember({"halfperiod", "even_theta", "odd_theta", "hpt", "ansatz", "nodal_gm", "cor12"}));
    s->add_option("--d", gal.d)->capture_default_str();
    s->add_option("--k", gal.k)->capture_default_str();
    s->add_option("--seed", gal.seed);
    s->add_option("--field", gal.field, "QQ or a prime")->capture_default_str();
    s->add_option("--family", gal.family, "cor12 family")->capture_default_str();
    s->callback([&] { action = [&] { return cmd::gallery(gal); }; });

    cmd::PsiOpts psi;
    s = app.add_subcommand("psi-family", "member of the degeneration family at parameter t");
    s->add_option("in", psi.in, "psi_data JSON");
    s->add_flag("--example", psi.example, "random data instead of a file");
    s->add_flag("--emit-data", psi.emit_data, "print the psi_data document instead of a member");
    s->add_option("--eta-cols", psi.h, "columns of eta for --example")->capture_default_str();
    s->add_option("--t", psi.t)->capture_default_str();
    s->add_option("--seed", psi.seed);
    s->add_option("--field", psi.field, "QQ or a prime, for --example")->capture_default_str();
    s->callback([&] { action = [&] { return cmd::psi_family(psi); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json("usage", e.what());
        return kExitError;
    }
    try {
        return action();
    } catch (const Error& e) {
        error_json(e.kind(), e.what());
    } catch (const json::exception& e) {
        error_json("bad_document", e.what());
    } catch (const std::exception& e) {
        error_json("internal", e.what());
    }
    return kExitError;
}
