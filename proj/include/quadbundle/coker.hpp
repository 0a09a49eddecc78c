#pragma once

// Cokernel classification from the degree pattern of a graded symmetric matrix.
//
// For q: G -> G^v(delta) with det q != 0 the cokernel C is supported on the
// discriminant and satisfies C^2 = O_C(c + delta). Sections of twists come
// from the pattern alone because H^1 of split bundles on P^2 vanishes.

#include "gradedform.hpp"

#include <map>

namespace quadbundle {

enum class CokerKind { TrivialTwist, HalfPeriod, EvenTheta, OddTheta, Undetermined };

inline const char* to_string(CokerKind k) {
    switch (k) {
        case CokerKind::TrivialTwist: return "TrivialTwist";
        case CokerKind::HalfPeriod: return "HalfPeriod";
        case CokerKind::EvenTheta: return "EvenTheta";
        case CokerKind::OddTheta: return "OddTheta";
        case CokerKind::Undetermined: return "Undetermined";
    }
    return "?";
}

struct CokernelProfile {
    int c = 0;                          // discriminant degree
    int delta = 0;
    CokerKind kind = CokerKind::Undetermined;
    int normalization = 0;              // t* with eta or theta = C(t*)
    long long h0_normalized = 0;        // h^0(C(t*))
    std::map<int, long long> h0_table;  // t -> h^0(C(t)) for t in [t* - 2, t* + 2]
    std::string diagnostic;
};

/// h^0 of sum O(b_i + s) on P^2.
inline long long h0_split(const std::vector<int>& b, int s) {
    long long total = 0;
    for (int bi : b) {
        const long long n = bi + s + 2;
        if (n >= 2) total += n * (n - 1) / 2;
    }
    return total;
}

/// h^0(C(t)) = h^0(G^v(delta + t)) - h^0(G(t)).
inline long long h0_twist(const Grading& g, int t) {
    std::vector<int> dual;
    for (int a : g.degrees) dual.push_back(-a);
    return h0_split(dual, g.twist + t) - h0_split(g.degrees, t);
}

template <Coefficient K>
long long h0_twist(const GradedSymMatrix<K>& q, int t) {
    return h0_twist(q.grading(), t);
}

inline CokernelProfile classify(const Grading& g) {
    CokernelProfile prof;
    prof.c = g.discriminant_degree();
    prof.delta = g.twist;
    if (g.twist % 2 == 0) {
        // half-period family: eta = C(-(c + delta)/2) has eta^2 = O_C
        prof.normalization = -(prof.c + g.twist) / 2;
        prof.h0_normalized = h0_twist(g, prof.normalization);
        if (prof.h0_normalized == 0) {
            prof.kind = CokerKind::HalfPeriod;
        } else if (prof.h0_normalized == 1) {
            prof.kind = CokerKind::TrivialTwist;
        } else {
            prof.kind = CokerKind::Undetermined;
            prof.diagnostic = "h0(eta) = " + std::to_string(prof.h0_normalized) + " > 1";
        }
    } else {
        // theta family: theta = C(-(delta + 3)/2) has theta^2 = O_C(c - 3) = K_C
        prof.normalization = -(g.twist + 3) / 2;
        prof.h0_normalized = h0_twist(g, prof.normalization);
        prof.kind = prof.h0_normalized % 2 == 0 ? CokerKind::EvenTheta : CokerKind::OddTheta;
    }
    for (int t = prof.normalization - 2; t <= prof.normalization + 2; ++t) prof.h0_table[t] = h0_twist(g, t);
    return prof;
}

template <Coefficient K>
CokernelProfile classify(const GradedSymMatrix<K>& q) {
    if (!q.graded()) {
        CokernelProfile prof;
        prof.c = q.determinant().degree();
        prof.kind = CokerKind::Undetermined;
        prof.diagnostic = "chart-level model without a grading; h0 of twists is not available";
        return prof;
    }
    return classify(q.grading());
}

/// Necessary condition for presenting the same sheaf: same kind, same degree,
/// same h^0 table after aligning t* with t*.
inline bool profiles_equal(const CokernelProfile& a, const CokernelProfile& b) {
    if (a.kind != b.kind || a.c != b.c || a.h0_table.size() != b.h0_table.size()) return false;
    for (int o = -2; o <= 2; ++o) {
        const auto ia = a.h0_table.find(a.normalization + o), ib = b.h0_table.find(b.normalization + o);
        if ((ia == a.h0_table.end()) != (ib == b.h0_table.end())) return false;
        if (ia != a.h0_table.end() && ia->second != ib->second) return false;
    }
    return true;
}

}  // namespace quadbundle
