#pragma once

#include "linkdyn/exist.hpp"

#include <map>
#include <string>
#include <vector>

namespace linkdyn {

// q^e * prod z_s^{k_s}; with order d > 0 the q exponent lives in Z/d, with
// d == 0 (generic q, no root of unity) it is an ordinary integer.
struct SymbolicUnit {
    long long q = 0;
    std::map<int, int> z;  // symbol id -> exponent, zero exponents erased

    SymbolicUnit mul(const SymbolicUnit& o, long long d) const;
    SymbolicUnit pow(long long k, long long d) const;
    SymbolicUnit inv(long long d) const { return pow(-1, d); }
    bool is_one() const { return q == 0 && z.empty(); }
    bool operator==(const SymbolicUnit&) const = default;
};

long long mod_norm(long long a, long long d);  // identity when d == 0

struct BraidingMatrix {
    long long d = 0;
    std::vector<std::vector<SymbolicUnit>> b;
    int symbol_count = 0;

    int size() const { return static_cast<int>(b.size()); }
    // Replaces every z by 1.
    BraidingMatrix concretized() const;
};

struct Violation {
    std::string kind;  // "cartan", "link", "order", "shape"
    int i = -1, j = -1, k = -1;
    std::string message;
};

// Order of the chosen root of unity comes from `order` when positive,
// otherwise from the decision's default. Nonroot decisions produce d == 0.
BraidingMatrix construct_finite(const Diagram& d, const Decision& dec, int seed_vertex = 0, long long order = 0);
BraidingMatrix construct_affine(const Diagram& d, const Decision& dec, int seed_vertex = 0, long long order = 0);
BraidingMatrix construct_nonroot(const Diagram& d, const Decision& dec, int seed_vertex = 0);
BraidingMatrix construct(const Diagram& d, const Decision& dec, int seed_vertex = 0, long long order = 0);

enum class ExcludedCase { G2G2, A1affA1aff, A2affA2aff };
ExcludedCase parse_excluded_case(const std::string& s);
// Diagram on vertices 1..4: arrow targets 1 and 3, components {1,2},{3,4};
// links 1...3 and 2...4 (only 1...3 when with_cycle is false).
Diagram excluded_diagram(ExcludedCase c, bool with_cycle);
BraidingMatrix construct_excluded(ExcludedCase c, bool with_cycle, long long order = 5);

std::vector<Violation> verify(const Diagram& d, const BraidingMatrix& m, Mode mode);

}  // namespace linkdyn
