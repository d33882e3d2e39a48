#pragma once

#include "linkdyn/cycles.hpp"

#include <set>
#include <string>
#include <vector>

namespace linkdyn {

struct Decision {
    Mode mode = Mode::Finite;
    bool exists = false;
    std::vector<std::string> reasons;  // CD1, CD2, CD3, EXCLUDED_CASE, NOT_LINK_CONNECTED (DC* in affine mode)
    std::vector<std::string> details;  // one human-readable line per finding
    BigInt genus_gcd = 0;
    // Admissible orders. When every genus vanishes any admissible prime works
    // and `any_prime` is set; `orders` then holds the default choice only.
    std::vector<long long> orders;
    bool any_prime = false;
    std::string excluded_case;  // "G2G2", "A1affA1aff", "A2affA2aff" when routed there

    long long default_order() const { return orders.empty() ? 0 : orders.front(); }
};

Decision decide_finite(const Diagram& d, std::uint64_t budget = kDefaultCycleBudget);
Decision decide_affine(const Diagram& d, std::uint64_t budget = kDefaultCycleBudget);
Decision decide_nonroot(const Diagram& d, std::uint64_t budget = kDefaultCycleBudget);
Decision decide(const Diagram& d, Mode mode, std::uint64_t budget = kDefaultCycleBudget);

// Divisors > 1 of |a_ij a_ji - a_ij - a_ji|.
std::set<long long> self_link_order_constraint(int a_ij, int a_ji);

// Detects the doubly linked pairs G2..G2, A1(1)..A1(1), A2(2)..A2(2).
// Returns the case name or "" and fills the 1..4 relabelling (arrow targets
// first) when the links join arrow targets to each other.
std::string excluded_case_of(const Diagram& d, std::vector<int>* order = nullptr, bool* targets_linked = nullptr);

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

}  // namespace linkdyn
