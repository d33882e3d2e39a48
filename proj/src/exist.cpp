#include "linkdyn/exist.hpp"

#include "linkdyn/error.hpp"

#include <algorithm>
#include <numeric>

namespace linkdyn {

std::string mode_name(Mode m) {
    return m == Mode::Finite ? "finite" : m == Mode::Affine ? "affine" : "nonroot";
}

Mode parse_mode(const std::string& s) {
    if (s == "finite") return Mode::Finite;
    if (s == "affine") return Mode::Affine;
    if (s == "nonroot") return Mode::Nonroot;
    fail("ValidationError", "unknown mode '" + s + "'");
}

std::set<long long> self_link_order_constraint(int a_ij, int a_ji) {
    long long v = std::llabs(static_cast<long long>(a_ij) * a_ji - a_ij - a_ji);
    if (v == 0) fail("ZeroExponent", "self-link exponent vanishes");
    std::set<long long> out;
    for (long long k = 2; k <= v; ++k)
        if (v % k == 0) out.insert(k);
    return out;
}

std::string excluded_case_of(const Diagram& d, std::vector<int>* order, bool* targets_linked) {
    if (d.size() != 4 || d.links().size() != 2) return "";
    auto comps = classify_components(d);
    if (comps.size() != 2 || comps[0].type != comps[1].type) return "";
    std::string name = comps[0].type.name();
    std::string tag = name == "G2" ? "G2G2" : name == "A1(1)" ? "A1affA1aff" : name == "A2(2)" ? "A2affA2aff" : "";
    if (tag.empty()) return "";
    for (int v = 0; v < 4; ++v)
        if (d.partner(v) == -1) return "";
    auto target_of = [&](const std::vector<int>& comp) {
        const SolidEdge* e = d.edge_between(comp[0], comp[1]);
        return e->kind.arrow >= 0 ? e->kind.arrow : comp[0];
    };
    int t1 = target_of(comps[0].vertices);
    int o1 = t1 == comps[0].vertices[0] ? comps[0].vertices[1] : comps[0].vertices[0];
    int t2 = target_of(comps[1].vertices);
    bool linked = d.partner(t1) == t2;
    if (tag == "A1affA1aff") {  // no arrows: relabel so the links match
        t2 = d.partner(t1);
        linked = true;
    }
    int o2 = t2 == comps[1].vertices[0] ? comps[1].vertices[1] : comps[1].vertices[0];
    if (order) *order = {t1, o1, t2, o2};
    if (targets_linked) *targets_linked = linked;
    return tag;
}

namespace {

std::string vname(int v) { return std::to_string(v + 1); }

void check_preconditions(const Diagram& d) {
    if (!d.link_connected()) fail("NotLinkConnected", "diagram is not link-connected");
    if (d.has_self_link()) fail("SelfLinkPresent", "self-linked diagrams are handled by the presentation engine (selflink)");
}

// Cartan entries must agree across every pair of disjoint dotted edges.
void check_link_pairs(const Diagram& d, const CartanMatrix& a, const std::string& code, Decision& dec) {
    const auto& links = d.links();
    bool bad = false;
    for (size_t x = 0; x < links.size(); ++x)
        for (size_t y = x + 1; y < links.size(); ++y) {
            auto [i, k] = links[x];
            for (int flip = 0; flip < 2; ++flip) {
                auto [j, l] = links[y];
                if (flip) std::swap(j, l);
                if (a[i][j] != a[k][l] || a[j][i] != a[l][k]) {
                    bad = true;
                    dec.details.push_back(code + ": dotted pairs " + vname(i) + "..." + vname(k) + " and " + vname(j) + "..." + vname(l) +
                                          ": (a_" + vname(i) + vname(j) + ", a_" + vname(j) + vname(i) + ") = (" +
                                          std::to_string(a[i][j]) + ", " + std::to_string(a[j][i]) + ") but (a_" + vname(k) + vname(l) +
                                          ", a_" + vname(l) + vname(k) + ") = (" + std::to_string(a[k][l]) + ", " +
                                          std::to_string(a[l][k]) + ")");
                }
            }
        }
    if (bad) dec.reasons.push_back(code);
}

bool both_linked(const Diagram& d, const std::vector<int>& comp) {
    return comp.size() == 2 && d.partner(comp[0]) != -1 && d.partner(comp[1]) != -1;
}

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

long long to_ll(const BigInt& g) {
    if (g > BigInt(1) << 62) fail("Unsupported", "genus gcd too large to factor");
    return g.convert_to<long long>();
}

void finish(Decision& dec) { dec.exists = dec.reasons.empty(); }

}  // namespace

Decision decide_finite(const Diagram& d, std::uint64_t budget) {
    check_preconditions(d);
    Decision dec;
    dec.mode = Mode::Finite;
    auto comps = classify_components(d);
    bool has_g2 = false;
    for (const auto& c : comps) {
        if (c.type.affine()) fail("AffineComponent", "component " + c.type.name() + " is affine; use affine mode");
        has_g2 = has_g2 || c.type.name() == "G2";
    }
    bool targets = false;
    std::string ex = excluded_case_of(d, nullptr, &targets);
    if (ex == "G2G2") {
        dec.excluded_case = ex;
        if (!targets) {
            dec.reasons.push_back("EXCLUDED_CASE");
            dec.details.push_back("EXCLUDED_CASE: G2..G2 with arrow targets linked to non-targets admits no matrix");
        } else {
            dec.orders = {5};
            dec.any_prime = true;
        }
        finish(dec);
        return dec;
    }
    bool cd1 = true;
    for (const auto& c : comps)
        if (c.type.name() == "G2" && both_linked(d, c.vertices)) {
            cd1 = false;
            dec.details.push_back("CD1: both vertices of G2 component {" + vname(c.vertices[0]) + "," + vname(c.vertices[1]) + "} are linked");
        }
    if (!cd1) dec.reasons.push_back("CD1");
    check_link_pairs(d, to_cartan(d), "CD2", dec);
    if (cd1) {
        dec.genus_gcd = genus_gcd(d, Mode::Finite, budget);
        if (dec.genus_gcd == 0) {
            dec.orders = {has_g2 ? 5 : 3};
            dec.any_prime = true;
        } else {
            long long g = to_ll(dec.genus_gcd);
            for (long long k = 3; k <= g; ++k)
                if (g % k == 0 && (!has_g2 || k % 3 != 0)) dec.orders.push_back(k);
            if (dec.orders.empty()) {
                dec.reasons.push_back("CD3");
                dec.details.push_back("CD3: genus gcd " + dec.genus_gcd.str() + " has no admissible divisor d > 2" +
                                      (has_g2 ? " coprime to 3" : ""));
            }
        }
    }
    if (!dec.reasons.empty()) dec.orders.clear(), dec.any_prime = false;
    finish(dec);
    return dec;
}

Decision decide_affine(const Diagram& d, std::uint64_t budget) {
    check_preconditions(d);
    Decision dec;
    dec.mode = Mode::Affine;
    auto comps = classify_components(d);
    bool targets = false;
    std::string ex = excluded_case_of(d, nullptr, &targets);
    if (ex == "A1affA1aff" || ex == "A2affA2aff") {
        dec.excluded_case = ex;
        if (!targets) {
            dec.reasons.push_back("EXCLUDED_CASE");
            dec.details.push_back("EXCLUDED_CASE: arrow targets linked to non-targets admit no matrix");
        } else {
            dec.orders = {5};
            dec.any_prime = true;
        }
        finish(dec);
        return dec;
    }
    bool dc1 = true;
    for (const auto& c : comps) {
        std::string n = c.type.name();
        if ((n == "A1(1)" || n == "A2(2)") && both_linked(d, c.vertices)) {
            dc1 = false;
            dec.details.push_back("DC1: both vertices of " + n + " component {" + vname(c.vertices[0]) + "," + vname(c.vertices[1]) + "} are linked");
        }
    }
    if (!dc1) dec.reasons.push_back("DC1");
    check_link_pairs(d, to_cartan(d), "DC2", dec);
    if (dc1) {
        dec.genus_gcd = genus_gcd(d, Mode::Affine, budget);
        if (dec.genus_gcd == 0) {
            dec.orders = {5};
            dec.any_prime = true;
        } else {
            long long g = to_ll(dec.genus_gcd);
            for (long long p = 5; p <= g; ++p)
                if (g % p == 0 && is_prime(p)) dec.orders.push_back(p);
            if (dec.orders.empty()) {
                dec.reasons.push_back("DC3");
                dec.details.push_back("DC3: no prime p > 3 divides the genus gcd " + dec.genus_gcd.str());
            }
        }
    }
    if (!dec.reasons.empty()) dec.orders.clear(), dec.any_prime = false;
    finish(dec);
    return dec;
}

Decision decide_nonroot(const Diagram& d, std::uint64_t budget) {
    check_preconditions(d);
    Decision dec;
    dec.mode = Mode::Nonroot;
    for (const auto& c : classify_components(d))
        if (c.type.affine()) fail("AffineComponent", "component " + c.type.name() + " is affine");
    if (excluded_case_of(d) == "G2G2") fail("ValidationError", "G2..G2 is excluded from the non-root-of-unity criterion");
    bool cd1 = true;
    for (const auto& c : classify_components(d))
        if (c.type.name() == "G2" && both_linked(d, c.vertices)) {
            cd1 = false;
            dec.details.push_back("CD1: both vertices of a G2 component are linked");
        }
    if (!cd1) dec.reasons.push_back("CD1");
    check_link_pairs(d, to_cartan(d), "CD2", dec);
    if (cd1) {
        for (const auto& c : enumerate_cycles(d, budget)) {
            auto m = cycle_metrics(d, c, Mode::Finite);
            if (m.genus_finite != 0) {
                dec.reasons.push_back("CD3");
                dec.details.push_back("CD3: a cycle through vertex " + vname(c.vertices[0]) + " has " + std::to_string(m.l) +
                                      " dotted edges and double-edge imbalance " + std::to_string(m.w2));
                break;
            }
        }
    }
    finish(dec);
    return dec;
}

Decision decide(const Diagram& d, Mode mode, std::uint64_t budget) {
    switch (mode) {
        case Mode::Finite: return decide_finite(d, budget);
        case Mode::Affine: return decide_affine(d, budget);
        default: return decide_nonroot(d, budget);
    }
}

}  // namespace linkdyn
