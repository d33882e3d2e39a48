#include "linkdyn/realize.hpp"

#include "linkdyn/error.hpp"

#include <algorithm>
#include <numeric>

namespace linkdyn {

namespace {

long long md(long long a, long long p) {
    long long r = a % p;
    return r < 0 ? r + p : r;
}

long long mul(long long a, long long b, long long p) {
    return static_cast<long long>(static_cast<__int128>(md(a, p)) * md(b, p) % p);
}

long long frac(long long num, long long den, long long p) { return mul(num, inv_mod(den, p), p); }

// Roots of A X^2 + B X + C = 0 over Z/p, p odd.
std::vector<long long> quadratic_roots(long long A, long long B, long long C, long long p) {
    A = md(A, p), B = md(B, p), C = md(C, p);
    std::vector<long long> out;
    if (A == 0) {
        if (B != 0) out.push_back(md(-mul(C, inv_mod(B, p), p), p));
        return out;
    }
    auto s = sqrt_mod(md(mul(B, B, p) - mul(4 * A, C, p), p), p);
    if (!s) return out;
    long long inv2a = inv_mod(2 * A, p);
    out.push_back(mul(md(-B + *s, p), inv2a, p));
    long long other = mul(md(-B - *s, p), inv2a, p);
    if (other != out[0]) out.push_back(other);
    std::sort(out.begin(), out.end());
    return out;
}

void require_prime(long long p) {
    if (p < 5 || !is_prime(p)) fail("BadPrime", "p = " + std::to_string(p) + " is not a prime >= 5");
}

CartanMatrix build_cartan(int n, std::initializer_list<std::array<int, 4>> edges) {
    CartanMatrix a(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 2;
    // {u, v, multiplicity, arrow target (-1 for single edges)}
    for (auto [u, v, mult, target] : edges) {
        if (target < 0) {
            a[u][v] = a[v][u] = -1;
            continue;
        }
        int other = target == u ? v : u;
        a[other][target] = -1;
        a[target][other] = -mult;
    }
    return a;
}

// Characters from g, the first two diagonal exponents and chi_1(g_2) = q^t,
// using E_ij + E_ji = a_ij E_ii against vertices 1 and 2.
std::vector<Pair> assemble_chi(const CartanMatrix& a, const std::vector<Pair>& g, long long e1, long long e2, long long t, long long p) {
    int n = static_cast<int>(g.size());
    std::vector<Pair> chi(n);
    chi[0] = {md(e1, p), md(t, p)};
    chi[1] = {md(a[0][1] * e1 - t, p), md(e2, p)};
    auto dot = [&](const Pair& x, const Pair& y) { return md(mul(x[0], y[0], p) + mul(x[1], y[1], p), p); };
    for (int j = 2; j < n; ++j)
        chi[j] = {md(a[0][j] * e1 - dot(g[j], chi[0]), p), md(a[1][j] * e2 - dot(g[j], chi[1]), p)};
    return chi;
}

bool meets(const Realization& r, const RealizeOptions& opt) {
    for (auto [i, j] : opt.opposite_diagonals)
        if (md(r.E[i][i] + r.E[j][j], r.p) != 0) return false;
    return true;
}

std::optional<Realization> finish(const std::string& name, const CartanMatrix& a, std::vector<Pair> g, long long e1, long long e2,
                                  long long p, const RealizeOptions& opt, std::map<std::string, long long> params) {
    Realization r;
    r.p = p;
    r.t = md(opt.t, p);
    r.chi = assemble_chi(a, g, e1, e2, r.t, p);
    r.g = std::move(g);
    r.E = exponent_matrix(r.g, r.chi, p);
    r.source = name;
    r.params = std::move(params);
    if (!verify_realization(a, r).empty() || !meets(r, opt)) return std::nullopt;
    return r;
}

std::vector<long long> candidates(std::optional<long long> fixed, long long p) {
    if (fixed) return {*fixed};
    std::vector<long long> all;
    for (long long v = 1; v < p; ++v) all.push_back(v);
    return all;
}

bool is_square(long long a, long long p) { return sqrt_mod(a, p).has_value(); }

}  // namespace

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long long pow_mod(long long b, long long e, long long p) {
    long long r = 1 % p;
    b = md(b, p);
    for (; e > 0; e >>= 1) {
        if (e & 1) r = mul(r, b, p);
        b = mul(b, b, p);
    }
    return r;
}

long long inv_mod(long long a, long long p) {
    a = md(a, p);
    if (a == 0 || std::gcd(a, p) != 1) fail("ValidationError", std::to_string(a) + " is not invertible modulo " + std::to_string(p));
    long long r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    return md(s0, p);
}

// Tonelli-Shanks.
std::optional<long long> sqrt_mod(long long a, long long p) {
    a = md(a, p);
    if (a == 0) return 0;
    if (p == 2) return a;
    if (pow_mod(a, (p - 1) / 2, p) != 1) return std::nullopt;
    long long q = p - 1, s = 0;
    while (q % 2 == 0) q /= 2, ++s;
    long long z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    long long m = s, c = pow_mod(z, q, p), t = pow_mod(a, q, p), r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        long long i = 0, tt = t;
        while (tt != 1) tt = mul(tt, tt, p), ++i;
        long long b = c;
        for (long long k = 0; k < m - i - 1; ++k) b = mul(b, b, p);
        m = i;
        c = mul(b, b, p);
        t = mul(t, c, p);
        r = mul(r, b, p);
    }
    return std::min(r, p - r);
}

std::vector<std::pair<long long, long long>> solve_conic(long long y, long long p) {
    std::vector<std::pair<long long, long long>> out;
    for (long long a = 0; a < p; ++a) {
        auto b = sqrt_mod(md(-y - 3 * mul(a, a, p), p), p);
        if (!b) continue;
        out.push_back({a, *b});
        if (*b != 0) out.push_back({a, p - *b});
    }
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<std::string>& part_a_names() {
    static const std::vector<std::string> names = {"A4", "B4", "C4", "F4", "A3A1", "B3A1", "C3A1", "A2A2", "A2B2", "A2G2", "A2A1A1"};
    return names;
}

const std::vector<std::string>& part_b_names() {
    static const std::vector<std::string> names = {"B2B2", "B2G2", "G2G2", "B2A1A1", "G2A1A1", "A1A1A1A1"};
    return names;
}

// Vertices 1,2 form the first component; double and triple edges come last.
CartanMatrix realization_catalog_cartan(const std::string& name) {
    static const std::map<std::string, CartanMatrix> table = {
        {"A4", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 1, -1}, {2, 3, 1, -1}})},
        {"B4", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 1, -1}, {2, 3, 2, 3}})},
        {"C4", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 1, -1}, {2, 3, 2, 2}})},
        {"F4", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 2, 1}, {2, 3, 1, -1}})},
        {"A3A1", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 1, -1}})},
        {"B3A1", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 2, 2}})},
        {"C3A1", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 2, 1}})},
        {"A2A2", build_cartan(4, {{0, 1, 1, -1}, {2, 3, 1, -1}})},
        {"A2B2", build_cartan(4, {{0, 1, 1, -1}, {2, 3, 2, 3}})},
        {"A2G2", build_cartan(4, {{0, 1, 1, -1}, {2, 3, 3, 3}})},
        {"A2A1A1", build_cartan(4, {{0, 1, 1, -1}})},
        {"B2B2", build_cartan(4, {{0, 1, 2, 0}, {2, 3, 2, 2}})},
        {"B2G2", build_cartan(4, {{0, 1, 2, 0}, {2, 3, 3, 2}})},
        {"G2G2", build_cartan(4, {{0, 1, 3, 0}, {2, 3, 3, 2}})},
        {"B2A1A1", build_cartan(4, {{0, 1, 2, 0}})},
        {"G2A1A1", build_cartan(4, {{0, 1, 3, 0}})},
        {"A1A1A1A1", build_cartan(4, {})},
        {"D4", build_cartan(4, {{0, 1, 1, -1}, {1, 2, 1, -1}, {1, 3, 1, -1}})},
        {"A4A1", build_cartan(5, {{0, 1, 1, -1}, {1, 2, 1, -1}, {2, 3, 1, -1}})},
    };
    auto it = table.find(name);
    if (it == table.end()) fail("Unsupported", "no realization catalog entry '" + name + "'");
    return it->second;
}

RealizeOutcome realize_part_a(const std::string& name, long long p, const RealizeOptions& opt) {
    require_prime(p);
    if (std::find(part_a_names().begin(), part_a_names().end(), name) == part_a_names().end())
        fail("Unsupported", name + " is not in the first realization class");
    CartanMatrix a = realization_catalog_cartan(name);
    long long a23 = a[1][2], a32 = a[2][1], a34 = a[2][3], a43 = a[3][2];
    std::optional<long long> fixed_x;
    if (a32 != 0) fixed_x = frac(a23, a32, p);
    bool saw_square = false;
    for (long long x : candidates(fixed_x, p)) {
        std::optional<long long> fixed_z;
        if (a43 != 0) fixed_z = frac(mul(x, a34, p), a43, p);
        long long y = md(3 * x - a23 * a23, p);
        if (y == 0) continue;
        for (long long z : candidates(fixed_z, p)) {
            if (z == 0) continue;
            long long disc = md(4 * mul(y, z, p) - 3 * mul(mul(x, x, p), a34 * a34, p), p);
            if (!is_square(disc, p)) continue;
            saw_square = true;
            for (auto [ca, cb] : solve_conic(y, p)) {
                if (ca == cb) continue;
                long long xa = mul(x, a34, p);
                // y l^2 - (3a+b) x a34 l - (x^2 a34^2 + z (a-b)^2) = 0
                for (long long l : quadratic_roots(y, -mul(3 * ca + cb, xa, p), -(mul(xa, xa, p) + mul(z, mul(ca - cb, ca - cb, p), p)), p)) {
                    long long k = frac(-(mul(l, ca + cb, p) + xa), ca - cb, p);
                    long long sum = md(2 * ca + a23, p), diff = frac(2 * cb + a23, 3, p);
                    long long m = frac(sum + diff, 2, p), n = frac(sum - diff, 2, p);
                    auto r = finish(name, a, {Pair{1, 0}, Pair{0, 1}, Pair{n, m}, Pair{k, l}}, 1, 1, p, opt,
                                    {{"a", ca}, {"b", cb}, {"n", n}, {"m", m}, {"k", k}, {"l", l}, {"x", x}, {"y", y}, {"z", z}, {"disc", disc}});
                    if (r) return {r, ""};
                }
            }
        }
    }
    if (!saw_square)
        return {std::nullopt, "discriminant 4yz - 3x^2 a34^2 is not a square mod " + std::to_string(p) + " for any admissible x, z"};
    return {std::nullopt, "no solution satisfies the requested diagonal constraints mod " + std::to_string(p)};
}

RealizeOutcome realize_part_b(const std::string& name, long long p, const RealizeOptions& opt) {
    require_prime(p);
    if (std::find(part_b_names().begin(), part_b_names().end(), name) == part_b_names().end())
        fail("Unsupported", name + " is not in the second realization class");
    CartanMatrix a = realization_catalog_cartan(name);
    long long a12 = a[0][1], a21 = a[1][0], a34 = a[2][3], a43 = a[3][2];
    std::optional<long long> fixed_x;
    if (a21 != 0) fixed_x = frac(a12, a21, p);
    auto zs = [&](long long y) {
        std::optional<long long> f;
        if (a43 != 0) f = frac(mul(y, a34, p), a43, p);
        return candidates(f, p);
    };
    for (long long x : candidates(fixed_x, p)) {
        long long w = md(4 * x - a12 * a12, p);
        if (w == 0) continue;
        for (long long y = 1; y < p; ++y)
            for (long long z : zs(y)) {
                if (z == 0) continue;
                long long disc = frac(4 * z - mul(a34 * a34, y, p), mul(w, y, p), p);
                if (!is_square(disc, p)) continue;
                for (long long m = 0; m < p; ++m)
                    for (long long n : quadratic_roots(1, a12 * m, mul(x, mul(m, m, p), p) + y, p)) {
                        long long lin = md(2 * n + a12 * m, p);
                        if (lin == 0) continue;
                        // (4x - a12^2) y l^2 - m a34 (4x - a12^2) y l - (a34^2 y^2 + z (2n + a12 m)^2) = 0
                        long long wy = mul(w, y, p);
                        for (long long l : quadratic_roots(wy, -mul(m * a34, wy, p), -(mul(a34 * a34, mul(y, y, p), p) + mul(z, mul(lin, lin, p), p)), p)) {
                            long long k = frac(-(mul(l, 2 * mul(x, m, p) + a12 * n, p) + a34 * y), lin, p);
                            auto r = finish(name, a, {Pair{1, 0}, Pair{0, 1}, Pair{n, m}, Pair{k, l}}, 1, x, p, opt,
                                            {{"n", n}, {"m", m}, {"k", k}, {"l", l}, {"x", x}, {"y", y}, {"z", z}, {"disc", disc}});
                            if (r) return {r, ""};
                        }
                    }
            }
    }
    // Degenerate branch 2n + a12 m = 0: y is forced by m and l = -a34 y / (2xm + a12 n).
    for (long long x : candidates(fixed_x, p))
        for (long long m = 1; m < p; ++m) {
            long long n = frac(-a12 * m, 2, p);
            long long y = md(-(mul(n, n, p) + mul(a12 * n, m, p) + mul(x, mul(m, m, p), p)), p);
            long long c = md(2 * mul(x, m, p) + a12 * n, p);
            if (y == 0 || c == 0) continue;
            long long l = frac(-a34 * y, c, p);
            for (long long z : zs(y)) {
                if (z == 0) continue;
                for (long long k : quadratic_roots(1, a12 * l, mul(x, mul(l, l, p), p) + z, p)) {
                    auto r = finish(name, a, {Pair{1, 0}, Pair{0, 1}, Pair{n, m}, Pair{k, l}}, 1, x, p, opt,
                                    {{"n", n}, {"m", m}, {"k", k}, {"l", l}, {"x", x}, {"y", y}, {"z", z}});
                    if (r) return {r, ""};
                }
            }
        }
    return {std::nullopt, "discriminant (4z - a34^2 y)/((4x - a12^2) y) is not a square mod " + std::to_string(p) +
                              " for any admissible x, y, z, and the degenerate branch has no solution"};
}

RealizeOutcome realize_d4(long long p, const RealizeOptions& opt) {
    require_prime(p);
    CartanMatrix a = realization_catalog_cartan("D4");
    for (long long m = 0; m < p; ++m)
        for (long long n : quadratic_roots(1, -m, mul(m, m, p) + m + 1, p)) {
            long long lin = md(m - 2 * n, p);
            if (lin == 0) continue;
            for (int sign : {1, -1}) {
                long long l = frac(-(m + 2 + sign * lin), 2, p);
                long long k = frac(m - mul(l, n - 2 * m - 1, p), lin, p);
                auto r = finish("D4", a, {Pair{1, 0}, Pair{0, 1}, Pair{n, m}, Pair{k, l}}, 1, 1, p, opt,
                                {{"n", n}, {"m", m}, {"k", k}, {"l", l}});
                if (r) return {r, ""};
            }
        }
    return {std::nullopt, "no D4 solution mod " + std::to_string(p)};
}

Realization realize_a4a1_p5() {
    CartanMatrix a = realization_catalog_cartan("A4A1");
    auto r = finish("A4A1", a, {Pair{1, 0}, Pair{0, 1}, Pair{4, 2}, Pair{3, 3}, Pair{1, 4}}, 1, 1, 5, {},
                    {{"n", 4}, {"m", 2}, {"k", 3}, {"l", 3}});
    if (!r) fail("ValidationError", "the special A4A1 realization at p = 5 does not verify");
    return *r;
}

std::vector<std::vector<long long>> exponent_matrix(const std::vector<Pair>& g, const std::vector<Pair>& chi, long long p) {
    std::vector<std::vector<long long>> e(g.size(), std::vector<long long>(chi.size()));
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < chi.size(); ++j) e[i][j] = md(mul(g[i][0], chi[j][0], p) + mul(g[i][1], chi[j][1], p), p);
    return e;
}

std::vector<RealizationViolation> verify_realization(const CartanMatrix& a, const Realization& r) {
    std::vector<RealizationViolation> out;
    size_t n = a.size();
    if (r.g.size() != n || r.chi.size() != n) {
        out.push_back({"shape", -1, -1, "realization size does not match the Cartan matrix"});
        return out;
    }
    long long p = r.p;
    auto e = exponent_matrix(r.g, r.chi, p);
    if (!r.E.empty() && r.E != e) out.push_back({"stale", -1, -1, "stored exponent matrix differs from g . chi"});
    for (size_t i = 0; i < n; ++i) {
        if (e[i][i] == 0) out.push_back({"order", int(i), int(i), "chi_" + std::to_string(i + 1) + "(g_" + std::to_string(i + 1) + ") = 1"});
        for (size_t j = 0; j < n; ++j)
            if (i != j && md(e[i][j] + e[j][i] - a[i][j] * e[i][i], p) != 0)
                out.push_back({"cartan", int(i), int(j),
                               "E_" + std::to_string(i + 1) + std::to_string(j + 1) + " + E_" + std::to_string(j + 1) + std::to_string(i + 1) +
                                   " != a_ij E_ii mod " + std::to_string(p)});
    }
    return out;
}

namespace {

// Injective maps f from the vertices of `small` into those of `big` with
// small[i][j] == big[f(i)][f(j)].
void embeddings(const CartanMatrix& small, const CartanMatrix& big, std::vector<int>& f, std::vector<bool>& used,
                std::vector<std::vector<int>>& out) {
    size_t i = f.size();
    if (i == small.size()) {
        out.push_back(f);
        return;
    }
    for (size_t v = 0; v < big.size(); ++v) {
        if (used[v] || big[v][v] != small[i][i]) continue;
        bool ok = true;
        for (size_t u = 0; u < i && ok; ++u) ok = small[i][u] == big[v][f[u]] && small[u][i] == big[f[u]][v];
        if (!ok) continue;
        used[v] = true;
        f.push_back(static_cast<int>(v));
        embeddings(small, big, f, used, out);
        f.pop_back();
        used[v] = false;
    }
}

std::vector<std::vector<int>> embeddings(const CartanMatrix& small, const CartanMatrix& big) {
    std::vector<int> f;
    std::vector<bool> used(big.size(), false);
    std::vector<std::vector<int>> out;
    embeddings(small, big, f, used, out);
    return out;
}

int solid_edge_count(const CartanMatrix& a) {
    int c = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j) c += a[i][j] != 0;
    return c;
}

Realization restrict(const Realization& big, const std::vector<int>& f) {
    Realization r = big;
    r.g.clear();
    r.chi.clear();
    for (int v : f) {
        r.g.push_back(big.g[v]);
        r.chi.push_back(big.chi[v]);
    }
    r.E = exponent_matrix(r.g, r.chi, r.p);
    return r;
}

RealizeOutcome realize_catalog(const std::string& name, long long p, const RealizeOptions& opt) {
    if (name == "D4") return realize_d4(p, opt);
    if (std::find(part_a_names().begin(), part_a_names().end(), name) != part_a_names().end()) return realize_part_a(name, p, opt);
    return realize_part_b(name, p, opt);
}

}  // namespace

RealizeOutcome realize(const Diagram& d, long long p, const RealizeOptions& opt) {
    require_prime(p);
    for (const auto& c : classify_components(d))
        if (c.type.affine()) fail("Unsupported", "affine component " + c.type.name() + " cannot be realized here");
    int n = d.size();
    if (n > 5) fail("TooManyVertices", std::to_string(n) + " vertices; at most 4 are realizable over (Z/p)^2");
    CartanMatrix a = to_cartan(d);
    if (n == 5) {
        auto maps = embeddings(a, realization_catalog_cartan("A4A1"));
        if (p != 5 || maps.empty()) fail("Unsupported", "the only 5-vertex realization handled is A4A1 at p = 5");
        for (const auto& f : maps) {
            Realization r = restrict(realize_a4a1_p5(), f);
            if (meets(r, opt)) return {r, ""};
        }
        return {std::nullopt, "the special A4A1 realization does not meet the diagonal constraints"};
    }
    std::vector<std::string> names = part_a_names();
    names.insert(names.end(), part_b_names().begin(), part_b_names().end());
    names.push_back("D4");
    // Fewest extra edges first, so a subdiagram lands in the loosest cover.
    std::stable_sort(names.begin(), names.end(), [](const std::string& x, const std::string& y) {
        return solid_edge_count(realization_catalog_cartan(x)) < solid_edge_count(realization_catalog_cartan(y));
    });
    std::string reason = "no 4-vertex catalog diagram contains this diagram";
    for (const auto& name : names)
        for (const auto& f : embeddings(a, realization_catalog_cartan(name))) {
            RealizeOptions mapped = opt;
            for (auto& [i, j] : mapped.opposite_diagonals) i = f[i], j = f[j];
            RealizeOutcome out = realize_catalog(name, p, mapped);
            if (out) return {restrict(*out.realization, f), ""};
            reason = name + ": " + out.reason;
        }
    return {std::nullopt, reason};
}

LinkingFeasibility linking_feasibility(const Diagram& d, long long p, const Realization& r, int i, int j) {
    int n = d.size();
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) fail("ValidationError", "linking vertices out of range");
    auto comp = d.component_index();
    if (comp[i] == comp[j]) fail("ValidationError", "vertices " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " lie in one component");
    LinkingFeasibility out;
    if (static_cast<int>(r.E.size()) == n && md(r.E[i][i] + r.E[j][j], p) == 0) {
        out.witness = r;
    } else {
        RealizeOptions opt;
        opt.t = r.t;
        opt.opposite_diagonals = {{i, j}};
        RealizeOutcome o = realize(d, p, opt);
        if (o) out.witness = o.realization;
        else out.message = o.reason;
    }
    out.necessary_ok = out.witness.has_value();
    if (out.witness) {
        const auto& w = *out.witness;
        out.residual_g1 = md(w.chi[i][0] + w.chi[j][0], p) == 0;
        out.residual_g2 = md(w.chi[i][1] + w.chi[j][1], p) == 0;
        out.message = "chi_i(g_i) = chi_j(g_j)^-1 attainable";
    }
    return out;
}

}  // namespace linkdyn
