#include "linkdyn/braiding.hpp"

#include "linkdyn/error.hpp"

#include <numeric>
#include <queue>

namespace linkdyn {

long long mod_norm(long long a, long long d) {
    if (d == 0) return a;
    long long r = a % d;
    return r < 0 ? r + d : r;
}

SymbolicUnit SymbolicUnit::mul(const SymbolicUnit& o, long long d) const {
    SymbolicUnit r = *this;
    r.q = mod_norm(r.q + o.q, d);
    for (auto [s, k] : o.z) {
        int& e = r.z[s];
        e += k;
        if (e == 0) r.z.erase(s);
    }
    return r;
}

SymbolicUnit SymbolicUnit::pow(long long k, long long d) const {
    SymbolicUnit r;
    r.q = mod_norm(q * k, d);
    if (k != 0)
        for (auto [s, e] : z) r.z[s] = static_cast<int>(e * k);
    return r;
}

BraidingMatrix BraidingMatrix::concretized() const {
    BraidingMatrix r = *this;
    for (auto& row : r.b)
        for (auto& u : row) u.z.clear();
    r.symbol_count = 0;
    return r;
}

namespace {

long long inverse_mod(long long a, long long d) {
    long long old_r = mod_norm(a, d), cur_r = d, old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        long long qt = old_r / cur_r;
        std::tie(old_r, cur_r) = std::make_pair(cur_r, old_r - qt * cur_r);
        std::tie(old_s, cur_s) = std::make_pair(cur_s, old_s - qt * cur_s);
    }
    if (old_r != 1) fail("NonInvertibleDivisor", std::to_string(a) + " is not invertible modulo " + std::to_string(d));
    return mod_norm(old_s, d);
}

struct Frac {
    long long num = 0, den = 1;
};

Frac normalize(long long n, long long d) {
    if (d < 0) n = -n, d = -d;
    long long g = std::gcd(std::llabs(n), d);
    return {n / g, d / g};
}

// Diagonal exponents by propagation along a BFS tree from the seed.
std::vector<long long> propagate(const Diagram& dg, int seed, long long d) {
    int n = dg.size();
    if (seed < 0 || seed >= n) fail("ValidationError", "seed vertex out of range");
    CartanMatrix a = to_cartan(dg);
    auto edges = multigraph_edges(dg);
    std::vector<std::vector<std::pair<int, const GraphEdge*>>> adj(n);
    for (const auto& e : edges) {
        adj[e.u].push_back({e.v, &e});
        adj[e.v].push_back({e.u, &e});
    }
    std::vector<Frac> val(n);
    std::vector<long long> modval(n, 0);
    std::vector<bool> seen(n, false);
    std::queue<int> qu;
    val[seed] = {1, 1};
    modval[seed] = 1;
    seen[seed] = true;
    qu.push(seed);
    while (!qu.empty()) {
        int p = qu.front();
        qu.pop();
        for (auto [r, e] : adj[p]) {
            if (seen[r]) continue;
            seen[r] = true;
            if (d > 0) {
                modval[r] = e->dotted ? mod_norm(-modval[p], d)
                                      : mod_norm(mod_norm(modval[p] * a[p][r], d) * inverse_mod(a[r][p], d), d);
            } else if (e->dotted) {
                val[r] = {-val[p].num, val[p].den};
            } else {
                val[r] = normalize(val[p].num * a[p][r], val[p].den * a[r][p]);
            }
            qu.push(r);
        }
    }
    for (int v = 0; v < n; ++v)
        if (!seen[v]) fail("NotLinkConnected", "vertex " + std::to_string(v + 1) + " unreachable from the seed");
    if (d > 0) return modval;
    long long l = 1;
    for (const auto& f : val) l = std::lcm(l, f.den);
    std::vector<long long> out(n);
    for (int v = 0; v < n; ++v) out[v] = val[v].num * (l / val[v].den);
    return out;
}

BraidingMatrix build(const Diagram& dg, const std::vector<long long>& diag, long long d) {
    int n = dg.size();
    CartanMatrix a = to_cartan(dg);
    BraidingMatrix m;
    m.d = d;
    m.b.assign(n, std::vector<SymbolicUnit>(n));
    std::vector<std::vector<bool>> set(n, std::vector<bool>(n, false));
    auto put = [&](int i, int j, long long qe, int sym, int zexp) {
        SymbolicUnit u;
        u.q = mod_norm(qe, d);
        if (zexp) u.z[sym] = zexp;
        if (set[i][j]) fail("ValidationError", "off-diagonal entry assigned twice");
        m.b[i][j] = u;
        set[i][j] = true;
    };
    for (int i = 0; i < n; ++i) {
        m.b[i][i].q = mod_norm(diag[i], d);
        set[i][i] = true;
    }
    int sym = 0;
    // neither vertex linkable
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dg.partner(i) == -1 && dg.partner(j) == -1) {
                ++sym;
                put(j, i, 0, sym, 1);
                put(i, j, diag[i] * a[i][j], sym, -1);
            }
    // linked to each other
    for (auto [i, j] : dg.links()) {
        put(i, j, -diag[i], 0, 0);
        put(j, i, -diag[j], 0, 0);
    }
    // exactly one linkable: i...k, j free
    for (auto [i, k] : dg.links())
        for (int j = 0; j < n; ++j)
            if (dg.partner(j) == -1) {
                ++sym;
                put(j, i, 0, sym, 1);
                put(i, j, diag[i] * a[i][j], sym, -1);
                put(j, k, 0, sym, -1);
                put(k, j, diag[k] * a[k][j], sym, 1);
            }
    // both linkable: i...k and j...l, arranged so that a_jk = a_il = 0
    const auto& links = dg.links();
    for (size_t x = 0; x < links.size(); ++x)
        for (size_t y = x + 1; y < links.size(); ++y) {
            auto [i, k] = links[x];
            auto [j, l] = links[y];
            if (a[j][k] != 0 || a[i][l] != 0) std::swap(i, k);
            ++sym;
            put(j, i, 0, sym, 1);
            put(k, j, 0, sym, 1);
            put(i, j, diag[i] * a[i][j], sym, -1);
            put(l, i, diag[i] * a[i][j], sym, -1);
            put(j, k, 0, sym, -1);
            put(k, l, 0, sym, -1);
            put(i, l, -diag[i] * a[i][j], sym, 1);
            put(l, k, -diag[i] * a[i][j], sym, 1);
        }
    m.symbol_count = sym;
    return m;
}

long long pick_order(const Decision& dec, long long order) {
    if (!dec.exists) fail("NotDecided", "no linkable braiding matrix exists for this diagram");
    if (order <= 0) return dec.default_order();
    if (!dec.any_prime) {
        for (long long o : dec.orders)
            if (o == order) return order;
        fail("ValidationError", "order " + std::to_string(order) + " is not admissible");
    }
    return order;
}

BraidingMatrix construct_routed_excluded(const Diagram& dg, const Decision& dec, long long d) {
    std::vector<int> ord;
    excluded_case_of(dg, &ord);
    BraidingMatrix ref = construct_excluded(parse_excluded_case(dec.excluded_case), true, d);
    BraidingMatrix m = ref;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) m.b[ord[x]][ord[y]] = ref.b[x][y];
    return m;
}

}  // namespace

BraidingMatrix construct_finite(const Diagram& dg, const Decision& dec, int seed, long long order) {
    long long d = pick_order(dec, order);
    if (!dec.excluded_case.empty()) return construct_routed_excluded(dg, dec, d);
    return build(dg, propagate(dg, seed, d), d);
}

BraidingMatrix construct_affine(const Diagram& dg, const Decision& dec, int seed, long long order) {
    long long d = pick_order(dec, order);
    if (!dec.excluded_case.empty()) return construct_routed_excluded(dg, dec, d);
    return build(dg, propagate(dg, seed, d), d);
}

BraidingMatrix construct_nonroot(const Diagram& dg, const Decision& dec, int seed) {
    if (!dec.exists) fail("NotDecided", "no linkable braiding matrix exists for this diagram");
    return build(dg, propagate(dg, seed, 0), 0);
}

BraidingMatrix construct(const Diagram& dg, const Decision& dec, int seed, long long order) {
    switch (dec.mode) {
        case Mode::Finite: return construct_finite(dg, dec, seed, order);
        case Mode::Affine: return construct_affine(dg, dec, seed, order);
        default: return construct_nonroot(dg, dec, seed);
    }
}

ExcludedCase parse_excluded_case(const std::string& s) {
    if (s == "G2G2") return ExcludedCase::G2G2;
    if (s == "A1affA1aff") return ExcludedCase::A1affA1aff;
    if (s == "A2affA2aff") return ExcludedCase::A2affA2aff;
    fail("ValidationError", "unknown excluded case '" + s + "'");
}

Diagram excluded_diagram(ExcludedCase c, bool with_cycle) {
    Diagram d(4);
    EdgeKind k1, k2;
    switch (c) {
        case ExcludedCase::G2G2: k1 = EdgeKind::arrowed(3, 0), k2 = EdgeKind::arrowed(3, 2); break;
        case ExcludedCase::A1affA1aff: k1 = k2 = EdgeKind::affine_a1(); break;
        case ExcludedCase::A2affA2aff: k1 = EdgeKind::arrowed(4, 0), k2 = EdgeKind::arrowed(4, 2); break;
    }
    d.add_edge(0, 1, k1);
    d.add_edge(2, 3, k2);
    d.add_link(0, 2);
    if (with_cycle) d.add_link(1, 3);
    return d;
}

BraidingMatrix construct_excluded(ExcludedCase c, bool with_cycle, long long order) {
    if (order <= 2) fail("ValidationError", "order must exceed 2");
    if (!with_cycle) {
        Diagram dg = excluded_diagram(c, false);
        Decision dec = c == ExcludedCase::G2G2 ? decide_finite(dg) : decide_affine(dg);
        return construct(dg, dec, 0, order);
    }
    int n = 0, m = 0;
    switch (c) {
        case ExcludedCase::G2G2: n = m = 3; break;
        case ExcludedCase::A1affA1aff: n = 1, m = 2; break;
        case ExcludedCase::A2affA2aff: n = m = 4; break;
    }
    auto u = [&](long long qe, int ze) {
        SymbolicUnit s;
        s.q = mod_norm(qe, order);
        if (ze) s.z[1] = ze;
        return s;
    };
    // The displayed table satisfies the linking condition column-wise, so it is
    // stored transposed; the diagonal and the products b_ij b_ji are unchanged.
    std::vector<std::vector<SymbolicUnit>> shown = {
        {u(1, 0), u(0, 1), u(1, 0), u(-m, -1)},
        {u(-m, -1), u(n, 0), u(0, 1), u(n, 0)},
        {u(-1, 0), u(0, -1), u(-1, 0), u(m, 1)},
        {u(m, 1), u(-n, 0), u(0, -1), u(-n, 0)},
    };
    BraidingMatrix bm;
    bm.d = order;
    bm.symbol_count = 1;
    bm.b = shown;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) bm.b[i][j] = shown[j][i];
    return bm;
}

namespace {

long long order_of(long long e, long long d) { return d / std::gcd(mod_norm(e, d), d); }

bool prime(long long n) {
    if (n < 2) return false;
    for (long long k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

std::string entry(int i, int j) { return "b_" + std::to_string(i + 1) + "," + std::to_string(j + 1); }

}  // namespace

std::vector<Violation> verify(const Diagram& dg, const BraidingMatrix& m, Mode mode) {
    std::vector<Violation> out;
    int n = dg.size();
    if (m.size() != n) {
        out.push_back({"shape", -1, -1, -1, "matrix size does not match the diagram"});
        return out;
    }
    for (const auto& row : m.b)
        if (static_cast<int>(row.size()) != n) {
            out.push_back({"shape", -1, -1, -1, "matrix is not square"});
            return out;
        }
    long long d = m.d;
    CartanMatrix a = to_cartan(dg);
    bool has_g2 = false;
    for (const auto& c : classify_components(dg)) has_g2 = has_g2 || c.type.name() == "G2";

    for (int i = 0; i < n; ++i) {
        const auto& bii = m.b[i][i];
        if (!bii.z.empty()) out.push_back({"order", i, i, -1, entry(i, i) + " carries a free parameter"});
        if (mod_norm(bii.q, d) == 0) {
            out.push_back({"order", i, i, -1, entry(i, i) + " = 1"});
            continue;
        }
        if (d == 0) continue;
        long long ord = order_of(bii.q, d);
        if (mode == Mode::Affine && (ord != d || !prime(d)))
            out.push_back({"order", i, i, -1, entry(i, i) + " has order " + std::to_string(ord) + ", not the prime " + std::to_string(d)});
        if (mode == Mode::Finite && (ord <= 2 || (has_g2 && ord % 3 == 0)))
            out.push_back({"order", i, i, -1, entry(i, i) + " has inadmissible order " + std::to_string(ord)});
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            SymbolicUnit lhs = m.b[i][j].mul(m.b[j][i], d);
            if (!(lhs == m.b[i][i].pow(a[i][j], d)) || !(lhs == m.b[j][j].pow(a[j][i], d)))
                out.push_back({"cartan", i, j, -1, "b_ij b_ji != b_ii^a_ij for (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"});
        }
    for (auto [x, y] : dg.links())
        for (int dir = 0; dir < 2; ++dir) {
            int i = dir ? y : x, j = dir ? x : y;
            for (int k = 0; k < n; ++k) {
                SymbolicUnit v = m.b[k][i].pow(1 - a[i][j], d).mul(m.b[k][j], d);
                if (!v.is_one())
                    out.push_back({"link", i, j, k, "linking condition fails for " + std::to_string(i + 1) + "..." + std::to_string(j + 1) + " at row " + std::to_string(k + 1)});
            }
        }
    return out;
}

}  // namespace linkdyn
