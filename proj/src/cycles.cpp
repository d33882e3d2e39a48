#include "linkdyn/cycles.hpp"

#include "linkdyn/error.hpp"

#include <algorithm>
#include <functional>

namespace linkdyn {

std::vector<GraphEdge> multigraph_edges(const Diagram& d) {
    std::vector<GraphEdge> out;
    int id = 0;
    for (const auto& e : d.edges()) out.push_back({id++, e.i, e.j, false, e.kind});
    for (auto [i, j] : d.links()) out.push_back({id++, i, j, true, {}});
    return out;
}

namespace {

Cycle canonical(Cycle c) {
    int n = static_cast<int>(c.vertices.size());
    auto rot = std::min_element(c.vertices.begin(), c.vertices.end()) - c.vertices.begin();
    std::rotate(c.vertices.begin(), c.vertices.begin() + rot, c.vertices.end());
    std::rotate(c.edges.begin(), c.edges.begin() + rot, c.edges.end());
    Cycle r = reversed(c);
    bool flip = n > 2 ? r.vertices[1] < c.vertices[1] : r.edges < c.edges;
    return flip ? r : c;
}

}  // namespace

Cycle reversed(const Cycle& c) {
    // keep the first vertex, walk the other way round
    Cycle r;
    int n = static_cast<int>(c.vertices.size());
    r.vertices.push_back(c.vertices[0]);
    for (int k = n - 1; k >= 1; --k) r.vertices.push_back(c.vertices[k]);
    for (int k = n - 1; k >= 0; --k) r.edges.push_back(c.edges[k]);
    return r;
}

std::vector<Cycle> enumerate_cycles(const Diagram& d, std::uint64_t budget) {
    auto edges = multigraph_edges(d);
    int n = d.size();
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbour, edge id)
    for (const auto& e : edges) {
        adj[e.u].push_back({e.v, e.id});
        adj[e.v].push_back({e.u, e.id});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<Cycle> out;
    std::vector<bool> on_path(n, false);
    std::vector<int> vpath, epath;
    std::uint64_t steps = 0;
    const std::uint64_t step_cap = budget * 64 + 100000;
    // Each cycle is found from its least vertex s, once per direction; only
    // the canonical direction is kept.
    std::function<void(int, int)> dfs = [&](int s, int v) {
        if (++steps > step_cap) fail("BudgetExceeded", "cycle search exceeded its step budget");
        for (auto [w, eid] : adj[v]) {
            if (!epath.empty() && eid == epath.back()) continue;
            if (w == s) {
                if (vpath.size() == 1) continue;
                Cycle c{vpath, epath};
                c.edges.push_back(eid);
                if (canonical(c) == c) {
                    out.push_back(std::move(c));
                    if (out.size() > budget) fail("BudgetExceeded", "more than " + std::to_string(budget) + " cycles");
                }
                continue;
            }
            if (w < s || on_path[w]) continue;
            on_path[w] = true;
            vpath.push_back(w);
            epath.push_back(eid);
            dfs(s, w);
            on_path[w] = false;
            vpath.pop_back();
            epath.pop_back();
        }
    };
    for (int s = 0; s < n; ++s) {
        on_path[s] = true;
        vpath = {s};
        epath.clear();
        dfs(s, s);
        on_path[s] = false;
    }
    std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
        if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
        return std::tie(a.vertices, a.edges) < std::tie(b.vertices, b.edges);
    });
    return out;
}

namespace {

// +1 if the edge is an arrowed edge of the given multiplicity pointing from
// `from` towards `to`, -1 if pointing back, 0 otherwise.
int arrow_sign(const GraphEdge& e, int to, int mult) {
    if (e.dotted || e.kind.a1aff || e.kind.multiplicity != mult) return 0;
    return e.kind.arrow == to ? 1 : -1;
}

BigInt pow_big(int base, int exp) {
    BigInt r = 1;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
}

std::vector<int> closed_heights(const std::vector<GraphEdge>& edges, const Cycle& c) {
    int n = static_cast<int>(c.vertices.size());
    std::vector<int> out;
    for (int start = 0; start < n; ++start) {
        int h = 0;
        for (int k = 0; k < n; ++k) {
            int pos = (start + k) % n;
            int next = c.vertices[(pos + 1) % n];
            int s = arrow_sign(edges[c.edges[pos]], next, 2);
            if (s > 0) ++h;
            if (s < 0 && h > 0) --h;
        }
        out.push_back(h);
    }
    return out;
}

}  // namespace

CycleMetrics cycle_metrics(const Diagram& d, const Cycle& c, Mode mode) {
    auto edges = multigraph_edges(d);
    int n = static_cast<int>(c.vertices.size());
    CycleMetrics m;
    int with2 = 0, against2 = 0, with3 = 0, against3 = 0;
    for (int k = 0; k < n; ++k) {
        const auto& e = edges[c.edges[k]];
        int to = c.vertices[(k + 1) % n];
        if (e.dotted) {
            ++m.l;
            continue;
        }
        if (e.kind.a1aff) continue;
        int mult = e.kind.multiplicity;
        if (mult == 4) fail("UnsupportedEdgeOnCycle", "quadruple edge on a cycle");
        if (mult == 3 && mode != Mode::Affine) fail("UnsupportedEdgeOnCycle", "triple edge on a cycle in finite mode");
        int s = arrow_sign(e, to, mult);
        if (mult == 2) (s > 0 ? with2 : against2)++;
        if (mult == 3) (s > 0 ? with3 : against3)++;
    }
    m.w2 = std::abs(with2 - against2);
    m.w3 = std::abs(with3 - against3);
    m.forward_natural = with2 <= against2;
    bool nat3_forward = with3 <= against3;
    m.orientations_coincide = m.w2 == 0 || m.w3 == 0 || m.forward_natural == nat3_forward;
    BigInt sign = (m.l % 2) ? -1 : 1;
    m.genus_finite = pow_big(2, m.w2) - sign;
    BigInt p3 = pow_big(3, m.w3), p2 = pow_big(2, m.w2);
    if (m.orientations_coincide) {
        m.genus_affine = p3 * p2 - sign;
    } else {
        BigInt g = p3 - p2 * sign;
        m.genus_affine = g < 0 ? BigInt(-g) : g;
    }
    m.level0 = level0_vertices(d, c);
    return m;
}

std::vector<int> level0_vertices(const Diagram& d, const Cycle& c) {
    auto edges = multigraph_edges(d);
    int with2 = 0, against2 = 0;
    int n = static_cast<int>(c.vertices.size());
    for (int k = 0; k < n; ++k) {
        int s = arrow_sign(edges[c.edges[k]], c.vertices[(k + 1) % n], 2);
        if (s > 0) ++with2;
        if (s < 0) ++against2;
    }
    Cycle nat = with2 <= against2 ? c : reversed(c);
    auto hs = closed_heights(edges, nat);
    std::vector<int> out;
    for (int k = 0; k < n; ++k)
        if (hs[k] == 0) out.push_back(nat.vertices[k]);
    std::sort(out.begin(), out.end());
    return out;
}

HeightTrace height(const Diagram& d, const std::vector<int>& path, const std::vector<int>& edge_ids) {
    auto edges = multigraph_edges(d);
    if (path.empty()) fail("InvalidPath", "empty path");
    if (!edge_ids.empty() && edge_ids.size() + 1 != path.size()) fail("InvalidPath", "edge list does not match path");
    std::vector<int> seen = path;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) fail("InvalidPath", "path repeats a vertex");
    HeightTrace t;
    t.values.push_back(0);
    int h = 0;
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        int a = path[k], b = path[k + 1];
        if (a < 0 || b < 0 || a >= d.size() || b >= d.size()) fail("InvalidPath", "vertex out of range");
        const GraphEdge* e = nullptr;
        if (!edge_ids.empty()) {
            int id = edge_ids[k];
            if (id < 0 || id >= static_cast<int>(edges.size())) fail("InvalidPath", "edge id out of range");
            e = &edges[id];
        } else {
            for (const auto& cand : edges)
                if ((cand.u == a && cand.v == b) || (cand.u == b && cand.v == a))
                    if (!e || (e->dotted && !cand.dotted)) e = &cand;
        }
        if (!e || !((e->u == a && e->v == b) || (e->u == b && e->v == a)))
            fail("InvalidPath", "vertices " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " are not adjacent");
        int s = arrow_sign(*e, b, 2);
        if (s > 0) ++h;
        if (s < 0 && h > 0) --h;
        t.values.push_back(h);
    }
    return t;
}

BigInt genus_gcd(const Diagram& d, Mode mode, std::uint64_t budget) {
    BigInt g = 0;
    for (const auto& c : enumerate_cycles(d, budget)) {
        auto m = cycle_metrics(d, c, mode);
        g = boost::multiprecision::gcd(g, mode == Mode::Affine ? m.genus_affine : m.genus_finite);
    }
    return g;
}

}  // namespace linkdyn
