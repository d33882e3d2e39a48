#include "linkdyn/diagram.hpp"

#include "linkdyn/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

namespace linkdyn {

Diagram::Diagram(int n, bool allow_self_links) : n_(n), allow_self_(allow_self_links), partner_(n, -1) {
    if (n < 0) fail("ValidationError", "negative vertex count");
}

void Diagram::add_edge(int i, int j, EdgeKind kind) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) fail("ValidationError", "edge endpoint out of range");
    if (i == j) fail("ValidationError", "self-loop at vertex " + std::to_string(i + 1));
    if (edge_between(i, j)) fail("ValidationError", "duplicate edge between " + std::to_string(i + 1) + " and " + std::to_string(j + 1));
    if (kind.multiplicity < 1 || kind.multiplicity > 4) fail("ValidationError", "edge multiplicity must be 1..4");
    if (kind.a1aff) {
        kind.multiplicity = 2;
        kind.arrow = -1;
    } else if (kind.multiplicity == 1) {
        if (kind.arrow != -1) fail("ValidationError", "single edge cannot carry an arrow");
    } else if (kind.arrow != i && kind.arrow != j) {
        fail("ValidationError", "arrow target must be an endpoint of its edge");
    }
    edges_.push_back({std::min(i, j), std::max(i, j), kind});
    std::sort(edges_.begin(), edges_.end(), [](const SolidEdge& a, const SolidEdge& b) {
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
}

void Diagram::add_link(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) fail("ValidationError", "link endpoint out of range");
    if (i == j) fail("ValidationError", "a vertex cannot be linked to itself");
    if (partner_[i] != -1 || partner_[j] != -1)
        fail("ValidationError", "dotted links must not share vertices");
    partner_[i] = j;
    partner_[j] = i;
    links_.emplace_back(std::min(i, j), std::max(i, j));
    std::sort(links_.begin(), links_.end());
}

const SolidEdge* Diagram::edge_between(int i, int j) const {
    int a = std::min(i, j), b = std::max(i, j);
    for (const auto& e : edges_)
        if (e.i == a && e.j == b) return &e;
    return nullptr;
}

int Diagram::partner(int v) const { return partner_[v]; }

std::vector<int> Diagram::component_index() const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& e : edges_) parent[find(e.i)] = find(e.j);
    // relabel by least vertex
    std::vector<int> label(n_, -1), out(n_);
    int next = 0;
    for (int v = 0; v < n_; ++v) {
        int r = find(v);
        if (label[r] == -1) label[r] = next++;
        out[v] = label[r];
    }
    return out;
}

std::vector<std::vector<int>> Diagram::components() const {
    auto idx = component_index();
    int count = n_ ? *std::max_element(idx.begin(), idx.end()) + 1 : 0;
    std::vector<std::vector<int>> comps(count);
    for (int v = 0; v < n_; ++v) comps[idx[v]].push_back(v);
    return comps;
}

bool Diagram::has_self_link() const {
    auto idx = component_index();
    for (auto [i, j] : links_)
        if (idx[i] == idx[j]) return true;
    return false;
}

bool Diagram::link_connected() const {
    if (n_ == 0) return true;
    std::vector<std::vector<int>> adj(n_);
    for (const auto& e : edges_) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    for (auto [i, j] : links_) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<bool> seen(n_, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n_;
}

void Diagram::validate() const {
    if (!allow_self_ && has_self_link())
        fail("ValidationError", "self-link inside one component (self-links not enabled)");
    try {
        classify_components(*this);
    } catch (const Error& e) {
        fail("ValidationError", e.what());
    }
}

bool Diagram::operator==(const Diagram& o) const {
    return n_ == o.n_ && allow_self_ == o.allow_self_ && edges_ == o.edges_ && links_ == o.links_;
}

// ---------------------------------------------------------------- catalog

int ComponentType::vertex_count() const {
    if (twist == 0) return rank;
    if (twist == 1) return rank + 1;
    if (twist == 3) return 3;  // D4(3)
    if (family == "A") return (rank + 1) / 2 + 1;  // A_{2n}(2) and A_{2n-1}(2) have n+1 vertices
    if (family == "D") return rank;          // D_{n+1}(2) has n+1 vertices
    return 5;                                // E6(2)
}

std::string ComponentType::name() const {
    std::string s = family + std::to_string(rank);
    if (twist) s += "(" + std::to_string(twist) + ")";
    return s;
}

long long ComponentType::positive_root_count() const {
    if (twist) fail("AffineComponent", "affine type " + name() + " has infinitely many positive roots");
    long long n = rank;
    if (family == "A") return n * (n + 1) / 2;
    if (family == "B" || family == "C") return n * n;
    if (family == "D") return n * (n - 1);
    if (family == "E") return n == 6 ? 36 : n == 7 ? 63 : 120;
    if (family == "F") return 24;
    return 6;  // G2
}

namespace {

struct Shape {
    int n;
    CartanMatrix a;
    explicit Shape(int n_) : n(n_), a(n_, std::vector<int>(n_, 0)) {
        for (int i = 0; i < n; ++i) a[i][i] = 2;
    }
    void single(int i, int j) { a[i][j] = a[j][i] = -1; }
    // arrow pointing at j
    void arrow(int i, int j, int mult) {
        a[i][j] = -1;
        a[j][i] = -mult;
    }
    void chain(int from, int to) {
        for (int v = from; v < to; ++v) single(v, v + 1);
    }
};

// Star with arms of the given lengths around vertex 0.
Shape star(const std::vector<int>& arms) {
    int n = 1 + std::accumulate(arms.begin(), arms.end(), 0);
    Shape s(n);
    int next = 1;
    for (int len : arms) {
        int prev = 0;
        for (int k = 0; k < len; ++k) {
            s.single(prev, next);
            prev = next++;
        }
    }
    return s;
}

}  // namespace

CartanMatrix catalog_cartan(const ComponentType& t) {
    const std::string& f = t.family;
    int r = t.rank;
    if (t.twist == 0) {
        Shape s(r);
        if (f == "A") {
            s.chain(0, r - 1);
        } else if (f == "B") {
            s.chain(0, r - 2);
            s.arrow(r - 2, r - 1, 2);
        } else if (f == "C") {
            s.chain(0, r - 2);
            s.arrow(r - 1, r - 2, 2);
        } else if (f == "D") {
            s.chain(0, r - 2);
            s.single(r - 3, r - 1);
        } else if (f == "E") {
            s = star({1, 2, r - 4});
        } else if (f == "F") {
            s.single(0, 1);
            s.arrow(1, 2, 2);
            s.single(2, 3);
        } else if (f == "G") {
            s.arrow(0, 1, 3);
        }
        return s.a;
    }
    int n = t.vertex_count();
    Shape s(n);
    if (t.twist == 1) {
        if (f == "A" && r == 1) {
            s.a[0][1] = s.a[1][0] = -2;
        } else if (f == "A") {
            s.chain(0, n - 1);
            s.single(n - 1, 0);
        } else if (f == "B") {
            s.single(0, 2);
            s.chain(1, n - 2);
            s.arrow(n - 2, n - 1, 2);
        } else if (f == "C") {
            s.arrow(0, 1, 2);
            s.chain(1, n - 2);
            s.arrow(n - 1, n - 2, 2);
        } else if (f == "D") {
            if (n == 5) {
                s = star({1, 1, 1, 1});
            } else {
                s.single(0, 2);
                s.chain(1, n - 2);
                s.single(n - 3, n - 1);
            }
        } else if (f == "E") {
            s = r == 6 ? star({2, 2, 2}) : r == 7 ? star({1, 3, 3}) : star({1, 2, 5});
        } else if (f == "F") {
            s.chain(0, 2);
            s.arrow(2, 3, 2);
            s.single(3, 4);
        } else if (f == "G") {
            s.single(0, 1);
            s.arrow(1, 2, 3);
        }
        return s.a;
    }
    if (t.twist == 3) {
        s.single(0, 1);
        s.arrow(2, 1, 3);
        return s.a;
    }
    if (f == "A" && r == 2) {
        s.arrow(0, 1, 4);
    } else if (f == "A" && r % 2 == 0) {
        s.arrow(1, 0, 2);
        s.chain(1, n - 2);
        s.arrow(n - 1, n - 2, 2);
    } else if (f == "A") {
        s.single(0, 2);
        s.chain(1, n - 2);
        s.arrow(n - 1, n - 2, 2);
    } else if (f == "D") {
        s.arrow(1, 0, 2);
        s.chain(1, n - 2);
        s.arrow(n - 2, n - 1, 2);
    } else {  // E6(2)
        s.chain(0, 2);
        s.arrow(3, 2, 2);
        s.single(3, 4);
    }
    return s.a;
}

std::vector<ComponentType> catalog_types(int k) {
    std::vector<ComponentType> out;
    if (k < 1) return out;
    out.push_back({"A", k, 0});
    if (k >= 2) out.push_back({"B", k, 0});
    if (k >= 3) out.push_back({"C", k, 0});
    if (k >= 4) out.push_back({"D", k, 0});
    if (k >= 6 && k <= 8) out.push_back({"E", k, 0});
    if (k == 4) out.push_back({"F", 4, 0});
    if (k == 2) out.push_back({"G", 2, 0});
    int n = k - 1;  // rank of untwisted affine types on k vertices
    if (n >= 1) out.push_back({"A", n, 1});
    if (n >= 3) out.push_back({"B", n, 1});
    if (n >= 2) out.push_back({"C", n, 1});
    if (n >= 4) out.push_back({"D", n, 1});
    if (n >= 6 && n <= 8) out.push_back({"E", n, 1});
    if (n == 4) out.push_back({"F", 4, 1});
    if (n == 2) out.push_back({"G", 2, 1});
    if (k >= 2) out.push_back({"A", 2 * n, 2});
    if (k >= 4) out.push_back({"A", 2 * n - 1, 2});
    if (k >= 3) out.push_back({"D", n + 1, 2});
    if (k == 5) out.push_back({"E", 6, 2});
    if (k == 3) out.push_back({"D", 4, 3});
    return out;
}

namespace {

// Finds a bijection p with a[p[x]][p[y]] == c[x][y].
bool cartan_isomorphic(const CartanMatrix& a, const CartanMatrix& c) {
    int n = static_cast<int>(a.size());
    if (static_cast<int>(c.size()) != n) return false;
    // visit catalog vertices in BFS order so each is adjacent to an earlier one
    std::vector<int> order, anchor(n, -1);
    std::vector<bool> seen(n, false);
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::queue<int> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            order.push_back(v);
            for (int w = 0; w < n; ++w)
                if (!seen[w] && c[v][w] != 0) {
                    seen[w] = true;
                    anchor[w] = v;
                    q.push(w);
                }
        }
    }
    std::vector<int> img(n, -1);
    std::vector<bool> used(n, false);
    std::function<bool(int)> go = [&](int k) {
        if (k == n) return true;
        int x = order[k];
        for (int cand = 0; cand < n; ++cand) {
            if (used[cand]) continue;
            if (anchor[x] != -1 && a[img[anchor[x]]][cand] == 0) continue;
            bool ok = a[cand][cand] == c[x][x];
            for (int t = 0; t < k && ok; ++t) {
                int y = order[t];
                ok = a[cand][img[y]] == c[x][y] && a[img[y]][cand] == c[y][x];
            }
            if (!ok) continue;
            img[x] = cand;
            used[cand] = true;
            if (go(k + 1)) return true;
            used[cand] = false;
        }
        img[x] = -1;
        return false;
    };
    return go(0);
}

}  // namespace

std::optional<ComponentType> identify_cartan(const CartanMatrix& a) {
    for (const auto& t : catalog_types(static_cast<int>(a.size())))
        if (cartan_isomorphic(a, catalog_cartan(t))) return t;
    return std::nullopt;
}

CartanMatrix to_cartan(const Diagram& d) {
    int n = d.size();
    CartanMatrix a(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 2;
    for (const auto& e : d.edges()) {
        if (e.kind.a1aff) {
            a[e.i][e.j] = a[e.j][e.i] = -2;
        } else if (e.kind.multiplicity == 1) {
            a[e.i][e.j] = a[e.j][e.i] = -1;
        } else {
            int j = e.kind.arrow, i = j == e.i ? e.j : e.i;
            a[i][j] = -1;
            a[j][i] = -e.kind.multiplicity;
        }
    }
    return a;
}

Diagram from_cartan(const CartanMatrix& a) {
    int n = static_cast<int>(a.size());
    Diagram d(n, true);
    for (int i = 0; i < n; ++i) {
        if (a[i].size() != a.size() || a[i][i] != 2) fail("ValidationError", "not a Cartan matrix");
        for (int j = i + 1; j < n; ++j) {
            int x = a[i][j], y = a[j][i];
            if (x == 0 && y == 0) continue;
            if (x == -1 && y == -1)
                d.add_edge(i, j, EdgeKind::single());
            else if (x == -2 && y == -2)
                d.add_edge(i, j, EdgeKind::affine_a1());
            else if (x == -1 && y <= -2 && y >= -4)
                d.add_edge(i, j, EdgeKind::arrowed(-y, j));
            else if (y == -1 && x <= -2 && x >= -4)
                d.add_edge(i, j, EdgeKind::arrowed(-x, i));
            else
                fail("ValidationError", "unsupported Cartan entries at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
    }
    return d;
}

std::vector<ClassifiedComponent> classify_components(const Diagram& d) {
    CartanMatrix full = to_cartan(d);
    std::vector<ClassifiedComponent> out;
    for (const auto& comp : d.components()) {
        int k = static_cast<int>(comp.size());
        CartanMatrix sub(k, std::vector<int>(k));
        for (int x = 0; x < k; ++x)
            for (int y = 0; y < k; ++y) sub[x][y] = full[comp[x]][comp[y]];
        auto t = identify_cartan(sub);
        if (!t) {
            std::string vs;
            for (int v : comp) vs += (vs.empty() ? "" : ",") + std::to_string(v + 1);
            fail("UnknownType", "component {" + vs + "} matches no finite or affine type");
        }
        out.push_back({comp, *t});
    }
    return out;
}

BigInt hopf_dimension(const Diagram& d, const BigInt& group_order, const std::vector<int>& n_per_component) {
    auto comps = classify_components(d);
    if (n_per_component.size() != comps.size() && n_per_component.size() != 1)
        fail("ValidationError", "need one order per component (or a single shared order)");
    BigInt dim = group_order;
    for (size_t c = 0; c < comps.size(); ++c) {
        if (comps[c].type.affine()) fail("AffineComponent", "component " + comps[c].type.name() + " is affine");
        int n = n_per_component.size() == 1 ? n_per_component[0] : n_per_component[c];
        if (n <= 2) fail("ValidationError", "root vector order must exceed 2");
        long long roots = comps[c].type.positive_root_count();
        for (long long r = 0; r < roots; ++r) dim *= n;
    }
    return dim;
}

// ---------------------------------------------------------------- text I/O

namespace {

int parse_vertex(const std::string& tok, int line) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (...) {
        pos = 0;
    }
    if (pos != tok.size() || v < 1 || v > 100000)
        fail("SyntaxError", "line " + std::to_string(line) + ": bad vertex id '" + tok + "'");
    return static_cast<int>(v);
}

}  // namespace

Diagram parse_diagram(const std::string& text, bool allow_self_links) {
    struct Pending {
        bool link;
        int i, j, mult, target;
        bool aff;
    };
    std::vector<Pending> items;
    int n = 0;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto bad = [&](const std::string& why) {
            fail("SyntaxError", "line " + std::to_string(lineno) + ": " + why);
        };
        if (tok[0] == "vertices") {
            if (tok.size() != 2) bad("expected 'vertices N'");
            n = std::max(n, parse_vertex(tok[1], lineno));
        } else if (tok[0] == "link") {
            if (tok.size() != 3) bad("expected 'link I J'");
            int i = parse_vertex(tok[1], lineno), j = parse_vertex(tok[2], lineno);
            items.push_back({true, i - 1, j - 1, 0, -1, false});
            n = std::max({n, i, j});
        } else if (tok[0] == "edge") {
            if (tok.size() < 4) bad("expected 'edge I J KIND [T]'");
            int i = parse_vertex(tok[1], lineno), j = parse_vertex(tok[2], lineno);
            const std::string& k = tok[3];
            int mult = k == "single" ? 1 : k == "double" ? 2 : k == "triple" ? 3 : k == "quadruple" ? 4 : k == "a1aff" ? 2 : 0;
            if (!mult) bad("unknown edge kind '" + k + "'");
            bool aff = k == "a1aff";
            bool needs_target = mult >= 2 && !aff;
            if (tok.size() != (needs_target ? 5u : 4u)) bad(needs_target ? "edge kind '" + k + "' needs an arrow target" : "unexpected token after edge kind");
            int target = needs_target ? parse_vertex(tok[4], lineno) - 1 : -1;
            if (needs_target && target != i - 1 && target != j - 1)
                fail("ValidationError", "line " + std::to_string(lineno) + ": arrow target must be I or J");
            items.push_back({false, i - 1, j - 1, mult, target, aff});
            n = std::max({n, i, j});
        } else {
            bad("unknown directive '" + tok[0] + "'");
        }
    }
    Diagram d(n, allow_self_links);
    for (const auto& it : items) {
        if (it.link)
            d.add_link(it.i, it.j);
        else
            d.add_edge(it.i, it.j, it.aff ? EdgeKind::affine_a1() : EdgeKind{it.mult, it.target, false});
    }
    d.validate();
    return d;
}

std::string print_diagram(const Diagram& d) {
    static const char* names[] = {"", "single", "double", "triple", "quadruple"};
    std::ostringstream os;
    os << "vertices " << d.size() << "\n";
    for (const auto& e : d.edges()) {
        os << "edge " << e.i + 1 << " " << e.j + 1 << " ";
        if (e.kind.a1aff)
            os << "a1aff";
        else {
            os << names[e.kind.multiplicity];
            if (e.kind.multiplicity > 1) os << " " << e.kind.arrow + 1;
        }
        os << "\n";
    }
    for (auto [i, j] : d.links()) os << "link " << i + 1 << " " << j + 1 << "\n";
    return os.str();
}

std::string to_dot(const Diagram& d) {
    std::ostringstream os;
    os << "graph linkable {\n";
    for (int v = 0; v < d.size(); ++v) os << "  v" << v + 1 << " [label=\"" << v + 1 << "\"];\n";
    for (const auto& e : d.edges()) {
        os << "  v" << e.i + 1 << " -- v" << e.j + 1;
        if (e.kind.a1aff)
            os << " [label=\"a1aff\", penwidth=2]";
        else if (e.kind.multiplicity > 1)
            os << " [label=\"" << e.kind.multiplicity << "\", penwidth=" << e.kind.multiplicity
               << ", arrowhead=normal, dir=" << (e.kind.arrow == e.j ? "forward" : "back") << "]";
        os << ";\n";
    }
    for (auto [i, j] : d.links()) os << "  v" << i + 1 << " -- v" << j + 1 << " [style=dashed];\n";
    os << "}\n";
    return os.str();
}

}  // namespace linkdyn
