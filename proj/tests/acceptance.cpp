// Acceptance checks: one PASS/FAIL line per criterion. Arguments select
// criteria by number; without arguments all of them run.

#include "gen.hpp"
#include "linkdyn/braiding.hpp"
#include "linkdyn/cycles.hpp"
#include "linkdyn/error.hpp"
#include "linkdyn/exist.hpp"
#include "linkdyn/ncalg.hpp"
#include "linkdyn/qcalc.hpp"
#include "linkdyn/realize.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace linkdyn;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

// ---- 1, 2: genus laws

Diagram chain_circle(int n, const std::string& last_edge) {
    std::string s;
    for (int k = 0; k < n; ++k) {
        int b = 3 * k;
        s += "edge " + std::to_string(b + 1) + " " + std::to_string(b + 2) + " single\n";
        s += "edge " + std::to_string(b + 2) + " " + std::to_string(b + 3) + " " + last_edge +
             (last_edge == "single" ? "" : " " + std::to_string(b + 3)) + "\n";
        s += "link " + std::to_string(b + 3) + " " + std::to_string((3 * (k + 1)) % (3 * n) + 1) + "\n";
    }
    return parse_diagram(s);
}

Outcome genus_laws() {
    auto t0 = Clock::now();
    std::ostringstream out;
    bool ok = true;
    for (int n = 2; n <= 6; ++n) {
        Diagram d = chain_circle(n, "single");
        auto cs = enumerate_cycles(d);
        BigInt g = cs.size() == 1 ? cycle_metrics(d, cs[0], Mode::Finite).genus_finite : BigInt(-1);
        ok = ok && g == (n % 2 == 0 ? 0 : 2);
        out << "A3x" << n << "=" << g << " ";
    }
    for (int n = 2; n <= 5; ++n) {
        Diagram d = chain_circle(n, "double");
        auto cs = enumerate_cycles(d);
        BigInt g = cs.size() == 1 ? cycle_metrics(d, cs[0], Mode::Finite).genus_finite : BigInt(-1);
        ok = ok && g == (BigInt(1) << n) - (n % 2 ? -1 : 1);
        out << "B3x" << n << "=" << g << " ";
    }
    double t = seconds_since(t0);
    out << "in " << t << " s";
    return {ok && t < 1.0, out.str()};
}

Outcome self_link_genus() {
    std::vector<BigInt> got;
    for (const char* s : {"edge 1 2 single\nedge 2 3 single\nlink 1 3", "edge 1 2 single\nedge 2 3 double 3\nlink 1 3",
                          "edge 1 2 single\nedge 2 3 triple 3\nlink 1 3", "edge 1 2 double 1\nedge 2 3 double 2\nlink 1 3"}) {
        Diagram d = parse_diagram(s, true);
        auto cs = enumerate_cycles(d);
        got.push_back(cs.size() == 1 ? cycle_metrics(d, cs[0], Mode::Affine).genus_affine : BigInt(-1));
    }
    std::ostringstream out;
    out << "(" << got[0] << "," << got[1] << "," << got[2] << "," << got[3] << ")";
    return {got == std::vector<BigInt>{2, 3, 4, 5}, out.str()};
}

// ---- 3: soundness on random accepted diagrams

ComponentType affine(const std::string& family, int rank, int twist) { return {family, rank, twist}; }

Outcome soundness() {
    auto t0 = Clock::now();
    std::mt19937 rng(314);
    int accepted[2] = {0, 0}, bad = 0;
    gen::Options fin;
    fin.pool = {gen::finite("A1"), gen::finite("A2"), gen::finite("A3"), gen::finite("B2"), gen::finite("B3"),
                gen::finite("C3"), gen::finite("G2"), gen::finite("D4")};
    fin.max_components = 5;
    fin.extra_links = 3;
    gen::Options aff = fin;
    aff.pool = {gen::finite("A1"), gen::finite("A2"), gen::finite("B2"), gen::finite("G2"), affine("A", 1, 1),
                affine("A", 2, 1), affine("A", 2, 2), affine("C", 2, 1), affine("G", 2, 1)};
    for (int tries = 0; tries < 20000 && (accepted[0] < 120 || accepted[1] < 60); ++tries) {
        bool is_affine = tries % 2 == 1;
        if (accepted[is_affine] >= (is_affine ? 60 : 120)) continue;
        auto d = gen::linked_diagram(rng, is_affine ? aff : fin);
        if (!d) continue;
        Mode mode = is_affine ? Mode::Affine : Mode::Finite;
        Decision dec = decide(*d, mode);
        if (!dec.exists) continue;
        ++accepted[is_affine];
        BraidingMatrix m = construct(*d, dec);
        if (!verify(*d, m, mode).empty() || !verify(*d, m.concretized(), mode).empty()) ++bad;
    }
    double t = seconds_since(t0);
    std::ostringstream out;
    out << accepted[0] << " finite + " << accepted[1] << " affine accepted, " << bad << " with violations, " << t << " s";
    return {accepted[0] + accepted[1] >= 100 && bad == 0 && t < 30.0, out.str()};
}

// ---- 4: brute-force completeness

// Linear system over F_p in the off-diagonal exponents x_ij (i != j) once the
// diagonal is fixed. Returns whether it is consistent.
bool off_diagonal_solvable(const CartanMatrix& a, const std::vector<std::pair<int, int>>& links, const std::vector<long long>& diag,
                           long long p) {
    int n = static_cast<int>(a.size());
    auto var = [&](int i, int j) { return i * n + j; };
    int cols = n * n;
    std::vector<std::vector<long long>> rows;
    auto norm = [&](long long x) { return ((x % p) + p) % p; };
    auto row = [&] { return std::vector<long long>(cols + 1, 0); };
    // a diagonal entry is a constant: move it to the right-hand side
    auto term = [&](std::vector<long long>& r, int i, int j, long long c) {
        if (i == j)
            r[cols] = norm(r[cols] - c * diag[i]);
        else
            r[var(i, j)] = norm(r[var(i, j)] + c);
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto r = row();
            term(r, i, j, 1);
            term(r, j, i, 1);
            r[cols] = norm(r[cols] + a[i][j] * diag[i]);
            rows.push_back(r);
        }
    for (auto [x, y] : links)
        for (int dir = 0; dir < 2; ++dir) {
            int i = dir ? y : x, j = dir ? x : y;
            for (int k = 0; k < n; ++k) {
                auto r = row();
                term(r, k, i, 1 - a[i][j]);
                term(r, k, j, 1);
                rows.push_back(r);
            }
        }
    int rank = 0;
    for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][c]) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[piv], rows[rank]);
        long long inv = pow_mod(rows[rank][c], p - 2, p);
        for (auto& v : rows[rank]) v = v * inv % p;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r)
            if (r != rank && rows[r][c]) {
                long long f = rows[r][c];
                for (int k = 0; k <= cols; ++k) rows[r][k] = norm(rows[r][k] - f * rows[rank][k]);
            }
        ++rank;
    }
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (rows[r][cols]) return false;
    return true;
}

// Searches every diagonal in (Z/p \ 0)^n; prunes partial tuples on
// b_ij b_ji = b_ii^a_ij = b_jj^a_ji.
bool brute_force_matrix_exists(const Diagram& d, long long p) {
    CartanMatrix a = to_cartan(d);
    int n = d.size();
    std::vector<long long> diag(n, 0);
    std::function<bool(int)> go = [&](int v) {
        if (v == n) return off_diagonal_solvable(a, d.links(), diag, p);
        for (long long e = 1; e < p; ++e) {
            diag[v] = e;
            bool fine = true;
            for (int u = 0; u < v && fine; ++u)
                fine = ((a[u][v] * diag[u] - a[v][u] * diag[v]) % p + p) % p == 0;
            if (fine && go(v + 1)) return true;
        }
        return false;
    };
    return go(0);
}

// All link-connected diagrams with at least two components from the pool,
// at most max_vertices vertices and 1..max_links pairwise disjoint links
// between distinct components.
void for_each_small_diagram(const std::vector<ComponentType>& pool, int max_vertices, int max_links,
                            const std::function<void(const Diagram&)>& f) {
    std::vector<int> chosen;
    std::function<void(size_t, int)> pick = [&](size_t from, int used) {
        if (chosen.size() >= 2) {
            int n = used;
            CartanMatrix a(n, std::vector<int>(n, 0));
            std::vector<int> comp(n);
            int base = 0;
            for (size_t c = 0; c < chosen.size(); ++c) {
                auto block = catalog_cartan(pool[chosen[c]]);
                int s = static_cast<int>(block.size());
                for (int x = 0; x < s; ++x) {
                    comp[base + x] = static_cast<int>(c);
                    for (int y = 0; y < s; ++y) a[base + x][base + y] = block[x][y];
                }
                base += s;
            }
            std::vector<std::pair<int, int>> pairs;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (comp[i] != comp[j]) pairs.push_back({i, j});
            std::vector<std::pair<int, int>> links;
            std::vector<bool> busy(n, false);
            std::function<void(size_t)> choose = [&](size_t at) {
                if (!links.empty()) {
                    // link-connected over components
                    int k = static_cast<int>(chosen.size());
                    std::vector<int> root(k);
                    for (int c = 0; c < k; ++c) root[c] = c;
                    std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
                    for (auto [i, j] : links) root[find(comp[i])] = find(comp[j]);
                    bool connected = true;
                    for (int c = 1; c < k; ++c) connected = connected && find(c) == find(0);
                    if (connected) {
                        Diagram base_d = from_cartan(a);
                        Diagram dg(n);
                        for (const auto& e : base_d.edges()) dg.add_edge(e.i, e.j, e.kind);
                        for (auto [i, j] : links) dg.add_link(i, j);
                        f(dg);
                    }
                }
                if (static_cast<int>(links.size()) == max_links) return;
                for (size_t q = at; q < pairs.size(); ++q) {
                    auto [i, j] = pairs[q];
                    if (busy[i] || busy[j]) continue;
                    busy[i] = busy[j] = true;
                    links.push_back(pairs[q]);
                    choose(q + 1);
                    links.pop_back();
                    busy[i] = busy[j] = false;
                }
            };
            choose(0);
        }
        for (size_t t = from; t < pool.size(); ++t) {
            int s = pool[t].vertex_count();
            if (used + s > max_vertices) continue;
            chosen.push_back(static_cast<int>(t));
            pick(t, used + s);
            chosen.pop_back();
        }
    };
    pick(0, 0);
}

Outcome completeness() {
    auto t0 = Clock::now();
    std::vector<ComponentType> pool = {gen::finite("A1"), gen::finite("A2"), gen::finite("A3"),
                                       gen::finite("B2"), gen::finite("B3"), gen::finite("G2")};
    long long diagrams = 0, rejected = 0, false_negatives = 0, accepted_checked = 0, accepted_missed = 0;
    std::string witness;
    for_each_small_diagram(pool, 6, 3, [&](const Diagram& d) {
        ++diagrams;
        Decision dec = decide_finite(d);
        for (long long p : {5LL, 7LL}) {
            if (!dec.exists) {
                if (brute_force_matrix_exists(d, p)) {
                    ++false_negatives;
                    if (witness.empty()) witness = print_diagram(d) + " at d=" + std::to_string(p);
                }
                continue;
            }
            // the search is not vacuous: accepted orders are found too
            bool listed = dec.any_prime;
            for (long long o : dec.orders) listed = listed || o == p;
            if (!listed) continue;
            ++accepted_checked;
            if (!brute_force_matrix_exists(d, p)) ++accepted_missed;
        }
        rejected += !dec.exists;
    });
    double t = seconds_since(t0);
    std::ostringstream out;
    out << diagrams << " diagrams, " << rejected << " rejected, " << false_negatives << " with a matrix found; "
        << accepted_checked << " accepted (diagram, d) pairs reproduced, " << accepted_missed << " missed; " << t << " s";
    if (!witness.empty()) out << "; first: " << witness;
    return {rejected > 0 && false_negatives == 0 && accepted_missed == 0 && t < 300.0, out.str()};
}

// ---- 5: Level 0

// Number of Level 0 diagonals on positive-genus cycles of d, and how many of
// them fail b_ii^g = 1 in the constructed matrix.
std::pair<int, int> level0_diagonals(const Diagram& d) {
    Decision dec = decide_finite(d);
    if (!dec.exists) return {0, 0};
    BraidingMatrix m = construct_finite(d, dec);
    int checked = 0, broken = 0;
    for (const auto& c : enumerate_cycles(d)) {
        auto met = cycle_metrics(d, c, Mode::Finite);
        if (met.genus_finite == 0) continue;
        long long g = met.genus_finite.convert_to<long long>();
        for (int v : met.level0) {
            ++checked;
            broken += mod_norm(m.b[v][v].q * g, m.d) != 0;
        }
    }
    return {checked, broken};
}

Outcome level0() {
    std::mt19937 rng(2718);
    gen::Options o;
    // no G2: finite-mode genus is only defined without triple edges on cycles
    o.pool = {gen::finite("A1"), gen::finite("A2"), gen::finite("A3"), gen::finite("B2"),
              gen::finite("B3"), gen::finite("C3"), gen::finite("D4")};
    o.max_components = 5;
    o.extra_links = 3;
    int drawn = 0, positive = 0, missing = 0, checked = 0, broken = 0, carriers = 0;
    auto tally = [&](const Diagram& d) {
        auto [c, b] = level0_diagonals(d);
        checked += c;
        broken += b;
        carriers += c > 0;
    };
    while (drawn < 200) {
        auto d = gen::linked_diagram(rng, o);
        if (!d) continue;
        ++drawn;
        for (const auto& c : enumerate_cycles(*d)) {
            auto met = cycle_metrics(*d, c, Mode::Finite);
            if (met.genus_finite == 0) continue;
            ++positive;
            if (met.level0.empty()) ++missing;
        }
        tally(*d);
    }
    // accepted diagrams with a positive genus are rare among dense draws; add
    // sparse ones and the doubly-laced circles
    gen::Options sparse = o;
    sparse.pool = {gen::finite("A2"), gen::finite("A3"), gen::finite("B2"), gen::finite("B3"), gen::finite("C3")};
    sparse.max_components = 4;
    sparse.extra_links = 1;
    for (int tries = 0; tries < 20000 && carriers < 40; ++tries)
        if (auto d = gen::linked_diagram(rng, sparse)) tally(*d);
    for (int n = 2; n <= 5; ++n) tally(chain_circle(n, "double"));
    std::ostringstream out;
    out << drawn << " diagrams, " << positive << " positive-genus cycles, " << missing << " without Level 0; " << carriers
        << " accepted diagrams with " << checked << " Level 0 diagonals, " << broken << " with b^g != 1";
    return {positive > 0 && missing == 0 && carriers >= 40 && broken == 0, out.str()};
}

// ---- 6, 7, 8: realizations

bool brute_square(long long a, long long p) {
    for (long long x = 0; x < p; ++x)
        if ((x * x - a) % p == 0) return true;
    return false;
}

Outcome conic_counts() {
    int cases = 0, bad = 0;
    for (long long p : {5, 7, 11, 13})
        for (long long y = 1; y < p; ++y) {
            long long brute = 0;
            for (long long a = 0; a < p; ++a)
                for (long long b = 0; b < p; ++b) brute += (3 * a * a + b * b + y) % p == 0;
            long long want = brute_square(p - 3, p) ? p - 1 : p + 1;
            ++cases;
            bad += brute != want || static_cast<long long>(solve_conic(y, p).size()) != brute;
        }
    return {bad == 0, std::to_string(cases) + " (p, y) pairs, " + std::to_string(bad) + " mismatches"};
}

Outcome realization_dichotomies() {
    auto t0 = Clock::now();
    int primes = 0, successes = 0, unverified = 0;
    std::vector<std::string> mismatches;
    for (long long p = 5; p <= 101; ++p) {
        if (!is_prime(p)) continue;
        ++primes;
        auto record = [&](const std::string& name, const RealizeOutcome& out, bool expect) {
            if (out) {
                ++successes;
                if (!verify_realization(realization_catalog_cartan(name), *out.realization).empty()) ++unverified;
            }
            if (static_cast<bool>(out) != expect)
                mismatches.push_back(name + " at p=" + std::to_string(p) + (out ? " realizable" : " not realizable"));
        };
        long long r10 = p % 10, r12 = p % 12;
        for (const auto& name : part_a_names()) {
            bool expect = true;
            if (name == "A4") expect = r10 == 1 || r10 == 9;
            if (name == "A2B2") expect = r12 == 1 || r12 == 11;
            record(name, realize_part_a(name, p), expect);
        }
        for (const auto& name : part_b_names()) record(name, realize_part_b(name, p), name != "B2G2" || r12 == 1 || r12 == 11);
        record("D4", realize_d4(p), true);
    }
    double t = seconds_since(t0);
    std::ostringstream out;
    out << primes << " primes, " << successes << " realizations, " << unverified << " failing verification, "
        << mismatches.size() << " off the stated dichotomy";
    for (const auto& m : mismatches) out << "; " << m;
    if (!mismatches.empty()) {
        auto a4 = realize_part_a("A4", 5);
        if (a4) out << " (discriminant " << a4.realization->params.at("disc") << ", realization verifies: "
                    << (verify_realization(realization_catalog_cartan("A4"), *a4.realization).empty() ? "yes" : "no") << ")";
    }
    out << "; " << t << " s";
    return {mismatches.empty() && unverified == 0 && t < 60.0, out.str()};
}

Outcome a4a1_matrix() {
    Realization r = realize_a4a1_p5();
    // frozen from the displayed 5x5 exponent table
    std::vector<std::vector<long long>> expected = {
        {1, 4, 1, 2, 4}, {0, 1, 1, 0, 2}, {4, 3, 1, 3, 0}, {3, 0, 1, 1, 3}, {1, 3, 0, 2, 2}};
    bool recomputed = exponent_matrix(r.g, r.chi, 5) == r.E;
    bool verifies = verify_realization(realization_catalog_cartan("A4A1"), r).empty();
    return {r.E == expected && recomputed && verifies,
            std::string("entries ") + (r.E == expected ? "match" : "differ") + ", recomputed from g/chi: " +
                (recomputed ? "yes" : "no") + ", verifies: " + (verifies ? "yes" : "no")};
}

// ---- 9: q-binomial vanishing

Outcome q_binomial_vanishing() {
    int checked = 0, bad = 0;
    for (int N = 2; N <= 12; ++N)
        for (int i = 1; i < N; ++i) {
            ++checked;
            CycloElem r = reduce_mod_cyclotomic(q_binomial(N, i), N);
            bad += !r.is_zero();
        }
    return {bad == 0, std::to_string(checked) + " coefficients, " + std::to_string(bad) + " nonzero mod Phi_N"};
}

// ---- 10, 11, 12: self-linked presentations

std::unique_ptr<Presentation> selflink(SelfLinkType t, bool powers, bool roots, long long cyclic = 0) {
    SelfLinkOptions o;
    o.power_rules = powers;
    o.root_power_rules = roots;
    o.cyclic = cyclic;
    return selflink_presentation(t, o);
}

std::string yn(bool b) { return b ? "yes" : "no"; }

Outcome a2_selflink() {
    auto t0 = Clock::now();
    bool confluent = check_local_confluence(*selflink(SelfLinkType::A2, true, true)).empty() &&
                     check_local_confluence(*selflink(SelfLinkType::A2, true, true, 9)).empty();
    auto P = selflink(SelfLinkType::A2, true, false);
    bool prim = is_skew_primitive(*P, P->parse("x1^3"), {3, 0}).ok && is_skew_primitive(*P, P->parse("x2^3"), {0, 3}).ok &&
                is_skew_primitive(*P, P->parse("v"), {3, 3}).ok;
    auto Z9 = selflink(SelfLinkType::A2, true, true, 9);
    auto b = enumerate_basis(*Z9, {{"z", 3}, {"x1", 3}, {"x2", 3}});
    double t = seconds_since(t0);
    std::ostringstream out;
    out << "confluent " << yn(confluent) << ", x1^3 x2^3 v skew-primitive " << yn(prim) << ", basis " << b.count
        << (b.truncated ? " (truncated)" : "") << " for Z/9, " << t << " s";
    return {confluent && prim && b.count == 243 && !b.truncated && t < 10.0, out.str()};
}

Outcome b2_selflink() {
    auto t0 = Clock::now();
    bool confluent = check_local_confluence(*selflink(SelfLinkType::B2, true, true)).empty();
    auto P = selflink(SelfLinkType::B2, true, false);
    bool vw = is_central(*P, P->parse("v")).ok && is_central(*P, P->parse("w")).ok &&
              is_skew_primitive(*P, P->parse("v"), {5, 5}).ok && is_skew_primitive(*P, P->parse("w"), {5, 10}).ok;
    auto z5 = is_central(*P, P->parse("z^5"));
    const long long gamma = 20;
    auto G = selflink(SelfLinkType::B2, true, true, gamma);
    auto b = enumerate_basis(*G, {{"u", 5}, {"z", 5}, {"x1", 5}, {"x2", 5}});
    double t = seconds_since(t0);
    std::ostringstream out;
    out << "confluent " << yn(confluent) << ", v w central and skew-primitive " << yn(vw) << ", z^5 central " << yn(z5.ok)
        << " (witness " << (z5.witness.empty() ? "none" : z5.witness) << "), basis " << b.count << " = 5^4*" << gamma
        << ": " << yn(b.count == 625 * gamma && !b.truncated) << ", " << t << " s";
    return {confluent && vw && !z5.ok && z5.witness == "x2" && b.count == 625 * gamma && !b.truncated && t < 600.0,
            out.str()};
}

Outcome g2_selflink() {
    auto t0 = Clock::now();
    auto with_powers = selflink(SelfLinkType::G2, true, true);
    auto without = selflink(SelfLinkType::G2, false, true);
    bool confluent = check_local_confluence(*with_powers).empty() && check_local_confluence(*without).empty();
    // Z has mu1 mu2 counterterms, so it is primitive modulo x_i^7 = mu_i (1 - g_i^7)
    bool primitive = is_skew_primitive(*with_powers, with_powers->parse("Z"), {7, 7}).ok;
    SelfLinkOptions o;
    o.power_rules = false;
    o.g2_zv_misprint = true;
    auto M = selflink_presentation(SelfLinkType::G2, o);
    size_t misprint = check_local_confluence(*M).size();
    double t = seconds_since(t0);
    std::ostringstream out;
    out << "slow suite; uses the zv relation with u^2 coefficient 2q^5+q^4+q^3+q^2+2: confluent " << yn(confluent)
        << ", Z (g1^7 g2^7, 1)-primitive " << yn(primitive) << "; constant term 1 leaves " << misprint
        << " ambiguities; " << t << " s";
    return {confluent && primitive && misprint > 0 && t < 3600.0, out.str()};
}

// ---- 13: excluded matrices

Outcome excluded_matrices() {
    int checked = 0, bad = 0, symbolic = 0;
    for (long long p : {5, 7, 11, 13})
        for (auto c : {ExcludedCase::G2G2, ExcludedCase::A1affA1aff, ExcludedCase::A2affA2aff}) {
            Mode mode = c == ExcludedCase::G2G2 ? Mode::Finite : Mode::Affine;
            BraidingMatrix m = construct_excluded(c, true, p);
            ++checked;
            symbolic += m.symbol_count > 0;
            bad += !verify(excluded_diagram(c, true), m, mode).empty();
        }
    return {bad == 0 && symbolic == checked,
            std::to_string(checked) + " matrices (3 cases x p in 5,7,11,13), " + std::to_string(symbolic) + " carry z, " +
                std::to_string(bad) + " with violations"};
}

// ---- 14: u recursion

LinkingDatum an_datum(int n, int M, const std::vector<std::vector<long long>>& chi) {
    LinkingDatum d;
    d.modulus = M;
    d.a.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
        d.a[i][i] = 2;
        if (i + 1 < n) d.a[i][i + 1] = d.a[i + 1][i] = -1;
    }
    int k = n + 1;
    d.group_orders.assign(k, 0);
    d.g.assign(n, std::vector<int>(k, 0));
    for (int i = 0; i < n; ++i) d.g[i][i] = 1;
    d.chi = chi;
    return d;
}

Outcome u_recursion_checks() {
    bool filter = true, zero = true, central = true;
    int central_checked = 0;
    // chi_{1,3}^5 trivial, chi_1^5 and chi_2^5 not (through an extra generator)
    auto a2 = an_datum(2, 10, {{2, 0, 1}, {-2, 2, -1}});
    auto a3 = an_datum(3, 10, {{2, 0, 0, 1}, {-2, 2, 0, -1}, {0, -2, 2, 0}});
    for (auto* d : {&a2, &a3}) {
        if (!validate_linking_datum(*d).ok) return {false, "test datum invalid"};
        auto P = presentation_U(*d);
        for (const auto& [ij, v] : u_recursion(*P, *d, {})) zero = zero && v.is_zero();
        filter = filter && kind_of([&] { u_recursion(*P, *d, {{{1, 2}, "1"}}); }) == "NotAdmissible" &&
                 kind_of([&] { u_recursion(*P, *d, {{{2, 3}, "q"}}); }) == "NotAdmissible";
        std::map<std::pair<int, int>, std::string> gamma = {{{1, 3}, "3 + q"}};
        if (d == &a3) gamma = {{{1, 3}, "2"}, {{3, 4}, "q"}};
        auto u = u_recursion(*P, *d, gamma);
        bool nonzero = false;
        for (const auto& [ij, v] : u) {
            ++central_checked;
            nonzero = nonzero || !v.is_zero();
            central = central && is_central(*P, v).ok;
        }
        central = central && nonzero;
    }
    // with the filter off an inadmissible gamma can give a non-central u
    auto odd = an_datum(2, 10, {{2, 1, 1}, {-3, 2, -1}});
    auto Q = presentation_U(odd);
    bool needed = !is_central(*Q, u_recursion(*Q, odd, {{{1, 2}, "1"}}, false).at({1, 2})).ok;
    std::ostringstream out;
    out << "filter rejects inadmissible gamma " << yn(filter) << ", gamma=0 gives u=0 " << yn(zero) << ", "
        << central_checked << " u_ij central (A2, A3) " << yn(central) << ", unfiltered counterexample non-central "
        << yn(needed);
    return {filter && zero && central && needed, out.str()};
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int n;
        const char* title;
        Outcome (*run)();
    };
    const std::vector<Criterion> all = {
        {1, "genus of A3 and B3 circles", genus_laws},
        {2, "self-linking genus quadruple", self_link_genus},
        {3, "soundness on random accepted diagrams", soundness},
        {4, "brute-force completeness on small rejected diagrams", completeness},
        {5, "Level 0 vertices and b_ii^g = 1", level0},
        {6, "conic solution counts p -+ 1", conic_counts},
        {7, "realization dichotomies for 5 <= p <= 101", realization_dichotomies},
        {8, "A4A1 exponent matrix at p = 5", a4a1_matrix},
        {9, "q-binomial vanishing mod Phi_N, N <= 12", q_binomial_vanishing},
        {10, "A2 self-link presentation", a2_selflink},
        {11, "B2 self-link presentation", b2_selflink},
        {12, "G2 self-link presentation", g2_selflink},
        {13, "excluded-case matrices verify symbolically", excluded_matrices},
        {14, "u recursion admissibility and centrality", u_recursion_checks},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.n)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.n << ". " << c.title << ": " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
