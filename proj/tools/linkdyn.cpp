// linkdyn: command-line front end. JSON reports on stdout, diagnostics on
// stderr; exit 0 on success, 3 on a negative answer, 2 on any error.

#include "linkdyn/braiding.hpp"
#include "linkdyn/cycles.hpp"
#include "linkdyn/diagram.hpp"
#include "linkdyn/error.hpp"
#include "linkdyn/exist.hpp"
#include "linkdyn/ncalg.hpp"
#include "linkdyn/realize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace linkdyn;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kError = 2, kNegative = 3;
constexpr int kSchema = 1;

struct Common {
    std::string file;
    std::string mode = "finite";
    long long order = 0;
    long long prime = 0;
    int seed_vertex = 1;
    bool dot = false;
    bool self_links = false;
    long long budget = 0;
    bool timing = false;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) fail("IOError", "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string big(const BigInt& v) { return v.str(); }

// Big integers go out as numbers while they fit, as strings otherwise.
json num(const BigInt& v) {
    if (v <= BigInt(std::numeric_limits<long long>::max()) && v >= BigInt(std::numeric_limits<long long>::min()))
        return static_cast<long long>(v);
    return big(v);
}

std::uint64_t cycle_budget(const Common& c) {
    if (c.budget > 0) return static_cast<std::uint64_t>(c.budget);
    if (const char* s = std::getenv("LINKDYN_BUDGET")) return std::strtoull(s, nullptr, 10);
    return kDefaultCycleBudget;
}

json one_based(const std::vector<int>& v) {
    json a = json::array();
    for (int x : v) a.push_back(x + 1);
    return a;
}

json cartan_json(const CartanMatrix& a) {
    json m = json::array();
    for (const auto& row : a) m.push_back(row);
    return m;
}

json diagram_json(const Diagram& d, bool dot) {
    json out;
    out["vertices"] = d.size();
    json edges = json::array();
    for (const auto& e : d.edges()) {
        json je;
        je["i"] = e.i + 1;
        je["j"] = e.j + 1;
        if (e.kind.a1aff) {
            je["kind"] = "a1aff";
        } else {
            static const char* names[] = {"", "single", "double", "triple", "quadruple"};
            je["kind"] = names[e.kind.multiplicity];
            if (e.kind.arrow >= 0) je["arrow"] = e.kind.arrow + 1;
        }
        edges.push_back(je);
    }
    out["edges"] = edges;
    json links = json::array();
    for (auto [i, j] : d.links()) links.push_back({i + 1, j + 1});
    out["links"] = links;
    json comps = json::array();
    for (const auto& c : classify_components(d)) comps.push_back({{"type", c.type.name()}, {"vertices", one_based(c.vertices)}});
    out["components"] = comps;
    out["link_connected"] = d.link_connected();
    out["cartan"] = cartan_json(to_cartan(d));
    if (dot) out["dot"] = to_dot(d);
    return out;
}

Diagram load(const Common& c) { return parse_diagram(read_file(c.file), c.self_links); }

json unit_json(const SymbolicUnit& u) {
    json z = json::object();
    for (auto [s, k] : u.z) z[std::to_string(s)] = k;
    return {{"q", u.q}, {"z", z}};
}

json matrix_json(const BraidingMatrix& m) {
    json rows = json::array();
    for (const auto& row : m.b) {
        json r = json::array();
        for (const auto& u : row) r.push_back(unit_json(u));
        rows.push_back(r);
    }
    return {{"d", m.d}, {"symbols", m.symbol_count}, {"b", rows}};
}

BraidingMatrix matrix_from_json(const json& j) {
    BraidingMatrix m;
    m.d = j.at("d").get<long long>();
    m.symbol_count = j.value("symbols", 0);
    for (const auto& row : j.at("b")) {
        std::vector<SymbolicUnit> r;
        for (const auto& e : row) {
            SymbolicUnit u;
            u.q = e.at("q").get<long long>();
            if (e.contains("z"))
                for (const auto& [k, v] : e.at("z").items()) {
                    int s = std::stoi(k);
                    if (v.get<int>() != 0) u.z[s] = v.get<int>();
                    m.symbol_count = std::max(m.symbol_count, s + 1);
                }
            r.push_back(u);
        }
        m.b.push_back(std::move(r));
    }
    return m;
}

json decision_json(const Decision& dec) {
    json out;
    out["mode"] = mode_name(dec.mode);
    out["exists"] = dec.exists;
    out["reasons"] = dec.reasons;
    out["details"] = dec.details;
    out["genus_gcd"] = num(dec.genus_gcd);
    out["orders"] = dec.orders;
    out["any_prime"] = dec.any_prime;
    if (!dec.excluded_case.empty()) out["excluded_case"] = dec.excluded_case;
    return out;
}

json violations_json(const std::vector<Violation>& vs) {
    json a = json::array();
    for (const auto& v : vs) {
        json j{{"kind", v.kind}};
        if (v.i >= 0) j["i"] = v.i + 1;
        if (v.j >= 0) j["j"] = v.j + 1;
        if (v.k >= 0) j["k"] = v.k + 1;
        j["message"] = v.message;
        a.push_back(j);
    }
    return a;
}

json pairs_json(const std::vector<Pair>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back({p[0], p[1]});
    return a;
}

json realization_json(const Realization& r) {
    json out;
    out["realizable"] = true;
    out["p"] = r.p;
    out["source"] = r.source;
    out["g"] = pairs_json(r.g);
    out["chi"] = pairs_json(r.chi);
    json e = json::array();
    for (const auto& row : r.E) e.push_back(row);
    out["E"] = e;
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    out["params"] = params;
    return out;
}

// ---------------------------------------------------------------- subcommands

int cmd_parse(const Common& c, json& payload) {
    payload = diagram_json(load(c), c.dot);
    return kOk;
}

int cmd_cycles(const Common& c, json& payload) {
    Diagram d = load(c);
    Mode mode = parse_mode(c.mode);
    json list = json::array();
    for (const auto& cyc : enumerate_cycles(d, cycle_budget(c))) {
        CycleMetrics m = cycle_metrics(d, cyc, mode);
        list.push_back({{"vertices", one_based(cyc.vertices)},
                        {"l", m.l},
                        {"w2", m.w2},
                        {"w3", m.w3},
                        {"orientations_coincide", m.orientations_coincide},
                        {"genus_finite", num(m.genus_finite)},
                        {"genus_affine", num(m.genus_affine)},
                        {"level0", one_based(m.level0)}});
    }
    payload["mode"] = mode_name(mode);
    payload["cycles"] = list;
    payload["genus_gcd"] = num(genus_gcd(d, mode, cycle_budget(c)));
    return kOk;
}

int cmd_decide(const Common& c, json& payload) {
    Diagram d = load(c);
    Decision dec = decide(d, parse_mode(c.mode), cycle_budget(c));
    payload = decision_json(dec);
    return dec.exists ? kOk : kNegative;
}

int cmd_construct(const Common& c, bool concrete, json& payload) {
    Diagram d = load(c);
    Mode mode = parse_mode(c.mode);
    Decision dec = decide(d, mode, cycle_budget(c));
    payload["decision"] = decision_json(dec);
    if (!dec.exists) return kNegative;
    if (c.seed_vertex < 1 || c.seed_vertex > d.size()) fail("ValidationError", "seed vertex out of range");
    BraidingMatrix m = construct(d, dec, c.seed_vertex - 1, c.order);
    if (concrete) m = m.concretized();
    payload["matrix"] = matrix_json(m);
    payload["violations"] = violations_json(verify(d, m, mode));
    return kOk;
}

int cmd_verify(const Common& c, const std::string& matrix_file, json& payload) {
    Diagram d = load(c);
    json mj;
    try {
        mj = json::parse(read_file(matrix_file));
    } catch (const json::exception& e) {
        fail("SyntaxError", std::string("matrix file: ") + e.what());
    }
    // accept either a bare matrix or a construct report
    if (mj.contains("payload")) mj = mj["payload"];
    if (mj.contains("matrix")) mj = mj["matrix"];
    BraidingMatrix m = matrix_from_json(mj);
    auto vs = verify(d, m, parse_mode(c.mode));
    payload["valid"] = vs.empty();
    payload["violations"] = violations_json(vs);
    return vs.empty() ? kOk : kNegative;
}

int cmd_realize(const Common& c, json& payload) {
    Diagram d = load(c);
    if (c.prime <= 0) fail("ValidationError", "--prime is required");
    RealizeOutcome out = realize(d, c.prime);
    if (!out) {
        payload = {{"realizable", false}, {"reason", out.reason}};
        return kNegative;
    }
    payload = realization_json(*out.realization);
    payload["violations"] = json::array();
    for (const auto& v : verify_realization(to_cartan(d), *out.realization))
        payload["violations"].push_back({{"kind", v.kind}, {"message", v.message}});
    return kOk;
}

int cmd_dim(const Common& c, const std::string& group_order, const std::vector<int>& ns, json& payload) {
    Diagram d = load(c);
    size_t comps = classify_components(d).size();
    std::vector<int> per = ns;
    if (per.size() == 1) per.assign(comps, ns[0]);
    if (per.size() != comps)
        fail("ValidationError", "need one --n or one per component (" + std::to_string(comps) + ")");
    BigInt g(group_order);
    payload["group_order"] = num(g);
    payload["n"] = per;
    payload["dimension"] = big(hopf_dimension(d, g, per));
    return kOk;
}

struct SelflinkArgs {
    std::string type;
    std::vector<std::string> checks;
    std::vector<std::string> sets;
    long long cyclic = 0;
    bool no_powers = false;
    bool misprint = false;
};

json tensor_text(const TensorElement& t) { return t.is_zero() ? json("0") : json(t.str()); }

int cmd_selflink(const Common& c, const SelflinkArgs& a, json& payload) {
    auto type = parse_selflink_type(a.type);
    if (!type) fail("ValidationError", "unknown self-link type '" + a.type + "'");
    const int p = selflink_prime(*type);
    SelfLinkOptions opt;
    opt.power_rules = !a.no_powers;
    opt.cyclic = a.cyclic;
    opt.g2_zv_misprint = a.misprint;
    for (const auto& s : a.sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) fail("SyntaxError", "--set expects key=value, got '" + s + "'");
        opt.values[s.substr(0, eq)] = s.substr(eq + 1);
    }
    std::vector<std::string> checks = a.checks;
    if (checks.empty()) checks = {"confluence"};
    payload["type"] = a.type;
    payload["p"] = p;
    bool all_ok = true;

    auto build = [&](bool roots, long long cyclic) {
        SelfLinkOptions o = opt;
        o.root_power_rules = roots;
        o.cyclic = cyclic;
        auto P = selflink_presentation(*type, o);
        if (c.budget > 0) P->set_budget(c.budget);
        return P;
    };
    // generator exponents of g1^a g2^b in the chosen group
    auto gvec = [&](const Presentation& P, int e1, int e2) {
        if (P.group_gens().size() == 1) return std::vector<int>{e1 + e2};
        return std::vector<int>{e1, e2};
    };

    for (const auto& check : checks) {
        json r;
        if (check == "confluence") {
            auto P = build(true, opt.cyclic);
            auto amb = check_local_confluence(*P);
            json list = json::array();
            for (const auto& x : amb)
                list.push_back({{"kind", x.kind}, {"word", P->word_str(x.word)}, {"left", x.left.str()}, {"right", x.right.str()}});
            r = {{"rules", P->rules().size()}, {"confluent", amb.empty()}, {"ambiguities", list},
                 {"applications", P->applications()}};
            all_ok = all_ok && amb.empty();
        } else if (check == "primitive") {
            auto P = build(false, opt.cyclic);
            std::vector<std::tuple<std::string, int, int>> items;
            std::string pw = std::to_string(p);
            items.push_back({"x1^" + pw, p, 0});
            items.push_back({"x2^" + pw, 0, p});
            if (*type == SelfLinkType::A2) items.push_back({"v", p, p});
            if (*type == SelfLinkType::B2) {
                items.push_back({"v", p, p});
                items.push_back({"w", p, 2 * p});
            }
            if (*type == SelfLinkType::G2) items.push_back({"Z", p, p});
            json list = json::array();
            for (const auto& [name, e1, e2] : items) {
                auto res = is_skew_primitive(*P, P->parse(name), gvec(*P, e1, e2));
                list.push_back({{"element", name}, {"g", {e1, e2}}, {"ok", res.ok}, {"residual", tensor_text(res.residual)}});
                all_ok = all_ok && res.ok;
            }
            r = {{"elements", list}, {"applications", P->applications()}};
        } else if (check == "central") {
            auto P = build(false, opt.cyclic);
            std::vector<std::string> items;
            if (*type == SelfLinkType::A2) items = {"v"};
            if (*type == SelfLinkType::B2) items = {"v", "w"};
            if (*type == SelfLinkType::G2) items = {"x1^7", "x2^7"};
            json list = json::array();
            for (const auto& name : items) {
                auto res = is_central(*P, P->parse(name));
                json j{{"element", name}, {"ok", res.ok}};
                if (!res.ok) j["witness"] = res.witness;
                list.push_back(j);
                all_ok = all_ok && res.ok;
            }
            // root-vector powers that are not central when the parameters are generic
            std::vector<std::string> probes;
            if (*type == SelfLinkType::B2) probes = {"z^5", "u^5"};
            json info = json::array();
            for (const auto& name : probes) {
                auto res = is_central(*P, P->parse(name));
                json j{{"element", name}, {"ok", res.ok}};
                if (!res.ok) j["witness"] = res.witness;
                info.push_back(j);
            }
            r = {{"elements", list}, {"informational", info}};
        } else if (check == "basis") {
            long long cyc = opt.cyclic > 0 ? opt.cyclic : static_cast<long long>(p) * p;
            auto P = build(true, cyc);
            std::map<std::string, int> caps;
            for (int i = 0; i < P->letter_count(); ++i) caps[P->letter_name(i)] = p;
            auto b = enumerate_basis(*P, caps);
            int roots = P->letter_count();
            BigInt expect = cyc;
            for (int i = 0; i < roots; ++i) expect *= p;
            // G2 keeps u, v, w without p-th power relations, so words run past the caps
            bool capped = *type == SelfLinkType::G2;
            bool ok = b.count == expect && (capped || !b.truncated);
            r = {{"group_order", cyc}, {"count", big(b.count)}, {"expected", big(expect)},
                 {"words", b.words}, {"truncated", b.truncated}, {"root_powers_divided", !capped}, {"matches", ok}};
            all_ok = all_ok && ok;
        } else {
            fail("ValidationError", "unknown check '" + check + "'");
        }
        payload[check] = r;
    }
    return all_ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linkable Dynkin diagrams: cycles, existence, braiding matrices, realizations, self-linked presentations"};
    app.require_subcommand(1);
    Common c;
    SelflinkArgs sl;
    std::string matrix_file, group_order = "1";
    std::vector<int> ns;
    bool concrete = false;

    auto add_file = [&](CLI::App* s) {
        s->add_option("file", c.file, "Diagram file, - for stdin")->required();
        s->add_flag("--self-links", c.self_links, "Allow links inside one component");
        s->add_option("--budget", c.budget, "Budget for cycle enumeration or reduction");
        s->add_flag("--timing", c.timing, "Report elapsed time on stderr");
    };
    auto add_mode = [&](CLI::App* s) {
        s->add_option("--mode", c.mode, "finite, affine or nonroot")->check(CLI::IsMember({"finite", "affine", "nonroot"}));
    };

    auto* parse = app.add_subcommand("parse", "Validate a diagram and print its components and Cartan matrix");
    add_file(parse);
    parse->add_flag("--dot", c.dot, "Include a DOT rendering");
    auto* cycles = app.add_subcommand("cycles", "Enumerate cycles with their genera");
    add_file(cycles);
    add_mode(cycles);
    auto* decide_cmd = app.add_subcommand("decide", "Decide whether linkable braiding matrices exist");
    add_file(decide_cmd);
    add_mode(decide_cmd);
    auto* construct_cmd = app.add_subcommand("construct", "Construct a linkable braiding matrix");
    add_file(construct_cmd);
    add_mode(construct_cmd);
    construct_cmd->add_option("--order", c.order, "Order of the root of unity");
    construct_cmd->add_option("--seed-vertex", c.seed_vertex, "Vertex whose diagonal entry is q");
    construct_cmd->add_flag("--concrete", concrete, "Set every free symbol to 1");
    auto* verify_cmd = app.add_subcommand("verify", "Check a braiding matrix against a diagram");
    add_file(verify_cmd);
    add_mode(verify_cmd);
    verify_cmd->add_option("matrix", matrix_file, "Matrix JSON (bare or a construct report)")->required();
    auto* realize_cmd = app.add_subcommand("realize", "Realize over (Z/p)^2");
    add_file(realize_cmd);
    realize_cmd->add_option("--prime", c.prime, "Prime p >= 5")->required();
    auto* dim = app.add_subcommand("dim", "Dimension |G| * prod N^{|positive roots|}");
    add_file(dim);
    dim->add_option("--group-order", group_order, "Order of the group");
    dim->add_option("--n", ns, "Order per component, or one for all")->required();
    auto* selflink = app.add_subcommand("selflink", "Certificates for the self-linked rank-2 presentations");
    selflink->add_option("--type", sl.type, "A2, B2 or G2")->required()->check(CLI::IsMember({"A2", "B2", "G2"}));
    selflink->add_option("--check", sl.checks, "confluence, primitive, central, basis")
        ->check(CLI::IsMember({"confluence", "primitive", "central", "basis"}));
    selflink->add_option("--set", sl.sets, "Parameter value, e.g. lam12=0");
    selflink->add_option("--cyclic", sl.cyclic, "Use g1 = g2 of this order");
    selflink->add_flag("--no-powers", sl.no_powers, "Drop the x_i^p relations");
    selflink->add_flag("--misprint", sl.misprint, "G2: use the zv coefficient with constant term 1");
    selflink->add_option("--budget", c.budget, "Rule application budget");
    selflink->add_flag("--timing", c.timing, "Report elapsed time on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    auto* sub = app.get_subcommands().front();
    json report;
    report["schema"] = kSchema;
    report["command"] = sub->get_name();
    json args = json::array();
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    report["args"] = args;

    auto t0 = std::chrono::steady_clock::now();
    int code = kError;
    json payload = json::object();
    try {
        const std::string name = sub->get_name();
        if (name == "parse") code = cmd_parse(c, payload);
        else if (name == "cycles") code = cmd_cycles(c, payload);
        else if (name == "decide") code = cmd_decide(c, payload);
        else if (name == "construct") code = cmd_construct(c, concrete, payload);
        else if (name == "verify") code = cmd_verify(c, matrix_file, payload);
        else if (name == "realize") code = cmd_realize(c, payload);
        else if (name == "dim") code = cmd_dim(c, group_order, ns, payload);
        else if (name == "selflink") code = cmd_selflink(c, sl, payload);
        report["status"] = code == kOk ? "ok" : "negative";
        report["payload"] = payload;
    } catch (const Error& e) {
        std::cerr << "linkdyn: " << e.kind() << ": " << e.what() << "\n";
        report["status"] = "error";
        report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        code = kError;
    } catch (const std::exception& e) {
        std::cerr << "linkdyn: " << e.what() << "\n";
        report["status"] = "error";
        report["error"] = {{"kind", "InternalError"}, {"message", e.what()}};
        code = kError;
    }
    // timing stays off stdout so identical inputs give identical bytes
    if (c.timing)
        std::cerr << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    std::cout << report.dump(2) << "\n";
    return code;
}
