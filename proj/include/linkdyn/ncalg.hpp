#pragma once

#include "linkdyn/diagram.hpp"
#include "linkdyn/qcalc.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace linkdyn {

// Noncommutative rewriting over Z[q]/Phi_M with commuting parameters.
//
// A monomial is c * params * word * g: the group part sits rightmost and is
// moved there with g x = chi_x(g) x g. Words are strings of letter indices.

using Coeff = std::vector<BigInt>;  // element of the presentation's cyclotomic ring

struct Mono {
    std::string word;
    std::vector<int> group;
    std::vector<int> params;
    bool operator<(const Mono& o) const;
    bool operator==(const Mono& o) const = default;
};

struct TMono {
    Mono left, right;  // params are kept on the left factor only
    bool operator<(const TMono& o) const;
    bool operator==(const TMono& o) const = default;
};

class Presentation;

class Element {
public:
    Element() = default;
    explicit Element(const Presentation* p) : p_(p) {}

    const Presentation* presentation() const { return p_; }
    bool is_zero() const { return terms.empty(); }
    void add(const Mono& m, const Coeff& c);

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element operator-() const;
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    // Free product followed by moving the group part right; no rewriting.
    friend Element operator*(const Element& a, const Element& b);
    bool operator==(const Element& o) const { return terms == o.terms; }

    std::string str() const;

    std::map<Mono, Coeff> terms;

private:
    const Presentation* p_ = nullptr;
};

class TensorElement {
public:
    TensorElement() = default;
    explicit TensorElement(const Presentation* p) : p_(p) {}

    const Presentation* presentation() const { return p_; }
    bool is_zero() const { return terms.empty(); }
    void add(const TMono& m, const Coeff& c);

    TensorElement& operator+=(const TensorElement& o);
    TensorElement& operator-=(const TensorElement& o);
    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
    // Componentwise product in H (x) H.
    friend TensorElement operator*(const TensorElement& a, const TensorElement& b);
    bool operator==(const TensorElement& o) const { return terms == o.terms; }

    std::string str() const;

    std::map<TMono, Coeff> terms;

private:
    const Presentation* p_ = nullptr;
};

TensorElement tensor(const Element& a, const Element& b);

struct Rule {
    std::string lhs;
    Element rhs;
};

// Generators x_1..x_rank carry g_i and chi_i; further letters (root vectors)
// carry a degree over the x_i and get g, chi and the coproduct from it.
// Words are ordered by total degree, then the secondary weight, then
// lexicographically in letter order.
class Presentation {
public:
    Presentation(int modulus, std::vector<std::string> group_gens, std::vector<long long> group_orders,
                 std::vector<std::vector<int>> g, std::vector<std::vector<long long>> chi,
                 std::vector<std::string> params);
    // Elements point back at their presentation, so it stays put.
    Presentation(const Presentation&) = delete;
    Presentation& operator=(const Presentation&) = delete;

    // Letters are declared in increasing order.
    int add_letter(const std::string& name, std::vector<int> degree, int secondary = 0,
                   const std::string& definition = "");
    void add_macro(const std::string& name, const std::string& expr);
    void set_value(const std::string& param, const std::string& expr);
    // Reduces lhs - rhs and orients it toward its largest word. Returns false
    // when the relation already reduces to zero.
    bool add_relation(const std::string& lhs, const std::string& rhs);
    bool add_relation_elements(const Element& lhs, const Element& rhs, const std::string& label = "");
    void add_rule(const std::string& lhs, const Element& rhs);

    const CycloRing& ring() const { return *ring_; }
    int modulus() const { return ring_->order(); }
    int rank() const { return static_cast<int>(g_.size()); }
    int letter_count() const { return static_cast<int>(letters_.size()); }
    const std::string& letter_name(int i) const { return letters_[i].name; }
    std::optional<int> letter_index(const std::string& name) const;
    bool is_generator(int i) const;  // x_i, as opposed to a defined root vector
    const std::vector<std::string>& group_gens() const { return group_gens_; }
    const std::vector<long long>& group_orders() const { return group_orders_; }
    const std::vector<std::string>& params() const { return params_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<int>& simple_g(int i) const { return g_[i]; }
    const std::vector<long long>& simple_chi(int i) const { return chi_[i]; }

    std::vector<int> word_g(const std::string& w) const;         // group-like degree of a word
    std::vector<long long> word_chi(const std::string& w) const;  // character exponents of a word
    bool word_less(const std::string& a, const std::string& b) const;
    std::string word_str(const std::string& w) const;
    std::vector<int> reduce_group(std::vector<int> h) const;

    Element parse(const std::string& expr) const;
    Element one() const;
    Element letter(int i) const;
    Element scalar(const Coeff& c) const;
    Element group(const std::vector<int>& h) const;
    Coeff q_pow(long long k) const;
    Coeff cmul(const Coeff& a, const Coeff& b) const { return ring_->mul(a, b); }
    std::optional<long long> unit_exponent(const Coeff& c, int& sign) const;  // c = sign * q^k
    std::string coeff_str(const Coeff& c, bool alone) const;

    Element normal_form(const Element& e) const;
    TensorElement normal_form(const TensorElement& t) const;
    const Element& normal_word(const std::string& w) const;
    // One rewriting step at a given position.
    Element apply_rule(const std::string& w, size_t pos, size_t rule) const;
    std::optional<std::pair<size_t, size_t>> find_match(const std::string& w) const;  // (pos, rule)

    TensorElement coproduct(const Element& e) const;
    const TensorElement& coproduct_word(const std::string& w) const;

    void set_budget(long long b) { budget_ = b; }
    long long budget() const { return budget_; }
    long long applications() const { return applications_; }

private:
    struct Letter {
        std::string name;
        std::vector<int> degree;
        int weight = 0;
        int secondary = 0;
        std::vector<int> g;
        std::vector<long long> chi;
        std::string definition;
    };

    Element shifted(const Element& e, const Coeff& c, const std::vector<int>& h, const std::vector<int>& par) const;
    Element parse_expr(const std::string& s) const;

    std::shared_ptr<const CycloRing> ring_;
    std::vector<std::string> group_gens_;
    std::vector<long long> group_orders_;
    std::vector<std::vector<int>> g_;
    std::vector<std::vector<long long>> chi_;
    std::vector<std::string> params_;
    std::vector<Letter> letters_;
    std::map<std::string, Element> macros_;
    std::vector<Rule> rules_;
    std::vector<std::vector<size_t>> rules_by_first_;
    std::vector<Coeff> qpow_;
    long long budget_;

    mutable std::unordered_map<std::string, Element> nf_memo_;
    mutable std::unordered_map<std::string, TensorElement> delta_memo_;
    mutable long long applications_ = 0;
};

struct Ambiguity {
    std::string kind;  // "overlap", "inclusion", "character", "group order"
    std::string word;
    Element left, right;
    std::string message;
};
std::vector<Ambiguity> check_local_confluence(const Presentation& p);

// ab - chi_b(g_a) ba for homogeneous a, b, reduced.
Element bracket(const Presentation& p, const Element& a, const Element& b);
Element bracket(const Presentation& p, int i, const Element& e);

struct PrimitivityResult {
    bool ok = false;
    TensorElement residual;
};
// Delta(e) = g (x) e + e (x) 1 after reduction.
PrimitivityResult is_skew_primitive(const Presentation& p, const Element& e, const std::vector<int>& g);

struct CentralityResult {
    bool ok = false;
    std::string witness;  // first letter or group generator that fails to commute
    Element commutator;
};
CentralityResult is_central(const Presentation& p, const Element& e);

struct BasisCount {
    BigInt count = 0;
    long long words = 0;
    bool truncated = false;  // some irreducible word exceeds the caps
    std::vector<std::string> listing;
};
// Irreducible words with letter multiplicities below the caps, times |group|.
BasisCount enumerate_basis(const Presentation& p, const std::map<std::string, int>& caps, bool list = false);

// Normal form of (x + y)^n under xy = q yx against sum binom(n,i)_q y^i x^{n-i}.
// d = 0 works in Z[q]; otherwise modulo Phi_d.
bool quantum_binomial_check(int n, int d = 0);

// Linking data with braiding b_ij = chi_j(g_i) = q^{chi[j][k] g[i][k] ...}
// over a group with the given generator orders.
struct LinkingDatum {
    CartanMatrix a;
    int modulus = 0;  // q is a primitive root of unity of this order
    std::vector<long long> group_orders;
    std::vector<std::vector<int>> g;          // g_i as exponent vectors
    std::vector<std::vector<long long>> chi;  // chi_i on each group generator, as q-exponents
    std::vector<std::pair<int, int>> links;   // linkable pairs, 0-based
    std::vector<std::string> params;
    std::map<std::pair<int, int>, std::string> lambda;  // lambda_ij as an expression in q and params
};

struct DatumReport {
    bool ok = true;
    std::vector<std::string> issues;
};
DatumReport validate_linking_datum(const LinkingDatum& d);
long long braiding_exponent(const LinkingDatum& d, int i, int j);  // b_ij = q^e

// Letters x1..xn with the group relations, the linking relations for a_ij = 0
// and the quantum Serre relations from their explicit sum.
std::unique_ptr<Presentation> presentation_U(const LinkingDatum& d);

// e_{i,j} for 1 <= i < j <= n+1, keyed 1-based as in the usual notation.
std::map<std::pair<int, int>, Element> build_root_vectors_An(const Presentation& p, int n);

// u_{i,j} for an A_n datum; gamma maps (i, j) to an expression in the
// presentation's parameters. Throws NotAdmissible unless check is off.
std::map<std::pair<int, int>, Element> u_recursion(const Presentation& p, const LinkingDatum& d,
                                                   const std::map<std::pair<int, int>, std::string>& gamma,
                                                   bool check = true);

enum class SelfLinkType { A2, B2, G2 };
struct SelfLinkOptions {
    bool power_rules = true;       // x_i^p = mu_i(1 - g_i^p)
    bool root_power_rules = true;  // A2: v, B2: v and w; nothing for G2
    long long cyclic = 0;          // nonzero: g1 = g2 generate Z/cyclic
    std::map<std::string, std::string> values;  // parameter specializations
    bool g2_zv_misprint = false;   // G2: zv with u^2 coefficient 2q^5+q^4+q^3+q^2+1
};
std::optional<SelfLinkType> parse_selflink_type(const std::string& s);
int selflink_prime(SelfLinkType t);
// Macros: A2 "v", B2 "v" and "w", G2 "Z"; group elements G1, G2 for B2 and G2.
std::unique_ptr<Presentation> selflink_presentation(SelfLinkType t, const SelfLinkOptions& opt = {});

long long default_budget();  // 10^7 unless LINKDYN_BUDGET is set

}  // namespace linkdyn
