#include "linkdyn/ncalg.hpp"

#include "linkdyn/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace linkdyn {

namespace {

long long md(long long a, long long m) {
    a %= m;
    return a < 0 ? a + m : a;
}

bool coeff_zero(const Coeff& c) {
    return std::all_of(c.begin(), c.end(), [](const BigInt& x) { return x == 0; });
}

std::vector<int> vadd(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r = a;
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
    return s;
}

// Coefficient text: a bare signed monomial where possible, else parenthesized.
// Returns "" for 1 and "-" for -1 when something follows.
std::string coeff_text(const QPoly& f, bool alone) {
    int nonzero = 0;
    for (const auto& c : f.coeffs()) nonzero += c != 0;
    if (nonzero == 1) {
        std::string s = f.str();
        if (!alone && s == "1") return "";
        if (!alone && s == "-1") return "-";
        return s;
    }
    return "(" + f.str() + ")";
}

std::string power_list(const std::vector<int>& e, const std::vector<std::string>& names) {
    std::vector<std::string> parts;
    for (size_t k = 0; k < e.size(); ++k) {
        if (e[k] == 0) continue;
        parts.push_back(names[k] + (e[k] == 1 ? "" : "^" + std::to_string(e[k])));
    }
    return join(parts, "*");
}

}  // namespace

bool Mono::operator<(const Mono& o) const {
    return std::tie(word, group, params) < std::tie(o.word, o.group, o.params);
}

bool TMono::operator<(const TMono& o) const { return std::tie(left, right) < std::tie(o.left, o.right); }

// ---------------------------------------------------------------- elements

void Element::add(const Mono& m, const Coeff& c) {
    if (coeff_zero(c)) return;
    auto [it, fresh] = terms.try_emplace(m, c);
    if (fresh) return;
    for (size_t i = 0; i < c.size(); ++i) it->second[i] += c[i];
    if (coeff_zero(it->second)) terms.erase(it);
}

Element& Element::operator+=(const Element& o) {
    if (!p_) p_ = o.p_;
    for (const auto& [m, c] : o.terms) add(m, c);
    return *this;
}

Element& Element::operator-=(const Element& o) {
    if (!p_) p_ = o.p_;
    for (const auto& [m, c] : o.terms) {
        Coeff n = c;
        for (auto& x : n) x = -x;
        add(m, n);
    }
    return *this;
}

Element Element::operator-() const {
    Element r(p_);
    r -= *this;
    return r;
}

Element operator*(const Element& a, const Element& b) {
    const Presentation* p = a.p_ ? a.p_ : b.p_;
    Element r(p);
    if (a.is_zero() || b.is_zero()) return r;
    for (const auto& [mb, cb] : b.terms) {
        std::vector<long long> chi = p->word_chi(mb.word);
        for (const auto& [ma, ca] : a.terms) {
            long long e = 0;
            for (size_t k = 0; k < chi.size(); ++k) e += static_cast<long long>(ma.group[k]) * chi[k];
            Mono m{ma.word + mb.word, p->reduce_group(vadd(ma.group, mb.group)), vadd(ma.params, mb.params)};
            r.add(m, p->cmul(p->cmul(ca, cb), p->q_pow(e)));
        }
    }
    return r;
}

namespace {

std::string mono_text(const Presentation& p, const Mono& m) {
    std::vector<std::string> parts;
    if (std::string s = power_list(m.params, p.params()); !s.empty()) parts.push_back(s);
    if (!m.word.empty()) parts.push_back(p.word_str(m.word));
    if (std::string s = power_list(m.group, p.group_gens()); !s.empty()) parts.push_back(s);
    return join(parts, "*");
}

// Joins signed term texts: "a + b - c".
std::string sum_text(const std::vector<std::pair<std::string, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [coeff, body] : terms) {
        std::string c = coeff;
        bool neg = !c.empty() && c[0] == '-';
        if (neg) c = c.substr(1);
        std::string t = body.empty() ? (c.empty() ? "1" : c) : (c.empty() ? body : c + "*" + body);
        if (first)
            out = (neg ? "-" : "") + t;
        else
            out += (neg ? " - " : " + ") + t;
        first = false;
    }
    return out;
}

}  // namespace

std::string Element::str() const {
    if (!p_ || terms.empty()) return "0";
    std::vector<std::pair<std::string, std::string>> parts;
    for (const auto& [m, c] : terms) {
        std::string body = mono_text(*p_, m);
        parts.emplace_back(p_->coeff_str(c, body.empty()), body);
    }
    return sum_text(parts);
}

// ---------------------------------------------------------------- tensors

void TensorElement::add(const TMono& m, const Coeff& c) {
    if (coeff_zero(c)) return;
    auto [it, fresh] = terms.try_emplace(m, c);
    if (fresh) return;
    for (size_t i = 0; i < c.size(); ++i) it->second[i] += c[i];
    if (coeff_zero(it->second)) terms.erase(it);
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
    if (!p_) p_ = o.p_;
    for (const auto& [m, c] : o.terms) add(m, c);
    return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
    if (!p_) p_ = o.p_;
    for (const auto& [m, c] : o.terms) {
        Coeff n = c;
        for (auto& x : n) x = -x;
        add(m, n);
    }
    return *this;
}

TensorElement operator*(const TensorElement& a, const TensorElement& b) {
    const Presentation* p = a.p_ ? a.p_ : b.p_;
    TensorElement r(p);
    for (const auto& [mb, cb] : b.terms) {
        std::vector<long long> chl = p->word_chi(mb.left.word), chr = p->word_chi(mb.right.word);
        for (const auto& [ma, ca] : a.terms) {
            long long e = 0;
            for (size_t k = 0; k < chl.size(); ++k)
                e += static_cast<long long>(ma.left.group[k]) * chl[k] + static_cast<long long>(ma.right.group[k]) * chr[k];
            TMono m{{ma.left.word + mb.left.word, p->reduce_group(vadd(ma.left.group, mb.left.group)),
                     vadd(ma.left.params, mb.left.params)},
                    {ma.right.word + mb.right.word, p->reduce_group(vadd(ma.right.group, mb.right.group)), {}}};
            r.add(m, p->cmul(p->cmul(ca, cb), p->q_pow(e)));
        }
    }
    return r;
}

std::string TensorElement::str() const {
    if (!p_ || terms.empty()) return "0";
    std::vector<std::pair<std::string, std::string>> parts;
    for (const auto& [m, c] : terms) {
        Mono l = m.left;
        std::string lt = mono_text(*p_, l), rt = mono_text(*p_, m.right);
        std::string body = (lt.empty() ? "1" : lt) + " (x) " + (rt.empty() ? "1" : rt);
        parts.emplace_back(p_->coeff_str(c, false), body);
    }
    return sum_text(parts);
}

TensorElement tensor(const Element& a, const Element& b) {
    const Presentation* p = a.presentation() ? a.presentation() : b.presentation();
    TensorElement r(p);
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms)
            r.add(TMono{{ma.word, ma.group, vadd(ma.params, mb.params)}, {mb.word, mb.group, {}}}, p->cmul(ca, cb));
    return r;
}

// ---------------------------------------------------------------- presentation

long long default_budget() {
    if (const char* s = std::getenv("LINKDYN_BUDGET")) {
        try {
            long long b = std::stoll(s);
            if (b > 0) return b;
        } catch (const std::exception&) {
        }
    }
    return 10'000'000;
}

Presentation::Presentation(int modulus, std::vector<std::string> group_gens, std::vector<long long> group_orders,
                           std::vector<std::vector<int>> g, std::vector<std::vector<long long>> chi,
                           std::vector<std::string> params)
    : ring_(std::make_shared<CycloRing>(modulus)),
      group_gens_(std::move(group_gens)),
      group_orders_(std::move(group_orders)),
      g_(std::move(g)),
      chi_(std::move(chi)),
      params_(std::move(params)),
      budget_(default_budget()) {
    if (modulus < 1) fail("InvalidDatum", "modulus must be positive");
    if (group_orders_.size() != group_gens_.size()) fail("InvalidDatum", "one order per group generator");
    if (g_.size() != chi_.size()) fail("InvalidDatum", "one character per group-like");
    for (size_t i = 0; i < g_.size(); ++i) {
        if (g_[i].size() != group_gens_.size() || chi_[i].size() != group_gens_.size())
            fail("InvalidDatum", "group-like or character of the wrong length");
        for (auto& c : chi_[i]) c = md(c, modulus);
        g_[i] = reduce_group(g_[i]);
    }
    for (long long k = 0; k < modulus; ++k) qpow_.push_back(ring_->q_pow(k));
}

std::vector<int> Presentation::reduce_group(std::vector<int> h) const {
    for (size_t k = 0; k < h.size(); ++k)
        if (group_orders_[k] > 0) h[k] = static_cast<int>(md(h[k], group_orders_[k]));
    return h;
}

std::string Presentation::coeff_str(const Coeff& c, bool alone) const {
    int sign = 1;
    if (auto k = unit_exponent(c, sign)) {
        std::string s = *k == 0 ? (alone ? "1" : "") : (*k == 1 ? "q" : "q^" + std::to_string(*k));
        return (sign < 0 ? "-" : "") + s;
    }
    return coeff_text(ring_->lift(c), alone);
}

Coeff Presentation::q_pow(long long k) const { return qpow_[md(k, modulus())]; }

std::optional<long long> Presentation::unit_exponent(const Coeff& c, int& sign) const {
    Coeff neg = c;
    for (auto& x : neg) x = -x;
    for (int k = 0; k < modulus(); ++k) {
        if (qpow_[k] == c) {
            sign = 1;
            return k;
        }
        if (qpow_[k] == neg) {
            sign = -1;
            return k;
        }
    }
    return std::nullopt;
}

int Presentation::add_letter(const std::string& name, std::vector<int> degree, int secondary, const std::string& definition) {
    if (letter_index(name) || name == "q") fail("InvalidDatum", "duplicate letter " + name);
    if (letters_.size() >= 120) fail("InvalidDatum", "too many letters");
    if (static_cast<int>(degree.size()) != rank()) fail("InvalidDatum", "degree of " + name + " has the wrong length");
    Letter l{name, degree, 0, secondary, std::vector<int>(group_gens_.size()), std::vector<long long>(group_gens_.size()), definition};
    int units = 0;
    for (int i = 0; i < rank(); ++i) {
        if (degree[i] < 0) fail("InvalidDatum", "negative degree for " + name);
        l.weight += degree[i];
        units += degree[i] != 0;
        for (size_t k = 0; k < group_gens_.size(); ++k) {
            l.g[k] += degree[i] * g_[i][k];
            l.chi[k] = md(l.chi[k] + degree[i] * chi_[i][k], modulus());
        }
    }
    if (l.weight == 0) fail("InvalidDatum", "letter " + name + " has degree zero");
    if (definition.empty() && !(units == 1 && l.weight == 1))
        fail("InvalidDatum", "letter " + name + " needs a definition in the generators");
    l.g = reduce_group(l.g);
    letters_.push_back(std::move(l));
    rules_by_first_.emplace_back();
    return static_cast<int>(letters_.size()) - 1;
}

bool Presentation::is_generator(int i) const { return letters_[i].definition.empty(); }

std::optional<int> Presentation::letter_index(const std::string& name) const {
    for (size_t i = 0; i < letters_.size(); ++i)
        if (letters_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

void Presentation::add_macro(const std::string& name, const std::string& expr) { macros_[name] = parse(expr); }

void Presentation::set_value(const std::string& param, const std::string& expr) {
    if (std::find(params_.begin(), params_.end(), param) == params_.end())
        fail("InvalidDatum", "unknown parameter " + param);
    Element v = parse(expr);
    for (const auto& [m, c] : v.terms)
        if (!m.word.empty() || std::any_of(m.group.begin(), m.group.end(), [](int x) { return x != 0; }))
            fail("InvalidDatum", "value of " + param + " must be a scalar");
    macros_[param] = v;
}

std::vector<int> Presentation::word_g(const std::string& w) const {
    std::vector<int> r(group_gens_.size());
    for (unsigned char c : w) r = vadd(r, letters_[c].g);
    return reduce_group(r);
}

std::vector<long long> Presentation::word_chi(const std::string& w) const {
    std::vector<long long> r(group_gens_.size());
    for (unsigned char c : w)
        for (size_t k = 0; k < r.size(); ++k) r[k] += letters_[c].chi[k];
    for (auto& x : r) x = md(x, modulus());
    return r;
}

bool Presentation::word_less(const std::string& a, const std::string& b) const {
    auto key = [&](const std::string& w) {
        long long wt = 0, sec = 0;
        for (unsigned char c : w) {
            wt += letters_[c].weight;
            sec += letters_[c].secondary;
        }
        return std::make_pair(wt, sec);
    };
    auto ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    return a < b;
}

std::string Presentation::word_str(const std::string& w) const {
    std::vector<std::string> parts;
    for (size_t i = 0; i < w.size();) {
        size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        const std::string& n = letters_[static_cast<unsigned char>(w[i])].name;
        parts.push_back(j - i == 1 ? n : n + "^" + std::to_string(j - i));
        i = j;
    }
    return join(parts, "*");
}

Element Presentation::one() const {
    Element e(this);
    e.add(Mono{"", std::vector<int>(group_gens_.size()), std::vector<int>(params_.size())}, qpow_[0]);
    return e;
}

Element Presentation::letter(int i) const {
    Element e(this);
    e.add(Mono{std::string(1, static_cast<char>(i)), std::vector<int>(group_gens_.size()), std::vector<int>(params_.size())},
          qpow_[0]);
    return e;
}

Element Presentation::scalar(const Coeff& c) const {
    Element e(this);
    e.add(Mono{"", std::vector<int>(group_gens_.size()), std::vector<int>(params_.size())}, c);
    return e;
}

Element Presentation::group(const std::vector<int>& h) const {
    Element e(this);
    e.add(Mono{"", reduce_group(h), std::vector<int>(params_.size())}, qpow_[0]);
    return e;
}

// ---------------------------------------------------------------- parsing

namespace {

// sum := ['+'|'-'] term {('+'|'-') term}
// term := factor {['*'] factor}
// factor := primary ['^' ['-'] digits]
// primary := number | name | '(' sum ')'
class ExprParser {
public:
    ExprParser(const std::string& s, std::function<Element(const std::string&)> resolve,
               std::function<Element(long long)> number, std::function<Element(const Element&, long long)> power)
        : s_(s), resolve_(std::move(resolve)), number_(std::move(number)), power_(std::move(power)) {}

    Element run() {
        Element e = sum();
        skip();
        if (i_ != s_.size()) error("unexpected '" + std::string(1, s_[i_]) + "'");
        return e;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool at(char c) {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }
    bool starts_primary() {
        skip();
        if (i_ >= s_.size()) return false;
        char c = s_[i_];
        return c == '(' || std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }
    [[noreturn]] void error(const std::string& m) const {
        fail("SyntaxError", m + " at offset " + std::to_string(i_) + " in \"" + s_ + "\"");
    }

    Element sum() {
        bool neg = false;
        if (at('+'))
            ++i_;
        else if (at('-')) {
            ++i_;
            neg = true;
        }
        Element acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (at('+')) {
                ++i_;
                acc += term();
            } else if (at('-')) {
                ++i_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Element term() {
        Element acc = factor();
        while (true) {
            if (at('*')) {
                ++i_;
                acc = acc * factor();
            } else if (starts_primary()) {
                acc = acc * factor();
            } else {
                return acc;
            }
        }
    }

    Element factor() {
        Element base = primary();
        if (!at('^')) return base;
        ++i_;
        bool neg = false;
        if (at('-')) {
            ++i_;
            neg = true;
        }
        skip();
        size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (st == i_) error("exponent expected");
        long long k = std::stoll(s_.substr(st, i_ - st));
        return power_(base, neg ? -k : k);
    }

    Element primary() {
        skip();
        if (i_ >= s_.size()) error("operand expected");
        if (s_[i_] == '(') {
            ++i_;
            Element e = sum();
            if (!at(')')) error("')' expected");
            ++i_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return number_(std::stoll(s_.substr(st, i_ - st)));
        }
        if (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_') {
            size_t st = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return resolve_(s_.substr(st, i_ - st));
        }
        error("operand expected");
    }

    std::string s_;
    size_t i_ = 0;
    std::function<Element(const std::string&)> resolve_;
    std::function<Element(long long)> number_;
    std::function<Element(const Element&, long long)> power_;
};

}  // namespace

Element Presentation::parse(const std::string& expr) const { return parse_expr(expr); }

Element Presentation::parse_expr(const std::string& s) const {
    auto resolve = [&](const std::string& name) -> Element {
        if (name == "q") return scalar(qpow_[1 % modulus()]);
        if (auto it = macros_.find(name); it != macros_.end()) return it->second;
        if (auto li = letter_index(name)) return letter(*li);
        for (size_t k = 0; k < params_.size(); ++k)
            if (params_[k] == name) {
                Element e(this);
                std::vector<int> par(params_.size());
                par[k] = 1;
                e.add(Mono{"", std::vector<int>(group_gens_.size()), par}, qpow_[0]);
                return e;
            }
        for (size_t k = 0; k < group_gens_.size(); ++k)
            if (group_gens_[k] == name) {
                std::vector<int> h(group_gens_.size());
                h[k] = 1;
                return group(h);
            }
        fail("SyntaxError", "unknown name '" + name + "' in \"" + s + "\"");
    };
    auto number = [&](long long n) {
        Coeff c = ring_->zero();
        Coeff one = qpow_[0];
        for (size_t i = 0; i < c.size(); ++i) c[i] = one[i] * n;
        return scalar(c);
    };
    auto power = [&](const Element& base, long long k) -> Element {
        if (k >= 0) {
            Element r = one();
            for (long long i = 0; i < k; ++i) r = r * base;
            return r;
        }
        // only units of the group ring invert: sign * q^m * g
        if (base.terms.size() != 1) fail("SyntaxError", "negative power of a sum in \"" + s + "\"");
        const auto& [m, c] = *base.terms.begin();
        int sign = 1;
        auto e = unit_exponent(c, sign);
        if (!m.word.empty() || std::any_of(m.params.begin(), m.params.end(), [](int x) { return x != 0; }) || !e)
            fail("SyntaxError", "negative power of a non-unit in \"" + s + "\"");
        std::vector<int> h = m.group;
        for (auto& x : h) x = -x;
        Coeff inv = qpow_[md(-*e, modulus())];
        if (sign < 0)
            for (auto& x : inv) x = -x;
        Element u(this);
        u.add(Mono{"", reduce_group(h), m.params}, inv);
        Element r = one();
        for (long long i = 0; i < -k; ++i) r = r * u;
        return r;
    };
    return ExprParser(s, resolve, number, power).run();
}

// ---------------------------------------------------------------- rules

void Presentation::add_rule(const std::string& lhs, const Element& rhs) {
    if (lhs.empty()) fail("InvalidDatum", "empty rule left side");
    for (unsigned char c : lhs)
        if (c >= letters_.size()) fail("InvalidDatum", "rule uses an unknown letter");
    for (const auto& [m, c] : rhs.terms)
        if (!word_less(m.word, lhs))
            fail("InvalidDatum", "rule " + word_str(lhs) + " -> ... does not decrease: " + word_str(m.word));
    Element r(this);
    r += rhs;
    rules_.push_back(Rule{lhs, std::move(r)});
    rules_by_first_[static_cast<unsigned char>(lhs[0])].push_back(rules_.size() - 1);
    nf_memo_.clear();
    delta_memo_.clear();
}

bool Presentation::add_relation(const std::string& lhs, const std::string& rhs) {
    return add_relation_elements(parse(lhs), parse(rhs), lhs + " = " + rhs);
}

bool Presentation::add_relation_elements(const Element& lhs, const Element& rhs, const std::string& label) {
    Element d = normal_form(lhs - rhs);
    if (d.is_zero()) return false;
    std::string top;
    bool first = true;
    for (const auto& [m, c] : d.terms)
        if (first || word_less(top, m.word)) {
            top = m.word;
            first = false;
        }
    const Mono* lead = nullptr;
    const Coeff* lc = nullptr;
    int count = 0;
    for (const auto& [m, c] : d.terms)
        if (m.word == top) {
            ++count;
            lead = &m;
            lc = &c;
        }
    bool plain = count == 1 && std::all_of(lead->group.begin(), lead->group.end(), [](int x) { return x == 0; }) &&
                 std::all_of(lead->params.begin(), lead->params.end(), [](int x) { return x == 0; });
    std::optional<Coeff> linv;
    if (plain) linv = ring_->inverse(*lc);
    if (!linv) fail("InvalidDatum", "leading term of " + (label.empty() ? d.str() : label) + " is not a unit multiple of a word");
    Coeff inv = *linv;
    for (auto& x : inv) x = -x;  // rhs = -(d - lead)/lead coefficient
    Element r(this);
    for (const auto& [m, c] : d.terms)
        if (m.word != top) r.add(m, cmul(c, inv));
    add_rule(top, r);
    return true;
}

std::optional<std::pair<size_t, size_t>> Presentation::find_match(const std::string& w) const {
    for (size_t pos = 0; pos < w.size(); ++pos)
        for (size_t r : rules_by_first_[static_cast<unsigned char>(w[pos])]) {
            const std::string& l = rules_[r].lhs;
            if (w.compare(pos, l.size(), l) == 0) return std::make_pair(pos, r);
        }
    return std::nullopt;
}

Element Presentation::apply_rule(const std::string& w, size_t pos, size_t rule) const {
    const Rule& r = rules_[rule];
    std::string pre = w.substr(0, pos), post = w.substr(pos + r.lhs.size());
    std::vector<long long> chi = word_chi(post);
    Element out(this);
    for (const auto& [m, c] : r.rhs.terms) {
        long long e = 0;
        for (size_t k = 0; k < chi.size(); ++k) e += static_cast<long long>(m.group[k]) * chi[k];
        out.add(Mono{pre + m.word + post, m.group, m.params}, cmul(c, q_pow(e)));
    }
    return out;
}

Element Presentation::shifted(const Element& e, const Coeff& c, const std::vector<int>& h, const std::vector<int>& par) const {
    Element r(this);
    bool unit = c == qpow_[0];
    for (const auto& [m, mc] : e.terms)
        r.add(Mono{m.word, reduce_group(vadd(m.group, h)), vadd(m.params, par)}, unit ? mc : cmul(mc, c));
    return r;
}

// Depth-first with an explicit stack; words on the current path are tracked
// so that a cycle in the rules surfaces as NonTerminating.
const Element& Presentation::normal_word(const std::string& w) const {
    if (auto it = nf_memo_.find(w); it != nf_memo_.end()) return it->second;
    struct Frame {
        std::string word;
        bool expanded = false;
        size_t pos = 0, rule = 0;
    };
    std::vector<Frame> stack;
    std::unordered_set<std::string> path;
    stack.push_back(Frame{w});
    while (!stack.empty()) {
        if (!stack.back().expanded) {
            std::string cur = stack.back().word;
            if (nf_memo_.count(cur)) {
                stack.pop_back();
                continue;
            }
            if (path.count(cur)) fail("NonTerminating", "reduction of " + word_str(cur) + " returns to itself");
            auto m = find_match(cur);
            if (!m) {
                Element e(this);
                e.add(Mono{cur, std::vector<int>(group_gens_.size()), std::vector<int>(params_.size())}, qpow_[0]);
                nf_memo_.emplace(cur, std::move(e));
                stack.pop_back();
                continue;
            }
            if (++applications_ > budget_)
                fail("BudgetExceeded", "more than " + std::to_string(budget_) + " rule applications");
            path.insert(cur);
            stack.back().expanded = true;
            stack.back().pos = m->first;
            stack.back().rule = m->second;
            const Rule& r = rules_[m->second];
            std::string pre = cur.substr(0, m->first), post = cur.substr(m->first + r.lhs.size());
            for (const auto& [mono, c] : r.rhs.terms) {
                std::string child = pre + mono.word + post;
                if (!nf_memo_.count(child)) stack.push_back(Frame{child});
            }
            continue;
        }
        Frame f = std::move(stack.back());
        stack.pop_back();
        Element step = apply_rule(f.word, f.pos, f.rule);
        Element res(this);
        for (const auto& [m, c] : step.terms) res += shifted(nf_memo_.at(m.word), c, m.group, m.params);
        path.erase(f.word);
        nf_memo_.emplace(f.word, std::move(res));
    }
    return nf_memo_.at(w);
}

Element Presentation::normal_form(const Element& e) const {
    Element r(this);
    for (const auto& [m, c] : e.terms) r += shifted(normal_word(m.word), c, m.group, m.params);
    return r;
}

TensorElement Presentation::normal_form(const TensorElement& t) const {
    TensorElement r(this);
    for (const auto& [m, c] : t.terms) {
        const Element& l = normal_word(m.left.word);
        const Element& rr = normal_word(m.right.word);
        for (const auto& [lm, lc] : l.terms)
            for (const auto& [rm, rc] : rr.terms)
                r.add(TMono{{lm.word, reduce_group(vadd(lm.group, m.left.group)), vadd(vadd(lm.params, rm.params), m.left.params)},
                            {rm.word, reduce_group(vadd(rm.group, m.right.group)), {}}},
                      cmul(c, cmul(lc, rc)));
    }
    return r;
}

// ---------------------------------------------------------------- coproduct

const TensorElement& Presentation::coproduct_word(const std::string& w) const {
    if (auto it = delta_memo_.find(w); it != delta_memo_.end()) return it->second;
    TensorElement d(this);
    std::vector<int> zg(group_gens_.size()), zp(params_.size());
    if (w.empty()) {
        d.add(TMono{{"", zg, zp}, {"", zg, {}}}, qpow_[0]);
    } else if (w.size() == 1) {
        const Letter& l = letters_[static_cast<unsigned char>(w[0])];
        if (l.definition.empty()) {
            d.add(TMono{{"", l.g, zp}, {w, zg, {}}}, qpow_[0]);
            d.add(TMono{{w, zg, zp}, {"", zg, {}}}, qpow_[0]);
        } else {
            d = normal_form(coproduct(parse(l.definition)));
        }
    } else {
        const TensorElement& head = coproduct_word(w.substr(0, w.size() - 1));
        const TensorElement& tail = coproduct_word(w.substr(w.size() - 1));
        d = normal_form(head * tail);
    }
    return delta_memo_.emplace(w, std::move(d)).first->second;
}

TensorElement Presentation::coproduct(const Element& e) const {
    TensorElement r(this);
    for (const auto& [m, c] : e.terms) {
        const TensorElement& d = coproduct_word(m.word);
        for (const auto& [tm, tc] : d.terms)
            r.add(TMono{{tm.left.word, reduce_group(vadd(tm.left.group, m.group)), vadd(tm.left.params, m.params)},
                        {tm.right.word, reduce_group(vadd(tm.right.group, m.group)), {}}},
                  cmul(tc, c));
    }
    return r;
}

// ---------------------------------------------------------------- certificates

std::vector<Ambiguity> check_local_confluence(const Presentation& p) {
    std::vector<Ambiguity> out;
    const auto& rules = p.rules();
    for (const auto& r : rules) {
        std::vector<long long> chi = p.word_chi(r.lhs);
        for (const auto& [m, c] : r.rhs.terms)
            if (p.word_chi(m.word) != chi) {
                out.push_back({"character", r.lhs, Element(&p), r.rhs,
                               "rule for " + p.word_str(r.lhs) + " is not homogeneous for the group action"});
                break;
            }
    }
    for (int i = 0; i < p.letter_count(); ++i) {
        std::vector<long long> chi = p.word_chi(std::string(1, static_cast<char>(i)));
        for (size_t k = 0; k < chi.size(); ++k) {
            long long ord = p.group_orders()[k];
            if (ord > 0 && chi[k] * ord % p.modulus() != 0)
                out.push_back({"group order", std::string(1, static_cast<char>(i)), Element(&p), Element(&p),
                               "character of " + p.letter_name(i) + " is not trivial on " + p.group_gens()[k] + "^" +
                                   std::to_string(ord)});
        }
    }
    auto resolve = [&](const std::string& w, size_t pos1, size_t r1, size_t pos2, size_t r2, const char* kind) {
        Element a = p.normal_form(p.apply_rule(w, pos1, r1));
        Element b = p.normal_form(p.apply_rule(w, pos2, r2));
        if (!(a == b)) out.push_back({kind, w, a, b, "ambiguity " + p.word_str(w) + " does not resolve"});
    };
    for (size_t i = 0; i < rules.size(); ++i) {
        const std::string& li = rules[i].lhs;
        for (size_t j = 0; j < rules.size(); ++j) {
            const std::string& lj = rules[j].lhs;
            for (size_t k = 1; k < std::min(li.size(), lj.size()); ++k)
                if (li.compare(li.size() - k, k, lj, 0, k) == 0) resolve(li + lj.substr(k), 0, i, li.size() - k, j, "overlap");
            if (i != j && lj.size() <= li.size())
                for (size_t pos = li.find(lj); pos != std::string::npos; pos = li.find(lj, pos + 1))
                    resolve(li, 0, i, pos, j, "inclusion");
        }
    }
    return out;
}

Element bracket(const Presentation& p, const Element& a, const Element& b) {
    if (a.is_zero() || b.is_zero()) return Element(&p);
    std::vector<int> ga = p.word_g(a.terms.begin()->first.word);
    std::vector<long long> chib = p.word_chi(b.terms.begin()->first.word);
    long long e = 0;
    for (size_t k = 0; k < ga.size(); ++k) e += ga[k] * chib[k];
    return p.normal_form(a * b - p.scalar(p.q_pow(e)) * b * a);
}

Element bracket(const Presentation& p, int i, const Element& e) { return bracket(p, p.letter(i), e); }

PrimitivityResult is_skew_primitive(const Presentation& p, const Element& e, const std::vector<int>& g) {
    TensorElement d = p.coproduct(e) - tensor(p.group(g), e) - tensor(e, p.one());
    PrimitivityResult r;
    r.residual = p.normal_form(d);
    r.ok = r.residual.is_zero();
    return r;
}

CentralityResult is_central(const Presentation& p, const Element& e) {
    CentralityResult r;
    for (int i = 0; i < p.letter_count(); ++i) {
        if (!p.is_generator(i)) continue;  // root vectors follow from the generators
        Element x = p.letter(i);
        Element c = p.normal_form(x * e - e * x);
        if (!c.is_zero()) {
            r.witness = p.letter_name(i);
            r.commutator = c;
            return r;
        }
    }
    for (size_t k = 0; k < p.group_gens().size(); ++k) {
        std::vector<int> h(p.group_gens().size());
        h[k] = 1;
        Element g = p.group(h);
        Element c = p.normal_form(g * e - e * g);
        if (!c.is_zero()) {
            r.witness = p.group_gens()[k];
            r.commutator = c;
            return r;
        }
    }
    r.ok = true;
    r.commutator = Element(&p);
    return r;
}

BasisCount enumerate_basis(const Presentation& p, const std::map<std::string, int>& caps, bool list) {
    std::vector<int> cap(p.letter_count());
    for (int i = 0; i < p.letter_count(); ++i) {
        auto it = caps.find(p.letter_name(i));
        if (it == caps.end()) fail("ValidationError", "no cap for letter " + p.letter_name(i));
        cap[i] = it->second;
    }
    BigInt group = 1;
    for (long long o : p.group_orders()) {
        if (o <= 0) fail("ValidationError", "basis count needs a finite group");
        group *= o;
    }
    BasisCount out;
    std::string w;
    std::vector<int> counts(p.letter_count());
    const long long limit = p.budget();
    auto suffix_reducible = [&](const std::string& s) {
        for (const auto& r : p.rules())
            if (r.lhs.size() <= s.size() && s.compare(s.size() - r.lhs.size(), r.lhs.size(), r.lhs) == 0) return true;
        return false;
    };
    std::function<void()> dfs = [&]() {
        if (++out.words > limit) fail("BudgetExceeded", "basis enumeration exceeded the budget");
        if (list) out.listing.push_back(p.word_str(w));
        for (int a = 0; a < p.letter_count(); ++a) {
            w.push_back(static_cast<char>(a));
            if (!suffix_reducible(w)) {
                if (counts[a] + 1 >= cap[a]) {
                    out.truncated = true;
                } else {
                    ++counts[a];
                    dfs();
                    --counts[a];
                }
            }
            w.pop_back();
        }
    };
    dfs();
    out.count = BigInt(out.words) * group;
    return out;
}

bool quantum_binomial_check(int n, int d) {
    if (n < 0) fail("RangeError", "negative power");
    int m = d;
    if (d <= 0) {
        // a prime beyond every exponent that occurs keeps Z[q] exact
        m = n * n / 2 + 3;
        auto prime = [](int x) {
            for (int k = 2; k * k <= x; ++k)
                if (x % k == 0) return false;
            return x > 1;
        };
        while (!prime(m)) ++m;
    }
    Presentation p(m, {}, {}, {{}, {}}, {{}, {}}, {});
    p.add_letter("y", {0, 1});
    p.add_letter("x", {1, 0});
    p.add_relation("x*y", "q*y*x");
    Element lhs = p.normal_form(p.parse("(x + y)^" + std::to_string(n)));
    Element rhs(&p);
    for (int i = 0; i <= n; ++i) {
        Element t = p.scalar(p.ring().reduce(q_binomial(n, i)));
        for (int k = 0; k < i; ++k) t = t * p.letter(0);
        for (int k = i; k < n; ++k) t = t * p.letter(1);
        rhs += t;
    }
    return lhs == rhs;
}

// ---------------------------------------------------------------- linking data

long long braiding_exponent(const LinkingDatum& d, int i, int j) {
    long long e = 0;
    for (size_t k = 0; k < d.group_orders.size(); ++k) e += d.chi[j][k] * d.g[i][k];
    return md(e, d.modulus);
}

namespace {

std::vector<std::string> datum_group_names(const LinkingDatum& d) {
    std::vector<std::string> names;
    for (size_t k = 0; k < d.group_orders.size(); ++k) names.push_back("y" + std::to_string(k + 1));
    return names;
}

std::unique_ptr<Presentation> datum_shell(const LinkingDatum& d) {
    auto p = std::make_unique<Presentation>(d.modulus, datum_group_names(d), d.group_orders, d.g, d.chi, d.params);
    for (size_t i = 0; i < d.g.size(); ++i) {
        std::string s = "1";
        for (size_t k = 0; k < d.g[i].size(); ++k)
            if (d.g[i][k] != 0) s += "*y" + std::to_string(k + 1) + "^" + std::to_string(d.g[i][k]);
        p->add_macro("g" + std::to_string(i + 1), s);
    }
    return p;
}

bool is_scalar(const Element& e) {
    for (const auto& [m, c] : e.terms)
        if (!m.word.empty() || std::any_of(m.group.begin(), m.group.end(), [](int x) { return x != 0; })) return false;
    return true;
}

}  // namespace

DatumReport validate_linking_datum(const LinkingDatum& d) {
    DatumReport r;
    auto issue = [&](const std::string& s) {
        r.ok = false;
        r.issues.push_back(s);
    };
    size_t n = d.a.size();
    if (d.modulus < 2) issue("q must be a root of unity of order at least 2");
    if (d.g.size() != n || d.chi.size() != n) issue("one group-like and one character per vertex");
    for (const auto& row : d.a)
        if (row.size() != n) issue("Cartan matrix is not square");
    for (size_t i = 0; i < d.g.size(); ++i)
        if (d.g[i].size() != d.group_orders.size() || (i < d.chi.size() && d.chi[i].size() != d.group_orders.size()))
            issue("group data of vertex " + std::to_string(i + 1) + " has the wrong length");
    if (!r.ok) return r;
    auto id = [](size_t i) { return std::to_string(i + 1); };
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < d.group_orders.size(); ++k)
            if (d.group_orders[k] > 0 && d.chi[i][k] * d.group_orders[k] % d.modulus != 0)
                issue("chi_" + id(i) + " is not trivial on y" + std::to_string(k + 1) + "^" + std::to_string(d.group_orders[k]));
    for (size_t i = 0; i < n; ++i) {
        long long bii = braiding_exponent(d, i, i);
        if (bii == 0) issue("b_" + id(i) + id(i) + " = 1");
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            long long lhs = md(braiding_exponent(d, i, j) + braiding_exponent(d, j, i), d.modulus);
            if (lhs != md(bii * d.a[i][j], d.modulus))
                issue("b_" + id(i) + id(j) + " b_" + id(j) + id(i) + " != b_" + id(i) + id(i) + "^a_" + id(i) + id(j));
        }
    }
    std::set<std::pair<int, int>> linkable;
    std::vector<int> used(n);
    for (auto [i, j] : d.links) {
        if (i < 0 || j < 0 || static_cast<size_t>(i) >= n || static_cast<size_t>(j) >= n || i == j) {
            issue("bad linkable pair");
            continue;
        }
        if (used[i]++ || used[j]++) issue("vertex linked twice");
        linkable.insert({i, j});
        linkable.insert({j, i});
        for (auto [s, t] : {std::make_pair(i, j), std::make_pair(j, i)})
            for (size_t k = 0; k < d.group_orders.size(); ++k)
                if (md((1 - d.a[s][t]) * d.chi[s][k] + d.chi[t][k], d.modulus) != 0)
                    issue("chi_" + id(s) + "^(1-a) chi_" + id(t) + " is not trivial on y" + std::to_string(k + 1));
    }
    auto shell = datum_shell(d);
    std::map<std::pair<int, int>, Element> lam;
    for (const auto& [ij, expr] : d.lambda) {
        Element v(shell.get());
        try {
            v = shell->parse(expr);
        } catch (const Error& e) {
            issue(std::string("lambda: ") + e.what());
            continue;
        }
        if (!is_scalar(v)) issue("lambda_" + id(ij.first) + id(ij.second) + " is not a scalar");
        if (!v.is_zero() && !linkable.count(ij)) issue("lambda_" + id(ij.first) + id(ij.second) + " != 0 for a non-linkable pair");
        lam[ij] = v;
    }
    for (auto [i, j] : linkable) {
        if (i > j || d.a[i][j] != 0) continue;
        Element a = lam.count({i, j}) ? lam[{i, j}] : Element(shell.get());
        Element b = lam.count({j, i}) ? lam[{j, i}] : Element(shell.get());
        Element sum = a + shell->scalar(shell->q_pow(braiding_exponent(d, i, j))) * b;
        if (!sum.is_zero()) issue("lambda_" + id(i) + id(j) + " != -chi_" + id(j) + "(g_" + id(i) + ") lambda_" + id(j) + id(i));
    }
    return r;
}

std::unique_ptr<Presentation> presentation_U(const LinkingDatum& d) {
    DatumReport rep = validate_linking_datum(d);
    if (!rep.ok) fail("InvalidDatum", join(rep.issues, "; "));
    auto p = datum_shell(d);
    int n = static_cast<int>(d.a.size());
    for (int i = 0; i < n; ++i) {
        std::vector<int> deg(n);
        deg[i] = 1;
        p->add_letter("x" + std::to_string(i + 1), deg);
    }
    auto lambda = [&](int i, int j) -> Element {
        auto it = d.lambda.find({i, j});
        return it == d.lambda.end() ? Element(p.get()) : p->parse(it->second);
    };
    auto x = [&](int i, int k) {
        Element e = p->one();
        for (int t = 0; t < k; ++t) e = e * p->letter(i);
        return e;
    };
    auto gi = [&](int i) { return p->group(d.g[i]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (d.a[i][j] != 0) continue;
            // x_j x_i - chi_i(g_j) x_i x_j = lambda_ji (1 - g_j g_i)
            Element lhs = p->letter(j) * p->letter(i) - p->scalar(p->q_pow(braiding_exponent(d, j, i))) * p->letter(i) * p->letter(j);
            Element rhs = lambda(j, i) * (p->one() - gi(j) * gi(i));
            p->add_relation_elements(lhs, rhs);
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || d.a[i][j] == 0) continue;
            int r = 1 - d.a[i][j];
            long long eii = braiding_exponent(d, i, i), eij = braiding_exponent(d, i, j);
            Element sum(p.get());
            for (int k = 0; k <= r; ++k) {
                // binom(r, k) evaluated at q_i = q^eii
                Coeff c = p->ring().zero();
                const QPoly b = q_binomial(r, k);
                for (int t = 0; t <= b.degree(); ++t) {
                    Coeff qt = p->q_pow(eii * t);
                    for (size_t s = 0; s < c.size(); ++s) c[s] += b.coeff(t) * qt[s];
                }
                c = p->cmul(c, p->q_pow(eii * (k * (k - 1) / 2) + eij * k));
                if (k % 2)
                    for (auto& v : c) v = -v;
                sum += p->scalar(c) * x(i, r - k) * p->letter(j) * x(i, k);
            }
            Element g = p->one();
            for (int t = 0; t < r; ++t) g = g * gi(i);
            p->add_relation_elements(sum, lambda(i, j) * (p->one() - g * gi(j)));
        }
    return p;
}

std::map<std::pair<int, int>, Element> build_root_vectors_An(const Presentation& p, int n) {
    if (n < 1 || n > p.letter_count()) fail("ValidationError", "rank out of range");
    std::map<std::pair<int, int>, Element> e;
    for (int i = 1; i <= n; ++i) e.emplace(std::make_pair(i, i + 1), p.letter(i - 1));
    for (int len = 2; len <= n; ++len)
        for (int i = 1; i + len <= n + 1; ++i) {
            int j = i + len;
            e.emplace(std::make_pair(i, j), bracket(p, e.at({i, j - 1}), e.at({j - 1, j})));
        }
    return e;
}

std::map<std::pair<int, int>, Element> u_recursion(const Presentation& p, const LinkingDatum& d,
                                                   const std::map<std::pair<int, int>, std::string>& gamma, bool check) {
    int n = static_cast<int>(d.a.size());
    long long M = d.modulus;
    long long e11 = braiding_exponent(d, 0, 0);
    long long N = M / std::gcd(e11, M);
    size_t K = d.group_orders.size();
    auto gij = [&](int i, int j) {
        std::vector<int> h(K);
        for (int l = i; l < j; ++l) h = vadd(h, d.g[l - 1]);
        return h;
    };
    auto chiij = [&](int i, int j) {
        std::vector<long long> c(K);
        for (int l = i; l < j; ++l)
            for (size_t k = 0; k < K; ++k) c[k] += d.chi[l - 1][k];
        return c;
    };
    auto h_of = [&](int i, int j) {
        std::vector<int> h = gij(i, j);
        for (auto& x : h) x *= static_cast<int>(N);
        return p.reduce_group(h);
    };
    std::map<std::pair<int, int>, Element> gam;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n + 1; ++j) {
            auto it = gamma.find({i, j});
            Element v = it == gamma.end() ? Element(&p) : p.parse(it->second);
            if (!is_scalar(v)) fail("ValidationError", "gamma must be scalar");
            if (check && !v.is_zero()) {
                std::vector<long long> c = chiij(i, j);
                bool trivial = std::all_of(c.begin(), c.end(), [&](long long x) { return md(x * N, M) == 0; });
                std::vector<int> h = h_of(i, j);
                bool h_one = std::all_of(h.begin(), h.end(), [](int x) { return x == 0; });
                if (!trivial) fail("NotAdmissible", "gamma_" + std::to_string(i) + std::to_string(j) + " != 0 but chi^N != epsilon");
                if (h_one) fail("NotAdmissible", "gamma_" + std::to_string(i) + std::to_string(j) + " != 0 but h = 1");
            }
            gam[{i, j}] = v;
        }
    // (1 - q^-1)^N with q = chi_i(g_i)
    Coeff base = p.ring().zero();
    {
        Coeff one = p.q_pow(0), qi = p.q_pow(-e11);
        for (size_t s = 0; s < base.size(); ++s) base[s] = one[s] - qi[s];
    }
    Coeff lead = p.q_pow(0);
    for (long long t = 0; t < N; ++t) lead = p.cmul(lead, base);
    std::map<std::pair<int, int>, Element> u;
    for (int len = 1; len <= n; ++len)
        for (int i = 1; i + len <= n + 1; ++i) {
            int j = i + len;
            Element v = gam[{i, j}] * (p.one() - p.group(h_of(i, j)));
            for (int q = i + 1; q < j; ++q) {
                // B^{q,j}_{i,q} = chi_{i,q}(g_{q,j})
                std::vector<long long> c = chiij(i, q);
                std::vector<int> g = gij(q, j);
                long long b = 0;
                for (size_t k = 0; k < K; ++k) b += c[k] * g[k];
                Coeff C = p.cmul(lead, p.q_pow(b * (N * (N - 1) / 2)));
                v += p.scalar(C) * gam[{i, q}] * u.at({q, j});
            }
            u[{i, j}] = v;
        }
    return u;
}

// ---------------------------------------------------------------- self-linked rank 2

std::optional<SelfLinkType> parse_selflink_type(const std::string& s) {
    if (s == "A2") return SelfLinkType::A2;
    if (s == "B2") return SelfLinkType::B2;
    if (s == "G2") return SelfLinkType::G2;
    return std::nullopt;
}

int selflink_prime(SelfLinkType t) {
    switch (t) {
        case SelfLinkType::A2: return 3;
        case SelfLinkType::B2: return 5;
        case SelfLinkType::G2: return 7;
    }
    return 0;
}

namespace {

// chi_j takes the same value on g1 and g2 in all three cases.
std::unique_ptr<Presentation> rank2_shell(int p, long long chi1, long long chi2, std::vector<std::string> params,
                                          const SelfLinkOptions& opt) {
    std::unique_ptr<Presentation> P;
    if (opt.cyclic > 0) {
        P = std::make_unique<Presentation>(p, std::vector<std::string>{"g"}, std::vector<long long>{opt.cyclic},
                                           std::vector<std::vector<int>>{{1}, {1}},
                                           std::vector<std::vector<long long>>{{chi1}, {chi2}}, std::move(params));
        P->add_macro("g1", "g");
        P->add_macro("g2", "g");
    } else {
        P = std::make_unique<Presentation>(p, std::vector<std::string>{"g1", "g2"}, std::vector<long long>{0, 0},
                                           std::vector<std::vector<int>>{{1, 0}, {0, 1}},
                                           std::vector<std::vector<long long>>{{chi1, chi1}, {chi2, chi2}}, std::move(params));
    }
    for (const auto& [k, v] : opt.values) P->set_value(k, v);
    return P;
}

void relate(Presentation& P, const std::string& rel) {
    auto eq = rel.find('=');
    P.add_relation(rel.substr(0, eq), rel.substr(eq + 1));
}

std::unique_ptr<Presentation> build_a2(const SelfLinkOptions& opt) {
    auto P = rank2_shell(3, 1, 1, {"lam12", "lam21", "mu1", "mu2", "gamma"}, opt);
    P->add_letter("z", {1, 1}, 0, "x1*x2 - q*x2*x1");
    P->add_letter("x1", {1, 0});
    P->add_letter("x2", {0, 1});
    relate(*P, "z = x1*x2 - q*x2*x1");
    relate(*P, "x1*z - q^2*z*x1 = lam12*(1 - g1^2*g2)");
    relate(*P, "x2*(x2*x1 - q*x1*x2) - q^2*(x2*x1 - q*x1*x2)*x2 = lam21*(1 - g2^2*g1)");
    if (opt.power_rules) {
        relate(*P, "x1^3 = mu1*(1 - g1^3)");
        relate(*P, "x2^3 = mu2*(1 - g2^3)");
    }
    P->add_macro("v", "z^3 + (1-q)^3 mu1 mu2 (1 - g2^3) + (1-q) q lam12 lam21 (1 - g2^2 g1)");
    if (opt.root_power_rules) relate(*P, "v = gamma (1 - g1^3 g2^3)");
    return P;
}

std::unique_ptr<Presentation> build_b2(const SelfLinkOptions& opt) {
    auto P = rank2_shell(5, 2, 1, {"lam12", "lam21", "mu1", "mu2", "gamma1", "gamma2"}, opt);
    P->add_letter("u", {1, 2}, 0, "x2*z - q^3*z*x2");
    P->add_letter("z", {1, 1}, 0, "x2*x1 - q^2*x1*x2");
    P->add_letter("x1", {1, 0});
    P->add_letter("x2", {0, 1});
    P->add_macro("G1", "g1^2 g2");
    P->add_macro("G2", "g2^3 g1");
    relate(*P, "x2 x1 = q^2 x1 x2 + z");
    relate(*P, "x2 z = q^3 z x2 + u");
    relate(*P, "x1 z = q z x1 - q^2 lam12 (1 - G1)");
    relate(*P, "x2 u = q^4 u x2 + lam21 (1 - G2)");
    relate(*P, "x1 u = q^4 u x1 + q^2 (1-q) z^2 + (1-q^3) lam12 x2 G1");
    relate(*P, "z u = q u z + q (1-q)(1-q^2) lam12 x2^2 G1 - q (1-q^2) lam21 x1");
    if (opt.power_rules) {
        relate(*P, "x1^5 = mu1 (1 - g1^5)");
        relate(*P, "x2^5 = mu2 (1 - g2^5)");
    }
    P->add_macro("v",
                 "z^5 + mu1 mu2 (1-q^2)^5 (1 - g1^5)"
                 " - (q^3-q^2-q+1) lam12^2 lam21 G1^2 G2 + (2q^3+2q^2+1) lam12^2 lam21 G1^2"
                 " - q (q^2+3q+1) lam12^2 lam21 G1 + (q^3+2q^2+3q-1) lam12 lam21 z x1 G1");
    P->add_macro("w",
                 "u^5 + 2 (1-q)^5 mu2 v - (1-q^2)^5 (1-q)^5 mu2^2 x1^5"
                 " - (3q^3+q^2-q+2) lam12 lam21^3 G1 G2^3 + (3q^3+q^2+4q+2) lam12 lam21^3 G1 G2^2"
                 " - 2 (q^3+2q^2+3q-1) lam12 lam21^3 G1 G2 + (2q^3+4q^2+q-2) lam12 lam21^3 G1"
                 " - 5 (q^3+1) lam12 lam21^2 u x2 G1 G2 - 5 (q^3+q^2-1) lam12 lam21^2 u x2 G1"
                 " + 5 (q^3-1) lam12 lam21 u^2 x2^2 G1 - 5 (2q^3-q^2+q-2) lam12^2 lam21 x2^5 G1^2 G2");
    if (opt.root_power_rules) {
        relate(*P, "v = gamma1 (1 - (g1 g2)^5)");
        relate(*P, "w = gamma2 (1 - (g1 g2^2)^5)");
    }
    return P;
}

std::unique_ptr<Presentation> build_g2(const SelfLinkOptions& opt) {
    auto P = rank2_shell(7, 1, 3, {"lam12", "lam21", "mu1", "mu2"}, opt);
    // vw must outrank u^3, which plain degree-lex does not give
    P->add_letter("w", {3, 2}, -3, "z*u - q^3*u*z");
    P->add_letter("v", {3, 1}, -2, "u*x1 - q^3*x1*u");
    P->add_letter("u", {2, 1}, -2, "z*x1 - q^2*x1*z");
    P->add_letter("z", {1, 1}, -1, "x2*x1 - q*x1*x2");
    P->add_letter("x1", {1, 0});
    P->add_letter("x2", {0, 1});
    P->add_macro("G1", "g1^4 g2");
    P->add_macro("G2", "g2^2 g1");
    // The u^2 coefficient of zv is forced by the x2 x1 v and x1 z v overlaps;
    // a constant term of 1 leaves them unresolved.
    const char* zv =
        "z v = q^5 v z + (2q^5+q^4+q^3+q^2+2) u^2 - (q^5-q^4+3q^3+q^2+2q+1) lam21 x1^3"
        " + (2q^5+2q^3+q+2) lam12 x2 G1";
    const char* zv_misprint =
        "z v = q^5 v z + (2q^5+q^4+q^3+q^2+1) u^2 - (q^5-q^4+3q^3+q^2+2q+1) lam21 x1^3"
        " + (2q^5+2q^3+q+2) lam12 x2 G1";
    for (const char* rel : {
             "x2 x1 = q x1 x2 + z",
             "x2 z = q^4 z x2 + lam21 (1 - G2)",
             "x1 z = q^5 z x1 - q^5 u",
             "x2 u = q^5 u x2 + (q^4-q^2) z^2 - (q^3-1) lam21 x1",
             "x1 u = q^4 u x1 - q^4 v",
             "z u = q^3 u z + w",
             "x2 v = q^6 v x2 - (q^4-1) u z + (q^4-q^3-q^2) w - (q^4+q^3-2) lam21 x1^2",
             "x1 v = q^3 v x1 - q^6 lam12 (1 - G1)",
             opt.g2_zv_misprint ? zv_misprint : zv,
             "x2 w = q^2 w x2 + (2q^5+q^4+q^3+q^2+2q) z^3 + (2q^4-q-1) lam21 z x1 - (q^4-1) lam21 u",
             "x1 w = q^2 w x1 + (q^3-q^2+q-1) u^2 + (4q^5+2q^4+3q^3+2q^2+q+2) lam21 x1^3"
             " - (2q^5+q^3+2q^2+2) lam12 x2 G1",
             "u v = q^4 v u + (3q^5+4q^4+3q^3+2q+2) lam21 x1^4 - (q^5-q^2) lam12 z G1",
             "z w = q^4 w z + (2q^4-q-1) lam21 u x1 - (q^4-1) lam21 v + (2q^5-q^2-q) lam12 x2^2 G1",
             "u w = q^3 w u + (q^5+2q^4+4q^3+4q^2+2q+1) lam21 v x1 + (q^4-q^3-q^2+q) lam12 z x2 G1"
             " - (3q^5+4q^4+3q^3+2q^2+q+1) lam12 lam21 G1 G2 + (q^5+2q^4+2q^3-q^2-3q-1) lam12 lam21 G1"
             " + (2q^5+2q^4+q^3+3q^2+4q+2) lam12 lam21",
             "v w = q^5 w v - (q^5+q^4+3q^2-q+3) u^3 + (5q^5+2q^4+5q^3+q+1) lam21 u x1^3"
             " + (2q^5-5q^3-5q^2-6q) lam21 v x1^2 - (3q^5+2q^4+2q^3+3q^2+4) lam12 u x2 G1"
             " + (q^4-2q^3+q^2) lam12 z^2 G1 + (5q^5+2q^4-4q^2-4q+1) lam12 lam21 x1 G1"
             " - (q^5+q^4+q^3+2q^2+5q+4) lam12 lam21 x1",
         })
        relate(*P, rel);
    if (opt.power_rules) {
        relate(*P, "x1^7 = mu1 (1 - g1^7)");
        relate(*P, "x2^7 = mu2 (1 - g2^7)");
    }
    P->add_macro("Z",
                 "z^7 + (1-q^3)^7 mu1 mu2 (1 - g1^7)"
                 " - (2q^5+4q^4-q^3+q^2-4q-2) lam12 lam21 z^2 x2^2 G1"
                 " + (6q^5+8q^4+6q^3-3q-3) lam12 lam21^2 z x2 G1 G2"
                 " - (q^4+3q^3-q^2+3q+1) lam12 lam21^2 z x2 G1"
                 " + (2q^5+2q^4+4q^3+5q^2+2q-1) lam12 lam21^3 G1 G2^3"
                 " + (q^5-2q^4-4q^3-7q^2-6q-3) lam12 lam21^3 G1 G2^2"
                 " - (4q^5+2q^4+2q^3-2q^2-2q-4) lam12 lam21^3 G1 G2"
                 " + (q^5+2q^4+2q^3+2q) lam12 lam21^3 G1");
    return P;
}

}  // namespace

std::unique_ptr<Presentation> selflink_presentation(SelfLinkType t, const SelfLinkOptions& opt) {
    switch (t) {
        case SelfLinkType::A2: return build_a2(opt);
        case SelfLinkType::B2: return build_b2(opt);
        case SelfLinkType::G2: return build_g2(opt);
    }
    fail("ValidationError", "unknown self-link type");
}

}  // namespace linkdyn
