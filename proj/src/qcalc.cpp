#include "linkdyn/qcalc.hpp"

#include "linkdyn/error.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace linkdyn {

QPoly::QPoly(long long c) {
    if (c != 0) c_.push_back(BigInt(c));
}

QPoly::QPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

QPoly QPoly::monomial(int degree, const BigInt& c) {
    std::vector<BigInt> v(degree + 1);
    v[degree] = c;
    return QPoly(std::move(v));
}

void QPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigInt QPoly::coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : BigInt(0);
}

BigInt QPoly::eval(const BigInt& x) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

QPoly& QPoly::operator+=(const QPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

QPoly& QPoly::operator*=(const QPoly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<BigInt> r(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(r);
    trim();
    return *this;
}

QPoly QPoly::operator-() const {
    QPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

std::string QPoly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const BigInt& a = c_[k];
        if (a == 0) continue;
        BigInt mag = a < 0 ? BigInt(-a) : a;
        if (a < 0)
            os << (first ? "-" : " - ");
        else if (!first)
            os << " + ";
        if (k == 0 || mag != 1) os << mag;
        if (k > 0) {
            os << "q";
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

void divmod_monic(const QPoly& f, const QPoly& g, QPoly& quot, QPoly& rem) {
    if (g.is_zero() || g.coeffs().back() != 1) fail("ValidationError", "divisor must be monic");
    std::vector<BigInt> r = f.coeffs();
    int dg = g.degree();
    std::vector<BigInt> q(r.size() > static_cast<size_t>(dg) ? r.size() - dg : 0);
    for (int k = static_cast<int>(r.size()) - 1; k >= dg; --k) {
        BigInt c = r[k];
        if (c == 0) continue;
        q[k - dg] = c;
        for (int j = 0; j <= dg; ++j) r[k - dg + j] -= c * g.coeffs()[j];
    }
    quot = QPoly(std::move(q));
    rem = QPoly(std::move(r));
}

QPoly q_number(int n) {
    if (n < 0) fail("RangeError", "q-number of negative integer");
    std::vector<BigInt> v(n, BigInt(1));
    return QPoly(std::move(v));
}

QPoly q_factorial(int n) {
    QPoly r(1);
    for (int k = 2; k <= n; ++k) r *= q_number(k);
    return r;
}

QPoly q_binomial(int n, int i) {
    if (n < 0 || i < 0 || i > n) fail("RangeError", "q-binomial needs 0 <= i <= n");
    // Pascal rule: [n, k] = [n-1, k-1] + q^k [n-1, k]
    std::vector<QPoly> row{QPoly(1)};
    for (int m = 1; m <= n; ++m) {
        std::vector<QPoly> next(m + 1);
        next[0] = 1;
        next[m] = 1;
        for (int k = 1; k < m; ++k) next[k] = row[k - 1] + QPoly::monomial(k) * row[k];
        row = std::move(next);
    }
    return row[i];
}

QPoly cyclotomic(int n) {
    if (n < 1) fail("RangeError", "cyclotomic index must be positive");
    static std::mutex mu;
    static std::map<int, QPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    QPoly f = QPoly::monomial(n) - QPoly(1);
    for (int d = 1; d < n; ++d) {
        if (n % d) continue;
        QPoly quot, rem;
        divmod_monic(f, cyclotomic(d), quot, rem);
        if (!rem.is_zero()) fail("ValidationError", "inexact cyclotomic division");
        f = quot;
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, f);
    return f;
}

CycloRing::CycloRing(int n, Kind kind) : n_(n), kind_(kind) {
    if (n < 1) fail("RangeError", "ring order must be positive");
    mod_ = kind == Kind::Full ? QPoly::monomial(n) - QPoly(1) : cyclotomic(n);
    dim_ = mod_.degree();
    if (kind == Kind::Cyclotomic && n > 1) {
        all_ones_ = true;
        for (const auto& c : mod_.coeffs()) all_ones_ = all_ones_ && c == 1;
    }
}

void CycloRing::fold(std::vector<BigInt>& v) const {
    if (kind_ == Kind::Full || all_ones_) {
        for (size_t k = n_; k < v.size(); ++k) {
            if (v[k] != 0) {
                v[k % n_] += v[k];
                v[k] = 0;
            }
        }
        if (v.size() > static_cast<size_t>(n_)) v.resize(n_);
        if (all_ones_ && v.size() == static_cast<size_t>(n_)) {
            BigInt top = v[n_ - 1];
            if (top != 0)
                for (int k = 0; k < n_ - 1; ++k) v[k] -= top;
        }
        v.resize(dim_);
        return;
    }
    const auto& m = mod_.coeffs();
    for (int k = static_cast<int>(v.size()) - 1; k >= dim_; --k) {
        if (v[k] == 0) continue;
        BigInt c = v[k];
        for (int j = 0; j <= dim_; ++j) v[k - dim_ + j] -= c * m[j];
    }
    v.resize(dim_);
}

std::vector<BigInt> CycloRing::reduce(const QPoly& f) const {
    std::vector<BigInt> v = f.coeffs();
    if (v.size() < static_cast<size_t>(dim_)) v.resize(dim_);
    fold(v);
    return v;
}

std::vector<BigInt> CycloRing::one() const {
    auto v = zero();
    if (dim_ > 0) v[0] = 1;
    return v;
}

std::vector<BigInt> CycloRing::q_pow(long long k) const {
    long long e = ((k % n_) + n_) % n_;
    return reduce(QPoly::monomial(static_cast<int>(e)));
}

std::vector<BigInt> CycloRing::mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) const {
    std::vector<BigInt> r(dim_ > 0 ? 2 * dim_ - 1 : 0);
    for (int i = 0; i < dim_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < dim_; ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    if (r.size() < static_cast<size_t>(dim_)) r.resize(dim_);
    fold(r);
    return r;
}

QPoly CycloRing::lift(const std::vector<BigInt>& a) const { return QPoly(a); }

std::optional<std::vector<BigInt>> CycloRing::inverse(const std::vector<BigInt>& a) const {
    using boost::multiprecision::cpp_rational;
    // Columns are a * q^j; solve M x = 1 over Q and keep integral solutions.
    std::vector<std::vector<cpp_rational>> m(dim_, std::vector<cpp_rational>(dim_ + 1));
    for (int j = 0; j < dim_; ++j) {
        auto col = mul(a, q_pow(j));
        for (int i = 0; i < dim_; ++i) m[i][j] = col[i];
    }
    if (dim_ > 0) m[0][dim_] = 1;
    for (int c = 0; c < dim_; ++c) {
        int piv = -1;
        for (int r = c; r < dim_; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        std::swap(m[c], m[piv]);
        for (int r = 0; r < dim_; ++r) {
            if (r == c || m[r][c] == 0) continue;
            cpp_rational f = m[r][c] / m[c][c];
            for (int k = c; k <= dim_; ++k) m[r][k] -= f * m[c][k];
        }
    }
    std::vector<BigInt> x(dim_);
    for (int i = 0; i < dim_; ++i) {
        cpp_rational v = m[i][dim_] / m[i][i];
        if (denominator(v) != 1) return std::nullopt;
        x[i] = numerator(v);
    }
    return x;
}

CycloElem::CycloElem(std::shared_ptr<const CycloRing> ring, const QPoly& f)
    : ring_(std::move(ring)) {
    v_ = ring_->reduce(f);
}

CycloElem::CycloElem(std::shared_ptr<const CycloRing> ring, std::vector<BigInt> v)
    : ring_(std::move(ring)), v_(std::move(v)) {}

bool CycloElem::is_zero() const {
    for (const auto& c : v_)
        if (c != 0) return false;
    return true;
}

CycloElem CycloElem::operator+(const CycloElem& o) const {
    auto v = v_;
    for (size_t k = 0; k < v.size(); ++k) v[k] += o.v_[k];
    return CycloElem(ring_, std::move(v));
}

CycloElem CycloElem::operator-(const CycloElem& o) const {
    auto v = v_;
    for (size_t k = 0; k < v.size(); ++k) v[k] -= o.v_[k];
    return CycloElem(ring_, std::move(v));
}

CycloElem CycloElem::operator*(const CycloElem& o) const {
    return CycloElem(ring_, ring_->mul(v_, o.v_));
}

CycloElem reduce_mod_cyclotomic(const QPoly& f, int n) {
    return CycloElem(std::make_shared<CycloRing>(n), f);
}

}  // namespace linkdyn
