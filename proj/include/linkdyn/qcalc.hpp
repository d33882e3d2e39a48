#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace linkdyn {

using BigInt = boost::multiprecision::cpp_int;

// Integer polynomial in q, coefficients low degree first, no trailing zeros.
class QPoly {
public:
    QPoly() = default;
    QPoly(long long c);  // NOLINT: constants convert implicitly
    explicit QPoly(std::vector<BigInt> coeffs);

    static QPoly monomial(int degree, const BigInt& c = 1);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigInt>& coeffs() const { return c_; }
    BigInt coeff(int k) const;
    BigInt eval(const BigInt& x) const;

    QPoly& operator+=(const QPoly& o);
    QPoly& operator-=(const QPoly& o);
    QPoly& operator*=(const QPoly& o);
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator*(QPoly a, const QPoly& b) { return a *= b; }
    QPoly operator-() const;
    bool operator==(const QPoly& o) const { return c_ == o.c_; }
    bool operator!=(const QPoly& o) const { return !(*this == o); }

    std::string str() const;

private:
    void trim();
    std::vector<BigInt> c_;
};

// Division by a monic divisor; throws if the divisor is not monic.
void divmod_monic(const QPoly& f, const QPoly& g, QPoly& quot, QPoly& rem);

QPoly q_number(int n);     // (n)_q = 1 + q + ... + q^{n-1}
QPoly q_factorial(int n);  // (n)!_q
QPoly q_binomial(int n, int i);
QPoly cyclotomic(int n);   // Phi_n, exact

// Z[q]/(m) for m = Phi_N or q^N - 1. Elements are coefficient vectors of
// fixed length deg(m).
class CycloRing {
public:
    enum class Kind { Cyclotomic, Full };
    CycloRing(int n, Kind kind = Kind::Cyclotomic);

    int order() const { return n_; }
    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const QPoly& modulus() const { return mod_; }

    std::vector<BigInt> reduce(const QPoly& f) const;
    std::vector<BigInt> zero() const { return std::vector<BigInt>(dim_); }
    std::vector<BigInt> one() const;
    std::vector<BigInt> q_pow(long long k) const;  // q^k, any sign
    std::vector<BigInt> mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) const;
    QPoly lift(const std::vector<BigInt>& a) const;
    std::optional<std::vector<BigInt>> inverse(const std::vector<BigInt>& a) const;  // units only

private:
    void fold(std::vector<BigInt>& v) const;  // reduce a long vector in place
    int n_;
    Kind kind_;
    int dim_;
    QPoly mod_;
    bool all_ones_ = false;  // Phi_p for prime p: q^{p-1} = -(1 + ... + q^{p-2})
};

// Element of Z[q]/(m), bound to a shared ring.
class CycloElem {
public:
    CycloElem(std::shared_ptr<const CycloRing> ring, const QPoly& f);
    CycloElem(std::shared_ptr<const CycloRing> ring, std::vector<BigInt> v);

    bool is_zero() const;
    const std::vector<BigInt>& coeffs() const { return v_; }
    const CycloRing& ring() const { return *ring_; }
    QPoly lift() const { return ring_->lift(v_); }

    CycloElem operator+(const CycloElem& o) const;
    CycloElem operator-(const CycloElem& o) const;
    CycloElem operator*(const CycloElem& o) const;
    bool operator==(const CycloElem& o) const { return v_ == o.v_; }

private:
    std::shared_ptr<const CycloRing> ring_;
    std::vector<BigInt> v_;
};

CycloElem reduce_mod_cyclotomic(const QPoly& f, int n);

}  // namespace linkdyn
