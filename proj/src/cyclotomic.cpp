#include "fusext/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace fusext {

using lin::i64;
using i128 = __int128;

namespace {

i64 checked(i128 v) {
    if (v > INT64_MAX / 4 || v < -(INT64_MAX / 4))
        throw std::overflow_error("overflow in cyclotomic arithmetic");
    return static_cast<i64>(v);
}

}  // namespace

Rational::Rational(i64 n, i64 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rational Rational::operator-() const { return Rational(-num, den); }

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked(static_cast<i128>(a.num) * b.den +
                            static_cast<i128>(b.num) * a.den),
                    checked(static_cast<i128>(a.den) * b.den));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(checked(static_cast<i128>(a.num) * b.num),
                    checked(static_cast<i128>(a.den) * b.den));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(checked(static_cast<i128>(a.num) * b.den),
                    checked(static_cast<i128>(a.den) * b.num));
}

i64 euler_phi(i64 M) {
    i64 out = M;
    i64 m = M;
    for (i64 p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        out -= out / p;
        while (m % p == 0) m /= p;
    }
    if (m > 1) out -= out / m;
    return out;
}

namespace {

// Exact division of integer polynomials, divisor monic. Constant term first.
std::vector<i64> poly_divide_exact(std::vector<i64> num, const std::vector<i64>& den) {
    int dn = static_cast<int>(num.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    std::vector<i64> q(dn - dd + 1, 0);
    for (int i = dn; i >= dd; --i) {
        i64 f = num[i];
        q[i - dd] = f;
        if (f == 0) continue;
        for (int j = 0; j <= dd; ++j)
            num[i - dd + j] = checked(static_cast<i128>(num[i - dd + j]) -
                                      static_cast<i128>(f) * den[j]);
    }
    for (int i = 0; i < dd; ++i)
        if (num[i] != 0) throw std::logic_error("cyclotomic division not exact");
    return q;
}

std::map<i64, std::vector<i64>> phi_cache;
std::mutex phi_mutex;

std::vector<i64> compute_phi(i64 M);

const std::vector<i64>& phi_locked(i64 M) {
    auto it = phi_cache.find(M);
    if (it == phi_cache.end()) it = phi_cache.emplace(M, compute_phi(M)).first;
    return it->second;
}

std::vector<i64> compute_phi(i64 M) {
    std::vector<i64> p(M + 1, 0);
    p[0] = -1;
    p[M] = 1;  // x^M - 1
    for (i64 d = 1; d < M; ++d)
        if (M % d == 0) p = poly_divide_exact(std::move(p), phi_locked(d));
    return p;
}

// Reduce a rational polynomial mod Phi_M in place, return first phi(M) coeffs.
std::vector<Rational> reduce_mod_phi(std::vector<Rational> p, i64 M) {
    const std::vector<i64>& phi = cyclotomic_poly(M);
    int deg = static_cast<int>(phi.size()) - 1;
    for (int i = static_cast<int>(p.size()) - 1; i >= deg; --i) {
        Rational f = p[i];
        if (f.is_zero()) continue;
        for (int j = 0; j <= deg; ++j) p[i - deg + j] = p[i - deg + j] - f * Rational(phi[j]);
    }
    p.resize(deg);
    return p;
}

}  // namespace

const std::vector<i64>& cyclotomic_poly(i64 M) {
    if (M < 1) throw std::domain_error("cyclotomic_poly: M must be positive");
    std::lock_guard<std::mutex> lock(phi_mutex);
    return phi_locked(M);
}

Cyc Cyc::zero(i64 M) {
    Cyc z;
    z.M = M;
    z.c.assign(static_cast<size_t>(euler_phi(M)), Rational(0));
    return z;
}

Cyc Cyc::one(i64 M) { return from_rational(M, Rational(1)); }

Cyc Cyc::from_rational(i64 M, const Rational& r) {
    Cyc z = zero(M);
    z.c[0] = r;
    return z;
}

Cyc Cyc::root(i64 M, i64 e) {
    e = lin::mod_norm(e, M);
    std::vector<Rational> p(static_cast<size_t>(e) + 1, Rational(0));
    p[e] = Rational(1);
    Cyc z;
    z.M = M;
    z.c = reduce_mod_phi(std::move(p), M);
    z.c.resize(static_cast<size_t>(euler_phi(M)), Rational(0));
    return z;
}

bool Cyc::is_zero() const {
    for (const auto& r : c)
        if (!r.is_zero()) return false;
    return true;
}

bool Cyc::is_rational(Rational* out) const {
    for (size_t i = 1; i < c.size(); ++i)
        if (!c[i].is_zero()) return false;
    if (out) *out = c.empty() ? Rational(0) : c[0];
    return true;
}

Cyc Cyc::embed(i64 M2) const {
    if (M2 % M != 0) throw std::domain_error("Cyc::embed: moduli not nested");
    i64 k = M2 / M;
    Cyc out = Cyc::zero(M2);
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero()) continue;
        out = out + Cyc::root(M2, static_cast<i64>(i) * k).times(c[i]);
    }
    return out;
}

static void check_same_field(const Cyc& a, const Cyc& b) {
    if (a.M != b.M) throw std::domain_error("cyclotomic moduli differ");
}

Cyc operator+(const Cyc& a, const Cyc& b) {
    check_same_field(a, b);
    Cyc out = a;
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] = out.c[i] + b.c[i];
    return out;
}

Cyc operator-(const Cyc& a, const Cyc& b) {
    check_same_field(a, b);
    Cyc out = a;
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] = out.c[i] - b.c[i];
    return out;
}

Cyc Cyc::operator-() const {
    Cyc out = *this;
    for (auto& r : out.c) r = -r;
    return out;
}

Cyc Cyc::times(const Rational& r) const {
    Cyc out = *this;
    for (auto& x : out.c) x = x * r;
    return out;
}

Cyc operator*(const Cyc& a, const Cyc& b) {
    check_same_field(a, b);
    size_t n = a.c.size();
    if (n == 0) return a;
    std::vector<Rational> p(2 * n - 1, Rational(0));
    for (size_t i = 0; i < n; ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < n; ++j) {
            if (b.c[j].is_zero()) continue;
            p[i + j] = p[i + j] + a.c[i] * b.c[j];
        }
    }
    Cyc out;
    out.M = a.M;
    out.c = reduce_mod_phi(std::move(p), a.M);
    out.c.resize(n, Rational(0));
    return out;
}

bool operator==(const Cyc& a, const Cyc& b) {
    check_same_field(a, b);
    for (size_t i = 0; i < a.c.size(); ++i)
        if (a.c[i] != b.c[i]) return false;
    return true;
}

ScaledCyc ScaledCyc::make(int tau_degree, Cyc value, i64 a_order) {
    if (tau_degree < 0) throw std::domain_error("negative tau degree");
    ScaledCyc out;
    while (tau_degree >= 2) {
        tau_degree -= 2;
        value = value.times(Rational(1, a_order));
    }
    out.tau_degree = tau_degree;
    out.cyc = std::move(value);
    return out;
}

ScaledCyc ScaledCyc::root(i64 M, i64 e) {
    ScaledCyc out;
    out.cyc = Cyc::root(M, e);
    return out;
}

ScaledCyc ScaledCyc::tau_times_root(i64 M, i64 e, int tau_sign) {
    ScaledCyc out;
    out.tau_degree = 1;
    out.cyc = Cyc::root(M, e).times(Rational(tau_sign));
    return out;
}

ScaledCyc sc_mul(const ScaledCyc& a, const ScaledCyc& b, i64 a_order) {
    return ScaledCyc::make(a.tau_degree + b.tau_degree, a.cyc * b.cyc, a_order);
}

ScaledCyc sc_add(const ScaledCyc& a, const ScaledCyc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.tau_degree != b.tau_degree)
        throw std::domain_error("adding scaled values of different tau parity");
    ScaledCyc out = a;
    out.cyc = a.cyc + b.cyc;
    return out;
}

bool sc_equal(const ScaledCyc& a, const ScaledCyc& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.tau_degree == b.tau_degree && a.cyc == b.cyc;
}

}  // namespace fusext
