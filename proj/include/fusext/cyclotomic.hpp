#pragma once

// Exact arithmetic for F-symbol values: rationals, the cyclotomic field
// Q(zeta_M) as coefficient vectors reduced modulo the M-th cyclotomic
// polynomial, and tau-graded cyclotomic scalars with tau^2 = 1/|A|.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fusext/lin.hpp"

namespace fusext {

struct Rational {
    lin::i64 num = 0;
    lin::i64 den = 1;

    Rational() = default;
    Rational(lin::i64 n) : num(n) {}
    Rational(lin::i64 n, lin::i64 d);

    bool is_zero() const { return num == 0; }
    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
};

// Coefficients of the M-th cyclotomic polynomial, constant term first,
// monic; size phi(M) + 1. Cached.
const std::vector<lin::i64>& cyclotomic_poly(lin::i64 M);

lin::i64 euler_phi(lin::i64 M);

// Element of Q(zeta_M), stored reduced mod Phi_M on the power basis
// 1, z, ..., z^{phi(M)-1}.
struct Cyc {
    lin::i64 M = 1;
    std::vector<Rational> c;

    static Cyc zero(lin::i64 M);
    static Cyc one(lin::i64 M);
    static Cyc from_rational(lin::i64 M, const Rational& r);
    static Cyc root(lin::i64 M, lin::i64 e);  // zeta_M^e

    bool is_zero() const;
    bool is_rational(Rational* out = nullptr) const;
    Cyc embed(lin::i64 M2) const;  // M | M2

    friend Cyc operator+(const Cyc& a, const Cyc& b);
    friend Cyc operator-(const Cyc& a, const Cyc& b);
    friend Cyc operator*(const Cyc& a, const Cyc& b);
    Cyc operator-() const;
    Cyc times(const Rational& r) const;
    friend bool operator==(const Cyc& a, const Cyc& b);
    friend bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }
};

// tau^d * cyclotomic value, with tau^2 = 1/a_order folded away so the stored
// degree is 0 or 1. Values of different parity are never equal (tau is
// irrational for |A| > 1 square-free; for uniformity parity is part of the
// value even when |A| is a square).
struct ScaledCyc {
    int tau_degree = 0;
    Cyc cyc;

    static ScaledCyc make(int tau_degree, Cyc value, lin::i64 a_order);
    static ScaledCyc root(lin::i64 M, lin::i64 e);             // degree 0
    static ScaledCyc tau_times_root(lin::i64 M, lin::i64 e, int tau_sign);

    bool is_zero() const { return cyc.is_zero(); }
};

ScaledCyc sc_mul(const ScaledCyc& a, const ScaledCyc& b, lin::i64 a_order);
// Addition requires equal tau parity (or a zero operand).
ScaledCyc sc_add(const ScaledCyc& a, const ScaledCyc& b);
bool sc_equal(const ScaledCyc& a, const ScaledCyc& b);

}  // namespace fusext
