#pragma once

// Exact associativity data for a graded extension: the eight alpha families
// assembled from a validated collection plus ring datum, stored
// exponent-encoded over a common root-of-unity modulus, with the odd-odd-odd
// family carrying one formal factor of tau (tau^2 = 1/|A|). A generic
// multiplicity-free pentagon checker evaluates all sixteen grading patterns
// in exact scaled-cyclotomic arithmetic.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusext/bimodule.hpp"
#include "fusext/cyclotomic.hpp"
#include "fusext/fusion_ring.hpp"
#include "fusext/induction.hpp"

namespace fusext {

// A direct-sum decomposition read off the fusion table does not form a
// single A-coset, or object bookkeeping between ring and coset space split.
struct IndexMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// twist_class over data that does not share a ring and pairing tables.
struct IncompatibleSets : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The skeletal associativity data of the graded category built on a ring
// table: basis indices 0..|S|-1 are the even invertibles, |S|..|S|+|T|-1
// the odd objects (T = S/A labels). All table entries are exponents of
// zeta_M with M = modulus; only index combinations allowed by the fusion
// rule are meaningful.
struct FSymbolSet {
    FusionRingTable ring;
    BimoduleSpacePtr space;
    BimoduleTriple data;       // balanced induced (mu_l, mu_r, chi) tables
    Cochain omega;             // 3-cocycle on S, rescaled to modulus
    int tau_sign = +1;
    lin::i64 a_order = 1;      // tau^2 folds to 1 / a_order
    lin::i64 modulus = 1;

    std::vector<int> xof;      // odd label (T) -> coset-space slot
    std::vector<int> tof;      // coset-space slot -> odd label
    std::vector<int> dual_x;   // duality permutation of slots

    // alpha families, exponent tables. Argument order matches the calls in
    // build_fsymbols; invalid combinations hold 0 and are never read.
    std::vector<lin::i64> a000;  // (x,y,z)
    std::vector<lin::i64> a100;  // (K,x,y)
    std::vector<lin::i64> a010;  // (x,K,y)
    std::vector<lin::i64> a001;  // (x,y,K)
    std::vector<lin::i64> a011;  // (x,K,L; summand s)
    std::vector<lin::i64> a110;  // (K,L,x; summand s)
    std::vector<lin::i64> a101;  // (K,x,L; summand s)
    std::vector<lin::i64> a111;  // (K,L,M; s,t), value tau * zeta^entry

    int nS() const { return ring.datum.S->n; }
    int nT() const { return ring.datum.T->n; }

    size_t i000(int x, int y, int z) const {
        return (static_cast<size_t>(x) * nS() + y) * nS() + z;
    }
    size_t i100(int K, int x, int y) const {
        return (static_cast<size_t>(K) * nS() + x) * nS() + y;
    }
    size_t i010(int x, int K, int y) const {
        return (static_cast<size_t>(x) * nT() + K) * nS() + y;
    }
    size_t i001(int x, int y, int K) const {
        return (static_cast<size_t>(x) * nS() + y) * nT() + K;
    }
    size_t i011(int x, int K, int L, int s) const {
        return ((static_cast<size_t>(x) * nT() + K) * nT() + L) * nS() + s;
    }
    size_t i110(int K, int L, int x, int s) const {
        return ((static_cast<size_t>(K) * nT() + L) * nS() + x) * nS() + s;
    }
    size_t i101(int K, int x, int L, int s) const {
        return ((static_cast<size_t>(K) * nS() + x) * nT() + L) * nS() + s;
    }
    size_t i111(int K, int L, int M, int s, int t) const {
        return (((static_cast<size_t>(K) * nT() + L) * nT() + M) * nS() + s) *
                   nS() + t;
    }
};

// Assembles the full associativity data of the extension described by a
// valid collection, a compatible ring datum over the same (S, A, epsilon)
// and a tau sign: extends the block 2-cochain of the collection to the
// stabilizer subgroup with the collection's (psi, nu), induces it over
// S x S^op, decomposes into one-sided parts plus the pairing, balances the
// one-sided parts through the ring duality, and reads the alpha families
// off the balanced tables. Throws on any verification failure along the
// pipeline.
FSymbolSet build_fsymbols(const Collection& c, const RingDatum& d,
                          int tau_sign);

// One scalar component of the associativity map a(bc) -> (ab)c at total
// object u, from the branch f of bc to the branch e of ab (ring-basis
// indices). Zero when a branch is not allowed by the fusion rule.
ScaledCyc fsymbol(const FSymbolSet& F, int a, int b, int c, int u, int f,
                  int e);

struct PatternReport {
    std::array<int, 4> pattern{};  // gradings of (a, b, c, d)
    long long instances = 0;
    bool pass = true;
    std::string witness;  // first failing (a,b,c,d,u,h,w,e,g) tuple
};
struct PentagonReport {
    std::array<PatternReport, 16> patterns{};
    long long instances = 0;
    bool pass = true;
};

// Exhaustive pentagon check: for every basis quadruple (a,b,c,d), total u
// and pair of outer branches, compares the two composites of associativity
// maps exactly. The sixteen buckets are indexed by the grading pattern.
PentagonReport pentagon_check(const FSymbolSet& F);

// The ratio of two associativity systems over the same ring and pairing
// data as a sign: -1 when the tau signs differ, +1 when the systems agree.
// Throws IncompatibleSets when the non-tau tables differ.
int twist_class(const FSymbolSet& F1, const FSymbolSet& F2);

std::string fsymbols_to_json(const FSymbolSet& F);
std::string pentagon_report_to_json(const PentagonReport& r);

}  // namespace fusext
