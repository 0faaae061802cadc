#pragma once

// Graded fusion rings on the basis S together with the cosets of A: the
// even part multiplies as S, the odd part is a copy of S/A twisted by an
// anti-automorphism f and a shift coset delta with f^2 = Ad(delta) and
// f(delta) = delta^{-1}.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusext/group.hpp"

namespace fusext {

// Exhaustive associativity verification of a built table failed; admissible
// data must never trigger this.
struct AssociativityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pair (f, delta) indexing one graded fusion ring over (S, A).
struct RingDatum {
    GroupPtr S;
    Subgroup A;
    GroupPtr T;                           // S/A
    std::vector<int> proj;                // S -> T
    std::vector<std::vector<int>> coset;  // members of each coset, by T index
    GroupMap f;                           // anti-automorphism of T
    int delta = 0;                        // element of T

    // The automorphism eps(t) = f^{-1}(t^{-1}) carried by the same datum.
    GroupMap epsilon() const;
};

// All (f, delta) with f^2 = Ad(delta) and f(delta) = delta^{-1}; the
// equivalent conditions eps^2 = Ad(delta), eps(delta) = delta are verified
// to agree on every candidate.
std::vector<RingDatum> admissible_pairs(const GroupPtr& S, const Subgroup& A);

// Structure constants over the basis S + S/A.  Index layout: element s of S
// is basis index s (grade 0), coset M is |S| + M (grade 1).
struct FusionRingTable {
    RingDatum datum;
    int basis = 0;
    std::vector<std::string> labels;
    std::vector<int> N;        // basis^3 structure constants
    std::vector<int> dual;     // involution on basis indices
    std::vector<int> grading;  // 0 or 1 per basis index

    int get(int a, int b, int e) const {
        return N[(static_cast<size_t>(a) * basis + b) * basis + e];
    }
};

// Builds the table for an admissible datum and verifies associativity,
// duality, the grading, and that the coset of the identity is the unique
// odd n with M (x) n* = sum of the members of M for every odd M.
FusionRingTable build_ring(const RingDatum& datum);

// Pointed isomorphism: searches F in Aut(S) with F(A) = A, F(delta) =
// delta' and F f F^{-1} = f' on the quotient, and maps each odd coset M to
// F(M).  This fixes the coset of the identity in odd degree; it is strictly
// finer than abstract table isomorphism, which additionally allows shifting
// the odd labels by a constant c (possible exactly when f inverts the
// quotient and delta' - F(delta) = 2c is solvable).  Returns the induced
// basis permutation.
std::optional<std::vector<int>> rings_isomorphic(const FusionRingTable& r1,
                                                 const FusionRingTable& r2);

// Number of isomorphism classes among the admissible pairs over (S, A).
int count_rings(const GroupPtr& S, const Subgroup& A);

// Serializations: basis labels, grading, duals and the non-zero structure
// constants.
std::string ring_to_json(const FusionRingTable& r);
std::string ring_to_tsv(const FusionRingTable& r);

}  // namespace fusext
