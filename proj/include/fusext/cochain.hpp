#pragma once

// Normalized cochain complexes of a finite group with coefficients either in
// roots of unity (exponents mod M, optionally a function space Fun(X, mu_M)
// with a permutation action) or in a finite abelian group acted on by
// automorphisms. Left and right coboundaries, the sigma flip between them,
// cohomology via Smith normal form, coboundary solving with divisibility
// slack, restriction and pullback, JSON serialization.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusext/group.hpp"
#include "fusext/lin.hpp"

namespace fusext {

struct WrongActionSide : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegreeUnsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotACocycle : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ActionSide { trivial, left, right };

// Coefficient module for cochains on a group G. Two carriers:
//  - roots of unity written additively: values are exponent vectors of
//    length `width` mod M, i.e. Fun(X, mu_M) for an index set X of size
//    width; the action permutes slots, (g . f)(x) = f(perm[g][x]).
//  - a finite abelian group `carrier`: values are single elements; the
//    action applies the automorphism table aut[g].
// Empty perm/aut tables mean the trivial action.
struct CoeffModule {
    GroupPtr G;  // acting group
    ActionSide side = ActionSide::trivial;

    bool roots_carrier = true;
    lin::i64 M = 1;
    int width = 1;
    std::vector<std::vector<int>> perm;  // |G| x width

    GroupPtr carrier;                   // abelian coefficient group
    std::vector<std::vector<int>> aut;  // |G| x |carrier|

    static CoeffModule roots(lin::i64 M, GroupPtr G);
    static CoeffModule fun_space(lin::i64 M, GroupPtr G, ActionSide side,
                                 std::vector<std::vector<int>> perm);
    static CoeffModule abelian(GroupPtr carrier, GroupPtr G,
                               ActionSide side = ActionSide::trivial,
                               std::vector<std::vector<int>> aut = {});

    // Slot permutation / automorphism applied by g; identity when trivial.
    int act_slot(int g, int x) const { return perm.empty() ? x : perm[g][x]; }
    int act_elem(int g, int a) const { return aut.empty() ? a : aut[g][a]; }

    bool allows_left() const { return side != ActionSide::right; }
    bool allows_right() const { return side != ActionSide::left; }

    // Checks that tables are permutations/automorphisms composing per the
    // declared side. Throws InvalidInput on violation.
    void validate() const;

    bool compatible_with(const CoeffModule& o) const;
};

// Normalized n-cochain: a table G^n -> module values, zero whenever an
// argument is the identity. Roots carrier stores width exponents per tuple,
// abelian carrier stores one element index per tuple.
struct Cochain {
    int degree = 0;
    GroupPtr G;
    CoeffModule mod;
    std::vector<lin::i64> values;

    static Cochain zero(GroupPtr G, CoeffModule mod, int degree);

    size_t tuples() const;
    int per_tuple() const { return mod.roots_carrier ? mod.width : 1; }
    size_t tuple_index(const std::vector<int>& args) const;

    lin::i64 get(const std::vector<int>& args, int slot = 0) const;
    void set(const std::vector<int>& args, lin::i64 v, int slot = 0);

    bool is_zero() const;
    bool is_normalized() const;
    void reduce();  // bring values into canonical range
};

bool cochains_equal(const Cochain& f, const Cochain& g);
Cochain cochain_add(const Cochain& f, const Cochain& g);
Cochain cochain_sub(const Cochain& f, const Cochain& g);
Cochain cochain_neg(const Cochain& f);

Cochain coboundary_left(const Cochain& f);
Cochain coboundary_right(const Cochain& f);
Cochain sigma(const Cochain& f);

bool is_cocycle_left(const Cochain& f);
bool is_cocycle_right(const Cochain& f);

struct CohomologyGroup {
    std::vector<lin::i64> invariant_factors;  // d1 | d2 | ...
    std::vector<Cochain> generators;          // one cocycle per factor
    lin::i64 order() const;
};

// H^n(G, mod) for 1 <= n <= 3, using the right complex when the module is a
// right module and the left complex otherwise. Roots carriers are treated as
// subgroups of the divisible group of all roots of unity: coboundary
// witnesses are allowed values in mu_{M|G|}, so the answer matches
// cohomology with complex-unit coefficients. Abelian carriers are quotiented
// by coboundaries with values in the carrier itself.
CohomologyGroup cohomology(const GroupPtr& G, const CoeffModule& mod, int n);

// Solves dg = z for a cocycle z. Roots carrier: g takes values in
// mu_{M*slack} and the returned cochain's module has modulus M*slack; absent
// iff no solution exists at that modulus. Abelian carrier: slack must be 1.
// Uses the complex matching the module side, like cohomology().
std::optional<Cochain> solve_coboundary(const Cochain& z, lin::i64 slack = 1);

Cochain restrict_cochain(const Cochain& f, const Subgroup& H);

// The same cochain viewed in mu_{M*k}: values multiplied by k (roots
// carriers only, k >= 1).
Cochain rescale_cochain(const Cochain& f, lin::i64 k);
Cochain pullback(const Cochain& f, const GroupMap& phi);

// Uniformly random normalized cochain (for property tests).
Cochain random_cochain(const GroupPtr& G, const CoeffModule& mod, int degree,
                       std::mt19937& rng);

// Cyclic invariant-factor coordinates of a finite abelian group:
// carrier ~ Z/d_1 x ... x Z/d_k with d_i | d_{i+1}, all d_i > 1.
struct AbelianCoords {
    GroupPtr A;
    std::vector<lin::i64> d;
    std::vector<std::vector<lin::i64>> coords_of;  // per element, length k
    std::vector<int> factor_gen;                   // element generating factor j

    std::vector<lin::i64> encode(int a) const { return coords_of[a]; }
    int decode(const std::vector<lin::i64>& c) const;
    // Matrix of an automorphism in these coordinates: column j holds the
    // coordinates of the image of factor generator j.
    lin::Mat aut_matrix(const std::vector<int>& img) const;
};
AbelianCoords abelian_coords(const GroupPtr& A);

// Flattening of C^n(G, mod) to integer vectors for linear algebra. Roots
// carrier: one coordinate per (tuple, slot), all moduli M. Abelian carrier:
// one coordinate per (tuple, cyclic factor) with per-factor moduli; vectors
// are scaled by m/d_j so a single working modulus m = lcm(d_j) applies.
struct ComplexCoords {
    lin::i64 m = 1;                 // working modulus
    int per_tuple = 1;              // coordinates per tuple
    std::vector<lin::i64> scale;    // per in-tuple coordinate
    AbelianCoords ab;               // abelian carrier only
};
ComplexCoords complex_coords(const CoeffModule& mod);

std::vector<lin::i64> cochain_to_vector(const Cochain& f, const ComplexCoords& cc);
Cochain cochain_from_vector(const GroupPtr& G, const CoeffModule& mod, int degree,
                            const std::vector<lin::i64>& v, const ComplexCoords& cc);

// Matrix of the degree-n coboundary on scaled coordinate vectors, the right
// complex if right_complex else the left one.
lin::Mat coboundary_matrix(const GroupPtr& G, const CoeffModule& mod, int n,
                           bool right_complex, const ComplexCoords& cc);

// JSON: { "degree": n, "group": id, "modulus": M, "values": {"g1,g2": e} }
// with omitted entries zero. Width > 1 stores arrays, abelian carriers store
// element indices.
std::string cochain_to_json(const Cochain& f, const std::string& group_id);
Cochain cochain_from_json(const std::string& text, const GroupPtr& G,
                          const CoeffModule& mod);

}  // namespace fusext
