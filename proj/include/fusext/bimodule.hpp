#pragma once

// Symmetric non-degenerate bicharacters on abelian groups, the stabilizer
// subgroups L(A, phi) of S x S^op with their twisted-product presentation
// over T = S/A, S-invariant classes of omega-trivializing 2-cochains on A,
// and validation / equivalence of the six-part collections
// (A, mu_r, chi, epsilon, psi, nu) that describe order-two elements of the
// Brauer-Picard group of a pointed category.

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusext/cochain.hpp"
#include "fusext/extension.hpp"
#include "fusext/group.hpp"
#include "fusext/induction.hpp"

namespace fusext {

// The restriction of the 3-cocycle to A admits no trivializing 2-cochain,
// even with divisibility slack.
struct OmegaNotTrivializableOnA : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// The square of the quotient anti-automorphism is not inner.
struct FSquaredNotInner : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// chi(a, b) = exp(2 pi i e(a,b) / M); multiplicative in each slot and
// normalized (chi(a, e) = chi(e, a) = 1).
struct Bicharacter {
    GroupPtr A;      // abelian
    lin::i64 M = 1;  // exponent modulus
    std::vector<lin::i64> e;  // |A| x |A| exponent table

    lin::i64 get(int a, int b) const {
        return e[static_cast<size_t>(a) * A->n + b];
    }
    bool is_bicharacter() const;   // multiplicativity in both slots
    bool is_symmetric() const;
    // Both slot maps a -> chi(a, .) and b -> chi(., b) land injectively in
    // the character group (equivalently, only the identity pairs trivially).
    bool is_nondegenerate() const;
};

// Cyclic decomposition of a finite abelian group: elements factor uniquely
// as products of powers of the generators.
struct AbelianBasis {
    std::vector<int> gens;
    std::vector<int> orders;                // orders[i] = order of gens[i]
    std::vector<std::vector<int>> coords;   // per element, one exponent per gen
};
AbelianBasis abelian_basis(const GroupPtr& A);

// All symmetric bicharacters whose slot maps are injective, at modulus
// exponent(A). Enumerated through a cyclic decomposition, so the list is
// complete and duplicate-free.
std::vector<Bicharacter> symmetric_nondegenerate_bicharacters(const GroupPtr& A);

// The subgroup L(A, phi) = {(s, t^op) : phi(sA) = tA} of S x S^op for an
// anti-automorphism phi of T = S/A, together with its presentation as the
// block A x A extended by T.
struct LSubgroup {
    BimoduleSpacePtr space;  // ambient S x S^op geometry; L = space->L
    GroupPtr Lg;             // space->L.as_group()
    Subgroup AL;             // the block {(a, b^op)} inside Lg
    SplitContextPtr ctx;     // split context of Lg along AL
    GroupMap phi;            // the anti-automorphism of T
    // Translation between block coordinates and pairs of A-indices.
    std::vector<std::array<int, 2>> pair_of;  // ctx->Ag index -> (a, b)
    std::vector<int> block_index;             // a * |A| + b -> ctx->Ag index
    std::vector<int> vee_block;  // ctx->Ag: (a, b) -> (b^{-1}, a^{-1})

    int block(int a, int b) const {
        return block_index[static_cast<size_t>(a) * space->A.order() + b];
    }
};
using LSubgroupPtr = std::shared_ptr<const LSubgroup>;

// Builds L(A, phi), requiring phi^2 inner in T (FSquaredNotInner otherwise).
// Verifies the intersection identities L cap (S x e) = A x e,
// L cap (e x S^op) = e x A, that the involution (s, t^op) -> (t^{-1},
// (s^{-1})^op) maps L onto the subgroup built from phi^{-1}, and that the
// group law of L matches the twisted product of A x A by T with action
// t.(a, b) = (t a t^{-1}, phi(t)^{-1} b phi(t)) and twist
// (rho(t, t'), conjugated rho of the phi-images) for a section of T in S.
LSubgroupPtr build_L(const GroupPtr& S, const Subgroup& A, const GroupMap& phi);

// The automorphism eps(t) = phi^{-1}(t^{-1}) attached to phi, and back.
GroupMap eps_from_phi(const GroupMap& phi);
GroupMap phi_from_eps(const GroupMap& eps);

// Representatives of classes of 2-cochains mu on A with d(mu) = omega|_A,
// modulo 2-coboundaries, that are S-stable: conjugating both arguments by s
// and multiplying by the omega-ratio correction changes mu by a coboundary.
// All representatives share one modulus M * slack.
struct OmegaClassSet {
    std::vector<Cochain> reps;
    lin::i64 slack = 1;
};
// When mod_s_restrictions is set, representatives that differ by the
// restriction of a 2-cocycle of S (up to coboundary on A) are merged.
OmegaClassSet omega_classes(const Subgroup& A, const Cochain& omega,
                            bool mod_s_restrictions = false);

// The data set indexing an order-two Brauer-Picard element: an abelian
// normal A < S with a symmetric non-degenerate bicharacter chi, an S-stable
// omega-trivializing mu_r on A, an automorphism epsilon of T = S/A with
// inner square, and the pair (psi, nu) controlling the extension of the
// block 2-cochain mu_0 to L. psi lives in the action module of L.ctx, nu in
// plain roots on T; mu_l is always derived as
// mu_l(a, b) = -mu_r(b^{-1}, a^{-1}).
struct Collection {
    GroupPtr S;
    Cochain omega;     // 3-cocycle on S (zero for an untwisted category)
    Subgroup A;
    Bicharacter chi;
    Cochain mu_r;      // degree 2 on A.as_group()
    GroupMap epsilon;  // automorphism of T
    Cochain psi;       // degree 1 on L->ctx->T, action module
    Cochain nu;        // degree 2 on L->ctx->T, roots
    LSubgroupPtr L;    // derived from (A, epsilon)
};

// Builds the collection and its L-subgroup; checks component compatibility
// (moduli, carriers, degrees) and throws InvalidInput on mismatch.
Collection make_collection(const GroupPtr& S, const Cochain& omega,
                           const Subgroup& A, const Bicharacter& chi,
                           const Cochain& mu_r, const GroupMap& epsilon,
                           const Cochain& psi, const Cochain& nu);

// The block 2-cochain mu_0((a,b),(a',b')) = mu_l(a,a') + mu_r(b,b') +
// chi(a,b'), as a cochain on L->ctx->Ag.
Cochain collection_mu0(const Collection& c);

struct ValidationReport {
    bool premises = false;  // chi symmetric non-degenerate, cocycle shapes
    bool cond_i = false;    // mu_0 ratio under the T-action is d(psi(t, .))
    bool cond_ii = false;   // d(nu) matches the twist defect of (mu_0, psi)
    bool cond_iii = false;  // the (k, q) comparison system is solvable
    bool cond_iv = false;   // some 2-cochain on L trivializes the twist
    std::string detail;     // first failure, with a witness when available
    std::string advisory;   // non-gating notes (literal assembly status)

    bool valid() const {
        return premises && cond_i && cond_ii && cond_iii && cond_iv;
    }
};
ValidationReport validate_collection(const Collection& c);

// Whether two valid collections describe the same order-two element: equal
// A and chi, epsilon agreeing up to inner automorphisms of T, cohomologous
// mu_r, and a joint rescaling (eta, phi) matching mu_0, psi and nu.
bool collections_equivalent(const Collection& c1, const Collection& c2);

// JSON object with the subgroup, bicharacter, cochain and map components;
// delta / tau_sign label the graded half when the collection has been
// promoted to fusion-ring data.
std::string collection_to_json(const Collection& c, int delta = 0,
                               int tau_sign = +1);

}  // namespace fusext
