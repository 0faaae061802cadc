#pragma once

// Transfer between cochains on a subgroup and cochains with coinduced
// coefficients (the two directions of the coefficient-induction
// isomorphism), induction of twisted 2-cochains along a subgroup, the
// decomposition of two-sided module data over S x S^op into a pair of
// one-sided 2-cochains plus a pairing, and the balanced normalization that
// aligns the two one-sided parts through a duality on cosets.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusext/cochain.hpp"
#include "fusext/group.hpp"
#include "fusext/lin.hpp"

namespace fusext {

// The source 2-cochain does not trivialize the restricted twist.
struct NotOmegaTwoCocycle : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// No coinduced solution of the twisted coboundary problem exists, even with
// divisibility slack; the (subgroup, twist) pair is inadmissible.
struct NoBaseSolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Two-sided data fails one of its structural identities; the message carries
// a witness tuple.
struct CompatibilityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// The balancing 1-cochain does not exist; signals inconsistent input data.
struct NoGammaSolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fun(G/H, mu_M) as a right G-module: (f . g)(M) = f(g . M).
CoeffModule coinduced_module(const CosetSpace& cs, lin::i64 M);

// Degree-1 transfer: (phi1(rho)(s))(M) = rho(kappa_{M,s}) for a right
// 1-cocycle rho on cs.H (given on H.as_group() indices, trivial action).
// The inverse evaluates at the unit coset. Both check the cocycle condition.
Cochain shapiro_phi1(const Cochain& rho, const CosetSpace& cs);
Cochain shapiro_phi1_inv(const Cochain& beta, const CosetSpace& cs);

// Degree-2 transfer: (phi2(mu)(s1,s2))(M) = mu(kappa_{s2.M,s1}, kappa_{M,s2}).
Cochain shapiro_phi2(const Cochain& mu, const CosetSpace& cs);
Cochain shapiro_phi2_inv(const Cochain& gamma, const CosetSpace& cs);

// A twisted 2-cochain with coinduced coefficients, together with the source
// data it was induced from. When the twist forced a divisibility slack k,
// every field lives at modulus M*k and `slack` records k.
struct InducedCochain {
    Cochain mu_tilde;  // degree 2 on G, right module Fun(G/H, mu_{M*slack})
    Cochain mu;        // source 2-cochain on H (rescaled to M*slack)
    Cochain omega;     // 3-cocycle twist on G (rescaled to M*slack)
    lin::i64 slack = 1;
};

// Builds mu_tilde with (right) coboundary equal to omega in every coset slot
// and unit-coset restriction equal to mu. Requires d(mu) = omega|_H; when
// omega vanishes the result is exactly the degree-2 transfer of mu.
// Otherwise a base solution (solved once per (G, H, omega) and cached) is
// corrected by the transfer of the difference cochain.
InducedCochain induce_omega_cochain(const Cochain& mu, const Cochain& omega,
                                    const CosetSpace& cs);

// The ambient geometry for two-sided module data over S: the product group
// G = S x S^op, a stabilizer subgroup L cut out by an anti-automorphism phi
// of T = S/A (pairs whose two T-parts match through phi), and the coset
// space X = G/L carrying commuting left and right S-actions.
struct BimoduleSpace {
    GroupPtr S;
    GroupPtr G;     // S x S^op; element (s1, s2^op) has index s1*|S| + s2
    Subgroup A;     // abelian normal subgroup of S
    QuotientData q; // T = S/A
    GroupMap phi;   // anti-automorphism of T
    Subgroup L;     // {(s, t^op) : phi(p(s)) = p(t)}
    CosetSpace X;   // G/L
    int base = 0;            // index of the unit coset
    std::vector<int> to_T;   // bijection X -> T, (x,y^op)L -> p(y)^{-1} phi(p(x))
    std::vector<int> f1;     // X -> T, the coset p(x) phi^{-1}(p(y)^{-1})

    int pair(int s1, int s2) const { return s1 * S->n + s2; }
    int lact(int s, int M) const { return X.act(pair(s, 0), M); }
    int ract(int M, int s) const { return X.act(pair(0, s), M); }
};
using BimoduleSpacePtr = std::shared_ptr<const BimoduleSpace>;

// phi must be a bijective anti-automorphism of quotient(S, A).T (the
// quotient is recomputed here, so label conventions agree).
BimoduleSpacePtr bimodule_space(const GroupPtr& S, const Subgroup& A,
                                const GroupMap& phi);

// One-sided decomposition of two-sided data: mu_l(x,y,M), mu_r(M,x,y) and
// the pairing chi_t(x,M,y), all valued in mu_M with M running over X.
// mu_l is a right-module cochain (slot action s.M), mu_r a left-module one
// (slot action M.s), chi_t a plain table stored as a width-|X| cochain with
// chi(x, M, y) at tuple (x,y), slot M.
struct BimoduleTriple {
    BimoduleSpacePtr space;
    Cochain mu_l;   // get({x,y}, M) = mu_l(x, y, M)
    Cochain mu_r;   // get({x,y}, M) = mu_r(M, x, y)
    Cochain chi_t;  // get({x,y}, M) = chi(x, M, y)
    Cochain omega;  // 3-cocycle on S at the same modulus

    lin::i64 M() const { return mu_l.mod.M; }
    lin::i64 mul(int x, int y, int Mo) const { return mu_l.values[idx(x, y, Mo)]; }
    lin::i64 mur(int Mo, int x, int y) const { return mu_r.values[idx(x, y, Mo)]; }
    lin::i64 chi(int x, int Mo, int y) const { return chi_t.values[idx(x, y, Mo)]; }

    size_t idx(int x, int y, int Mo) const {
        return (static_cast<size_t>(x) * space->S->n + y) * space->X.m + Mo;
    }
};

// Splits mu_tilde (a degree-2 cochain on sp->G over X, typically produced by
// induce_omega_cochain along L) into (mu_l, mu_r, chi_t) by specializing
// arguments, then verifies the product decomposition of mu_tilde and all
// structural identities of the parts against omega_S. Throws
// CompatibilityFailure with a witness tuple on any violation.
BimoduleTriple decompose_bimodule(const Cochain& mu_tilde,
                                  const BimoduleSpacePtr& sp,
                                  const Cochain& omega_S);

// Replaces mu_l by the dual-reflected mu_r (so that
// mu_l(s,t,M) = mu_r((s t M)*, s, t) holds exactly) by solving for a
// balancing 1-cochain gamma, and rescales chi_t accordingly. `dual` is the
// duality permutation of X, supplied by the fusion ring under construction.
// Idempotent; preserves chi on A-arguments (up to the slack rescale).
BimoduleTriple normalize_balanced(const BimoduleTriple& t,
                                  const std::vector<int>& dual);

// Whether mu_l and mu_r already satisfy the balanced relation exactly.
bool is_balanced(const BimoduleTriple& t, const std::vector<int>& dual);

// The defect pairing beta(z,N,x) = chi(x, x^{-1} N* z^{-1}, z) - chi(z,N,x)
// of a normalized triple must split as beta(z,N,x) = alpha(z,N) - alpha(z, N.x)
// for some alpha; checks that splitting by linear solvability (with
// divisibility slack).
bool beta_is_split(const BimoduleTriple& t, const std::vector<int>& dual);

}  // namespace fusext
