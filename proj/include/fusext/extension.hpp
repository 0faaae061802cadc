#pragma once

// Extension of 2-cocycles from an abelian normal subgroup A to the whole
// group S, written as a twisted product of A by T = S/A. A normal 2-cocycle
// on S is determined by three restrictions (on A-pairs, on T-vs-A pairs and
// on T-pairs); this module solves for the first witness of each existence
// condition, evaluates the obstruction 3-cochain on T, assembles the
// extension, and decides when an extension of a coboundary is itself a
// coboundary. A variant shifts everything by a fixed 2-cochain to extend
// twisted (non-closed) sources.

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fusext/cochain.hpp"
#include "fusext/group.hpp"

namespace fusext {

// The obstruction 3-cochain is not a coboundary; no extension exists.
struct ZetaNotCoboundary : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// One of the extension conditions fails; the message says which.
struct ConditionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A group split along an abelian normal subgroup, with the pieces needed to
// move between S-elements and (A-part, T-part) pairs. Every a below is an
// intrinsic index into A.elems (an element of A.as_group()).
struct SplitContext {
    GroupPtr S;
    Subgroup A;
    GroupPtr Ag;           // A.as_group()
    GroupPtr T;            // quotient
    SplitData sd;          // action[t][a], rho[t][t'] (intrinsic A indices)
    std::vector<int> usec; // per T element, the section representative in S

    int encode(int a, int t) const { return S->op(A.elems[a], usec[t]); }
    int t_part(int s) const { return sd.q.proj[s]; }
    int a_part(int s) const {
        return A.pos[S->op(s, S->inv(usec[t_part(s)]))];
    }
    int act(int t, int a) const { return sd.action[t][a]; }
    int rho(int t, int t2) const { return sd.rho[t][t2]; }
};
using SplitContextPtr = std::shared_ptr<const SplitContext>;

SplitContextPtr split_context(const GroupPtr& S, const Subgroup& A);

// C^1(T, Fun(A, mu_M)) with T permuting value slots by its action on A.
CoeffModule action_module(const SplitContext& sc, lin::i64 M);

// Data determining a normal extension: the source sigma on A, the T-vs-A
// restriction psi (a 1-cochain on T valued in Fun(A)) and the T-vs-T
// restriction nu. All three share one modulus.
struct ExtensionWitness {
    SplitContextPtr ctx;
    Cochain sigma;  // degree 2 on ctx->Ag
    Cochain psi;    // degree 1 on ctx->T in action_module
    Cochain nu;     // degree 2 on ctx->T, plain coefficients
};

// Solves, for every t, sigma - sigma^t = d(psi(t, .)) over 1-cochains on A
// (sigma^t(a,b) = sigma(t.a, t.b)); absent when some t has no solution even
// after rescaling by |A|. The returned cochain's modulus reports the rescale
// (callers rescale sigma to match). The witness is one particular solution;
// it need not satisfy the 1-cocycle law on T.
std::optional<Cochain> invariance_witness(const Cochain& sigma,
                                          const SplitContext& sc);

// The obstruction 3-cochain on T:
//   zeta(t,t',t'') = psi(t, rho(t',t'')) + sigma(t.rho(t',t''), rho(t,t't''))
//                    - sigma(rho(t,t'), rho(tt',t'')).
Cochain zeta(const Cochain& sigma, const Cochain& psi, const SplitContext& sc);

// Assembles the normal extension
//   mu(at, a't') = nu(t,t') + psi(t,a') + sigma(a, t.a')
//                  + sigma(a (t.a'), rho(t,t'))
// after checking the three conditions:
//   (1) sigma - sigma^t = d(psi(t, .)) for every t;
//   (2) psi(tt', a) = psi(t', a) + psi(t, t'.a)
//                     + sigma(tt'.a, rho(t,t')) - sigma(rho(t,t'), tt'.a)
//       (the correction vanishes, giving the plain 1-cocycle law, whenever
//       sigma commutes with the values of rho);
//   (3) d(nu) = -zeta, exactly.
// All three follow from the 2-cocycle law of the result, so a witness
// recovered from an existing extension always passes. They are not
// sufficient in general; the assembled cochain is verified exhaustively
// (2-cocycle law, normality, restrictions recover sigma, psi, nu) and a
// failure raises VerificationFailure.
Cochain extend_cocycle(const ExtensionWitness& w);

// Exact existence: searches for (psi, nu) making the assembled extension of
// sigma a 2-cocycle, as one affine solve over mu_M (escalating the modulus
// by |S| when needed). Returns a witness that extend_cocycle accepts, with
// sigma rescaled to the working modulus; absent when no normal extension of
// any rescale of sigma exists.
std::optional<ExtensionWitness> find_extension_witness(const Cochain& sigma,
                                                       const SplitContextPtr& sc);

// For sigma = d(eta): whether the extension described by w is itself a
// coboundary, i.e. whether some 1-cochain c on A with d(c) = sigma satisfies
// psi(t,a) = c(t.a) - c(a) and nu = d(f) - c(rho) for some 1-cochain f on T.
// One joint linear solve with divisibility slack.
bool extension_is_coboundary(const ExtensionWitness& w, const Cochain& eta);

// Twisted variant: extends sigma_full with d(sigma_full) = d(h)|_A to mu on
// S with d(mu) = d(h). The witness w must describe sigma_full - h|_{AxA}
// (which is closed); the result is extend_cocycle(w) + h.
Cochain omega_variant(const ExtensionWitness& w, const Cochain& sigma_full,
                      const Cochain& h);

}  // namespace fusext
