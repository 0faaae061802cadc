#include "fusext/fusion_ring.hpp"

#include <algorithm>

#include "json.hpp"

namespace fusext {

GroupMap RingDatum::epsilon() const {
    GroupMap finv = f.inverse_map();
    GroupMap eps;
    eps.src = eps.dst = T;
    eps.anti = false;
    eps.img.resize(T->n);
    for (int t = 0; t < T->n; ++t) eps.img[t] = finv(T->inv(t));
    if (!eps.is_valid() || !eps.is_bijective())
        throw VerificationFailure("RingDatum: derived epsilon is not an automorphism");
    return eps;
}

std::vector<RingDatum> admissible_pairs(const GroupPtr& S, const Subgroup& A) {
    if (A.G != S || !A.is_normal() || !A.is_abelian())
        throw InvalidInput("admissible_pairs: A must be abelian normal in S");
    QuotientData q = quotient(S, A);
    const GroupPtr& T = q.T;
    std::vector<RingDatum> out;
    for (const GroupMap& f : anti_automorphisms(T)) {
        GroupMap ff = f.compose(f);
        for (int d = 0; d < T->n; ++d) {
            bool inner = true;
            for (int t = 0; t < T->n && inner; ++t)
                inner = ff(t) == T->conj(d, t);
            if (!inner || f(d) != T->inv(d)) continue;
            RingDatum r{S, A, T, q.proj, q.coset, f, d};
            // The epsilon form of the admissibility conditions must agree.
            GroupMap eps = r.epsilon();
            GroupMap ee = eps.compose(eps);
            for (int t = 0; t < T->n; ++t)
                if (ee(t) != T->conj(d, t))
                    throw VerificationFailure(
                        "admissible_pairs: epsilon^2 is not Ad(delta)");
            if (eps(d) != d)
                throw VerificationFailure(
                    "admissible_pairs: epsilon does not fix delta");
            out.push_back(std::move(r));
        }
    }
    return out;
}

namespace {

void verify_table(const FusionRingTable& r) {
    int B = r.basis;
    // Unit row and column.
    for (int a = 0; a < B; ++a)
        for (int b = 0; b < B; ++b) {
            if (r.get(0, a, b) != (a == b) || r.get(a, 0, b) != (a == b))
                throw VerificationFailure("fusion ring: unit axiom fails");
        }
    // Associativity.
    for (int a = 0; a < B; ++a)
        for (int b = 0; b < B; ++b)
            for (int c = 0; c < B; ++c)
                for (int d = 0; d < B; ++d) {
                    long lhs = 0, rhs = 0;
                    for (int e = 0; e < B; ++e) {
                        lhs += static_cast<long>(r.get(a, b, e)) * r.get(e, c, d);
                        rhs += static_cast<long>(r.get(a, e, d)) * r.get(b, c, e);
                    }
                    if (lhs != rhs)
                        throw AssociativityFailure(
                            "fusion ring: associativity fails at (" +
                            std::to_string(a) + "," + std::to_string(b) + "," +
                            std::to_string(c) + "," + std::to_string(d) + ")");
                }
    // Duality: a (x) b contains the unit exactly once iff b = a*, and the
    // involution reverses products.
    for (int a = 0; a < B; ++a) {
        if (r.dual[r.dual[a]] != a)
            throw VerificationFailure("fusion ring: dual is not involutive");
        for (int b = 0; b < B; ++b)
            if (r.get(a, b, 0) != (b == r.dual[a]))
                throw VerificationFailure("fusion ring: duality axiom fails");
    }
    for (int a = 0; a < B; ++a)
        for (int b = 0; b < B; ++b)
            for (int c = 0; c < B; ++c)
                if (r.get(a, b, c) != r.get(r.dual[b], r.dual[a], r.dual[c]))
                    throw VerificationFailure(
                        "fusion ring: duality does not reverse products");
    // Grading additivity.
    for (int a = 0; a < B; ++a)
        for (int b = 0; b < B; ++b)
            for (int c = 0; c < B; ++c)
                if (r.get(a, b, c) != 0 &&
                    r.grading[c] != (r.grading[a] ^ r.grading[b]))
                    throw VerificationFailure("fusion ring: grading not additive");
    // The coset of the identity is the unique odd n such that
    // M (x) n* = sum of the members of M, for every odd M.
    int nS = r.datum.S->n, nT = r.datum.T->n;
    int found = -1;
    for (int n = 0; n < nT; ++n) {
        bool ok = true;
        for (int M = 0; M < nT && ok; ++M)
            for (int x = 0; x < nS && ok; ++x)
                ok = r.get(nS + M, r.dual[nS + n], x) ==
                     (r.datum.proj[x] == M ? 1 : 0);
        if (ok) {
            if (found >= 0)
                throw VerificationFailure(
                    "fusion ring: identity coset is not unique");
            found = n;
        }
    }
    if (found != 0)
        throw VerificationFailure(
            "fusion ring: identity coset is not the absorbing odd element");
}

}  // namespace

FusionRingTable build_ring(const RingDatum& datum) {
    const GroupPtr& S = datum.S;
    const GroupPtr& T = datum.T;
    int nS = S->n, nT = T->n, B = nS + nT;
    FusionRingTable r;
    r.datum = datum;
    r.basis = B;
    r.N.assign(static_cast<size_t>(B) * B * B, 0);
    r.dual.resize(B);
    r.grading.resize(B);
    r.labels.resize(B);
    for (int s = 0; s < nS; ++s) {
        r.labels[s] = "s" + std::to_string(s);
        r.grading[s] = 0;
        r.dual[s] = S->inv(s);
    }
    GroupMap finv = datum.f.inverse_map();
    for (int M = 0; M < nT; ++M) {
        r.labels[nS + M] = "M" + std::to_string(M);
        r.grading[nS + M] = 1;
        r.dual[nS + M] = nS + T->op(datum.f(M), datum.delta);
    }
    auto at = [&](int a, int b, int e) -> int& {
        return r.N[(static_cast<size_t>(a) * B + b) * B + e];
    };
    for (int s = 0; s < nS; ++s) {
        for (int s2 = 0; s2 < nS; ++s2) at(s, s2, S->op(s, s2)) = 1;
        for (int M = 0; M < nT; ++M) {
            at(s, nS + M, nS + T->op(datum.proj[s], M)) = 1;
            at(nS + M, s, nS + T->op(M, finv(T->inv(datum.proj[s])))) = 1;
        }
    }
    for (int M = 0; M < nT; ++M)
        for (int M2 = 0; M2 < nT; ++M2) {
            // M (x) N = sum over the coset M delta^{-1} f(N^{-1}).
            int c = T->op(T->op(M, T->inv(datum.delta)),
                          datum.f(T->inv(M2)));
            for (int x : datum.coset[c]) at(nS + M, nS + M2, x) = 1;
        }
    verify_table(r);
    return r;
}

std::optional<std::vector<int>> rings_isomorphic(const FusionRingTable& r1,
                                                 const FusionRingTable& r2) {
    const RingDatum& d1 = r1.datum;
    const RingDatum& d2 = r2.datum;
    if (d1.S != d2.S || d1.A.elems != d2.A.elems)
        throw InvalidInput("rings_isomorphic: rings live over different (S, A)");
    int nS = d1.S->n, nT = d1.T->n;
    for (const GroupMap& F : automorphisms(d1.S)) {
        bool keepsA = true;
        for (int a : d1.A.elems)
            if (!d1.A.contains(F(a))) {
                keepsA = false;
                break;
            }
        if (!keepsA) continue;
        // Induced automorphism of the quotient.
        std::vector<int> Fb(nT);
        for (int M = 0; M < nT; ++M) Fb[M] = d1.proj[F(d1.coset[M][0])];
        if (Fb[d1.delta] != d2.delta) continue;
        bool conj = true;
        for (int M = 0; M < nT && conj; ++M)
            conj = Fb[d1.f(M)] == d2.f(Fb[M]);
        if (!conj) continue;
        std::vector<int> perm(r1.basis);
        for (int s = 0; s < nS; ++s) perm[s] = F(s);
        for (int M = 0; M < nT; ++M) perm[nS + M] = nS + Fb[M];
        // Confirm a genuine isomorphism of graded based rings.
        for (int a = 0; a < r1.basis; ++a) {
            if (r1.grading[a] != r2.grading[perm[a]] ||
                perm[r1.dual[a]] != r2.dual[perm[a]])
                throw VerificationFailure(
                    "rings_isomorphic: induced map breaks grading or duals");
            for (int b = 0; b < r1.basis; ++b)
                for (int c = 0; c < r1.basis; ++c)
                    if (r1.get(a, b, c) != r2.get(perm[a], perm[b], perm[c]))
                        throw VerificationFailure(
                            "rings_isomorphic: induced map is not a ring map");
        }
        return perm;
    }
    return std::nullopt;
}

int count_rings(const GroupPtr& S, const Subgroup& A) {
    std::vector<FusionRingTable> reps;
    for (const RingDatum& d : admissible_pairs(S, A)) {
        FusionRingTable r = build_ring(d);
        bool fresh = true;
        for (const FusionRingTable& rep : reps)
            if (rings_isomorphic(rep, r)) {
                fresh = false;
                break;
            }
        if (fresh) reps.push_back(std::move(r));
    }
    return static_cast<int>(reps.size());
}

std::string ring_to_json(const FusionRingTable& r) {
    nlohmann::json j;
    j["basis"] = r.labels;
    j["grading"] = r.grading;
    j["dual"] = r.dual;
    j["delta"] = r.datum.delta;
    j["f"] = r.datum.f.img;
    nlohmann::json entries = nlohmann::json::array();
    for (int a = 0; a < r.basis; ++a)
        for (int b = 0; b < r.basis; ++b)
            for (int c = 0; c < r.basis; ++c)
                if (int n = r.get(a, b, c); n != 0)
                    entries.push_back({a, b, c, n});
    j["N"] = std::move(entries);
    return j.dump();
}

std::string ring_to_tsv(const FusionRingTable& r) {
    std::string out = "a\tb\tc\tN\n";
    for (int a = 0; a < r.basis; ++a)
        for (int b = 0; b < r.basis; ++b)
            for (int c = 0; c < r.basis; ++c)
                if (int n = r.get(a, b, c); n != 0)
                    out += r.labels[a] + "\t" + r.labels[b] + "\t" +
                           r.labels[c] + "\t" + std::to_string(n) + "\n";
    return out;
}

}  // namespace fusext
