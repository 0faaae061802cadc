#include "fusext/extension.hpp"

#include <algorithm>

#include "fusext/lin.hpp"

namespace fusext {

using lin::i64;
using lin::Mat;

namespace {

i64 mod_norm(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

void require_degree(const Cochain& f, int deg, const char* what) {
    if (f.degree != deg)
        throw InvalidInput(std::string(what) + ": wrong cochain degree");
}

// sigma pulled back along the action of t (an automorphism of A).
Cochain acted_sigma(const Cochain& sigma, const SplitContext& sc, int t) {
    GroupMap m;
    m.src = sc.Ag;
    m.dst = sc.Ag;
    m.img = sc.sd.action[t];
    return pullback(sigma, m);
}

}  // namespace

SplitContextPtr split_context(const GroupPtr& S, const Subgroup& A) {
    auto sc = std::make_shared<SplitContext>();
    sc->S = S;
    sc->A = A;
    sc->Ag = A.as_group();
    sc->sd = split_as_twisted_product(S, A);
    sc->T = sc->sd.q.T;
    sc->usec.assign(sc->T->n, -1);
    for (int c = 0; c < sc->sd.cosets.m; ++c)
        sc->usec[sc->sd.q.proj[sc->sd.cosets.u[c]]] = sc->sd.cosets.u[c];
    for (int u : sc->usec)
        if (u < 0) throw VerificationFailure("section misses a coset");
    if (sc->usec[0] != 0)
        throw VerificationFailure("section does not fix the unit coset");
    return sc;
}

CoeffModule action_module(const SplitContext& sc, i64 M) {
    std::vector<std::vector<int>> perm(sc.T->n);
    for (int t = 0; t < sc.T->n; ++t) perm[t] = sc.sd.action[t];
    return CoeffModule::fun_space(M, sc.T, ActionSide::right, std::move(perm));
}

std::optional<Cochain> invariance_witness(const Cochain& sigma,
                                          const SplitContext& sc) {
    require_degree(sigma, 2, "invariance witness");
    if (sigma.G->n != sc.Ag->n)
        throw InvalidInput("invariance witness: source must live on A");
    for (i64 slack : {i64{1}, i64{sc.Ag->n}}) {
        Cochain s = rescale_cochain(sigma, slack);
        Cochain psi =
            Cochain::zero(sc.T, action_module(sc, s.mod.M), 1);
        bool ok = true;
        for (int t = 1; t < sc.T->n && ok; ++t) {
            Cochain z = cochain_sub(s, acted_sigma(s, sc, t));
            std::optional<Cochain> c = solve_coboundary(z, 1);
            if (!c) {
                ok = false;
                break;
            }
            for (int a = 0; a < sc.Ag->n; ++a)
                psi.set({t}, c->values[a], a);
        }
        if (ok) {
            psi.reduce();
            return psi;
        }
    }
    return std::nullopt;
}

Cochain zeta(const Cochain& sigma, const Cochain& psi,
             const SplitContext& sc) {
    require_degree(sigma, 2, "obstruction");
    require_degree(psi, 1, "obstruction");
    if (sigma.mod.M != psi.mod.M)
        throw InvalidInput("obstruction: modulus mismatch");
    const GroupPtr& T = sc.T;
    Cochain z = Cochain::zero(T, CoeffModule::roots(sigma.mod.M, T), 3);
    for (int t = 0; t < T->n; ++t)
        for (int t1 = 0; t1 < T->n; ++t1)
            for (int t2 = 0; t2 < T->n; ++t2) {
                int r12 = sc.rho(t1, t2);
                i64 v = psi.get({t}, r12) +
                        sigma.get({sc.act(t, r12), sc.rho(t, T->op(t1, t2))}) -
                        sigma.get({sc.rho(t, t1), sc.rho(T->op(t, t1), t2)});
                z.set({t, t1, t2}, v);
            }
    z.reduce();
    return z;
}

Cochain extend_cocycle(const ExtensionWitness& w) {
    const SplitContext& sc = *w.ctx;
    require_degree(w.sigma, 2, "extension");
    require_degree(w.psi, 1, "extension");
    require_degree(w.nu, 2, "extension");
    i64 M = w.sigma.mod.M;
    if (w.psi.mod.M != M || w.nu.mod.M != M)
        throw InvalidInput("extension: modulus mismatch");
    if (!is_cocycle_left(w.sigma))
        throw ConditionFailure("source is not a 2-cocycle on A");

    // condition 1: sigma - sigma^t = d(psi(t, .)) for every t
    for (int t = 0; t < sc.T->n; ++t) {
        Cochain want = cochain_sub(w.sigma, acted_sigma(w.sigma, sc, t));
        for (int a = 1; a < sc.Ag->n; ++a)
            for (int b = 1; b < sc.Ag->n; ++b) {
                i64 d = w.psi.get({t}, b) - w.psi.get({t}, sc.Ag->op(a, b)) +
                        w.psi.get({t}, a);
                if (mod_norm(d - want.get({a, b}), M) != 0)
                    throw ConditionFailure(
                        "source is not cohomologically invariant for the "
                        "given witness");
            }
    }
    // condition 2: the 1-cocycle law on T, corrected by the commutator of
    // sigma with the rho values (zero whenever they commute under sigma)
    for (int t = 0; t < sc.T->n; ++t)
        for (int t2 = 0; t2 < sc.T->n; ++t2) {
            int tt = sc.T->op(t, t2);
            int rr = sc.rho(t, t2);
            for (int a = 0; a < sc.Ag->n; ++a) {
                int ta = sc.act(tt, a);
                i64 d = w.psi.get({tt}, a) - w.psi.get({t2}, a) -
                        w.psi.get({t}, sc.act(t2, a)) -
                        w.sigma.get({ta, rr}) + w.sigma.get({rr, ta});
                if (mod_norm(d, M) != 0)
                    throw ConditionFailure(
                        "witness violates the 1-cocycle law on T");
            }
        }
    // condition 3: nu bounds the inverse of the obstruction
    Cochain z = zeta(w.sigma, w.psi, sc);
    if (!is_cocycle_left(z))
        throw VerificationFailure(
            "obstruction is not closed despite valid conditions; "
            "convention mismatch must be investigated");
    Cochain zneg = cochain_neg(z);
    if (!cochains_equal(coboundary_left(w.nu), zneg)) {
        if (solve_coboundary(zneg, 1) ||
            solve_coboundary(zneg, sc.T->n))
            throw ConditionFailure("nu does not trivialize the obstruction");
        throw ZetaNotCoboundary("obstruction is not a 3-coboundary");
    }

    Cochain mu = Cochain::zero(sc.S, CoeffModule::roots(M, sc.S), 2);
    for (int s1 = 0; s1 < sc.S->n; ++s1) {
        int a = sc.a_part(s1), t = sc.t_part(s1);
        for (int s2 = 0; s2 < sc.S->n; ++s2) {
            int a2 = sc.a_part(s2), t2 = sc.t_part(s2);
            int ta2 = sc.act(t, a2);
            i64 v = w.nu.get({t, t2}) + w.psi.get({t}, a2) +
                    w.sigma.get({a, ta2}) +
                    w.sigma.get({sc.Ag->op(a, ta2), sc.rho(t, t2)});
            mu.set({s1, s2}, v);
        }
    }
    mu.reduce();

    if (!is_cocycle_left(mu))
        throw VerificationFailure("extension violates the 2-cocycle law");
    for (int a = 0; a < sc.Ag->n; ++a)
        for (int t = 0; t < sc.T->n; ++t)
            if (mu.get({sc.encode(a, 0), sc.encode(0, t)}) != 0)
                throw VerificationFailure("extension is not normal");
    for (int a = 0; a < sc.Ag->n; ++a)
        for (int b = 0; b < sc.Ag->n; ++b)
            if (mod_norm(mu.get({sc.encode(a, 0), sc.encode(b, 0)}) -
                             w.sigma.get({a, b}),
                         M) != 0)
                throw VerificationFailure("extension does not restrict to sigma");
    for (int t = 0; t < sc.T->n; ++t) {
        for (int a = 0; a < sc.Ag->n; ++a)
            if (mod_norm(mu.get({sc.encode(0, t), sc.encode(a, 0)}) -
                             w.psi.get({t}, a),
                         M) != 0)
                throw VerificationFailure("extension does not restrict to psi");
        for (int t2 = 0; t2 < sc.T->n; ++t2)
            if (mod_norm(mu.get({sc.encode(0, t), sc.encode(0, t2)}) -
                             w.nu.get({t, t2}),
                         M) != 0)
                throw VerificationFailure("extension does not restrict to nu");
    }
    return mu;
}

std::optional<ExtensionWitness> find_extension_witness(
    const Cochain& sigma, const SplitContextPtr& sc) {
    require_degree(sigma, 2, "extension search");
    if (sigma.G->n != sc->Ag->n)
        throw InvalidInput("extension search: source must live on A");
    if (!is_cocycle_left(sigma)) return std::nullopt;
    i64 M = sigma.mod.M;
    int na = sc->Ag->n, nt = sc->T->n, n = sc->S->n;
    int pcols = (nt - 1) * (na - 1);
    int cols = pcols + (nt - 1) * (nt - 1);
    auto pcol = [&](int t, int a) { return (t - 1) * (na - 1) + (a - 1); };
    auto ncol = [&](int t, int t2) {
        return pcols + (t - 1) * (nt - 1) + (t2 - 1);
    };
    // One cocycle-law row per S-triple; the sigma part of each mu term is a
    // constant moved to the right-hand side (last entry of each row).
    std::vector<std::vector<i64>> rows;
    std::vector<i64> row(static_cast<size_t>(cols) + 1);
    auto add_mu = [&](int s1, int s2, int sign) {
        int a = sc->a_part(s1), t = sc->t_part(s1);
        int a2 = sc->a_part(s2), t2 = sc->t_part(s2);
        if (t && a2) row[pcol(t, a2)] += sign;
        if (t && t2) row[ncol(t, t2)] += sign;
        int ta2 = sc->act(t, a2);
        row[cols] -= sign * (sigma.get({a, ta2}) +
                             sigma.get({sc->Ag->op(a, ta2), sc->rho(t, t2)}));
    };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                std::fill(row.begin(), row.end(), 0);
                add_mu(y, z, 1);
                add_mu(sc->S->op(x, y), z, -1);
                add_mu(x, sc->S->op(y, z), 1);
                add_mu(x, y, -1);
                if (std::all_of(row.begin(), row.end(),
                                [](i64 v) { return v == 0; }))
                    continue;
                rows.push_back(row);
            }
    for (i64 slack : {i64{1}, i64{n}}) {
        std::vector<std::vector<i64>> scaled = rows;
        for (auto& rr : scaled) rr[cols] *= slack;
        auto sol = lin::solve_mod_rows(scaled, cols, M * slack);
        if (!sol.solvable) continue;
        ExtensionWitness w;
        w.ctx = sc;
        w.sigma = rescale_cochain(sigma, slack);
        w.psi = Cochain::zero(sc->T, action_module(*sc, M * slack), 1);
        for (int t = 1; t < nt; ++t)
            for (int a = 1; a < na; ++a)
                w.psi.set({t}, sol.particular[pcol(t, a)], a);
        w.nu = Cochain::zero(sc->T, CoeffModule::roots(M * slack, sc->T), 2);
        for (int t = 1; t < nt; ++t)
            for (int t2 = 1; t2 < nt; ++t2)
                w.nu.set({t, t2}, sol.particular[ncol(t, t2)]);
        w.psi.reduce();
        w.nu.reduce();
        return w;
    }
    return std::nullopt;
}

bool extension_is_coboundary(const ExtensionWitness& w, const Cochain& eta) {
    const SplitContext& sc = *w.ctx;
    require_degree(eta, 1, "coboundary test");
    i64 M = w.sigma.mod.M;
    if (eta.mod.M != M) throw InvalidInput("coboundary test: modulus mismatch");
    if (!cochains_equal(coboundary_left(eta), w.sigma))
        throw InvalidInput("coboundary test: eta does not bound sigma");

    int na = sc.Ag->n, nt = sc.T->n;
    int vc = na - 1;  // columns for c (indexby a-1), then f (index t-1)
    Mat A((na - 1) * (na - 1) + (nt - 1) * (na - 1) + (nt - 1) * (nt - 1),
          (na - 1) + (nt - 1));
    std::vector<i64> rhs(static_cast<size_t>(A.rows), 0);
    int row = 0;
    auto ccol = [&](int a) { return a - 1; };       // a >= 1
    auto fcol = [&](int t) { return vc + t - 1; };  // t >= 1
    for (int a = 1; a < na; ++a)
        for (int b = 1; b < na; ++b) {
            A.at(row, ccol(a)) += 1;
            A.at(row, ccol(b)) += 1;
            int ab = sc.Ag->op(a, b);
            if (ab != 0) A.at(row, ccol(ab)) -= 1;
            rhs[row] = w.sigma.get({a, b});
            ++row;
        }
    for (int t = 1; t < nt; ++t)
        for (int a = 1; a < na; ++a) {
            int ta = sc.act(t, a);
            if (ta != 0) A.at(row, ccol(ta)) += 1;
            A.at(row, ccol(a)) -= 1;
            rhs[row] = w.psi.get({t}, a);
            ++row;
        }
    for (int t = 1; t < nt; ++t)
        for (int t2 = 1; t2 < nt; ++t2) {
            A.at(row, fcol(t)) += 1;
            A.at(row, fcol(t2)) += 1;
            int tt = sc.T->op(t, t2);
            if (tt != 0) A.at(row, fcol(tt)) -= 1;
            int r = sc.rho(t, t2);
            if (r != 0) A.at(row, ccol(r)) -= 1;
            rhs[row] = w.nu.get({t, t2});
            ++row;
        }
    for (i64 slack : {i64{1}, i64{sc.S->n}}) {
        std::vector<i64> b = rhs;
        for (i64& v : b) v *= slack;
        if (lin::solve_mod(A, b, M * slack).solvable) return true;
    }
    return false;
}

Cochain omega_variant(const ExtensionWitness& w, const Cochain& sigma_full,
                      const Cochain& h) {
    const SplitContext& sc = *w.ctx;
    require_degree(sigma_full, 2, "twisted extension");
    require_degree(h, 2, "twisted extension");
    if (h.G->n != sc.S->n)
        throw InvalidInput("twisted extension: shift must live on S");
    if (sigma_full.mod.M != w.sigma.mod.M || h.mod.M != w.sigma.mod.M)
        throw InvalidInput("twisted extension: modulus mismatch");
    Cochain haa = restrict_cochain(h, sc.A);
    if (!cochains_equal(cochain_sub(sigma_full, haa), w.sigma))
        throw InvalidInput(
            "twisted extension: witness does not describe sigma - h|_A");
    Cochain mu = cochain_add(extend_cocycle(w), h);
    Cochain want = coboundary_left(h);
    if (!cochains_equal(coboundary_left(mu), want))
        throw VerificationFailure("twisted extension misses its coboundary");
    for (int a = 0; a < sc.Ag->n; ++a)
        for (int b = 0; b < sc.Ag->n; ++b)
            if (mod_norm(mu.get({sc.encode(a, 0), sc.encode(b, 0)}) -
                             sigma_full.get({a, b}),
                         w.sigma.mod.M) != 0)
                throw VerificationFailure(
                    "twisted extension does not restrict to its source");
    return mu;
}

}  // namespace fusext
