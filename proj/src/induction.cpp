#include "fusext/induction.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace fusext {

using lin::i64;
using lin::Mat;

namespace {

i64 mod_norm(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// Index of a subgroup element inside H.as_group() coordinates.
int local_index(const Subgroup& H, int g) {
    int i = H.pos[g];
    if (i < 0) throw InvalidInput("element escaped the subgroup");
    return i;
}

void require_plain_roots(const Cochain& f, const char* what) {
    if (!f.mod.roots_carrier || f.mod.width != 1 ||
        f.mod.side != ActionSide::trivial)
        throw InvalidInput(std::string(what) +
                           " must have plain roots-of-unity coefficients");
}

void require_subgroup_cochain(const Cochain& f, const CosetSpace& cs,
                              const char* what) {
    require_plain_roots(f, what);
    if (f.G->n != cs.H.order())
        throw InvalidInput(std::string(what) +
                           " must live on the coset-space subgroup");
}

// omega as a constant-in-slot cochain in the coinduced module.
Cochain constant_slots(const Cochain& omega, const CoeffModule& mod) {
    Cochain out = Cochain::zero(omega.G, mod, omega.degree);
    int w = mod.width;
    for (size_t t = 0; t < out.tuples(); ++t)
        for (int x = 0; x < w; ++x)
            out.values[t * static_cast<size_t>(w) + x] = omega.values[t];
    out.reduce();
    return out;
}

// Evaluation of a coinduced cochain at one coset slot, restricted to the
// subgroup, as a plain cochain on H.as_group().
Cochain eval_slot_on_subgroup(const Cochain& f, const Subgroup& H, int slot) {
    GroupPtr Hg = H.as_group();
    Cochain out = Cochain::zero(Hg, CoeffModule::roots(f.mod.M, Hg), f.degree);
    int hn = Hg->n;
    std::vector<int> s(f.degree, 0), lifted(f.degree);
    size_t t = 0;
    while (true) {
        for (int i = 0; i < f.degree; ++i) lifted[i] = H.elems[s[i]];
        out.values[t] = f.get(lifted, slot);
        ++t;
        int i = f.degree - 1;
        while (i >= 0 && ++s[i] == hn) s[i--] = 0;
        if (i < 0) break;
    }
    out.reduce();
    return out;
}

struct BasePair {
    i64 slack = 1;
    Cochain mu_tilde0;  // coinduced, modulus M*slack
    Cochain mu0;        // on H.as_group(), modulus M*slack
};

std::string base_key(const Cochain& omega, const CosetSpace& cs) {
    std::ostringstream os;
    os << cs.G->n << '/';
    for (int a = 0; a < cs.G->n; ++a)
        for (int b = 0; b < cs.G->n; ++b) os << cs.G->op(a, b) << ',';
    os << '|';
    for (int e : cs.H.elems) os << e << ',';
    os << '|' << omega.mod.M << '|';
    for (i64 v : omega.values) os << v << ',';
    return os.str();
}

const BasePair& cached_base_pair(const Cochain& omega, const CosetSpace& cs) {
    static std::map<std::string, BasePair> cache;
    static std::mutex mu;
    std::string key = base_key(omega, cs);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    Cochain big = constant_slots(omega, coinduced_module(cs, omega.mod.M));
    std::optional<Cochain> sol = solve_coboundary(big, 1);
    i64 slack = 1;
    if (!sol) {
        slack = cs.G->n;
        sol = solve_coboundary(big, slack);
    }
    if (!sol)
        throw NoBaseSolution(
            "the twist does not trivialize over the coinduced module");
    BasePair bp;
    bp.slack = slack;
    bp.mu_tilde0 = std::move(*sol);
    bp.mu0 = eval_slot_on_subgroup(bp.mu_tilde0, cs.H, cs.coset_of[0]);
    return cache.emplace(std::move(key), std::move(bp)).first->second;
}

std::string tuple_text(std::initializer_list<int> args) {
    std::string s = "(";
    bool first = true;
    for (int a : args) {
        if (!first) s += ",";
        s += std::to_string(a);
        first = false;
    }
    return s + ")";
}

}  // namespace

CoeffModule coinduced_module(const CosetSpace& cs, i64 M) {
    std::vector<std::vector<int>> perm(cs.G->n, std::vector<int>(cs.m));
    for (int g = 0; g < cs.G->n; ++g)
        for (int Mo = 0; Mo < cs.m; ++Mo) perm[g][Mo] = cs.act(g, Mo);
    return CoeffModule::fun_space(M, cs.G, ActionSide::right, std::move(perm));
}

Cochain shapiro_phi1(const Cochain& rho, const CosetSpace& cs) {
    require_subgroup_cochain(rho, cs, "degree-1 transfer input");
    if (rho.degree != 1) throw InvalidInput("degree-1 transfer needs degree 1");
    if (!is_cocycle_right(rho)) throw NotACocycle("input is not a 1-cocycle");
    Cochain out =
        Cochain::zero(cs.G, coinduced_module(cs, rho.mod.M), 1);
    for (int s = 0; s < cs.G->n; ++s)
        for (int Mo = 0; Mo < cs.m; ++Mo)
            out.set({s}, rho.values[local_index(cs.H, cs.kappa(Mo, s))], Mo);
    out.reduce();
    return out;
}

Cochain shapiro_phi1_inv(const Cochain& beta, const CosetSpace& cs) {
    if (beta.degree != 1 || beta.G.get() != cs.G.get() ||
        beta.mod.width != cs.m)
        throw InvalidInput("degree-1 transfer inverse input shape mismatch");
    if (!is_cocycle_right(beta)) throw NotACocycle("input is not a 1-cocycle");
    GroupPtr Hg = cs.H.as_group();
    Cochain out = Cochain::zero(Hg, CoeffModule::roots(beta.mod.M, Hg), 1);
    int unit = cs.coset_of[0];
    for (int i = 0; i < Hg->n; ++i)
        out.values[i] = beta.get({cs.H.elems[i]}, unit);
    out.reduce();
    return out;
}

Cochain shapiro_phi2(const Cochain& mu, const CosetSpace& cs) {
    require_subgroup_cochain(mu, cs, "degree-2 transfer input");
    if (mu.degree != 2) throw InvalidInput("degree-2 transfer needs degree 2");
    if (!is_cocycle_right(mu)) throw NotACocycle("input is not a 2-cocycle");
    Cochain out =
        Cochain::zero(cs.G, coinduced_module(cs, mu.mod.M), 2);
    for (int s1 = 0; s1 < cs.G->n; ++s1)
        for (int s2 = 0; s2 < cs.G->n; ++s2)
            for (int Mo = 0; Mo < cs.m; ++Mo) {
                int a1 = local_index(cs.H, cs.kappa(cs.act(s2, Mo), s1));
                int a2 = local_index(cs.H, cs.kappa(Mo, s2));
                out.set({s1, s2}, mu.get({a1, a2}), Mo);
            }
    out.reduce();
    return out;
}

Cochain shapiro_phi2_inv(const Cochain& gamma, const CosetSpace& cs) {
    if (gamma.degree != 2 || gamma.G.get() != cs.G.get() ||
        gamma.mod.width != cs.m)
        throw InvalidInput("degree-2 transfer inverse input shape mismatch");
    if (!is_cocycle_right(gamma)) throw NotACocycle("input is not a 2-cocycle");
    return eval_slot_on_subgroup(gamma, cs.H, cs.coset_of[0]);
}

InducedCochain induce_omega_cochain(const Cochain& mu, const Cochain& omega,
                                    const CosetSpace& cs) {
    require_subgroup_cochain(mu, cs, "induction source");
    require_plain_roots(omega, "induction twist");
    if (mu.degree != 2 || omega.degree != 3)
        throw InvalidInput("induction needs a 2-cochain and a 3-cocycle");
    if (omega.G.get() != cs.G.get())
        throw InvalidInput("twist must live on the ambient group");
    if (mu.mod.M != omega.mod.M) throw InvalidInput("modulus mismatch");
    if (!mu.is_normalized() || !omega.is_normalized())
        throw InvalidInput("induction inputs must be normalized");
    if (!coboundary_left(omega).is_zero())
        throw NotACocycle("twist is not a 3-cocycle");
    if (!cochains_equal(coboundary_left(mu), restrict_cochain(omega, cs.H)))
        throw NotOmegaTwoCocycle(
            "source coboundary differs from the restricted twist");

    InducedCochain out;
    if (omega.is_zero()) {
        out.mu_tilde = shapiro_phi2(mu, cs);
        out.mu = mu;
        out.omega = omega;
        out.slack = 1;
        return out;
    }

    const BasePair& bp = cached_base_pair(omega, cs);
    out.slack = bp.slack;
    out.mu = rescale_cochain(mu, bp.slack);
    out.omega = rescale_cochain(omega, bp.slack);
    Cochain diff = cochain_sub(out.mu, bp.mu0);
    out.mu_tilde = cochain_add(bp.mu_tilde0, shapiro_phi2(diff, cs));

    Cochain want =
        constant_slots(out.omega, coinduced_module(cs, out.omega.mod.M));
    if (!cochains_equal(coboundary_right(out.mu_tilde), want))
        throw VerificationFailure("induced cochain misses its coboundary");
    return out;
}

BimoduleSpacePtr bimodule_space(const GroupPtr& S, const Subgroup& A,
                                const GroupMap& phi) {
    if (A.G.get() != S.get()) throw InvalidInput("subgroup of the wrong group");
    if (!A.is_normal() || !A.is_abelian())
        throw InvalidInput("need an abelian normal subgroup");
    auto sp = std::make_shared<BimoduleSpace>();
    sp->S = S;
    sp->A = A;
    sp->q = quotient(S, A);
    const GroupPtr& T = sp->q.T;
    if (static_cast<int>(phi.img.size()) != T->n)
        throw InvalidInput("map must act on the quotient");
    GroupMap phi_t = phi;
    phi_t.src = T;
    phi_t.dst = T;
    phi_t.anti = true;
    if (!phi_t.is_bijective())
        throw InvalidInput("quotient map must be a bijection");
    for (int x = 0; x < T->n; ++x)
        for (int y = 0; y < T->n; ++y)
            if (phi_t(T->op(x, y)) != T->op(phi_t(y), phi_t(x)))
                throw InvalidInput("quotient map must reverse products");
    sp->phi = phi_t;

    sp->G = FiniteGroup::direct_product(S, opposite(S));
    std::vector<int> members;
    for (int s = 0; s < S->n; ++s)
        for (int t = 0; t < S->n; ++t)
            if (phi_t(sp->q.proj[s]) == sp->q.proj[t])
                members.push_back(sp->pair(s, t));
    sp->L = Subgroup(sp->G, std::move(members));
    if (sp->L.order() != S->n * A.order())
        throw VerificationFailure("stabilizer subgroup has the wrong order");
    sp->X = CosetSpace(sp->G, sp->L);
    sp->base = sp->X.coset_of[0];

    GroupMap phi_inv = phi_t.inverse_map();
    sp->to_T.assign(sp->X.m, -1);
    sp->f1.assign(sp->X.m, -1);
    std::vector<int> seen(T->n, 0);
    for (int Mo = 0; Mo < sp->X.m; ++Mo) {
        int g = sp->X.u[Mo];
        int s1 = g / S->n, s2 = g % S->n;
        int p1 = sp->q.proj[s1], p2 = sp->q.proj[s2];
        sp->to_T[Mo] = T->op(T->inv(p2), phi_t(p1));
        sp->f1[Mo] = T->op(p1, phi_inv(T->inv(p2)));
        seen[sp->to_T[Mo]] += 1;
    }
    for (int c : seen)
        if (c != 1) throw VerificationFailure("cosets do not match the quotient");
    return sp;
}

namespace {

// Right-module structure on Fun(X, mu_M) through the left action s.M.
CoeffModule left_translation_module(const BimoduleSpace& sp, i64 M) {
    std::vector<std::vector<int>> perm(sp.S->n, std::vector<int>(sp.X.m));
    for (int s = 0; s < sp.S->n; ++s)
        for (int Mo = 0; Mo < sp.X.m; ++Mo) perm[s][Mo] = sp.lact(s, Mo);
    return CoeffModule::fun_space(M, sp.S, ActionSide::right, std::move(perm));
}

// Left-module structure on Fun(X, mu_M) through the right action M.s.
CoeffModule right_translation_module(const BimoduleSpace& sp, i64 M) {
    std::vector<std::vector<int>> perm(sp.S->n, std::vector<int>(sp.X.m));
    for (int s = 0; s < sp.S->n; ++s)
        for (int Mo = 0; Mo < sp.X.m; ++Mo) perm[s][Mo] = sp.ract(Mo, s);
    return CoeffModule::fun_space(M, sp.S, ActionSide::left, std::move(perm));
}

CoeffModule plain_slot_module(const BimoduleSpace& sp, i64 M) {
    CoeffModule m = CoeffModule::roots(M, sp.S);
    m.width = sp.X.m;
    return m;
}

void check_one_sided(const BimoduleTriple& t) {
    const BimoduleSpace& sp = *t.space;
    int n = sp.S->n, m = sp.X.m;
    i64 M = t.M();
    Cochain lhs = coboundary_right(t.mu_l);
    Cochain want = constant_slots(t.omega, t.mu_l.mod);
    if (!cochains_equal(lhs, want))
        throw CompatibilityFailure("left part misses its twisted cocycle law");
    Cochain rhs = coboundary_left(t.mu_r);
    Cochain want_r = constant_slots(t.omega, t.mu_r.mod);
    if (!cochains_equal(rhs, want_r))
        throw CompatibilityFailure("right part misses its twisted cocycle law");
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int Mo = 0; Mo < m; ++Mo) {
                    i64 a = t.mul(x, y, sp.ract(Mo, z)) +
                            t.chi(sp.S->op(x, y), Mo, z);
                    i64 b = t.chi(y, Mo, z) + t.chi(x, sp.lact(y, Mo), z) +
                            t.mul(x, y, Mo);
                    if (mod_norm(a - b, M) != 0)
                        throw CompatibilityFailure(
                            "left/pairing compatibility fails at " +
                            tuple_text({x, y, z, Mo}));
                    i64 c = t.mur(Mo, y, z) + t.chi(x, Mo, sp.S->op(y, z));
                    i64 d = t.chi(x, sp.ract(Mo, y), z) + t.chi(x, Mo, y) +
                            t.mur(sp.lact(x, Mo), y, z);
                    if (mod_norm(c - d, M) != 0)
                        throw CompatibilityFailure(
                            "right/pairing compatibility fails at " +
                            tuple_text({x, y, z, Mo}));
                }
}

}  // namespace

BimoduleTriple decompose_bimodule(const Cochain& mu_tilde,
                                  const BimoduleSpacePtr& sp,
                                  const Cochain& omega_S) {
    const BimoduleSpace& b = *sp;
    if (mu_tilde.degree != 2 || mu_tilde.G.get() != b.G.get() ||
        mu_tilde.mod.width != b.X.m)
        throw InvalidInput("two-sided cochain shape mismatch");
    require_plain_roots(omega_S, "twist");
    if (omega_S.degree != 3 || omega_S.G.get() != b.S.get())
        throw InvalidInput("twist must be a 3-cochain on the base group");
    if (omega_S.mod.M != mu_tilde.mod.M) throw InvalidInput("modulus mismatch");
    if (!coboundary_left(omega_S).is_zero())
        throw NotACocycle("twist is not a 3-cocycle");

    int n = b.S->n, m = b.X.m;
    i64 M = mu_tilde.mod.M;
    BimoduleTriple t;
    t.space = sp;
    t.omega = omega_S;
    t.mu_l = Cochain::zero(b.S, left_translation_module(b, M), 2);
    t.mu_r = Cochain::zero(b.S, right_translation_module(b, M), 2);
    t.chi_t = Cochain::zero(b.S, plain_slot_module(b, M), 2);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int Mo = 0; Mo < m; ++Mo) {
                t.mu_l.values[t.idx(x, y, Mo)] =
                    mu_tilde.get({b.pair(x, 0), b.pair(y, 0)}, Mo);
                // right part arguments arrive swapped: (M, x, y) reads the
                // two-sided value at ((e, y^op), (e, x^op)).
                t.mu_r.values[t.idx(x, y, Mo)] =
                    mu_tilde.get({b.pair(0, y), b.pair(0, x)}, Mo);
                t.chi_t.values[t.idx(x, y, Mo)] =
                    mu_tilde.get({b.pair(x, 0), b.pair(0, y)}, Mo);
            }

    for (int x1 = 0; x1 < n; ++x1)
        for (int x2 = 0; x2 < n; ++x2)
            for (int y1 = 0; y1 < n; ++y1)
                for (int y2 = 0; y2 < n; ++y2)
                    for (int Mo = 0; Mo < m; ++Mo) {
                        i64 lhs =
                            mu_tilde.get({b.pair(x1, x2), b.pair(y1, y2)}, Mo);
                        i64 rhs = t.chi(x1, b.lact(y1, Mo), y2) +
                                  t.mul(x1, y1, Mo) +
                                  t.mur(b.lact(b.S->op(x1, y1), Mo), y2, x2);
                        if (mod_norm(lhs - rhs, M) != 0)
                            throw CompatibilityFailure(
                                "two-sided value is not a product of parts at " +
                                tuple_text({x1, x2, y1, y2, Mo}));
                    }
    check_one_sided(t);
    return t;
}

namespace {

// The dual-reflected right part R(s,t)(M) = mu_r((s t M)*, s, t) as a
// cochain in the left part's module.
Cochain reflected_right(const BimoduleTriple& t, const std::vector<int>& dual) {
    const BimoduleSpace& sp = *t.space;
    Cochain R = Cochain::zero(sp.S, t.mu_l.mod, 2);
    for (int s = 0; s < sp.S->n; ++s)
        for (int u = 0; u < sp.S->n; ++u)
            for (int Mo = 0; Mo < sp.X.m; ++Mo)
                R.values[t.idx(s, u, Mo)] =
                    t.mur(dual[sp.lact(sp.S->op(s, u), Mo)], s, u);
    R.reduce();
    return R;
}

void check_dual(const BimoduleTriple& t, const std::vector<int>& dual) {
    const BimoduleSpace& sp = *t.space;
    if (static_cast<int>(dual.size()) != sp.X.m)
        throw InvalidInput("duality table size mismatch");
    std::vector<int> seen(sp.X.m, 0);
    for (int d : dual) {
        if (d < 0 || d >= sp.X.m) throw InvalidInput("duality table escapes X");
        seen[d] += 1;
    }
    for (int c : seen)
        if (c != 1) throw InvalidInput("duality table is not a permutation");
}

BimoduleTriple rescale_triple(const BimoduleTriple& t, i64 k) {
    BimoduleTriple out;
    out.space = t.space;
    out.mu_l = rescale_cochain(t.mu_l, k);
    out.mu_r = rescale_cochain(t.mu_r, k);
    out.chi_t = rescale_cochain(t.chi_t, k);
    out.omega = rescale_cochain(t.omega, k);
    return out;
}

}  // namespace

bool is_balanced(const BimoduleTriple& t, const std::vector<int>& dual) {
    check_dual(t, dual);
    return cochains_equal(t.mu_l, reflected_right(t, dual));
}

BimoduleTriple normalize_balanced(const BimoduleTriple& t,
                                  const std::vector<int>& dual) {
    check_dual(t, dual);
    const BimoduleSpace& sp = *t.space;
    Cochain R = reflected_right(t, dual);
    Cochain z = cochain_sub(t.mu_l, R);
    if (z.is_zero()) return t;
    if (!coboundary_right(z).is_zero())
        throw CompatibilityFailure(
            "balance defect is not a cocycle; duality table inconsistent");
    std::optional<Cochain> gamma = solve_coboundary(z, 1);
    i64 k = 1;
    if (!gamma) {
        k = sp.S->n;
        gamma = solve_coboundary(z, k);
    }
    if (!gamma) throw NoGammaSolution("no balancing 1-cochain exists");

    for (int sign : {+1, -1}) {
        BimoduleTriple out = rescale_triple(t, k);
        out.mu_l = rescale_cochain(R, k);
        for (int x = 0; x < sp.S->n; ++x)
            for (int y = 0; y < sp.S->n; ++y)
                for (int Mo = 0; Mo < sp.X.m; ++Mo)
                    out.chi_t.values[t.idx(x, y, Mo)] +=
                        sign * (gamma->get({x}, sp.ract(Mo, y)) -
                                gamma->get({x}, Mo));
        out.chi_t.reduce();
        try {
            check_one_sided(out);
        } catch (const CompatibilityFailure&) {
            if (sign > 0) continue;
            throw;
        }
        if (!is_balanced(out, dual))
            throw VerificationFailure("balancing left the parts unbalanced");
        return out;
    }
    throw NoGammaSolution("balancing produced incompatible pairing");
}

bool beta_is_split(const BimoduleTriple& t, const std::vector<int>& dual) {
    check_dual(t, dual);
    const BimoduleSpace& sp = *t.space;
    int n = sp.S->n, m = sp.X.m;
    i64 M = t.M();
    // Solve beta = d(eta) + d(xi) with eta, xi in C^1(S, Fun(X)): eta takes
    // its coboundary in the right complex with the left-translation action,
    // xi in the left complex with the right-translation action.
    //   (d eta)(z,x)(N) = eta(x,N) - eta(zx,N) + eta(z, x.N)
    //   (d xi )(z,x)(N) = xi(x, N.z) - xi(zx,N) + xi(z, N)
    // Unknown columns: eta at s*m+N, then xi at n*m + s*m+N.
    Mat A(n * n * m, 2 * n * m);
    std::vector<i64> rhs(static_cast<size_t>(n) * n * m, 0);
    for (int z = 0; z < n; ++z) {
        int zi = sp.S->inv(z);
        for (int x = 0; x < n; ++x) {
            int zx = sp.S->op(z, x);
            for (int N = 0; N < m; ++N) {
                int row = (z * n + x) * m + N;
                A.at(row, x * m + N) += 1;
                A.at(row, zx * m + N) -= 1;
                A.at(row, z * m + sp.lact(x, N)) += 1;
                A.at(row, n * m + x * m + sp.ract(N, z)) += 1;
                A.at(row, n * m + zx * m + N) -= 1;
                A.at(row, n * m + z * m + N) += 1;
                int Nmid = sp.lact(sp.S->inv(x), sp.ract(dual[N], zi));
                rhs[row] = mod_norm(t.chi(x, Nmid, z) - t.chi(z, N, x), M);
            }
        }
    }
    for (i64 slack : {i64{1}, i64{n}, i64{n} * m}) {
        std::vector<i64> b = rhs;
        for (i64& v : b) v *= slack;
        if (lin::solve_mod(A, b, M * slack).solvable) return true;
    }
    return false;
}

}  // namespace fusext
