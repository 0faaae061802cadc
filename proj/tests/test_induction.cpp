#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fusext/induction.hpp"

using namespace fusext;
using lin::i64;

namespace {

Subgroup klein_in_alt4(const GroupPtr& a4) {
    std::vector<int> members{0};
    for (int g = 1; g < a4->n; ++g)
        if (a4->op(g, g) == 0) members.push_back(g);
    return Subgroup(a4, members);
}

// All right 1-cocycles (characters) on a group at modulus M.
std::vector<Cochain> characters(const GroupPtr& g, i64 M) {
    std::vector<Cochain> out;
    Cochain c = Cochain::zero(g, CoeffModule::roots(M, g), 1);
    std::vector<i64> v(g->n - 1, 0);
    while (true) {
        for (int i = 1; i < g->n; ++i) c.values[i] = v[i - 1];
        if (is_cocycle_right(c)) out.push_back(c);
        int i = g->n - 2;
        while (i >= 0 && ++v[i] == M) v[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

bool triples_equal(const BimoduleTriple& a, const BimoduleTriple& b) {
    return cochains_equal(a.mu_l, b.mu_l) && cochains_equal(a.mu_r, b.mu_r) &&
           cochains_equal(a.chi_t, b.chi_t) && cochains_equal(a.omega, b.omega);
}

// Two-sided table over a one-coset space from separately chosen parts.
Cochain assemble_one_coset(const BimoduleSpacePtr& sp, const Cochain& mul,
                           const Cochain& mur, i64 M,
                           const std::vector<std::vector<i64>>& chi) {
    int n = sp->S->n;
    CoeffModule mod = coinduced_module(sp->X, M);
    Cochain mt = Cochain::zero(sp->G, mod, 2);
    for (int x1 = 0; x1 < n; ++x1)
        for (int x2 = 0; x2 < n; ++x2)
            for (int y1 = 0; y1 < n; ++y1)
                for (int y2 = 0; y2 < n; ++y2)
                    mt.set({sp->pair(x1, x2), sp->pair(y1, y2)},
                           chi[x1][y2] + mul.get({x1, y1}) + mur.get({y2, x2}),
                           0);
    mt.reduce();
    return mt;
}

}  // namespace

TEST_CASE("degree-1 transfer: round trips and cocycle condition") {
    GroupPtr d5 = FiniteGroup::dihedral(5);
    Subgroup rot(d5, {0, 1, 2, 3, 4});
    CosetSpace cs(d5, rot);
    auto chars = characters(rot.as_group(), 5);
    CHECK(chars.size() == 5);
    for (const auto& rho : chars) {
        Cochain beta = shapiro_phi1(rho, cs);
        CHECK(is_cocycle_right(beta));
        CHECK(cochains_equal(shapiro_phi1_inv(beta, cs), rho));
        if (rho.is_zero()) CHECK(beta.is_zero());
    }

    GroupPtr a4 = FiniteGroup::alt4();
    Subgroup v4 = klein_in_alt4(a4);
    CHECK(v4.order() == 4);
    CosetSpace cs2(a4, v4);
    auto chars2 = characters(v4.as_group(), 2);
    CHECK(chars2.size() == 4);
    for (const auto& rho : chars2) {
        Cochain beta = shapiro_phi1(rho, cs2);
        CHECK(is_cocycle_right(beta));
        CHECK(cochains_equal(shapiro_phi1_inv(beta, cs2), rho));
    }

    // a non-cocycle is rejected
    Cochain bad = Cochain::zero(rot.as_group(), CoeffModule::roots(5, rot.as_group()), 1);
    bad.set({1}, 1);
    bad.set({2}, 1);
    CHECK_THROWS_AS(shapiro_phi1(bad, cs), NotACocycle);
}

TEST_CASE("degree-2 transfer on the Klein subgroup of the alternating group") {
    GroupPtr a4 = FiniteGroup::alt4();
    Subgroup v4 = klein_in_alt4(a4);
    CosetSpace cs(a4, v4);
    GroupPtr v4g = v4.as_group();

    CohomologyGroup h2 = cohomology(v4g, CoeffModule::roots(2, v4g), 2);
    REQUIRE(h2.invariant_factors == std::vector<i64>{2});
    const Cochain& gen = h2.generators[0];
    REQUIRE(is_cocycle_right(gen));
    REQUIRE_FALSE(solve_coboundary(gen, v4g->n).has_value());

    Cochain big = shapiro_phi2(gen, cs);
    CHECK(is_cocycle_right(big));
    CHECK(cochains_equal(shapiro_phi2_inv(big, cs), gen));

    Cochain zero = Cochain::zero(v4g, CoeffModule::roots(2, v4g), 2);
    CHECK(shapiro_phi2(zero, cs).is_zero());

    Cochain bad = zero;
    bad.set({1, 2}, 1);
    if (!is_cocycle_right(bad)) CHECK_THROWS_AS(shapiro_phi2(bad, cs), NotACocycle);
}

TEST_CASE("induction with vanishing twist reduces to the transfer") {
    GroupPtr a4 = FiniteGroup::alt4();
    Subgroup v4 = klein_in_alt4(a4);
    CosetSpace cs(a4, v4);
    GroupPtr v4g = v4.as_group();
    Cochain gen = cohomology(v4g, CoeffModule::roots(2, v4g), 2).generators[0];
    Cochain omega = Cochain::zero(a4, CoeffModule::roots(2, a4), 3);

    InducedCochain ind = induce_omega_cochain(gen, omega, cs);
    CHECK(ind.slack == 1);
    CHECK(cochains_equal(ind.mu_tilde, shapiro_phi2(gen, cs)));
    CHECK(coboundary_right(ind.mu_tilde).is_zero());
    CHECK(cochains_equal(shapiro_phi2_inv(ind.mu_tilde, cs), gen));

    // trivial source stays trivial
    Cochain zero = Cochain::zero(v4g, CoeffModule::roots(2, v4g), 2);
    CHECK(induce_omega_cochain(zero, omega, cs).mu_tilde.is_zero());
}

TEST_CASE("induction with a nonvanishing twist along an index-two subgroup") {
    GroupPtr c4 = FiniteGroup::cyclic(4);
    Subgroup H(c4, {0, 2});
    CosetSpace cs(c4, H);
    GroupPtr h = H.as_group();

    CohomologyGroup h3 = cohomology(c4, CoeffModule::roots(4, c4), 3);
    REQUIRE(h3.invariant_factors == std::vector<i64>{4});
    CHECK(cohomology(h, CoeffModule::roots(4, h), 3).order() == 2);

    std::vector<int> trivializable;
    for (int c = 0; c < 4; ++c) {
        Cochain omega = h3.generators[0];
        for (auto& v : omega.values) v *= c;
        omega.reduce();
        Cochain res = restrict_cochain(omega, H);

        std::optional<Cochain> mu;
        i64 slack = 1;
        for (i64 k : {i64{1}, i64{2}, i64{4}}) {
            mu = solve_coboundary(res, k);
            if (mu) {
                slack = k;
                break;
            }
        }
        if (!mu) continue;
        trivializable.push_back(c);
        Cochain omega_k = rescale_cochain(omega, slack);
        if (omega_k.is_zero()) continue;

        InducedCochain ind = induce_omega_cochain(*mu, omega_k, cs);
        // twisted cocycle law in every slot
        Cochain d = coboundary_right(ind.mu_tilde);
        for (size_t t = 0; t < ind.omega.tuples(); ++t)
            for (int x = 0; x < ind.mu_tilde.mod.width; ++x)
                CHECK(d.values[t * d.per_tuple() + x] == ind.omega.values[t]);
        // unit-coset restriction recovers the source
        Cochain back = Cochain::zero(h, CoeffModule::roots(ind.mu.mod.M, h), 2);
        int unit = cs.coset_of[0];
        for (int i = 0; i < h->n; ++i)
            for (int j = 0; j < h->n; ++j)
                back.set({i, j},
                         ind.mu_tilde.get({H.elems[i], H.elems[j]}, unit));
        back.reduce();
        CHECK(cochains_equal(back, ind.mu));

        // a source with the wrong coboundary is rejected
        Cochain wrong = Cochain::zero(h, CoeffModule::roots(omega_k.mod.M, h), 2);
        if (!cochains_equal(coboundary_left(wrong), restrict_cochain(omega_k, H)))
            CHECK_THROWS_AS(induce_omega_cochain(wrong, omega_k, cs),
                            NotOmegaTwoCocycle);
    }
    // exactly the index-two subgroup of twist classes restricts trivially
    CHECK(trivializable == std::vector<int>{0, 2});
}

TEST_CASE("two-sided geometry: stabilizer, coset labels, commuting actions") {
    struct Case {
        GroupPtr S;
        std::vector<int> A;
    };
    GroupPtr v4 = FiniteGroup::klein4();
    GroupPtr d3 = FiniteGroup::dihedral(3);
    for (const auto& c : {Case{v4, {0, 3}}, Case{d3, {0, 1, 2}}}) {
        Subgroup A(c.S, c.A);
        QuotientData q = quotient(c.S, A);
        BimoduleSpacePtr sp =
            bimodule_space(c.S, A, GroupMap::identity(q.T));
        CHECK(sp->L.order() == c.S->n * A.order());
        CHECK(sp->X.m == q.T->n);
        int n = c.S->n, m = sp->X.m;
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
                for (int M = 0; M < m; ++M)
                    CHECK(sp->lact(s, sp->ract(M, t)) ==
                          sp->ract(sp->lact(s, M), t));
        // the abelian subgroup fixes every coset from both sides
        for (int a : c.A)
            for (int M = 0; M < m; ++M) {
                CHECK(sp->lact(a, M) == M);
                CHECK(sp->ract(M, a) == M);
            }
        // coset labels: the unit coset carries the unit of the quotient
        CHECK(sp->to_T[sp->base] == 0);
        CHECK(sp->f1[sp->base] == 0);
    }

    // a non-normal subgroup is rejected
    CHECK_THROWS_AS(bimodule_space(d3, Subgroup(d3, {0, 3}),
                                   GroupMap::identity(FiniteGroup::cyclic(3))),
                    InvalidInput);
}

TEST_CASE("decomposition and balancing over a single coset") {
    GroupPtr c4 = FiniteGroup::cyclic(4);
    Subgroup A(c4, {0, 1, 2, 3});
    QuotientData q = quotient(c4, A);
    BimoduleSpacePtr sp = bimodule_space(c4, A, GroupMap::identity(q.T));
    REQUIRE(sp->X.m == 1);

    std::mt19937 rng(20240817);
    CoeffModule plain = CoeffModule::roots(4, c4);
    Cochain mul = coboundary_left(random_cochain(c4, plain, 1, rng));
    Cochain mur = coboundary_left(random_cochain(c4, plain, 1, rng));
    std::vector<std::vector<i64>> chi(4, std::vector<i64>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) chi[a][b] = (a * b) % 4;

    Cochain mt = assemble_one_coset(sp, mul, mur, 4, chi);
    Cochain omega = Cochain::zero(c4, plain, 3);
    BimoduleTriple t = decompose_bimodule(mt, sp, omega);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            CHECK(t.mul(x, y, 0) == mul.get({x, y}));
            CHECK(t.mur(0, x, y) == mur.get({x, y}));
            CHECK(t.chi(x, 0, y) == chi[x][y]);
        }

    // corrupting a generic cell breaks the product decomposition
    Cochain broken = mt;
    broken.set({sp->pair(1, 2), sp->pair(3, 1)},
               broken.get({sp->pair(1, 2), sp->pair(3, 1)}) + 1, 0);
    CHECK_THROWS_AS(decompose_bimodule(broken, sp, omega),
                    CompatibilityFailure);

    std::vector<int> dual{0};
    BimoduleTriple bal = normalize_balanced(t, dual);
    CHECK(is_balanced(bal, dual));
    i64 k = bal.M() / t.M();
    // balancing over one coset leaves the pairing untouched (up to rescale)
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            CHECK(bal.chi(x, 0, y) == lin::mod_norm(k * t.chi(x, 0, y), bal.M()));
    // idempotent
    CHECK(triples_equal(normalize_balanced(bal, dual), bal));
    CHECK(beta_is_split(bal, dual));

    CHECK_THROWS_AS(normalize_balanced(t, std::vector<int>{1}), InvalidInput);
}

TEST_CASE("decomposition with two cosets from bilinear sources") {
    GroupPtr v4 = FiniteGroup::klein4();
    Subgroup A(v4, {0, 3});
    QuotientData q = quotient(v4, A);
    BimoduleSpacePtr sp = bimodule_space(v4, A, GroupMap::identity(q.T));
    REQUIRE(sp->X.m == 2);

    GroupPtr Lg = sp->L.as_group();
    AbelianCoords co = abelian_coords(Lg);
    REQUIRE(co.d == std::vector<i64>({2, 2, 2}));

    CosetSpace cs(sp->G, sp->L);
    Cochain omega_g = Cochain::zero(sp->G, CoeffModule::roots(2, sp->G), 3);
    Cochain omega_s = Cochain::zero(v4, CoeffModule::roots(2, v4), 3);
    int a = sp->A.elems[1];  // the nonidentity element of A

    int decomposable = 0, nontrivial_pairing = 0;
    for (int form = 0; form < 512; ++form) {
        Cochain mu = Cochain::zero(Lg, CoeffModule::roots(2, Lg), 2);
        for (int i = 0; i < Lg->n; ++i)
            for (int j = 0; j < Lg->n; ++j) {
                i64 v = 0;
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c)
                        v += ((form >> (3 * r + c)) & 1) * co.coords_of[i][r] *
                             co.coords_of[j][c];
                mu.set({i, j}, v % 2);
            }
        REQUIRE(is_cocycle_right(mu));

        InducedCochain ind = induce_omega_cochain(mu, omega_g, cs);
        BimoduleTriple t;
        try {
            t = decompose_bimodule(ind.mu_tilde, sp, omega_s);
        } catch (const CompatibilityFailure&) {
            continue;
        }
        ++decomposable;

        // the pairing restricted to the abelian subgroup is constant in the
        // coset slot and matches its unit-coset value
        for (int M = 0; M < 2; ++M)
            CHECK(t.chi(a, M, a) == t.chi(a, sp->base, a));
        if (t.chi(a, sp->base, a) != 0) ++nontrivial_pairing;

        bool balanced_somehow = false;
        for (std::vector<int> dual : {std::vector<int>{0, 1}, {1, 0}}) {
            try {
                BimoduleTriple bal = normalize_balanced(t, dual);
                CHECK(is_balanced(bal, dual));
                CHECK(triples_equal(normalize_balanced(bal, dual), bal));
                i64 k = bal.M() / t.M();
                CHECK(bal.chi(a, sp->base, a) ==
                      lin::mod_norm(k * t.chi(a, sp->base, a), bal.M()));
                CHECK(beta_is_split(bal, dual));
                balanced_somehow = true;
            } catch (const NoGammaSolution&) {
            } catch (const CompatibilityFailure&) {
            }
        }
        CHECK(balanced_somehow);
    }
    MESSAGE("decomposable bilinear sources: ", decomposable,
            ", with nontrivial pairing: ", nontrivial_pairing);
    CHECK(decomposable >= 1);
    CHECK(nontrivial_pairing >= 1);
}
