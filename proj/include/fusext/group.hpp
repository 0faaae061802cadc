#pragma once

// Finite groups as validated multiplication tables, subgroups, quotients,
// coset spaces with sections, twisted semidirect products, morphism search.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusext {

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int max_group_order();  // FUSEXT_MAX_ORDER, default 64

struct FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

struct FiniteGroup {
    int n = 1;
    std::vector<int> mult;          // n*n, identity is element 0
    std::vector<int> inverse_of;    // n
    std::vector<std::string> names; // optional labels

    int op(int a, int b) const { return mult[static_cast<size_t>(a) * n + b]; }
    int inv(int a) const { return inverse_of[a]; }
    int id() const { return 0; }
    int conj(int g, int x) const { return op(op(g, x), inv(g)); }  // g x g^-1
    int order_of(int a) const;
    int exponent() const;
    bool is_abelian() const;
    std::string name(int a) const;

    // Validates closure/associativity/identity/inverses; relabels so the
    // identity is element 0.
    static GroupPtr from_mult_table(const std::vector<std::vector<int>>& table,
                                    std::vector<std::string> names = {});
    static GroupPtr cyclic(int m);
    static GroupPtr klein4();
    static GroupPtr dihedral(int p);  // order 2p
    static GroupPtr alt4();
    static GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);
    static GroupPtr from_family(const std::string& family_id);

    std::vector<int> minimal_generators() const;
};

GroupPtr opposite(const GroupPtr& g);

struct Subgroup {
    GroupPtr G;
    std::vector<int> elems;  // sorted, elems[0] == 0
    std::vector<int> pos;    // size G->n, index into elems or -1

    Subgroup() = default;
    Subgroup(GroupPtr g, std::vector<int> members);
    int order() const { return static_cast<int>(elems.size()); }
    bool contains(int x) const { return pos[x] >= 0; }
    bool is_normal() const;
    bool is_abelian() const;
    GroupPtr as_group() const;  // intrinsic table, element i = elems[i]
};

struct GroupMap {
    GroupPtr src, dst;
    std::vector<int> img;
    bool anti = false;  // anti-homomorphism: f(xy) = f(y)f(x)

    int operator()(int x) const { return img[x]; }
    bool is_valid() const;
    bool is_bijective() const;
    GroupMap compose(const GroupMap& inner) const;  // this ∘ inner
    GroupMap inverse_map() const;
    static GroupMap identity(const GroupPtr& g);
    static GroupMap inversion(const GroupPtr& g);  // x -> x^{-1}, anti
};

std::vector<GroupMap> automorphisms(const GroupPtr& g);
std::vector<GroupMap> anti_automorphisms(const GroupPtr& g);
std::optional<GroupMap> is_isomorphic(const GroupPtr& g, const GroupPtr& h);

std::vector<Subgroup> all_subgroups(const GroupPtr& g);
std::vector<Subgroup> abelian_normal_subgroups(const GroupPtr& g);

// Quotient S/A for normal A, with identity coset relabeled to 0.
struct QuotientData {
    GroupPtr T;
    std::vector<int> proj;              // S -> T
    std::vector<std::vector<int>> coset;  // per T element, members in S
};
QuotientData quotient(const GroupPtr& S, const Subgroup& A);

// Left cosets gH with left S-action s.(gH) = (sg)H, a section u (u[0]=id)
// and the kappa cocycle: s*u(M) = u(s.M)*kappa(M,s), kappa in H.
struct CosetSpace {
    GroupPtr G;
    Subgroup H;
    int m = 1;
    std::vector<int> coset_of;  // per group element
    std::vector<int> u;         // per coset, representative
    std::vector<int> act_;      // m*n: act(s, M)
    std::vector<int> kappa_;    // n*m: kappa(M, s), group element of H

    CosetSpace() = default;
    CosetSpace(GroupPtr g, Subgroup h, std::vector<int> section = {});
    int act(int s, int M) const { return act_[static_cast<size_t>(s) * m + M]; }
    int kappa(int M, int s) const { return kappa_[static_cast<size_t>(s) * m + M]; }
};

// Twisted semidirect product A x|_rho T: (a,t)(a',t') = (a * t.a' * rho(t,t'), tt').
// action[t] is an automorphism image table of A; rho is normalized and must
// satisfy the 2-cocycle law kappa-style: rho(t,t') rho(tt',t'') = (t.rho(t',t'')) rho(t,t't'').
struct TwistedProduct {
    GroupPtr G;
    std::vector<int> embed_a;   // A -> G
    std::vector<int> section_t; // T -> G
};
TwistedProduct twisted_semidirect(const GroupPtr& A, const GroupPtr& T,
                                  const std::vector<std::vector<int>>& action,
                                  const std::vector<std::vector<int>>& rho);

// Decompose S along abelian normal A: action of T=S/A on A by conjugation,
// rho(t,t') = u(t)u(t')u(tt')^{-1}, and the coset space with the chosen
// section. Prefers a section with rho == 1 (a complement) when one exists.
struct SplitData {
    QuotientData q;
    CosetSpace cosets;                    // right data: section indexed by T
    std::vector<std::vector<int>> action; // per t, automorphism of A (images on A members)
    std::vector<std::vector<int>> rho;    // T x T -> element of A
    bool split = false;                   // rho identically trivial
};
SplitData split_as_twisted_product(const GroupPtr& S, const Subgroup& A);

}  // namespace fusext
