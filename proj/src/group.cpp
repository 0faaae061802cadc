#include "fusext/group.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>

namespace fusext {

int max_group_order() {
    if (const char* s = std::getenv("FUSEXT_MAX_ORDER")) {
        int v = std::atoi(s);
        if (v > 0) return v;
    }
    return 64;
}

int FiniteGroup::order_of(int a) const {
    int x = a, k = 1;
    while (x != 0) {
        x = op(x, a);
        ++k;
    }
    return k;
}

int FiniteGroup::exponent() const {
    long long e = 1;
    for (int a = 0; a < n; ++a) e = std::lcm(e, static_cast<long long>(order_of(a)));
    return static_cast<int>(e);
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (op(a, b) != op(b, a)) return false;
    return true;
}

std::string FiniteGroup::name(int a) const {
    if (a < static_cast<int>(names.size()) && !names[a].empty()) return names[a];
    return "g" + std::to_string(a);
}

GroupPtr FiniteGroup::from_mult_table(const std::vector<std::vector<int>>& table,
                                      std::vector<std::string> names) {
    int n = static_cast<int>(table.size());
    if (n == 0) throw InvalidInput("empty multiplication table");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n) throw InvalidInput("multiplication table not square");
        for (int v : row)
            if (v < 0 || v >= n) throw InvalidInput("multiplication table entry out of range");
    }
    // Find the identity.
    int e = -1;
    for (int c = 0; c < n && e < 0; ++c) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) ok = table[c][x] == x && table[x][c] == x;
        if (ok) e = c;
    }
    if (e < 0) throw InvalidInput("multiplication table has no identity");
    // Relabel so the identity is 0 (swap labels 0 and e).
    std::vector<int> to_new(n), to_old(n);
    for (int i = 0; i < n; ++i) to_new[i] = to_old[i] = i;
    std::swap(to_new[0], to_new[e]);
    std::swap(to_old[0], to_old[e]);

    auto g = std::make_shared<FiniteGroup>();
    g->n = n;
    g->mult.assign(static_cast<size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            g->mult[static_cast<size_t>(a) * n + b] = to_new[table[to_old[a]][to_old[b]]];
    // Associativity.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g->op(g->op(a, b), c) != g->op(a, g->op(b, c)))
                    throw InvalidInput("multiplication table not associative");
    // Inverses.
    g->inverse_of.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (g->op(a, b) == 0 && g->op(b, a) == 0) {
                g->inverse_of[a] = b;
                break;
            }
        }
        if (g->inverse_of[a] < 0) throw InvalidInput("element without inverse");
    }
    if (!names.empty()) {
        if (static_cast<int>(names.size()) != n) throw InvalidInput("name list size mismatch");
        g->names.resize(n);
        for (int i = 0; i < n; ++i) g->names[i] = names[to_old[i]];
    }
    return g;
}

GroupPtr FiniteGroup::cyclic(int m) {
    if (m <= 0) throw InvalidInput("cyclic order must be positive");
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
    return from_mult_table(t);
}

GroupPtr FiniteGroup::klein4() { return direct_product(cyclic(2), cyclic(2)); }

GroupPtr FiniteGroup::dihedral(int p) {
    if (p < 1) throw InvalidInput("dihedral parameter must be >= 1");
    int n = 2 * p;
    // Elements: 0..p-1 rotations r^i, p..2p-1 reflections s r^i.
    auto enc = [p](int flip, int rot) { return flip * p + ((rot % p) + p) % p; };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int f1 = 0; f1 < 2; ++f1)
        for (int r1 = 0; r1 < p; ++r1)
            for (int f2 = 0; f2 < 2; ++f2)
                for (int r2 = 0; r2 < p; ++r2) {
                    // (s^f1 r^r1)(s^f2 r^r2) = s^(f1+f2) r^(r2 + (f2 ? -r1 : r1))
                    int rot = f2 ? (r2 - r1) : (r1 + r2);
                    t[enc(f1, r1)][enc(f2, r2)] = enc((f1 + f2) % 2, rot);
                }
    return from_mult_table(t);
}

GroupPtr FiniteGroup::alt4() {
    // Even permutations of {0,1,2,3}.
    std::vector<std::array<int, 4>> perms;
    std::array<int, 4> p{0, 1, 2, 3};
    do {
        int inv = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (p[i] > p[j]) ++inv;
        if (inv % 2 == 0) perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    int n = static_cast<int>(perms.size());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    auto find = [&](const std::array<int, 4>& q) {
        for (int i = 0; i < n; ++i)
            if (perms[i] == q) return i;
        return -1;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::array<int, 4> q;
            for (int i = 0; i < 4; ++i) q[i] = perms[a][perms[b][i]];
            t[a][b] = find(q);
        }
    return from_mult_table(t);
}

GroupPtr FiniteGroup::direct_product(const GroupPtr& a, const GroupPtr& b) {
    int n = a->n * b->n;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    auto enc = [&](int x, int y) { return x * b->n + y; };
    for (int x1 = 0; x1 < a->n; ++x1)
        for (int y1 = 0; y1 < b->n; ++y1)
            for (int x2 = 0; x2 < a->n; ++x2)
                for (int y2 = 0; y2 < b->n; ++y2)
                    t[enc(x1, y1)][enc(x2, y2)] = enc(a->op(x1, x2), b->op(y1, y2));
    return from_mult_table(t);
}

GroupPtr FiniteGroup::from_family(const std::string& family_id) {
    auto capped = [](GroupPtr g) {
        if (g->n > max_group_order())
            throw InvalidInput("group order " + std::to_string(g->n) +
                               " exceeds FUSEXT_MAX_ORDER");
        return g;
    };
    auto colon = family_id.find(':');
    std::string head = family_id.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : family_id.substr(colon + 1);
    if (head == "cyclic") return capped(cyclic(std::stoi(args)));
    if (head == "klein4") return capped(klein4());
    if (head == "dihedral") return capped(dihedral(std::stoi(args)));
    if (head == "alt") {
        if (std::stoi(args) != 4) throw InvalidInput("only alt:4 is built in");
        return capped(alt4());
    }
    if (head == "product") {
        auto comma = args.find(',');
        if (comma == std::string::npos) throw InvalidInput("product:a,b needs two orders");
        return capped(direct_product(cyclic(std::stoi(args.substr(0, comma))),
                                     cyclic(std::stoi(args.substr(comma + 1)))));
    }
    throw InvalidInput("unknown group family: " + family_id);
}

std::vector<int> FiniteGroup::minimal_generators() const {
    std::vector<int> gens;
    std::vector<char> in_closure(n, 0);
    in_closure[0] = 1;
    int covered = 1;
    while (covered < n) {
        int pick = -1;
        for (int x = 1; x < n; ++x)
            if (!in_closure[x]) {
                pick = x;
                break;
            }
        gens.push_back(pick);
        // Close.
        std::vector<int> frontier{pick};
        in_closure[pick] = 1;
        ++covered;
        while (!frontier.empty()) {
            int x = frontier.back();
            frontier.pop_back();
            for (int y = 0; y < n; ++y) {
                if (!in_closure[y]) continue;
                for (int z : {op(x, y), op(y, x)}) {
                    if (!in_closure[z]) {
                        in_closure[z] = 1;
                        ++covered;
                        frontier.push_back(z);
                    }
                }
            }
        }
    }
    return gens;
}

GroupPtr opposite(const GroupPtr& g) {
    int n = g->n;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = g->op(b, a);
    return FiniteGroup::from_mult_table(t, g->names);
}

Subgroup::Subgroup(GroupPtr g, std::vector<int> members) : G(std::move(g)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    elems = std::move(members);
    if (elems.empty() || elems[0] != 0) throw InvalidInput("subgroup must contain the identity");
    pos.assign(G->n, -1);
    for (size_t i = 0; i < elems.size(); ++i) {
        if (elems[i] < 0 || elems[i] >= G->n) throw InvalidInput("subgroup member out of range");
        pos[elems[i]] = static_cast<int>(i);
    }
    for (int a : elems) {
        if (!contains(G->inv(a))) throw InvalidInput("subgroup not closed under inverse");
        for (int b : elems)
            if (!contains(G->op(a, b))) throw InvalidInput("subgroup not closed under product");
    }
}

bool Subgroup::is_normal() const {
    for (int g = 0; g < G->n; ++g)
        for (int a : elems)
            if (!contains(G->conj(g, a))) return false;
    return true;
}

bool Subgroup::is_abelian() const {
    for (int a : elems)
        for (int b : elems)
            if (G->op(a, b) != G->op(b, a)) return false;
    return true;
}

GroupPtr Subgroup::as_group() const {
    int k = order();
    std::vector<std::vector<int>> t(k, std::vector<int>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) t[i][j] = pos[G->op(elems[i], elems[j])];
    std::vector<std::string> nm(k);
    for (int i = 0; i < k; ++i) nm[i] = G->name(elems[i]);
    return FiniteGroup::from_mult_table(t, nm);
}

bool GroupMap::is_valid() const {
    if (static_cast<int>(img.size()) != src->n) return false;
    if (img[0] != 0) return false;
    for (int a = 0; a < src->n; ++a)
        for (int b = 0; b < src->n; ++b) {
            int lhs = img[src->op(a, b)];
            int rhs = anti ? dst->op(img[b], img[a]) : dst->op(img[a], img[b]);
            if (lhs != rhs) return false;
        }
    return true;
}

bool GroupMap::is_bijective() const {
    if (src->n != dst->n) return false;
    std::vector<char> seen(dst->n, 0);
    for (int v : img) {
        if (seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

GroupMap GroupMap::compose(const GroupMap& inner) const {
    if (inner.dst != src) throw InvalidInput("compose: range/domain mismatch");
    GroupMap r;
    r.src = inner.src;
    r.dst = dst;
    r.anti = anti != inner.anti;
    r.img.resize(inner.src->n);
    for (int x = 0; x < inner.src->n; ++x) r.img[x] = img[inner.img[x]];
    return r;
}

GroupMap GroupMap::inverse_map() const {
    if (!is_bijective()) throw InvalidInput("inverse_map: not bijective");
    GroupMap r;
    r.src = dst;
    r.dst = src;
    r.anti = anti;
    r.img.assign(dst->n, 0);
    for (int x = 0; x < src->n; ++x) r.img[img[x]] = x;
    return r;
}

GroupMap GroupMap::identity(const GroupPtr& g) {
    GroupMap r;
    r.src = r.dst = g;
    r.img.resize(g->n);
    std::iota(r.img.begin(), r.img.end(), 0);
    return r;
}

GroupMap GroupMap::inversion(const GroupPtr& g) {
    GroupMap r;
    r.src = r.dst = g;
    r.anti = true;
    r.img.resize(g->n);
    for (int x = 0; x < g->n; ++x) r.img[x] = g->inv(x);
    return r;
}

namespace {

// Backtracking over images of a generating set; emits all isomorphisms G -> H.
void morphism_search(const GroupPtr& G, const GroupPtr& H, const std::vector<int>& gens,
                     size_t k, std::vector<int>& img, std::vector<char>& defined,
                     std::vector<GroupMap>& out, bool stop_at_first) {
    if (stop_at_first && !out.empty()) return;
    if (k == gens.size()) {
        GroupMap m;
        m.src = G;
        m.dst = H;
        m.img = img;
        if (m.is_bijective() && m.is_valid()) out.push_back(std::move(m));
        return;
    }
    int g = gens[k];
    int og = G->order_of(g);
    for (int h = 0; h < H->n; ++h) {
        if (H->order_of(h) != og) continue;
        // Tentatively extend the partial map by closing under products.
        std::vector<int> img2 = img;
        std::vector<char> def2 = defined;
        img2[g] = h;
        def2[g] = 1;
        bool ok = true;
        bool grew = true;
        while (grew && ok) {
            grew = false;
            for (int a = 0; a < G->n && ok; ++a) {
                if (!def2[a]) continue;
                for (int b = 0; b < G->n && ok; ++b) {
                    if (!def2[b]) continue;
                    int ab = G->op(a, b);
                    int v = H->op(img2[a], img2[b]);
                    if (def2[ab]) {
                        if (img2[ab] != v) ok = false;
                    } else {
                        img2[ab] = v;
                        def2[ab] = 1;
                        grew = true;
                    }
                }
            }
        }
        if (!ok) continue;
        morphism_search(G, H, gens, k + 1, img2, def2, out, stop_at_first);
        if (stop_at_first && !out.empty()) return;
    }
}

std::vector<GroupMap> isomorphisms(const GroupPtr& G, const GroupPtr& H, bool stop_at_first) {
    std::vector<GroupMap> out;
    if (G->n != H->n) return out;
    std::vector<int> gens = G->minimal_generators();
    std::vector<int> img(G->n, 0);
    std::vector<char> defined(G->n, 0);
    defined[0] = 1;
    morphism_search(G, H, gens, 0, img, defined, out, stop_at_first);
    return out;
}

}  // namespace

std::vector<GroupMap> automorphisms(const GroupPtr& g) { return isomorphisms(g, g, false); }

std::vector<GroupMap> anti_automorphisms(const GroupPtr& g) {
    auto autos = automorphisms(g);
    GroupMap inv = GroupMap::inversion(g);
    std::vector<GroupMap> out;
    out.reserve(autos.size());
    for (const auto& a : autos) out.push_back(inv.compose(a));
    return out;
}

std::optional<GroupMap> is_isomorphic(const GroupPtr& g, const GroupPtr& h) {
    auto v = isomorphisms(g, h, true);
    if (v.empty()) return std::nullopt;
    return v.front();
}

std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
    std::set<std::vector<int>> found;
    found.insert({0});
    std::vector<std::vector<int>> frontier{{0}};
    auto closure = [&](std::vector<int> seed) {
        std::vector<char> in(g->n, 0);
        for (int x : seed) in[x] = 1;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int a = 0; a < g->n; ++a) {
                if (!in[a]) continue;
                if (!in[g->inv(a)]) {
                    in[g->inv(a)] = 1;
                    grew = true;
                }
                for (int b = 0; b < g->n; ++b)
                    if (in[b] && !in[g->op(a, b)]) {
                        in[g->op(a, b)] = 1;
                        grew = true;
                    }
            }
        }
        std::vector<int> out;
        for (int x = 0; x < g->n; ++x)
            if (in[x]) out.push_back(x);
        return out;
    };
    while (!frontier.empty()) {
        auto base = frontier.back();
        frontier.pop_back();
        for (int x = 1; x < g->n; ++x) {
            auto seed = base;
            seed.push_back(x);
            auto cl = closure(std::move(seed));
            if (found.insert(cl).second) frontier.push_back(cl);
        }
    }
    std::vector<Subgroup> out;
    for (const auto& members : found) out.emplace_back(g, members);
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elems < b.elems;
    });
    return out;
}

std::vector<Subgroup> abelian_normal_subgroups(const GroupPtr& g) {
    std::vector<Subgroup> out;
    for (auto& h : all_subgroups(g))
        if (h.is_normal() && h.is_abelian()) out.push_back(std::move(h));
    return out;
}

QuotientData quotient(const GroupPtr& S, const Subgroup& A) {
    if (A.G != S) throw InvalidInput("quotient: subgroup of a different group");
    if (!A.is_normal()) throw InvalidInput("quotient: subgroup not normal");
    QuotientData q;
    std::vector<int> coset_of(S->n, -1);
    std::vector<int> reps;
    for (int x = 0; x < S->n; ++x) {
        if (coset_of[x] >= 0) continue;
        int c = static_cast<int>(reps.size());
        reps.push_back(x);
        for (int a : A.elems) coset_of[S->op(x, a)] = c;
    }
    int m = static_cast<int>(reps.size());
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t[i][j] = coset_of[S->op(reps[i], reps[j])];
    q.T = FiniteGroup::from_mult_table(t);
    // from_mult_table may have relabeled; coset 0 already holds the identity
    // because x=0 is processed first, so labels are stable.
    q.proj = coset_of;
    q.coset.assign(m, {});
    for (int x = 0; x < S->n; ++x) q.coset[coset_of[x]].push_back(x);
    return q;
}

CosetSpace::CosetSpace(GroupPtr g, Subgroup h, std::vector<int> section)
    : G(std::move(g)), H(std::move(h)) {
    if (H.G != G) throw InvalidInput("coset space: subgroup of a different group");
    coset_of.assign(G->n, -1);
    // Left cosets xH, identity coset first.
    for (int x = 0; x < G->n; ++x) {
        if (coset_of[x] >= 0) continue;
        int c = static_cast<int>(u.size());
        u.push_back(x);
        for (int a : H.elems) coset_of[G->op(x, a)] = c;
    }
    m = static_cast<int>(u.size());
    if (!section.empty()) {
        if (static_cast<int>(section.size()) != m) throw InvalidInput("section size mismatch");
        std::vector<int> u2(m, -1);
        for (int r : section) {
            int c = coset_of[r];
            if (u2[c] >= 0) throw InvalidInput("section hits a coset twice");
            u2[c] = r;
        }
        u = u2;
        if (u[0] != 0) throw InvalidInput("section must pick the identity for the unit coset");
    }
    act_.assign(static_cast<size_t>(G->n) * m, 0);
    kappa_.assign(static_cast<size_t>(G->n) * m, 0);
    for (int s = 0; s < G->n; ++s) {
        for (int M = 0; M < m; ++M) {
            int sM = coset_of[G->op(s, u[M])];
            act_[static_cast<size_t>(s) * m + M] = sM;
            int k = G->op(G->inv(u[sM]), G->op(s, u[M]));
            if (!H.contains(k)) throw VerificationFailure("kappa escaped the subgroup");
            kappa_[static_cast<size_t>(s) * m + M] = k;
        }
    }
}

TwistedProduct twisted_semidirect(const GroupPtr& A, const GroupPtr& T,
                                  const std::vector<std::vector<int>>& action,
                                  const std::vector<std::vector<int>>& rho) {
    if (!A->is_abelian()) throw InvalidInput("twisted_semidirect: A must be abelian");
    if (static_cast<int>(action.size()) != T->n) throw InvalidInput("action table size");
    if (static_cast<int>(rho.size()) != T->n) throw InvalidInput("rho table size");
    for (int t = 0; t < T->n; ++t) {
        GroupMap f;
        f.src = f.dst = A;
        f.img = action[t];
        if (!f.is_valid() || !f.is_bijective())
            throw InvalidInput("action entry is not an automorphism of A");
        if (static_cast<int>(rho[t].size()) != T->n) throw InvalidInput("rho table size");
    }
    auto act = [&](int t, int a) { return action[t][a]; };
    // Normalization and cocycle law: rho(t,t')rho(tt',t'') = (t.rho(t',t'')) rho(t,t't'').
    for (int t = 0; t < T->n; ++t)
        if (rho[t][0] != 0 || rho[0][t] != 0)
            throw InvalidInput("rho not normalized");
    for (int t1 = 0; t1 < T->n; ++t1)
        for (int t2 = 0; t2 < T->n; ++t2)
            for (int t3 = 0; t3 < T->n; ++t3) {
                int lhs = A->op(rho[t1][t2], rho[T->op(t1, t2)][t3]);
                int rhs = A->op(act(t1, rho[t2][t3]), rho[t1][T->op(t2, t3)]);
                if (lhs != rhs) throw InvalidInput("rho is not a 2-cocycle for the action");
            }
    int n = A->n * T->n;
    auto enc = [&](int a, int t) { return a * T->n + t; };
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int a1 = 0; a1 < A->n; ++a1)
        for (int t1 = 0; t1 < T->n; ++t1)
            for (int a2 = 0; a2 < A->n; ++a2)
                for (int t2 = 0; t2 < T->n; ++t2) {
                    int a = A->op(A->op(a1, act(t1, a2)), rho[t1][t2]);
                    table[enc(a1, t1)][enc(a2, t2)] = enc(a, T->op(t1, t2));
                }
    TwistedProduct out;
    out.G = FiniteGroup::from_mult_table(table);
    // from_mult_table relabels identity to 0; element enc(0,0) is the identity
    // already, so labels are stable.
    out.embed_a.resize(A->n);
    for (int a = 0; a < A->n; ++a) out.embed_a[a] = enc(a, 0);
    out.section_t.resize(T->n);
    for (int t = 0; t < T->n; ++t) out.section_t[t] = enc(0, t);
    return out;
}

SplitData split_as_twisted_product(const GroupPtr& S, const Subgroup& A) {
    if (!A.is_abelian()) throw InvalidInput("split: A must be abelian");
    SplitData out;
    out.q = quotient(S, A);
    int m = out.q.T->n;

    // Look for a complement: a subgroup K with |K| = [S:A] and K ∩ A = {e}
    // meeting every coset once. If found, use it as the section.
    std::vector<int> section;
    if (m > 1) {
        for (const auto& K : all_subgroups(S)) {
            if (K.order() != m) continue;
            std::vector<int> per_coset(m, -1);
            bool ok = true;
            for (int x : K.elems) {
                int c = out.q.proj[x];
                if (per_coset[c] >= 0) {
                    ok = false;
                    break;
                }
                per_coset[c] = x;
            }
            if (ok) {
                section = per_coset;
                break;
            }
        }
    }
    // Coset space of A in S, with section indexed so coset ids match T labels.
    CosetSpace cs(S, A);
    std::vector<int> sec(m);
    for (int c = 0; c < cs.m; ++c) {
        int t = out.q.proj[cs.u[c]];
        sec[t] = section.empty() ? cs.u[c] : section[t];
    }
    // Rebuild with cosets enumerated to follow T labels via a chosen section list.
    // CosetSpace enumerates cosets by minimal element; we keep its labeling and
    // store the map T -> coset id.
    std::vector<int> ordered_section(cs.m);
    for (int c = 0; c < cs.m; ++c) ordered_section[c] = sec[out.q.proj[cs.u[c]]];
    out.cosets = CosetSpace(S, A, ordered_section);

    out.action.assign(m, std::vector<int>(A.order()));
    out.rho.assign(m, std::vector<int>(m));
    auto urep = [&](int t) {  // representative of quotient element t
        for (int c = 0; c < out.cosets.m; ++c)
            if (out.q.proj[out.cosets.u[c]] == t) return out.cosets.u[c];
        throw VerificationFailure("section misses a coset");
    };
    for (int t = 0; t < m; ++t) {
        int ut = urep(t);
        for (int i = 0; i < A.order(); ++i) {
            int c = S->conj(ut, A.elems[i]);
            if (!A.contains(c)) throw InvalidInput("split: A is not normal");
            out.action[t][i] = A.pos[c];
        }
        for (int t2 = 0; t2 < m; ++t2) {
            int r = S->op(S->op(ut, urep(t2)), S->inv(urep(out.q.T->op(t, t2))));
            if (!A.contains(r)) throw VerificationFailure("rho escaped A");
            out.rho[t][t2] = A.pos[r];  // intrinsic index into A.elems
        }
    }
    out.split = true;
    for (int t = 0; t < m && out.split; ++t)
        for (int t2 = 0; t2 < m && out.split; ++t2) out.split = out.rho[t][t2] == 0;
    return out;
}

}  // namespace fusext
