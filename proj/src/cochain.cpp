#include "fusext/cochain.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace fusext {

using lin::i64;
using lin::Mat;
using lin::mod_norm;

// ---------------------------------------------------------------- CoeffModule

CoeffModule CoeffModule::roots(i64 M, GroupPtr G) {
    if (M < 1) throw InvalidInput("modulus must be positive");
    CoeffModule m;
    m.G = std::move(G);
    m.M = M;
    return m;
}

CoeffModule CoeffModule::fun_space(i64 M, GroupPtr G, ActionSide side,
                                   std::vector<std::vector<int>> perm) {
    if (M < 1) throw InvalidInput("modulus must be positive");
    if (perm.empty()) throw InvalidInput("fun_space needs a slot table");
    CoeffModule m;
    m.G = std::move(G);
    m.side = side;
    m.M = M;
    m.width = static_cast<int>(perm[0].size());
    m.perm = std::move(perm);
    m.validate();
    return m;
}

CoeffModule CoeffModule::abelian(GroupPtr carrier, GroupPtr G, ActionSide side,
                                 std::vector<std::vector<int>> aut) {
    if (!carrier->is_abelian()) throw InvalidInput("coefficient group must be abelian");
    CoeffModule m;
    m.G = std::move(G);
    m.side = side;
    m.roots_carrier = false;
    m.carrier = std::move(carrier);
    m.aut = std::move(aut);
    m.validate();
    return m;
}

void CoeffModule::validate() const {
    int n = G->n;
    if (roots_carrier) {
        if (perm.empty()) return;
        if (static_cast<int>(perm.size()) != n) throw InvalidInput("slot table: wrong group size");
        for (const auto& row : perm) {
            if (static_cast<int>(row.size()) != width) throw InvalidInput("slot table: ragged row");
            std::vector<char> hit(width, 0);
            for (int x : row) {
                if (x < 0 || x >= width || hit[x]) throw InvalidInput("slot table: not a permutation");
                hit[x] = 1;
            }
        }
        for (int x = 0; x < width; ++x)
            if (perm[0][x] != x) throw InvalidInput("slot table: identity must act trivially");
        for (int g = 0; g < n; ++g) {
            for (int h = 0; h < n; ++h) {
                int gh = G->op(g, h);
                for (int x = 0; x < width; ++x) {
                    // (g.f)(x) = f(perm[g][x]): left wants perm[gh] = perm[h] o perm[g],
                    // right ((f.g)(x) = f(perm[g][x])) wants perm[gh] = perm[g] o perm[h].
                    int want = (side == ActionSide::right) ? perm[g][perm[h][x]]
                                                           : perm[h][perm[g][x]];
                    if (perm[gh][x] != want) throw InvalidInput("slot table: not a group action");
                }
            }
        }
    } else {
        if (aut.empty()) return;
        int a_n = carrier->n;
        if (static_cast<int>(aut.size()) != n) throw InvalidInput("action table: wrong group size");
        for (const auto& row : aut) {
            if (static_cast<int>(row.size()) != a_n) throw InvalidInput("action table: ragged row");
            GroupMap f{carrier, carrier, row, false};
            if (!f.is_valid() || !f.is_bijective())
                throw InvalidInput("action table: not an automorphism");
        }
        for (int a = 0; a < a_n; ++a)
            if (aut[0][a] != a) throw InvalidInput("action table: identity must act trivially");
        for (int g = 0; g < n; ++g) {
            for (int h = 0; h < n; ++h) {
                int gh = G->op(g, h);
                for (int a = 0; a < a_n; ++a) {
                    int want = (side == ActionSide::right) ? aut[h][aut[g][a]]
                                                           : aut[g][aut[h][a]];
                    if (aut[gh][a] != want) throw InvalidInput("action table: not a group action");
                }
            }
        }
    }
}

bool CoeffModule::compatible_with(const CoeffModule& o) const {
    if (roots_carrier != o.roots_carrier || side != o.side) return false;
    if (G->n != o.G->n || G->mult != o.G->mult) return false;
    if (roots_carrier) return M == o.M && width == o.width && perm == o.perm;
    return carrier->n == o.carrier->n && carrier->mult == o.carrier->mult && aut == o.aut;
}

// -------------------------------------------------------------------- Cochain

Cochain Cochain::zero(GroupPtr G, CoeffModule mod, int degree) {
    if (degree < 0) throw InvalidInput("negative cochain degree");
    Cochain f;
    f.degree = degree;
    f.G = std::move(G);
    f.mod = std::move(mod);
    size_t t = 1;
    for (int i = 0; i < degree; ++i) t *= static_cast<size_t>(f.G->n);
    f.values.assign(t * static_cast<size_t>(f.per_tuple()), 0);
    return f;
}

size_t Cochain::tuples() const {
    return values.size() / std::max(1, per_tuple());
}

size_t Cochain::tuple_index(const std::vector<int>& args) const {
    size_t t = 0;
    for (int a : args) t = t * static_cast<size_t>(G->n) + static_cast<size_t>(a);
    return t;
}

i64 Cochain::get(const std::vector<int>& args, int slot) const {
    return values[tuple_index(args) * per_tuple() + slot];
}

void Cochain::set(const std::vector<int>& args, i64 v, int slot) {
    i64 r = mod.roots_carrier ? mod_norm(v, mod.M) : v;
    values[tuple_index(args) * per_tuple() + slot] = r;
}

void Cochain::reduce() {
    if (mod.roots_carrier)
        for (auto& v : values) v = mod_norm(v, mod.M);
}

bool Cochain::is_zero() const {
    for (i64 v : values)
        if (mod.roots_carrier ? mod_norm(v, mod.M) != 0 : v != 0) return false;
    return true;
}

bool Cochain::is_normalized() const {
    int n = G->n;
    int k = per_tuple();
    std::vector<int> args(degree, 0);
    size_t t = 0;
    do {
        bool has_id = false;
        for (int a : args)
            if (a == 0) has_id = true;
        if (has_id) {
            for (int x = 0; x < k; ++x) {
                i64 v = values[t * k + x];
                if (mod.roots_carrier ? mod_norm(v, mod.M) != 0 : v != 0) return false;
            }
        }
        ++t;
        int i = degree - 1;
        while (i >= 0) {
            if (++args[i] < n) break;
            args[i] = 0;
            --i;
        }
        if (i < 0) break;
    } while (true);
    return degree == 0 || t == tuples();
}

bool cochains_equal(const Cochain& f, const Cochain& g) {
    if (f.degree != g.degree || f.values.size() != g.values.size()) return false;
    if (f.mod.roots_carrier != g.mod.roots_carrier) return false;
    if (f.mod.roots_carrier) {
        if (f.mod.M != g.mod.M) return false;
        for (size_t i = 0; i < f.values.size(); ++i)
            if (mod_norm(f.values[i], f.mod.M) != mod_norm(g.values[i], g.mod.M)) return false;
        return true;
    }
    return f.values == g.values;
}

static Cochain pointwise(const Cochain& f, const Cochain& g, int sign) {
    if (f.degree != g.degree || !f.mod.compatible_with(g.mod))
        throw InvalidInput("cochain arithmetic: incompatible operands");
    Cochain out = f;
    if (f.mod.roots_carrier) {
        for (size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = mod_norm(f.values[i] + sign * g.values[i], f.mod.M);
    } else {
        const auto& A = *f.mod.carrier;
        for (size_t i = 0; i < out.values.size(); ++i) {
            int b = static_cast<int>(g.values[i]);
            if (sign < 0) b = A.inv(b);
            out.values[i] = A.op(static_cast<int>(f.values[i]), b);
        }
    }
    return out;
}

Cochain cochain_add(const Cochain& f, const Cochain& g) { return pointwise(f, g, +1); }
Cochain cochain_sub(const Cochain& f, const Cochain& g) { return pointwise(f, g, -1); }

Cochain cochain_neg(const Cochain& f) {
    Cochain out = f;
    if (f.mod.roots_carrier) {
        for (auto& v : out.values) v = mod_norm(-v, f.mod.M);
    } else {
        for (auto& v : out.values) v = f.mod.carrier->inv(static_cast<int>(v));
    }
    return out;
}

// ------------------------------------------------------------- coboundaries

namespace {

// One signed term of the coboundary formula: value of f at `args`, acted on
// by `act_g` (or -1 for no action), accumulated with `sign`.
struct TermAccum {
    const Cochain& f;
    Cochain& out;
    size_t out_base;

    void add(const std::vector<int>& args, int act_g, int sign) const {
        const CoeffModule& m = f.mod;
        size_t in_base = f.tuple_index(args) * f.per_tuple();
        if (m.roots_carrier) {
            for (int x = 0; x < m.width; ++x) {
                int src = (act_g >= 0) ? m.act_slot(act_g, x) : x;
                out.values[out_base + x] += sign * f.values[in_base + src];
            }
        } else {
            int v = static_cast<int>(f.values[in_base]);
            if (act_g >= 0) v = m.act_elem(act_g, v);
            if (sign < 0) v = m.carrier->inv(v);
            out.values[out_base] =
                m.carrier->op(static_cast<int>(out.values[out_base]), v);
        }
    }
};

Cochain coboundary_impl(const Cochain& f, bool right) {
    if (right ? !f.mod.allows_right() : !f.mod.allows_left())
        throw WrongActionSide(right ? "module has no right action"
                                    : "module has no left action");
    int n = f.degree;
    int gn = f.G->n;
    Cochain out = Cochain::zero(f.G, f.mod, n + 1);
    std::vector<int> s(n + 1, 0);
    std::vector<int> args(std::max(n, 0));
    size_t t = 0;
    while (true) {
        TermAccum acc{f, out, t * static_cast<size_t>(f.per_tuple())};
        // boundary term dropping s[0]
        for (int i = 0; i < n; ++i) args[i] = s[i + 1];
        acc.add(args, right ? -1 : s[0], +1);
        // merge terms
        int sign = -1;
        for (int i = 0; i < n; ++i) {
            for (int j = 0, k = 0; j <= n; ++j)
                if (j != i + 1) args[k++] = (j == i) ? f.G->op(s[i], s[i + 1]) : s[j];
            acc.add(args, -1, sign);
            sign = -sign;
        }
        // boundary term dropping s[n]
        for (int i = 0; i < n; ++i) args[i] = s[i];
        acc.add(args, right ? s[n] : -1, sign);

        ++t;
        int i = n;
        while (i >= 0) {
            if (++s[i] < gn) break;
            s[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    out.reduce();
    return out;
}

}  // namespace

Cochain coboundary_left(const Cochain& f) { return coboundary_impl(f, false); }
Cochain coboundary_right(const Cochain& f) { return coboundary_impl(f, true); }

Cochain sigma(const Cochain& f) {
    CoeffModule m = f.mod;
    if (m.side != ActionSide::trivial) {
        // A left module becomes a right one (and vice versa) via g -> g^{-1}.
        m.side = (m.side == ActionSide::left) ? ActionSide::right : ActionSide::left;
        if (m.roots_carrier && !m.perm.empty()) {
            for (int g = 0; g < f.G->n; ++g) m.perm[g] = f.mod.perm[f.G->inv(g)];
        }
        if (!m.roots_carrier && !m.aut.empty()) {
            for (int g = 0; g < f.G->n; ++g) m.aut[g] = f.mod.aut[f.G->inv(g)];
        }
    }
    Cochain out = Cochain::zero(f.G, std::move(m), f.degree);
    int n = f.degree;
    int gn = f.G->n;
    // Argument reversal with the sign (-1)^{n(n+1)/2}; this is the grading
    // that makes sigma a chain isomorphism in every degree.
    bool negate = ((n * (n + 1) / 2) % 2) != 0;
    std::vector<int> s(n, 0), rev(n);
    while (true) {
        for (int i = 0; i < n; ++i) rev[i] = f.G->inv(s[n - 1 - i]);
        size_t ob = out.tuple_index(s) * out.per_tuple();
        size_t ib = f.tuple_index(rev) * f.per_tuple();
        if (f.mod.roots_carrier) {
            for (int x = 0; x < f.mod.width; ++x)
                out.values[ob + x] =
                    mod_norm(negate ? -f.values[ib + x] : f.values[ib + x], f.mod.M);
        } else {
            int v = static_cast<int>(f.values[ib]);
            out.values[ob] = negate ? f.mod.carrier->inv(v) : v;
        }
        int i = n - 1;
        while (i >= 0) {
            if (++s[i] < gn) break;
            s[i] = 0;
            --i;
        }
        if (i < 0 || n == 0) break;
    }
    return out;
}

bool is_cocycle_left(const Cochain& f) { return coboundary_left(f).is_zero(); }
bool is_cocycle_right(const Cochain& f) { return coboundary_right(f).is_zero(); }

// ------------------------------------------------------------ coordinates

AbelianCoords abelian_coords(const GroupPtr& A) {
    if (!A->is_abelian()) throw InvalidInput("abelian_coords: group not abelian");
    AbelianCoords out;
    out.A = A;
    if (A->n == 1) {
        out.coords_of.assign(1, {});
        return out;
    }
    std::vector<int> gens = A->minimal_generators();
    int m = static_cast<int>(gens.size());
    // Integer words for each element over the generators.
    std::vector<std::vector<i64>> word(A->n);
    std::vector<char> seen(A->n, 0);
    seen[0] = 1;
    word[0].assign(m, 0);
    std::vector<int> queue{0};
    for (size_t q = 0; q < queue.size(); ++q) {
        int a = queue[q];
        for (int i = 0; i < m; ++i) {
            int b = A->op(a, gens[i]);
            if (seen[b]) continue;
            seen[b] = 1;
            word[b] = word[a];
            word[b][i] += 1;
            queue.push_back(b);
        }
    }
    // Relation lattice of the surjection Z^m -> A.
    std::vector<std::vector<i64>> rels;
    for (int i = 0; i < m; ++i) {
        std::vector<i64> r(m, 0);
        r[i] = A->order_of(gens[i]);
        rels.push_back(r);
    }
    for (int a = 0; a < A->n; ++a) {
        for (int i = 0; i < m; ++i) {
            int b = A->op(a, gens[i]);
            std::vector<i64> r = word[a];
            r[i] += 1;
            bool zero = true;
            for (int j = 0; j < m; ++j) {
                r[j] -= word[b][j];
                if (r[j] != 0) zero = false;
            }
            if (!zero) rels.push_back(r);
        }
    }
    Mat R(m, static_cast<int>(rels.size()));
    for (int j = 0; j < R.cols; ++j)
        for (int i = 0; i < m; ++i) R.at(i, j) = rels[j][i];
    Mat L = lin::lattice_basis(R, m, A->exponent());
    lin::SmithForm sf = lin::smith(L);
    std::vector<i64> dfull(m);
    for (int i = 0; i < m; ++i) dfull[i] = std::llabs(sf.D.at(i, i));

    std::vector<int> keep;
    for (int i = 0; i < m; ++i)
        if (dfull[i] > 1) keep.push_back(i);
    i64 total = 1;
    for (int i : keep) total *= dfull[i];
    if (total != A->n) throw VerificationFailure("abelian_coords: bad factorization");

    for (int i : keep) out.d.push_back(dfull[i]);
    out.coords_of.resize(A->n);
    for (int a = 0; a < A->n; ++a) {
        std::vector<i64> c = sf.U.apply(word[a]);
        std::vector<i64> kept;
        for (int i : keep) kept.push_back(mod_norm(c[i], dfull[i]));
        out.coords_of[a] = std::move(kept);
    }
    // Factor generators: preimages of the unit coordinate vectors.
    for (int j : keep) {
        int e = 0;
        for (int i = 0; i < m; ++i) {
            i64 x = mod_norm(sf.Ui.at(i, j), A->order_of(gens[i]));
            for (i64 r = 0; r < x; ++r) e = A->op(e, gens[i]);
        }
        out.factor_gen.push_back(e);
    }
    for (size_t j = 0; j < out.factor_gen.size(); ++j) {
        std::vector<i64> unit(out.d.size(), 0);
        unit[j] = 1;
        if (out.coords_of[out.factor_gen[j]] != unit)
            throw VerificationFailure("abelian_coords: generator mismatch");
    }
    return out;
}

int AbelianCoords::decode(const std::vector<i64>& c) const {
    int e = 0;
    for (size_t j = 0; j < d.size(); ++j) {
        i64 x = mod_norm(c[j], d[j]);
        for (i64 r = 0; r < x; ++r) e = A->op(e, factor_gen[j]);
    }
    return e;
}

Mat AbelianCoords::aut_matrix(const std::vector<int>& img) const {
    int k = static_cast<int>(d.size());
    Mat B(k, k);
    for (int j = 0; j < k; ++j) {
        const std::vector<i64>& c = coords_of[img[factor_gen[j]]];
        for (int i = 0; i < k; ++i) B.at(i, j) = c[i];
    }
    return B;
}

ComplexCoords complex_coords(const CoeffModule& mod) {
    ComplexCoords cc;
    if (mod.roots_carrier) {
        cc.m = mod.M;
        cc.per_tuple = mod.width;
        cc.scale.assign(mod.width, 1);
    } else {
        cc.ab = abelian_coords(mod.carrier);
        cc.per_tuple = static_cast<int>(cc.ab.d.size());
        cc.m = cc.per_tuple ? cc.ab.d.back() : 1;  // d_1 | ... | d_k
        for (i64 dj : cc.ab.d) cc.scale.push_back(cc.m / dj);
    }
    return cc;
}

// Linear algebra runs on the normalized subcomplex: only tuples with every
// argument different from the identity carry coordinates, so solutions and
// generators come back normalized.
namespace {

size_t reduced_tuple_count(int gn, int degree) {
    size_t t = 1;
    for (int i = 0; i < degree; ++i) t *= static_cast<size_t>(gn - 1);
    return t;
}

void reduced_tuple_args(size_t idx, int gn, int degree, std::vector<int>& args) {
    args.resize(degree);
    for (int i = degree - 1; i >= 0; --i) {
        args[i] = static_cast<int>(idx % (gn - 1)) + 1;
        idx /= static_cast<size_t>(gn - 1);
    }
}

}  // namespace

std::vector<i64> cochain_to_vector(const Cochain& f, const ComplexCoords& cc) {
    size_t nt = reduced_tuple_count(f.G->n, f.degree);
    int k = cc.per_tuple;
    std::vector<i64> v(nt * static_cast<size_t>(k));
    std::vector<int> args;
    for (size_t t = 0; t < nt; ++t) {
        reduced_tuple_args(t, f.G->n, f.degree, args);
        size_t ib = f.tuple_index(args) * f.per_tuple();
        if (f.mod.roots_carrier) {
            for (int x = 0; x < k; ++x) v[t * k + x] = mod_norm(f.values[ib + x], cc.m);
        } else {
            const auto& c = cc.ab.coords_of[static_cast<int>(f.values[ib])];
            for (int j = 0; j < k; ++j) v[t * k + j] = c[j] * cc.scale[j];
        }
    }
    return v;
}

Cochain cochain_from_vector(const GroupPtr& G, const CoeffModule& mod, int degree,
                            const std::vector<i64>& v, const ComplexCoords& cc) {
    Cochain f = Cochain::zero(G, mod, degree);
    size_t nt = reduced_tuple_count(G->n, degree);
    int k = cc.per_tuple;
    if (v.size() != nt * static_cast<size_t>(k))
        throw InvalidInput("cochain_from_vector: size mismatch");
    std::vector<int> args;
    std::vector<i64> c(k);
    for (size_t t = 0; t < nt; ++t) {
        reduced_tuple_args(t, G->n, degree, args);
        size_t ib = f.tuple_index(args) * f.per_tuple();
        if (mod.roots_carrier) {
            for (int x = 0; x < k; ++x) f.values[ib + x] = mod_norm(v[t * k + x], mod.M);
        } else {
            for (int j = 0; j < k; ++j) {
                i64 x = mod_norm(v[t * k + j], cc.m);
                if (x % cc.scale[j] != 0)
                    throw VerificationFailure("cochain_from_vector: off-lattice value");
                c[j] = x / cc.scale[j];
            }
            f.values[ib] = cc.ab.decode(c);
        }
    }
    return f;
}

Mat coboundary_matrix(const GroupPtr& G, const CoeffModule& mod, int n,
                      bool right_complex, const ComplexCoords& cc) {
    // Columns are coboundaries of basis cochains; one source of truth with
    // the pointwise evaluator. Roots basis cochains are evaluated at an
    // inflated modulus so entries come back as exact signed integers (they
    // are sums of a handful of +-1 terms) and the matrix stays valid at any
    // working modulus.
    size_t dom_t = reduced_tuple_count(G->n, n);
    size_t cod_t = reduced_tuple_count(G->n, n + 1);
    int k = cc.per_tuple;
    Mat D(static_cast<int>(cod_t) * k, static_cast<int>(dom_t) * k);

    CoeffModule basis_mod = mod;
    i64 big = 1;
    if (mod.roots_carrier) {
        big = 1LL << 20;
        basis_mod.M = big;
    }
    ComplexCoords big_cc = cc;
    if (mod.roots_carrier) big_cc.m = big;

    Cochain basis = Cochain::zero(G, basis_mod, n);
    std::vector<int> args;
    for (size_t t = 0; t < dom_t; ++t) {
        reduced_tuple_args(t, G->n, n, args);
        size_t ib = basis.tuple_index(args) * basis.per_tuple();
        for (int j = 0; j < k; ++j) {
            if (mod.roots_carrier) {
                basis.values[ib + j] = 1;
            } else {
                std::vector<i64> c(k, 0);
                c[j] = 1;
                basis.values[ib] = cc.ab.decode(c);
            }
            Cochain img = coboundary_impl(basis, right_complex);
            std::vector<i64> col = cochain_to_vector(img, big_cc);
            int jcol = static_cast<int>(t) * k + j;
            for (size_t r = 0; r < col.size(); ++r) {
                i64 e = col[r];
                if (e % cc.scale[j] != 0)
                    throw VerificationFailure("coboundary_matrix: non-integral entry");
                e /= cc.scale[j];
                // Recover the signed representative.
                i64 dj = mod.roots_carrier ? big : cc.m / cc.scale[j];
                e = mod_norm(e, dj);
                if (e > dj / 2) e -= dj;
                D.at(static_cast<int>(r), jcol) = e;
            }
            basis.values[mod.roots_carrier ? ib + j : ib] = 0;
        }
    }
    return D;
}

// -------------------------------------------------------------- cohomology

namespace {

Mat scaled_identity(int n, i64 s) {
    Mat I = Mat::identity(n);
    for (int i = 0; i < n; ++i) I.at(i, i) = s;
    return I;
}

Mat scale_cols(const Mat& A, const std::vector<i64>& scale, int per_tuple) {
    Mat B = A;
    for (int j = 0; j < B.cols; ++j) {
        i64 s = scale[j % per_tuple];
        for (int i = 0; i < B.rows; ++i) B.at(i, j) *= s;
    }
    return B;
}

Mat scale_lattice(Mat A, i64 s) {
    for (auto& v : A.a) v *= s;
    return A;
}

}  // namespace

i64 CohomologyGroup::order() const {
    i64 o = 1;
    for (i64 d : invariant_factors) o *= d;
    return o;
}

CohomologyGroup cohomology(const GroupPtr& G, const CoeffModule& mod, int n) {
    if (n < 1 || n > 3) throw DegreeUnsupported("cohomology: degree must be 1..3");
    mod.validate();
    bool rightc = (mod.side == ActionSide::right);
    ComplexCoords cc = complex_coords(mod);
    CohomologyGroup out;
    if (cc.per_tuple == 0 || G->n == 1) return out;
    size_t nt = 1;
    for (int i = 0; i < n; ++i) nt *= static_cast<size_t>(G->n - 1);
    int N = static_cast<int>(nt) * cc.per_tuple;

    Mat Dn = coboundary_matrix(G, mod, n, rightc, cc);
    Mat Dp = coboundary_matrix(G, mod, n - 1, rightc, cc);

    Mat K, E;
    i64 slack = 1;
    if (mod.roots_carrier) {
        // Divisible-coefficient semantics: a class dies if it bounds with
        // values in mu_{M|G|}. Work at modulus M*|G| with cocycles scaled.
        slack = G->n;
        i64 ms = cc.m * slack;
        lin::ModSolve ks = lin::solve_mod(Dn, std::vector<i64>(Dn.rows, 0), cc.m);
        K = scale_lattice(lin::lattice_basis(ks.kernel, N, cc.m), slack);
        Mat img = lin::lattice_basis(Dp, N, ms);
        E = lin::lattice_intersect(img, scaled_identity(N, slack), N);
    } else {
        lin::ModSolve ks = lin::solve_mod(Dn, std::vector<i64>(Dn.rows, 0), cc.m);
        Mat L = lin::lattice_basis(ks.kernel, N, cc.m);
        Mat V(N, N);
        for (int i = 0; i < N; ++i) V.at(i, i) = cc.scale[i % cc.per_tuple];
        K = lin::lattice_intersect(L, V, N);
        E = lin::lattice_basis(scale_cols(Dp, cc.scale, cc.per_tuple), N, cc.m);
    }
    lin::LatticeQuotient q = lin::lattice_quotient(K, E, 0);
    out.invariant_factors = q.factors;
    for (int j = 0; j < q.gens.cols; ++j) {
        std::vector<i64> v(N);
        for (int i = 0; i < N; ++i) {
            i64 x = q.gens.at(i, j);
            if (x % slack != 0) throw VerificationFailure("cohomology: bad generator");
            v[i] = mod_norm(x / slack, cc.m);
        }
        out.generators.push_back(cochain_from_vector(G, mod, n, v, cc));
    }
    return out;
}

std::optional<Cochain> solve_coboundary(const Cochain& z, i64 slack) {
    if (z.degree < 1) throw InvalidInput("solve_coboundary: degree must be >= 1");
    if (slack < 1) throw InvalidInput("solve_coboundary: slack must be positive");
    const CoeffModule& mod = z.mod;
    bool rightc = (mod.side == ActionSide::right);
    if (!z.is_normalized())
        throw NotACocycle("solve_coboundary: input is not normalized");
    if (!(rightc ? is_cocycle_right(z) : is_cocycle_left(z)))
        throw NotACocycle("solve_coboundary: input is not a cocycle");
    ComplexCoords cc = complex_coords(mod);
    if (cc.per_tuple == 0 || z.G->n == 1)
        return Cochain::zero(z.G, mod, z.degree - 1);
    Mat Dp = coboundary_matrix(z.G, mod, z.degree - 1, rightc, cc);
    std::vector<i64> b = cochain_to_vector(z, cc);

    if (mod.roots_carrier) {
        i64 ms = mod.M * slack;
        for (auto& x : b) x = mod_norm(x * slack, ms);
        lin::ModSolve s = lin::solve_mod(Dp, b, ms);
        if (!s.solvable) return std::nullopt;
        CoeffModule big_mod = mod;
        big_mod.M = ms;
        ComplexCoords big_cc = cc;
        big_cc.m = ms;
        return cochain_from_vector(z.G, big_mod, z.degree - 1, s.particular, big_cc);
    }
    if (slack != 1) throw InvalidInput("solve_coboundary: slack needs a roots carrier");
    // Unknowns in plain factor coordinates; the column scaling keeps the
    // image inside the carrier lattice.
    lin::ModSolve s =
        lin::solve_mod(scale_cols(Dp, cc.scale, cc.per_tuple), b, cc.m);
    if (!s.solvable) return std::nullopt;
    std::vector<i64> v(s.particular.size());
    for (size_t i = 0; i < v.size(); ++i) {
        int j = static_cast<int>(i) % cc.per_tuple;
        v[i] = mod_norm(s.particular[i], cc.ab.d[j]) * cc.scale[j];
    }
    return cochain_from_vector(z.G, mod, z.degree - 1, v, cc);
}

Cochain rescale_cochain(const Cochain& f, i64 k) {
    if (!f.mod.roots_carrier)
        throw InvalidInput("rescale applies to roots carriers only");
    if (k < 1) throw InvalidInput("rescale factor must be >= 1");
    Cochain out = f;
    out.mod.M = f.mod.M * k;
    for (i64& v : out.values) v *= k;
    out.reduce();
    return out;
}

// ------------------------------------------------------ restrict / pullback

Cochain restrict_cochain(const Cochain& f, const Subgroup& H) {
    GroupPtr Hg = H.as_group();
    CoeffModule m = f.mod;
    m.G = Hg;
    if (!m.perm.empty()) {
        std::vector<std::vector<int>> p;
        for (int e : H.elems) p.push_back(f.mod.perm[e]);
        m.perm = std::move(p);
    }
    if (!m.aut.empty()) {
        std::vector<std::vector<int>> a;
        for (int e : H.elems) a.push_back(f.mod.aut[e]);
        m.aut = std::move(a);
    }
    Cochain out = Cochain::zero(Hg, std::move(m), f.degree);
    int hn = Hg->n;
    std::vector<int> s(f.degree, 0), lifted(f.degree);
    size_t t = 0;
    while (true) {
        for (int i = 0; i < f.degree; ++i) lifted[i] = H.elems[s[i]];
        size_t ib = f.tuple_index(lifted) * f.per_tuple();
        size_t ob = t * static_cast<size_t>(out.per_tuple());
        for (int x = 0; x < out.per_tuple(); ++x) out.values[ob + x] = f.values[ib + x];
        ++t;
        int i = f.degree - 1;
        while (i >= 0) {
            if (++s[i] < hn) break;
            s[i] = 0;
            --i;
        }
        if (i < 0 || f.degree == 0) break;
    }
    return out;
}

Cochain pullback(const Cochain& f, const GroupMap& phi) {
    if (phi.anti) throw InvalidInput("pullback: anti-homomorphisms not supported");
    if (!phi.is_valid()) throw InvalidInput("pullback: invalid map");
    CoeffModule m = f.mod;
    m.G = phi.src;
    if (!m.perm.empty()) {
        std::vector<std::vector<int>> p;
        for (int h = 0; h < phi.src->n; ++h) p.push_back(f.mod.perm[phi(h)]);
        m.perm = std::move(p);
    }
    if (!m.aut.empty()) {
        std::vector<std::vector<int>> a;
        for (int h = 0; h < phi.src->n; ++h) a.push_back(f.mod.aut[phi(h)]);
        m.aut = std::move(a);
    }
    Cochain out = Cochain::zero(phi.src, std::move(m), f.degree);
    int hn = phi.src->n;
    std::vector<int> s(f.degree, 0), mapped(f.degree);
    size_t t = 0;
    while (true) {
        for (int i = 0; i < f.degree; ++i) mapped[i] = phi(s[i]);
        size_t ib = f.tuple_index(mapped) * f.per_tuple();
        size_t ob = t * static_cast<size_t>(out.per_tuple());
        for (int x = 0; x < out.per_tuple(); ++x) out.values[ob + x] = f.values[ib + x];
        ++t;
        int i = f.degree - 1;
        while (i >= 0) {
            if (++s[i] < hn) break;
            s[i] = 0;
            --i;
        }
        if (i < 0 || f.degree == 0) break;
    }
    return out;
}

Cochain random_cochain(const GroupPtr& G, const CoeffModule& mod, int degree,
                       std::mt19937& rng) {
    Cochain f = Cochain::zero(G, mod, degree);
    i64 span = mod.roots_carrier ? mod.M : mod.carrier->n;
    std::uniform_int_distribution<i64> dist(0, span - 1);
    int k = f.per_tuple();
    std::vector<int> s(degree, 0);
    size_t t = 0;
    while (true) {
        bool has_id = false;
        for (int a : s)
            if (a == 0) has_id = true;
        if (!has_id)
            for (int x = 0; x < k; ++x) f.values[t * k + x] = dist(rng);
        ++t;
        int i = degree - 1;
        while (i >= 0) {
            if (++s[i] < G->n) break;
            s[i] = 0;
            --i;
        }
        if (i < 0 || degree == 0) break;
    }
    return f;
}

// --------------------------------------------------------------------- JSON

std::string cochain_to_json(const Cochain& f, const std::string& group_id) {
    nlohmann::json j;
    j["degree"] = f.degree;
    j["group"] = group_id;
    j["modulus"] = f.mod.roots_carrier ? f.mod.M : static_cast<i64>(f.mod.carrier->n);
    nlohmann::json vals = nlohmann::json::object();
    int k = f.per_tuple();
    std::vector<int> s(f.degree, 0);
    size_t t = 0;
    while (true) {
        bool nonzero = false;
        for (int x = 0; x < k; ++x)
            if (f.values[t * k + x] != 0) nonzero = true;
        if (nonzero) {
            std::ostringstream key;
            for (int i = 0; i < f.degree; ++i) key << (i ? "," : "") << s[i];
            if (f.mod.roots_carrier && f.mod.width > 1) {
                std::vector<i64> row(f.values.begin() + t * k,
                                     f.values.begin() + (t + 1) * k);
                vals[key.str()] = row;
            } else {
                vals[key.str()] = f.values[t * k];
            }
        }
        ++t;
        int i = f.degree - 1;
        while (i >= 0) {
            if (++s[i] < f.G->n) break;
            s[i] = 0;
            --i;
        }
        if (i < 0 || f.degree == 0) break;
    }
    j["values"] = vals;
    return j.dump(2);
}

Cochain cochain_from_json(const std::string& text, const GroupPtr& G,
                          const CoeffModule& mod) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("cochain JSON: ") + e.what());
    }
    if (!j.contains("degree") || !j.contains("values"))
        throw InvalidInput("cochain JSON: missing degree or values");
    int degree = j["degree"].get<int>();
    if (degree < 0 || degree > 4) throw InvalidInput("cochain JSON: bad degree");
    if (j.contains("modulus") && mod.roots_carrier &&
        j["modulus"].get<i64>() != mod.M)
        throw InvalidInput("cochain JSON: modulus mismatch");
    Cochain f = Cochain::zero(G, mod, degree);
    for (auto it = j["values"].begin(); it != j["values"].end(); ++it) {
        std::vector<int> args;
        std::stringstream ss(it.key());
        std::string part;
        while (std::getline(ss, part, ',')) {
            size_t pos = 0;
            int v = std::stoi(part, &pos);
            if (pos != part.size()) throw InvalidInput("cochain JSON: bad key");
            args.push_back(v);
        }
        if (static_cast<int>(args.size()) != degree)
            throw InvalidInput("cochain JSON: key arity mismatch");
        for (int a : args)
            if (a < 0 || a >= G->n) throw InvalidInput("cochain JSON: element out of range");
        if (mod.roots_carrier && mod.width > 1) {
            std::vector<i64> row = it.value().get<std::vector<i64>>();
            if (static_cast<int>(row.size()) != mod.width)
                throw InvalidInput("cochain JSON: bad value width");
            for (int x = 0; x < mod.width; ++x) f.set(args, row[x], x);
        } else {
            i64 v = it.value().get<i64>();
            if (!mod.roots_carrier && (v < 0 || v >= mod.carrier->n))
                throw InvalidInput("cochain JSON: element out of range");
            f.set(args, v);
        }
    }
    if (!f.is_normalized()) throw InvalidInput("cochain JSON: not normalized");
    return f;
}

}  // namespace fusext
