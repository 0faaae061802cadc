#include "fusext/lin.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>

namespace fusext::lin {

namespace {

using i128 = __int128;

i64 checked(i128 v) {
    if (v > INT64_MAX / 4 || v < INT64_MIN / 4) {
        throw std::overflow_error("integer overflow in lattice arithmetic");
    }
    return static_cast<i64>(v);
}

}  // namespace

i64 gcd_i64(i64 a, i64 b) { return std::gcd(std::llabs(a), std::llabs(b)); }

i64 mod_norm(i64 x, i64 m) {
    x %= m;
    if (x < 0) x += m;
    return x;
}

Mat Mat::identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

Mat Mat::hcat(const Mat& other) const {
    if (rows != other.rows) throw std::invalid_argument("hcat: row mismatch");
    Mat R(rows, cols + other.cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) R.at(i, j) = at(i, j);
        for (int j = 0; j < other.cols; ++j) R.at(i, cols + j) = other.at(i, j);
    }
    return R;
}

Mat Mat::times(const Mat& other) const {
    if (cols != other.rows) throw std::invalid_argument("times: dim mismatch");
    Mat R(rows, other.cols);
    std::vector<i128> acc(other.cols);
    for (int i = 0; i < rows; ++i) {
        std::fill(acc.begin(), acc.end(), i128{0});
        for (int k = 0; k < cols; ++k) {
            i64 v = at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < other.cols; ++j) acc[j] += static_cast<i128>(v) * other.at(k, j);
        }
        for (int j = 0; j < other.cols; ++j) R.at(i, j) = checked(acc[j]);
    }
    return R;
}

std::vector<i64> Mat::apply(const std::vector<i64>& x) const {
    if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("apply: dim mismatch");
    std::vector<i64> y(rows, 0);
    for (int i = 0; i < rows; ++i) {
        i128 acc = 0;
        for (int j = 0; j < cols; ++j) acc += static_cast<i128>(at(i, j)) * x[j];
        y[i] = checked(acc);
    }
    return y;
}

std::vector<i64> SmithForm::diag() const {
    std::vector<i64> d;
    int n = std::min(D.rows, D.cols);
    for (int i = 0; i < n; ++i) d.push_back(D.at(i, i));
    return d;
}

namespace {

struct SnfWork {
    Mat A, U, Ui, V, Vi;

    void row_swap(int i, int j) {
        for (int c = 0; c < A.cols; ++c) std::swap(A.at(i, c), A.at(j, c));
        for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
        for (int r = 0; r < Ui.rows; ++r) std::swap(Ui.at(r, i), Ui.at(r, j));
    }
    void col_swap(int i, int j) {
        for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, i), A.at(r, j));
        for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
        for (int c = 0; c < Vi.cols; ++c) std::swap(Vi.at(i, c), Vi.at(j, c));
    }
    void row_neg(int i) {
        for (int c = 0; c < A.cols; ++c) A.at(i, c) = -A.at(i, c);
        for (int c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
        for (int r = 0; r < Ui.rows; ++r) Ui.at(r, i) = -Ui.at(r, i);
    }
    // row i += k * row j ; Ui column j -= k * Ui column i
    void row_add(int i, int j, i64 k) {
        if (k == 0) return;
        for (int c = 0; c < A.cols; ++c)
            A.at(i, c) = checked(static_cast<i128>(A.at(i, c)) + static_cast<i128>(k) * A.at(j, c));
        for (int c = 0; c < U.cols; ++c)
            U.at(i, c) = checked(static_cast<i128>(U.at(i, c)) + static_cast<i128>(k) * U.at(j, c));
        for (int r = 0; r < Ui.rows; ++r)
            Ui.at(r, j) = checked(static_cast<i128>(Ui.at(r, j)) - static_cast<i128>(k) * Ui.at(r, i));
    }
    // col i += k * col j ; Vi row j -= k * Vi row i
    void col_add(int i, int j, i64 k) {
        if (k == 0) return;
        for (int r = 0; r < A.rows; ++r)
            A.at(r, i) = checked(static_cast<i128>(A.at(r, i)) + static_cast<i128>(k) * A.at(r, j));
        for (int r = 0; r < V.rows; ++r)
            V.at(r, i) = checked(static_cast<i128>(V.at(r, i)) + static_cast<i128>(k) * V.at(r, j));
        for (int c = 0; c < Vi.cols; ++c)
            Vi.at(j, c) = checked(static_cast<i128>(Vi.at(j, c)) - static_cast<i128>(k) * Vi.at(i, c));
    }
};

}  // namespace

namespace {

// Diagonalize; returns number of nonzero pivots.
// Nearest-integer quotient keeps remainders at most p/2, bounding growth.
i64 nearest_quot(i64 a, i64 p) {
    return a >= 0 ? (a + p / 2) / p : -((-a + p / 2) / p);
}

int diagonalize(SnfWork& w) {
    int n = std::min(w.A.rows, w.A.cols);
    int t = 0;
    for (; t < n; ++t) {
        while (true) {
            // Move a minimal nonzero entry of the block to (t,t).
            int pr = -1, pc = -1;
            i64 best = 0;
            for (int i = t; i < w.A.rows; ++i) {
                for (int j = t; j < w.A.cols; ++j) {
                    i64 v = std::llabs(w.A.at(i, j));
                    if (v != 0 && (pr < 0 || v < best)) {
                        best = v;
                        pr = i;
                        pc = j;
                    }
                }
            }
            if (pr < 0) return t;
            w.row_swap(t, pr);
            w.col_swap(t, pc);
            if (w.A.at(t, t) < 0) w.row_neg(t);
            i64 p = w.A.at(t, t);

            bool clean = true;
            for (int i = t + 1; i < w.A.rows; ++i) {
                if (w.A.at(i, t) == 0) continue;
                w.row_add(i, t, -nearest_quot(w.A.at(i, t), p));
                if (w.A.at(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < w.A.cols; ++j) {
                if (w.A.at(t, j) == 0) continue;
                w.col_add(j, t, -nearest_quot(w.A.at(t, j), p));
                if (w.A.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // Pivot must divide the remaining block.
            bool divides = true;
            for (int i = t + 1; i < w.A.rows && divides; ++i) {
                for (int j = t + 1; j < w.A.cols && divides; ++j) {
                    if (w.A.at(i, j) % p != 0) {
                        w.row_add(t, i, 1);
                        divides = false;
                    }
                }
            }
            if (divides) break;
        }
    }
    return t;
}

}  // namespace

SmithForm smith(Mat A0) {
    SnfWork w;
    w.A = std::move(A0);
    w.U = Mat::identity(w.A.rows);
    w.Ui = Mat::identity(w.A.rows);
    w.V = Mat::identity(w.A.cols);
    w.Vi = Mat::identity(w.A.cols);

    int t = diagonalize(w);
    // Repair the divisibility chain d_i | d_{i+1}, re-diagonalizing as needed.
    while (true) {
        int bad = -1;
        for (int i = 0; i + 1 < t && bad < 0; ++i) {
            if (w.A.at(i + 1, i + 1) % w.A.at(i, i) != 0) bad = i;
        }
        if (bad < 0) break;
        w.col_add(bad, bad + 1, 1);
        t = diagonalize(w);
    }

    SmithForm out;
    out.D = w.A;
    out.U = w.U;
    out.Ui = w.Ui;
    out.V = w.V;
    out.Vi = w.Vi;
    out.rank = t;
    return out;
}

ModSolve solve_mod(const Mat& A, const std::vector<i64>& b, i64 m) {
    if (m <= 0) throw std::invalid_argument("solve_mod: modulus must be positive");
    if (static_cast<int>(b.size()) != A.rows) throw std::invalid_argument("solve_mod: rhs size");
    SmithForm s = smith(A);
    std::vector<i64> c = s.U.apply(b);
    int n = A.cols;
    ModSolve out;
    std::vector<i64> y(n, 0);
    int r = std::min(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i) {
        i64 d = (i < r) ? s.D.at(i, i) : 0;
        if (d == 0) {
            if (mod_norm(c[i], m) != 0) return out;  // unsolvable
        } else if (i < n) {
            i64 g = gcd_i64(d, m);
            if (mod_norm(c[i], g) != 0) return out;
            // d * y == c (mod m)  =>  y = (c/g) * inv(d/g) mod (m/g)
            i64 mg = m / g;
            i64 dg = mod_norm(d / g, mg);
            i64 cg = mod_norm(c[i] / g, mg);
            // modular inverse of dg mod mg
            i64 x0 = 0, x1 = 1, a0 = mg, a1 = dg;
            while (a1 != 0) {
                i64 q = a0 / a1;
                std::swap(a0 -= q * a1, a1);
                std::swap(x0 -= q * x1, x1);
            }
            i64 inv = mod_norm(x0, mg);
            y[i] = mod_norm(cg * inv % mg, mg);
        }
    }
    std::vector<i64> x = s.V.apply(y);
    out.solvable = true;
    out.particular.resize(n);
    for (int i = 0; i < n; ++i) out.particular[i] = mod_norm(x[i], m);

    // Kernel generators: V * (m/gcd(d_i,m)) e_i for i < rank, V e_j for j >= rank.
    std::vector<std::vector<i64>> gens;
    for (int i = 0; i < n; ++i) {
        i64 scale;
        if (i < s.rank) {
            i64 g = gcd_i64(s.D.at(i, i), m);
            scale = m / g;
            if (scale == m) continue;  // trivial generator (multiple of m)
        } else {
            scale = 1;
        }
        std::vector<i64> v(n, 0);
        for (int k = 0; k < n; ++k) v[k] = mod_norm(s.V.at(k, i) * scale % m, m);
        gens.push_back(std::move(v));
    }
    out.kernel = Mat(n, static_cast<int>(gens.size()));
    for (int j = 0; j < out.kernel.cols; ++j)
        for (int i = 0; i < n; ++i) out.kernel.at(i, j) = gens[j][i];
    return out;
}

Mat lattice_basis(const Mat& gens, int n, i64 m) {
    if (gens.rows != 0 && gens.rows != n) throw std::invalid_argument("lattice_basis: row count");
    Mat G(n, gens.cols + n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < gens.cols; ++j) G.at(i, j) = gens.rows ? gens.at(i, j) : 0;
        G.at(i, gens.cols + i) = m;
    }
    SmithForm s = smith(G);
    if (s.rank != n) throw std::runtime_error("lattice_basis: lattice not full rank");
    // Basis columns: Ui * D restricted to the first n columns.
    Mat B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B.at(i, j) = 0;
    for (int j = 0; j < n; ++j) {
        i64 d = s.D.at(j, j);
        for (int i = 0; i < n; ++i) B.at(i, j) = checked(static_cast<i128>(s.Ui.at(i, j)) * d);
    }
    return B;
}

LatticeQuotient lattice_quotient(const Mat& K, const Mat& E, i64 rep_cap) {
    int n = K.rows;
    if (E.rows != n) throw std::invalid_argument("lattice_quotient: dim mismatch");
    SmithForm sk = smith(K);
    if (sk.rank != n) throw std::runtime_error("lattice_quotient: K not full rank");
    // Coordinates of E in the basis of K: solve K * C = E. Using UKV=D:
    // K = Ui D Vi', so C = V * D^{-1} * U * E (must be integral).
    Mat UE = sk.U.times(E);
    Mat C(n, E.cols);
    for (int i = 0; i < n; ++i) {
        i64 d = sk.D.at(i, i);
        for (int j = 0; j < E.cols; ++j) {
            if (UE.at(i, j) % d != 0) throw std::runtime_error("lattice_quotient: E not inside K");
            C.at(i, j) = UE.at(i, j) / d;
        }
    }
    // Basis of K: columns of Ui * D (K*V = Ui*D, first n columns carry the rank).
    Mat Bk(n, n);
    for (int j = 0; j < n; ++j) {
        i64 d = sk.D.at(j, j);
        for (int i = 0; i < n; ++i) Bk.at(i, j) = checked(static_cast<i128>(sk.Ui.at(i, j)) * d);
    }

    SmithForm sc = smith(C);
    LatticeQuotient out;
    std::vector<i64> f;
    for (int i = 0; i < n; ++i) {
        i64 d = (i < sc.rank) ? std::llabs(sc.D.at(i, i)) : 0;
        if (d == 0) throw std::runtime_error("lattice_quotient: E not full rank");
        f.push_back(d);
    }
    i64 order = 1;
    bool capped = false;
    for (i64 d : f) {
        if (d > 1) out.factors.push_back(d);
        if (order > rep_cap / std::max<i64>(d, 1)) capped = true;
        order *= d;
        if (order > rep_cap) capped = true;
    }
    out.order = order;
    // Generators: with U C V = D, quotient coords are z in prod Z/f_i where
    // K-coordinates y = Uc^{-1} z. Representative x = Bk * Ui_c * z.
    Mat T = Bk.times(sc.Ui);
    {
        Mat gens(n, static_cast<int>(out.factors.size()));
        int col = 0;
        for (int i = 0; i < n; ++i) {
            if (f[i] <= 1) continue;
            for (int r = 0; r < n; ++r) gens.at(r, col) = T.at(r, i);
            ++col;
        }
        out.gens = std::move(gens);
    }
    if (!capped) {
        std::vector<i64> z(n, 0);
        std::vector<std::vector<i64>> reps;
        while (true) {
            reps.push_back(T.apply(z));
            int k = n - 1;
            while (k >= 0) {
                if (++z[k] < f[k]) break;
                z[k] = 0;
                --k;
            }
            if (k < 0) break;
        }
        out.reps = std::move(reps);
        out.reps_complete = true;
    }
    return out;
}

Mat lattice_intersect(const Mat& A, const Mat& B, int n) {
    // Kernel of [A | -B]: pairs (u, v) with A u = B v; intersection = A u.
    Mat M(n, A.cols + B.cols);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) M.at(i, A.cols + j) = -B.at(i, j);
    }
    SmithForm s = smith(M);
    int k = M.cols - s.rank;
    Mat gens(n, k);
    for (int t = 0; t < k; ++t) {
        // kernel basis vector: V e_{rank+t}
        std::vector<i64> w(M.cols, 0);
        for (int i = 0; i < M.cols; ++i) w[i] = s.V.at(i, s.rank + t);
        std::vector<i64> u(w.begin(), w.begin() + A.cols);
        std::vector<i64> x = A.apply(u);
        for (int i = 0; i < n; ++i) gens.at(i, t) = x[i];
    }
    SmithForm sg = smith(gens);
    // Return a clean basis.
    Mat Bk = gens.cols ? gens.times(sg.V) : Mat(n, 0);
    // Drop zero columns.
    std::vector<int> keep;
    for (int j = 0; j < Bk.cols; ++j) {
        bool nz = false;
        for (int i = 0; i < n; ++i) nz = nz || Bk.at(i, j) != 0;
        if (nz) keep.push_back(j);
    }
    Mat R(n, static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j)
        for (int i = 0; i < n; ++i) R.at(i, static_cast<int>(j)) = Bk.at(i, keep[j]);
    return R;
}

ModSolve solve_mod_rows(const std::vector<std::vector<i64>>& rows, int cols,
                        i64 m) {
    if (m <= 0) throw std::invalid_argument("solve_mod_rows: modulus");
    const int w = cols + 1;
    // One pivot row per leading column, reduced by extended-gcd combination.
    // Working mod m throughout keeps every entry below m.
    std::vector<std::vector<i64>> pivot(w);
    for (const auto& src : rows) {
        if (static_cast<int>(src.size()) != w)
            throw std::invalid_argument("solve_mod_rows: row width");
        std::vector<i64> v(w);
        for (int j = 0; j < w; ++j) v[j] = mod_norm(src[j], m);
        for (int c = 0; c < w; ++c) {
            if (v[c] == 0) continue;
            if (pivot[c].empty()) {
                pivot[c] = std::move(v);
                break;
            }
            std::vector<i64>& p = pivot[c];
            // alpha*p[c] + beta*v[c] = g
            i64 a0 = p[c], a1 = v[c];
            i64 x0 = 1, x1 = 0, y0 = 0, y1 = 1;
            while (a1 != 0) {
                i64 q = a0 / a1;
                std::swap(a0 -= q * a1, a1);
                std::swap(x0 -= q * x1, x1);
                std::swap(y0 -= q * y1, y1);
            }
            i64 g = a0, alpha = mod_norm(x0, m), beta = mod_norm(y0, m);
            i64 pc = p[c] / g, vc = v[c] / g;
            for (int j = c; j < w; ++j) {
                i64 np = mod_norm(alpha * p[j] % m + beta * v[j] % m, m);
                i64 nv = mod_norm(pc * v[j] % m - vc * p[j] % m, m);
                p[j] = np;
                v[j] = nv;
            }
        }
    }
    ModSolve out;
    // A pivot in the right-hand-side column is the equation 0 == nonzero.
    if (!pivot[cols].empty()) return out;
    std::vector<std::vector<i64>> folded;
    for (int c = 0; c < cols; ++c)
        if (!pivot[c].empty()) folded.push_back(std::move(pivot[c]));

    // Solve mod each prime power dividing m, then combine the particular
    // solutions by the Chinese remainder theorem. Every entry stays reduced
    // mod the prime power, so no intermediate can overflow. Pivoting on the
    // entry of least p-adic valuation leaves everything to the right of a
    // pivot at valuation >= the pivot's, which makes plain back-substitution
    // complete: the terms from already-fixed unknowns never change the
    // divisibility condition on the pivot unknown.
    std::vector<i64> x(static_cast<size_t>(cols), 0);
    i64 mc = 1;  // modulus combined so far
    i64 rest = m;
    for (i64 p = 2; rest > 1; ++p) {
        if (p * p > rest) p = rest;
        if (rest % p != 0) continue;
        i64 q = 1;
        while (rest % p == 0) {
            rest /= p;
            q *= p;
        }
        auto R = folded;
        for (auto& row : R)
            for (auto& e : row) e = mod_norm(e, q);
        std::vector<char> rowdone(R.size(), 0), coldone(static_cast<size_t>(cols), 0);
        std::vector<std::array<i64, 3>> order;  // (row, col, p^valuation)
        while (true) {
            int bi = -1, bj = -1, bestv = 64;
            for (size_t i = 0; i < R.size(); ++i) {
                if (rowdone[i]) continue;
                for (int j = 0; j < cols; ++j) {
                    if (coldone[j] || R[i][j] == 0) continue;
                    int v = 0;
                    for (i64 e = R[i][j]; e % p == 0; e /= p) ++v;
                    if (v < bestv) {
                        bestv = v;
                        bi = static_cast<int>(i);
                        bj = j;
                    }
                }
            }
            if (bi < 0) break;
            i64 pv = 1;
            for (int s = 0; s < bestv; ++s) pv *= p;
            // Scale the row by the inverse of the pivot's unit part, making
            // the pivot entry exactly pv.
            i64 u = R[bi][bj] / pv;
            i64 x0 = 0, x1 = 1, a0 = q, a1 = u;
            while (a1 != 0) {
                i64 d = a0 / a1;
                std::swap(a0 -= d * a1, a1);
                std::swap(x0 -= d * x1, x1);
            }
            i64 ui = mod_norm(x0, q);
            for (auto& e : R[bi]) e = mod_norm(ui * e % q, q);
            for (size_t i = 0; i < R.size(); ++i) {
                if (i == static_cast<size_t>(bi) || rowdone[i] || R[i][bj] == 0)
                    continue;
                i64 f = R[i][bj] / pv;  // divisible: pv had least valuation
                for (int j = 0; j < w; ++j)
                    R[i][j] = mod_norm(R[i][j] - f * R[bi][j] % q, q);
            }
            rowdone[bi] = 1;
            coldone[bj] = 1;
            order.push_back({bi, bj, pv});
        }
        for (size_t i = 0; i < R.size(); ++i)
            if (!rowdone[i] && R[i][cols] != 0) return out;  // 0 == nonzero
        std::vector<i64> xq(static_cast<size_t>(cols), 0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto [row, col, pv] = *it;
            i64 t = R[row][cols];
            for (int j = 0; j < cols; ++j)
                if (j != col) t -= R[row][j] * xq[j] % q;
            t = mod_norm(t, q);
            if (t % pv != 0) return out;
            xq[col] = t / pv;
        }
        // Fold xq into x: x == xq (mod q), keeping x mod mc from before.
        i64 y0 = 0, y1 = 1, b0 = q, b1 = mc % q;
        while (b1 != 0) {
            i64 d = b0 / b1;
            std::swap(b0 -= d * b1, b1);
            std::swap(y0 -= d * y1, y1);
        }
        i64 mci = mod_norm(y0, q);  // inverse of mc mod q (coprime)
        for (int j = 0; j < cols; ++j) {
            i64 t = mod_norm((xq[j] - x[j]) % q * mci % q, q);
            x[j] = x[j] + mc * t;
        }
        mc *= q;
    }
    out.solvable = true;
    out.particular = std::move(x);
    return out;
}

}  // namespace fusext::lin
