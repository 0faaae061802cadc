#pragma once

// Integer matrix utilities: Smith normal form, linear systems over Z/mZ,
// lattice quotients with invariant factors and coset representatives.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fusext::lin {

using i64 = long long;

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<i64> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    i64& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    i64 at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static Mat identity(int n);
    Mat hcat(const Mat& other) const;
    Mat times(const Mat& other) const;
    std::vector<i64> apply(const std::vector<i64>& x) const;
};

// U * A * V = D with U, V unimodular; D diagonal with d_i | d_{i+1}.
// Ui = U^{-1}, Vi = V^{-1}.
struct SmithForm {
    Mat D, U, Ui, V, Vi;
    int rank = 0;
    std::vector<i64> diag() const;
};

SmithForm smith(Mat A);

// Solutions of A x == b (mod m), x in (Z/m)^cols.
struct ModSolve {
    bool solvable = false;
    std::vector<i64> particular;   // one solution, entries in [0,m)
    Mat kernel;                    // columns generate {x : A x == 0 (mod m)}
};

ModSolve solve_mod(const Mat& A, const std::vector<i64>& b, i64 m);

// solve_mod for systems with many more equations than unknowns: rows are
// first folded into an equivalent set of at most cols+1 rows by integer
// elimination mod m, so the cost no longer grows with the equation count.
// Each entry of `rows` holds the coefficients followed by the right-hand
// side (length cols+1). Only `solvable` and `particular` are filled in;
// the kernel is left empty.
ModSolve solve_mod_rows(const std::vector<std::vector<i64>>& rows, int cols,
                        i64 m);

// Subgroup of (Z/m)^n generated by the columns of `gens` (m*Z^n implied).
// Returned as an n x n basis matrix of the preimage lattice in Z^n.
Mat lattice_basis(const Mat& gens, int n, i64 m);

// Invariant factors (>1 only) and coset representatives of K/E where
// K, E are full-rank lattices in Z^n given by basis/generator columns,
// E a sublattice of K. Representatives are given in Z^n coordinates.
struct LatticeQuotient {
    std::vector<i64> factors;               // invariant factors > 1
    i64 order = 1;
    Mat gens;                               // one generator column per factor
    std::vector<std::vector<i64>> reps;     // coset representatives (only if order <= cap)
    bool reps_complete = false;
};

LatticeQuotient lattice_quotient(const Mat& K, const Mat& E, i64 rep_cap = 4096);

// Intersection of the lattices spanned by the columns of A and B (full rank n).
Mat lattice_intersect(const Mat& A, const Mat& B, int n);

i64 gcd_i64(i64 a, i64 b);
i64 mod_norm(i64 x, i64 m);

}  // namespace fusext::lin
