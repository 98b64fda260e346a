#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibrecalc {

/// Exact arbitrary-precision integer. All arithmetic in this library is
/// carried out over Int; no floating point appears anywhere.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense integer matrix, row-major. Empty shapes (0 rows and/or 0 columns)
/// are legal and behave as the evident degenerate linear maps.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols);
    IntMatrix(std::initializer_list<std::initializer_list<long long>> init);

    static IntMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return entries_[static_cast<size_t>(i) * cols_ + j]; }

    bool is_zero() const;

    // Elementary operations, used by the normal-form routines.
    void swap_rows(int i, int j);
    void swap_cols(int i, int j);
    void add_row_multiple(int dst, int src, const Int& c);  // row[dst] += c*row[src]
    void add_col_multiple(int dst, int src, const Int& c);
    void negate_row(int i);

    std::vector<Int> row(int i) const;
    std::vector<Int> col(int j) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Int> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v);
IntMatrix operator-(const IntMatrix& a);

IntMatrix transpose(const IntMatrix& a);
IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

/// Exact determinant by fraction-free (Bareiss) elimination.
Int determinant(const IntMatrix& a);

/// U * source * V == d with U, V unimodular and d diagonal, nonnegative,
/// each diagonal entry dividing the next. Deterministic for a fixed input:
/// pivots are chosen as the minimal nonzero absolute value, ties broken in
/// row-major order.
struct SmithDecomposition {
    IntMatrix u;
    IntMatrix d;
    IntMatrix v;
    IntMatrix source;

    std::vector<Int> diagonal() const;
    int rank() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& a);

int rank(const IntMatrix& a);

/// Finitely generated abelian group Z^free_rank + Z/t1 + ... with
/// t1 | t2 | ..., all ti > 1.
struct FinAbGroup {
    int free_rank = 0;
    std::vector<Int> torsion;

    bool trivial() const { return free_rank == 0 && torsion.empty(); }
    friend bool operator==(const FinAbGroup&, const FinAbGroup&) = default;
};

std::string to_string(const FinAbGroup& g);

/// Z^rows / image(a), for a viewed as a map Z^cols -> Z^rows.
FinAbGroup cokernel(const IntMatrix& a);

/// Cokernel together with the projection of Z^rows onto the free part of
/// the quotient (a free_rank x rows matrix). Torsion coordinates are
/// dropped by the projection.
struct CokernelMap {
    FinAbGroup group;
    IntMatrix free_projection;
};

CokernelMap cokernel_map(const IntMatrix& a);

/// Some integral solution x of a*x = b, if one exists.
std::optional<std::vector<Int>> solve_integral(const IntMatrix& a, const std::vector<Int>& b);

/// Basis of {x : a*x = 0} over Z, returned as the columns of the result.
/// The basis spans the full (saturated) kernel lattice.
IntMatrix kernel_basis(const IntMatrix& a);

}  // namespace fibrecalc
