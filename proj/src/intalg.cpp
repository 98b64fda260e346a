#include "fibrecalc/intalg.hpp"

#include <algorithm>
#include <sstream>

namespace fibrecalc {

IntMatrix::IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw Error("matrix dimensions must be nonnegative");
    entries_.assign(static_cast<size_t>(rows) * cols, Int(0));
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    entries_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : init) {
        if (static_cast<int>(r.size()) != cols_)
            throw Error("ragged initializer for IntMatrix");
        for (long long x : r) entries_.emplace_back(x);
    }
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

bool IntMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Int& x) { return x == 0; });
}

void IntMatrix::swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
}

void IntMatrix::swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
}

void IntMatrix::add_row_multiple(int dst, int src, const Int& c) {
    for (int k = 0; k < cols_; ++k) at(dst, k) += c * at(src, k);
}

void IntMatrix::add_col_multiple(int dst, int src, const Int& c) {
    for (int k = 0; k < rows_; ++k) at(k, dst) += c * at(k, src);
}

void IntMatrix::negate_row(int i) {
    for (int k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
}

std::vector<Int> IntMatrix::row(int i) const {
    std::vector<Int> r(cols_);
    for (int k = 0; k < cols_; ++k) r[k] = at(i, k);
    return r;
}

std::vector<Int> IntMatrix::col(int j) const {
    std::vector<Int> c(rows_);
    for (int k = 0; k < rows_; ++k) c[k] = at(k, j);
    return c;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows())
        throw Error("matrix product dimension mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

std::vector<Int> operator*(const IntMatrix& a, const std::vector<Int>& v) {
    if (a.cols() != static_cast<int>(v.size()))
        throw Error("matrix-vector dimension mismatch");
    std::vector<Int> out(a.rows(), Int(0));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out[i] += a.at(i, j) * v[j];
    return out;
}

IntMatrix operator-(const IntMatrix& a) {
    IntMatrix b = a;
    for (int i = 0; i < b.rows(); ++i) b.negate_row(i);
    return b;
}

IntMatrix transpose(const IntMatrix& a) {
    IntMatrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
    return t;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows())
        throw Error("hstack row mismatch");
    IntMatrix c(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) c.at(i, a.cols() + j) = b.at(i, j);
    }
    return c;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols())
        throw Error("vstack column mismatch");
    IntMatrix c(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) c.at(a.rows() + i, j) = b.at(i, j);
    return c;
}

Int determinant(const IntMatrix& a) {
    if (a.rows() != a.cols())
        throw Error("determinant of non-square matrix");
    const int n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = num / prev;  // Bareiss: division is exact
            }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

namespace {

// Position of the entry of minimal nonzero absolute value in the trailing
// submatrix d[t.., t..], scanning row-major so ties are broken
// deterministically. Returns false when the submatrix is zero.
bool find_pivot(const IntMatrix& d, int t, int& pi, int& pj) {
    bool found = false;
    Int best = 0;
    for (int i = t; i < d.rows(); ++i)
        for (int j = t; j < d.cols(); ++j) {
            const Int& x = d.at(i, j);
            if (x == 0) continue;
            Int ax = abs(x);
            if (!found || ax < best) {
                found = true;
                best = ax;
                pi = i;
                pj = j;
            }
        }
    return found;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
    SmithDecomposition s;
    s.source = a;
    s.d = a;
    s.u = IntMatrix::identity(a.rows());
    s.v = IntMatrix::identity(a.cols());
    IntMatrix& d = s.d;
    IntMatrix& u = s.u;
    IntMatrix& v = s.v;

    const int nmin = std::min(a.rows(), a.cols());
    for (int t = 0; t < nmin; ++t) {
        int pi = 0, pj = 0;
        if (!find_pivot(d, t, pi, pj)) break;
        for (;;) {
            // The pivot is re-selected as the global minimum after every
            // sweep; each re-selection strictly decreases its absolute
            // value, which both terminates the loop and keeps coefficient
            // growth in check.
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            bool dirty = false;
            for (int i = t + 1; i < d.rows(); ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = d.at(i, t) / d.at(t, t);
                if (q != 0) {
                    d.add_row_multiple(i, t, -q);
                    u.add_row_multiple(i, t, -q);
                }
                if (d.at(i, t) != 0) dirty = true;
            }
            for (int j = t + 1; j < d.cols(); ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = d.at(t, j) / d.at(t, t);
                if (q != 0) {
                    d.add_col_multiple(j, t, -q);
                    v.add_col_multiple(j, t, -q);
                }
                if (d.at(t, j) != 0) dirty = true;
            }
            if (dirty) {
                find_pivot(d, t, pi, pj);
                continue;
            }
            // Row and column are clear. Enforce the divisor chain: the
            // pivot must divide every entry of the trailing submatrix.
            bool divides = true;
            for (int i = t + 1; i < d.rows() && divides; ++i)
                for (int j = t + 1; j < d.cols() && divides; ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        d.add_row_multiple(t, i, 1);
                        u.add_row_multiple(t, i, 1);
                        divides = false;
                    }
            if (divides) break;
            find_pivot(d, t, pi, pj);
        }
        if (d.at(t, t) < 0) {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    return s;
}

std::vector<Int> SmithDecomposition::diagonal() const {
    std::vector<Int> out;
    const int n = std::min(d.rows(), d.cols());
    for (int i = 0; i < n; ++i) out.push_back(d.at(i, i));
    return out;
}

int SmithDecomposition::rank() const {
    int r = 0;
    for (const Int& x : diagonal())
        if (x != 0) ++r;
    return r;
}

int rank(const IntMatrix& a) { return smith_normal_form(a).rank(); }

std::string to_string(const FinAbGroup& g) {
    if (g.trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (g.free_rank == 1) {
        os << "Z";
        first = false;
    } else if (g.free_rank > 1) {
        os << "Z^" << g.free_rank;
        first = false;
    }
    for (const Int& t : g.torsion) {
        if (!first) os << " + ";
        os << "Z/" << t;
        first = false;
    }
    return os.str();
}

FinAbGroup cokernel(const IntMatrix& a) { return cokernel_map(a).group; }

CokernelMap cokernel_map(const IntMatrix& a) {
    SmithDecomposition s = smith_normal_form(a);
    CokernelMap out;
    const int r = s.rank();
    out.group.free_rank = a.rows() - r;
    for (const Int& x : s.diagonal())
        if (x > 1) out.group.torsion.push_back(x);
    out.free_projection = IntMatrix(out.group.free_rank, a.rows());
    for (int i = 0; i < out.group.free_rank; ++i)
        for (int j = 0; j < a.rows(); ++j) out.free_projection.at(i, j) = s.u.at(r + i, j);
    return out;
}

std::optional<std::vector<Int>> solve_integral(const IntMatrix& a, const std::vector<Int>& b) {
    if (static_cast<int>(b.size()) != a.rows())
        throw Error("solve_integral: right-hand side has wrong length");
    SmithDecomposition s = smith_normal_form(a);
    std::vector<Int> c = s.u * b;
    const int r = s.rank();
    std::vector<Int> y(a.cols(), Int(0));
    for (int i = 0; i < a.rows(); ++i) {
        if (i < r) {
            const Int& di = s.d.at(i, i);
            if (c[i] % di != 0) return std::nullopt;
            y[i] = c[i] / di;
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return s.v * y;
}

IntMatrix kernel_basis(const IntMatrix& a) {
    SmithDecomposition s = smith_normal_form(a);
    const int r = s.rank();
    IntMatrix k(a.cols(), a.cols() - r);
    for (int j = r; j < a.cols(); ++j)
        for (int i = 0; i < a.cols(); ++i) k.at(i, j - r) = s.v.at(i, j);
    return k;
}

}  // namespace fibrecalc
