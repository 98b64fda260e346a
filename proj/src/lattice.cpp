#include "fibrecalc/lattice.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fibrecalc {

Lattice::Lattice(std::vector<std::string> labels, IntMatrix gram_matrix)
    : basis_labels(std::move(labels)), gram(std::move(gram_matrix)) {
    const int n = static_cast<int>(basis_labels.size());
    if (gram.rows() != n || gram.cols() != n)
        throw Error("lattice Gram matrix must be square of rank = #labels");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (gram.at(i, j) != gram.at(j, i))
                throw Error("lattice Gram matrix must be symmetric");
    std::set<std::string> seen(basis_labels.begin(), basis_labels.end());
    if (static_cast<int>(seen.size()) != n)
        throw Error("lattice basis labels must be distinct");
}

int Lattice::label_index(const std::string& label) const {
    auto it = std::find(basis_labels.begin(), basis_labels.end(), label);
    if (it == basis_labels.end())
        throw Error("unknown basis label '" + label + "'");
    return static_cast<int>(it - basis_labels.begin());
}

LatticeRef make_lattice(std::vector<std::string> labels, IntMatrix gram) {
    return std::make_shared<const Lattice>(std::move(labels), std::move(gram));
}

LatticeRef direct_sum(const Lattice& a, const Lattice& b) {
    std::vector<std::string> labels = a.basis_labels;
    labels.insert(labels.end(), b.basis_labels.begin(), b.basis_labels.end());
    IntMatrix g(a.rank() + b.rank(), a.rank() + b.rank());
    for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < a.rank(); ++j) g.at(i, j) = a.gram.at(i, j);
    for (int i = 0; i < b.rank(); ++i)
        for (int j = 0; j < b.rank(); ++j) g.at(a.rank() + i, a.rank() + j) = b.gram.at(i, j);
    return make_lattice(std::move(labels), std::move(g));
}

bool same_lattice(const Lattice& a, const Lattice& b) {
    return &a == &b || (a.basis_labels == b.basis_labels && a.gram == b.gram);
}

LatticeVector basis_vector(const LatticeRef& l, const std::string& label) {
    LatticeVector v{l, std::vector<Int>(l->rank(), Int(0))};
    v.coords[l->label_index(label)] = 1;
    return v;
}

LatticeVector zero_vector(const LatticeRef& l) {
    return LatticeVector{l, std::vector<Int>(l->rank(), Int(0))};
}

LatticeVector from_coeffs(const LatticeRef& l, const std::map<std::string, Int>& coeffs) {
    LatticeVector v = zero_vector(l);
    for (const auto& [label, c] : coeffs) v.coords[l->label_index(label)] = c;
    return v;
}

namespace {

void require_same_home(const LatticeVector& u, const LatticeVector& v) {
    if (!u.home || !v.home || !same_lattice(*u.home, *v.home))
        throw Error("lattice vectors live in different lattices");
}

}  // namespace

LatticeVector operator+(const LatticeVector& u, const LatticeVector& v) {
    require_same_home(u, v);
    LatticeVector w = u;
    for (size_t i = 0; i < w.coords.size(); ++i) w.coords[i] += v.coords[i];
    return w;
}

LatticeVector operator-(const LatticeVector& u, const LatticeVector& v) {
    require_same_home(u, v);
    LatticeVector w = u;
    for (size_t i = 0; i < w.coords.size(); ++i) w.coords[i] -= v.coords[i];
    return w;
}

LatticeVector operator*(const Int& c, const LatticeVector& v) {
    LatticeVector w = v;
    for (auto& x : w.coords) x *= c;
    return w;
}

bool operator==(const LatticeVector& u, const LatticeVector& v) {
    return same_lattice(*u.home, *v.home) && u.coords == v.coords;
}

std::string to_string(const LatticeVector& v) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < v.coords.size(); ++i) {
        const Int& c = v.coords[i];
        if (c == 0) continue;
        if (c > 0 && !first) os << "+";
        if (c == -1)
            os << "-";
        else if (c != 1)
            os << c << "*";
        os << v.home->basis_labels[i];
        first = false;
    }
    return first ? "0" : os.str();
}

Int pair(const LatticeVector& u, const LatticeVector& v) {
    require_same_home(u, v);
    std::vector<Int> gv = u.home->gram * v.coords;
    Int out = 0;
    for (size_t i = 0; i < gv.size(); ++i) out += u.coords[i] * gv[i];
    return out;
}

Signature signature(const IntMatrix& gram) {
    const int n = gram.rows();
    if (gram.cols() != n)
        throw Error("signature of non-square matrix");
    // Exact symmetric congruence reduction over the rationals.
    std::vector<std::vector<Rational>> g(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = Rational(gram.at(i, j));

    auto swap_sym = [&](int i, int j) {
        if (i == j) return;
        std::swap(g[i], g[j]);
        for (int k = 0; k < n; ++k) std::swap(g[k][i], g[k][j]);
    };

    Signature s;
    for (int k = 0; k < n; ++k) {
        if (g[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (g[i][i] != 0) { p = i; break; }
            if (p >= 0) {
                swap_sym(k, p);
            } else {
                // all remaining diagonal entries vanish; look for an
                // off-diagonal pair and fold it onto the diagonal
                int oi = -1, oj = -1;
                for (int i = k; i < n && oi < 0; ++i)
                    for (int j = i + 1; j < n && oi < 0; ++j)
                        if (g[i][j] != 0) { oi = i; oj = j; }
                if (oi < 0) {
                    s.null_rank = n - k;
                    break;
                }
                swap_sym(k, oi);
                int j = (oj == k) ? oi : oj;
                // row/col k += row/col j: diagonal becomes 2*g[k][j] != 0
                for (int c = 0; c < n; ++c) g[k][c] += g[j][c];
                for (int r = 0; r < n; ++r) g[r][k] += g[r][j];
            }
        }
        const Rational pivot = g[k][k];
        for (int i = k + 1; i < n; ++i) {
            if (g[i][k] == 0) continue;
            Rational f = g[i][k] / pivot;
            for (int c = 0; c < n; ++c) g[i][c] -= f * g[k][c];
            for (int r = 0; r < n; ++r) g[r][i] -= f * g[r][k];
        }
        if (pivot > 0)
            ++s.b_plus;
        else
            ++s.b_minus;
    }
    return s;
}

Signature signature(const Lattice& l) { return signature(l.gram); }

Parity parity(const Lattice& l) {
    for (int i = 0; i < l.rank(); ++i)
        if (l.gram.at(i, i) % 2 != 0) return Parity::Odd;
    return Parity::Even;
}

bool is_characteristic(const LatticeVector& k) {
    const Lattice& l = *k.home;
    std::vector<Int> gk = l.gram * k.coords;
    for (int i = 0; i < l.rank(); ++i)
        if ((gk[i] - l.gram.at(i, i)) % 2 != 0) return false;
    return true;
}

SplitLattice split_unimodular(const LatticeRef& l, const LatticeVector& sigma,
                              const LatticeVector& b,
                              const std::vector<std::string>& complement_labels) {
    if (!same_lattice(*l, *sigma.home) || !same_lattice(*l, *b.home))
        throw Error("marked vectors do not live in the given lattice");

    IntMatrix marked_gram{{0, 0}, {0, 0}};
    marked_gram.at(0, 0) = pair(sigma, sigma);
    marked_gram.at(0, 1) = pair(sigma, b);
    marked_gram.at(1, 0) = marked_gram.at(0, 1);
    marked_gram.at(1, 1) = pair(b, b);
    Int det = determinant(marked_gram);
    if (det != 1 && det != -1) {
        std::ostringstream os;
        os << "marked pair is not unimodular: det of its Gram is " << det;
        throw Error(os.str());
    }

    // Complement = integral kernel of the 2 x rank pairing matrix.
    const int n = l->rank();
    IntMatrix pairing(2, n);
    std::vector<Int> gs = l->gram * sigma.coords;
    std::vector<Int> gb = l->gram * b.coords;
    for (int j = 0; j < n; ++j) {
        pairing.at(0, j) = gs[j];
        pairing.at(1, j) = gb[j];
    }
    IntMatrix k = kernel_basis(pairing);
    if (k.cols() != n - 2)
        throw Error("internal: orthogonal complement has unexpected rank");

    SplitLattice out;
    out.marked = {sigma, b};
    for (int j = 0; j < k.cols(); ++j)
        out.complement_basis.push_back(LatticeVector{l, k.col(j)});

    // change of basis (sigma | b | complement) must be unimodular
    IntMatrix change(n, n);
    for (int i = 0; i < n; ++i) {
        change.at(i, 0) = sigma.coords[i];
        change.at(i, 1) = b.coords[i];
        for (int j = 0; j < k.cols(); ++j) change.at(i, 2 + j) = k.at(i, j);
    }
    Int cd = determinant(change);
    if (cd != 1 && cd != -1)
        throw Error("internal: marked pair + complement do not span over Z");

    std::vector<std::string> labels = complement_labels;
    if (labels.empty())
        for (int j = 0; j < k.cols(); ++j) labels.push_back("P" + std::to_string(j + 1));
    if (static_cast<int>(labels.size()) != k.cols())
        throw Error("wrong number of complement labels");

    IntMatrix cgram(k.cols(), k.cols());
    for (int i = 0; i < k.cols(); ++i)
        for (int j = 0; j < k.cols(); ++j)
            cgram.at(i, j) = pair(out.complement_basis[i], out.complement_basis[j]);
    out.complement = make_lattice(std::move(labels), std::move(cgram));
    return out;
}

std::optional<std::vector<Int>> complement_coords(const SplitLattice& split,
                                                  const LatticeVector& v) {
    if (split.complement_basis.empty())
        return v.coords == std::vector<Int>(v.coords.size(), Int(0))
                   ? std::optional<std::vector<Int>>(std::vector<Int>{})
                   : std::nullopt;
    const int n = static_cast<int>(v.coords.size());
    const int m = static_cast<int>(split.complement_basis.size());
    IntMatrix basis(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) basis.at(i, j) = split.complement_basis[j].coords[i];
    return solve_integral(basis, v.coords);
}

}  // namespace fibrecalc
