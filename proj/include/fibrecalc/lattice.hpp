#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fibrecalc/intalg.hpp"

namespace fibrecalc {

/// Free abelian group with a labeled basis and a symmetric integer pairing.
/// Lattices are immutable after construction and shared by the vectors
/// living in them.
struct Lattice {
    std::vector<std::string> basis_labels;
    IntMatrix gram;

    Lattice(std::vector<std::string> labels, IntMatrix gram_matrix);

    int rank() const { return static_cast<int>(basis_labels.size()); }
    int label_index(const std::string& label) const;
};

using LatticeRef = std::shared_ptr<const Lattice>;

LatticeRef make_lattice(std::vector<std::string> labels, IntMatrix gram);

/// Orthogonal direct sum; labels must stay distinct.
LatticeRef direct_sum(const Lattice& a, const Lattice& b);

struct LatticeVector {
    LatticeRef home;
    std::vector<Int> coords;
};

bool same_lattice(const Lattice& a, const Lattice& b);

LatticeVector basis_vector(const LatticeRef& l, const std::string& label);
LatticeVector zero_vector(const LatticeRef& l);
LatticeVector from_coeffs(const LatticeRef& l, const std::map<std::string, Int>& coeffs);

LatticeVector operator+(const LatticeVector& u, const LatticeVector& v);
LatticeVector operator-(const LatticeVector& u, const LatticeVector& v);
LatticeVector operator*(const Int& c, const LatticeVector& v);
bool operator==(const LatticeVector& u, const LatticeVector& v);

std::string to_string(const LatticeVector& v);

/// Intersection pairing u.gram.v; throws on mismatched home lattices.
Int pair(const LatticeVector& u, const LatticeVector& v);

struct Signature {
    int b_plus = 0;
    int b_minus = 0;
    int null_rank = 0;

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Counts of positive/negative/zero diagonal entries after exact rational
/// congruence diagonalization. No eigenvalues, no floating point.
Signature signature(const Lattice& l);
Signature signature(const IntMatrix& gram);

enum class Parity { Even, Odd };

/// Even iff every basis vector has even self-pairing (sufficient by
/// bilinearity of the form).
Parity parity(const Lattice& l);

/// K.x == x.x mod 2 for every basis vector x.
bool is_characteristic(const LatticeVector& k);

/// Splitting of the ambient lattice as Z*sigma + Z*b + complement, valid
/// whenever the 2x2 Gram of the marked pair is unimodular.
struct SplitLattice {
    std::vector<LatticeVector> marked;            // {sigma, b}
    std::vector<LatticeVector> complement_basis;  // vectors in the ambient lattice
    LatticeRef complement;                        // Gram of complement_basis
};

/// Orthogonal complement of the marked pair {sigma, b}. Requires the
/// marked 2x2 Gram to have determinant +-1; rejects otherwise, reporting
/// the offending determinant. Only rank-2 marked pairs are supported.
SplitLattice split_unimodular(const LatticeRef& l, const LatticeVector& sigma,
                              const LatticeVector& b,
                              const std::vector<std::string>& complement_labels = {});

/// Coordinates of v in the complement basis of a split; fails if v does
/// not lie in the complement sublattice.
std::optional<std::vector<Int>> complement_coords(const SplitLattice& split,
                                                  const LatticeVector& v);

}  // namespace fibrecalc
