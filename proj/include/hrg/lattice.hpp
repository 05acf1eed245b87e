#pragma once

// Exact integer linear algebra for subgroups of Z^k: Smith normal form,
// the quotient Z^k/H ~ Z_{d1} x ... x Z_{dr} x Z^{k-r}, the quotient map and
// the section onto the free part.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hrg {

using Integer = boost::multiprecision::cpp_int;

/// Element of Z^k.
using GDegree = std::vector<std::int64_t>;

GDegree operator+(GDegree const& a, GDegree const& b);
GDegree operator-(GDegree const& a, GDegree const& b);
GDegree operator-(GDegree const& a);

GDegree meet(GDegree const& a, GDegree const& b);
GDegree join(GDegree const& a, GDegree const& b);
GDegree positive_part(GDegree const& n);  // n ∨ 0
GDegree negative_part(GDegree const& n);  // -(n ∧ 0)
bool leq(GDegree const& a, GDegree const& b);  // componentwise
bool is_zero(GDegree const& a);
bool is_nonnegative(GDegree const& a);
std::string to_string(GDegree const& a);

/// Dense integer matrix with arbitrary precision entries, row major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(std::vector<std::vector<std::int64_t>> const& rows);
  static IntMatrix from_columns(std::vector<GDegree> const& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Integer const& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix operator*(IntMatrix const& other) const;
  bool operator==(IntMatrix const& other) const = default;

  bool is_diagonal() const;
  IntMatrix transpose() const;
  std::vector<Integer> apply(std::vector<Integer> const& v) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, Integer const& factor);
  // col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, Integer const& factor);
  void negate_row(std::size_t r);
  void negate_col(std::size_t c);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Exact determinant (fraction-free Bareiss elimination). Square matrices only.
Integer determinant(IntMatrix const& m);

struct SmithDecomposition {
  IntMatrix u;      // rows x rows, unimodular
  IntMatrix u_inv;  // inverse of u
  IntMatrix d;      // rows x cols, diagonal, nonnegative, divisibility chain
  IntMatrix v;      // cols x cols, unimodular
  /// Nonzero diagonal entries d_1 | d_2 | ... | d_r.
  std::vector<Integer> invariant_factors;
};

/// D = U * A * V with minimal-absolute-value pivoting.
SmithDecomposition smith_normal_form(IntMatrix const& a);

/// Subgroup H of Z^k generated by the columns of `generators`.
///
/// The columns f_1..f_k of u_inv form a basis of Z^k such that
/// d_1 f_1, ..., d_r f_r generate H.
class Subgroup {
 public:
  explicit Subgroup(std::size_t ambient_rank);
  Subgroup(std::size_t ambient_rank, std::vector<GDegree> generators);

  std::size_t ambient_rank() const { return rank_; }
  std::vector<GDegree> const& generators() const { return generators_; }
  SmithDecomposition const& snf() const { return snf_; }
  std::vector<Integer> const& invariant_factors() const { return snf_.invariant_factors; }
  std::size_t torsion_rank() const { return snf_.invariant_factors.size(); }

  /// Basis vector f_i (0-based) in ambient coordinates.
  GDegree basis_vector(std::size_t i) const;
  /// The canonical generators d_i f_i, i < r.
  std::vector<GDegree> canonical_generators() const;
  /// Coordinates of n in the f-basis (= U n).
  std::vector<Integer> basis_coordinates(GDegree const& n) const;

  bool contains(GDegree const& g) const;
  bool is_trivial() const { return snf_.invariant_factors.empty(); }
  /// Mutual generator membership.
  bool same_as(Subgroup const& other) const;
  bool contains_subgroup(Subgroup const& other) const;
  /// Index [Z^k : H] if finite, zero otherwise.
  Integer index() const;

 private:
  std::size_t rank_;
  std::vector<GDegree> generators_;
  SmithDecomposition snf_;
};

/// Smallest subgroup containing every element of `diffs`.
Subgroup group_generated(std::size_t rank, std::vector<GDegree> const& diffs);

/// Element of Z_{d1} x ... x Z_{dr} x Z^{k-r}.
struct QElem {
  std::vector<std::int64_t> torsion;  // t_i in [0, d_i)
  std::vector<std::int64_t> free;

  bool operator==(QElem const& other) const = default;
  auto operator<=>(QElem const& other) const = default;
  bool is_zero() const;
};

std::string to_string(QElem const& x);

/// Z^k / H together with the quotient map q and the section j.
class QuotientMonoid {
 public:
  explicit QuotientMonoid(Subgroup subgroup);

  Subgroup const& subgroup() const { return subgroup_; }
  std::size_t ambient_rank() const { return subgroup_.ambient_rank(); }
  std::vector<std::int64_t> const& torsion() const { return torsion_; }
  std::size_t free_rank() const { return ambient_rank() - torsion_.size(); }

  QElem zero() const;
  QElem q(GDegree const& n) const;
  QElem add(QElem const& a, QElem const& b) const;
  QElem negate(QElem const& a) const;
  /// Free part lifted to ambient coordinates: sum_{i>r} z_i f_i.
  GDegree section(QElem const& x) const;
  /// First r coordinates of n in the f-basis.
  std::vector<std::int64_t> torsion_exponent(GDegree const& n) const;
  /// Image of the unit vector e_i.
  QElem generator_degree(std::size_t i) const;
  bool valid(QElem const& x) const;

 private:
  Subgroup subgroup_;
  std::vector<std::int64_t> torsion_;
};

QuotientMonoid quotient_structure(Subgroup const& h);

}  // namespace hrg
