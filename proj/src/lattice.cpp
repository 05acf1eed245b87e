#include "hrg/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace hrg {

namespace {

std::int64_t narrow(Integer const& x) {
  if (x > Integer(INT64_MAX) || x < Integer(INT64_MIN)) {
    throw std::overflow_error("lattice: coordinate exceeds 64-bit range");
  }
  return x.convert_to<std::int64_t>();
}

void check_same_rank(GDegree const& a, GDegree const& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("degree rank mismatch");
  }
}

Integer abs_value(Integer const& x) { return x < 0 ? Integer(-x) : x; }

// Nonnegative remainder.
Integer mod_floor(Integer const& a, Integer const& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

GDegree operator+(GDegree const& a, GDegree const& b) {
  check_same_rank(a, b);
  GDegree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

GDegree operator-(GDegree const& a, GDegree const& b) {
  check_same_rank(a, b);
  GDegree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

GDegree operator-(GDegree const& a) {
  GDegree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

GDegree meet(GDegree const& a, GDegree const& b) {
  check_same_rank(a, b);
  GDegree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

GDegree join(GDegree const& a, GDegree const& b) {
  check_same_rank(a, b);
  GDegree out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

GDegree positive_part(GDegree const& n) { return join(n, GDegree(n.size(), 0)); }

GDegree negative_part(GDegree const& n) { return -meet(n, GDegree(n.size(), 0)); }

bool leq(GDegree const& a, GDegree const& b) {
  check_same_rank(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

bool is_zero(GDegree const& a) {
  return std::all_of(a.begin(), a.end(), [](auto x) { return x == 0; });
}

bool is_nonnegative(GDegree const& a) {
  return std::all_of(a.begin(), a.end(), [](auto x) { return x >= 0; });
}

std::string to_string(GDegree const& a) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out << ',';
    out << a[i];
  }
  out << ')';
  return out.str();
}

// ---------------------------------------------------------------------------
// IntMatrix
// ---------------------------------------------------------------------------

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(std::vector<std::vector<std::int64_t>> const& rows) {
  std::size_t const cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::vector<GDegree> const& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw std::invalid_argument("generator rank mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

IntMatrix IntMatrix::operator*(IntMatrix const& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      Integer const& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  }
  return out;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i != j && (*this)(i, j) != 0) return false;
    }
  }
  return true;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

std::vector<Integer> IntMatrix::apply(std::vector<Integer> const& v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector shape mismatch");
  std::vector<Integer> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row(std::size_t dst, std::size_t src, Integer const& factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += factor * (*this)(src, c);
}

void IntMatrix::add_col(std::size_t dst, std::size_t src, Integer const& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += factor * (*this)(r, src);
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

void IntMatrix::negate_col(std::size_t c) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
}

Integer determinant(IntMatrix const& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("determinant of non-square matrix");
  std::size_t const n = input.rows();
  if (n == 0) return 1;
  IntMatrix m = input;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

namespace {

class SmithReducer {
 public:
  explicit SmithReducer(IntMatrix const& a)
      : d_(a),
        u_(IntMatrix::identity(a.rows())),
        u_inv_(IntMatrix::identity(a.rows())),
        v_(IntMatrix::identity(a.cols())) {}

  SmithDecomposition run() {
    std::size_t const limit = std::min(d_.rows(), d_.cols());
    for (std::size_t t = 0; t < limit; ++t) {
      if (!reduce_position(t)) break;
    }
    SmithDecomposition out;
    for (std::size_t t = 0; t < limit; ++t) {
      if (d_(t, t) != 0) out.invariant_factors.push_back(d_(t, t));
    }
    out.u = std::move(u_);
    out.u_inv = std::move(u_inv_);
    out.d = std::move(d_);
    out.v = std::move(v_);
    return out;
  }

 private:
  // Row operation row[dst] += f * row[src], mirrored on U and U^{-1}.
  void row_add(std::size_t dst, std::size_t src, Integer const& f) {
    d_.add_row(dst, src, f);
    u_.add_row(dst, src, f);
    u_inv_.add_col(src, dst, -f);
  }
  void row_swap(std::size_t a, std::size_t b) {
    d_.swap_rows(a, b);
    u_.swap_rows(a, b);
    u_inv_.swap_cols(a, b);
  }
  void row_negate(std::size_t r) {
    d_.negate_row(r);
    u_.negate_row(r);
    u_inv_.negate_col(r);
  }
  void col_add(std::size_t dst, std::size_t src, Integer const& f) {
    d_.add_col(dst, src, f);
    v_.add_col(dst, src, f);
  }
  void col_swap(std::size_t a, std::size_t b) {
    d_.swap_cols(a, b);
    v_.swap_cols(a, b);
  }

  // Returns false when the remaining submatrix is zero.
  bool reduce_position(std::size_t t) {
    std::size_t const rows = d_.rows();
    std::size_t const cols = d_.cols();
    for (;;) {
      // minimal nonzero pivot in the trailing submatrix
      bool found = false;
      std::size_t pi = t, pj = t;
      Integer best;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (d_(i, j) == 0) continue;
          Integer a = abs_value(d_(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      }
      if (!found) return false;
      row_swap(t, pi);
      col_swap(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d_(i, t) == 0) continue;
        Integer q = d_(i, t) / d_(t, t);
        row_add(i, t, -q);
        if (d_(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d_(t, j) == 0) continue;
        Integer q = d_(t, j) / d_(t, t);
        col_add(j, t, -q);
        if (d_(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility chain: fold an offending row into the pivot row
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (d_(i, j) % d_(t, t) != 0) {
            row_add(t, i, 1);
            divisible = false;
            break;
          }
        }
      }
      if (!divisible) continue;

      if (d_(t, t) < 0) row_negate(t);
      return true;
    }
  }

  IntMatrix d_;
  IntMatrix u_;
  IntMatrix u_inv_;
  IntMatrix v_;
};

}  // namespace

SmithDecomposition smith_normal_form(IntMatrix const& a) { return SmithReducer(a).run(); }

// ---------------------------------------------------------------------------
// Subgroup
// ---------------------------------------------------------------------------

Subgroup::Subgroup(std::size_t ambient_rank) : Subgroup(ambient_rank, {}) {}

Subgroup::Subgroup(std::size_t ambient_rank, std::vector<GDegree> generators)
    : rank_(ambient_rank), generators_(std::move(generators)) {
  snf_ = smith_normal_form(IntMatrix::from_columns(generators_, rank_));
}

GDegree Subgroup::basis_vector(std::size_t i) const {
  GDegree out(rank_);
  for (std::size_t r = 0; r < rank_; ++r) out[r] = narrow(snf_.u_inv(r, i));
  return out;
}

std::vector<GDegree> Subgroup::canonical_generators() const {
  std::vector<GDegree> out;
  for (std::size_t i = 0; i < torsion_rank(); ++i) {
    GDegree f = basis_vector(i);
    std::int64_t const d = narrow(snf_.invariant_factors[i]);
    for (auto& x : f) x *= d;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Integer> Subgroup::basis_coordinates(GDegree const& n) const {
  if (n.size() != rank_) throw std::invalid_argument("degree rank mismatch");
  std::vector<Integer> v(n.begin(), n.end());
  return snf_.u.apply(v);
}

bool Subgroup::contains(GDegree const& g) const {
  std::vector<Integer> y = basis_coordinates(g);
  std::size_t const r = torsion_rank();
  for (std::size_t i = 0; i < rank_; ++i) {
    if (i < r) {
      if (y[i] % snf_.invariant_factors[i] != 0) return false;
    } else if (y[i] != 0) {
      return false;
    }
  }
  return true;
}

bool Subgroup::contains_subgroup(Subgroup const& other) const {
  return std::all_of(other.generators_.begin(), other.generators_.end(),
                     [&](GDegree const& g) { return contains(g); });
}

bool Subgroup::same_as(Subgroup const& other) const {
  return rank_ == other.rank_ && contains_subgroup(other) && other.contains_subgroup(*this);
}

Integer Subgroup::index() const {
  if (torsion_rank() < rank_) return 0;
  Integer out = 1;
  for (auto const& d : snf_.invariant_factors) out *= d;
  return out;
}

Subgroup group_generated(std::size_t rank, std::vector<GDegree> const& diffs) {
  std::vector<GDegree> gens;
  for (auto const& g : diffs) {
    if (g.size() != rank) throw std::invalid_argument("degree rank mismatch");
    if (is_zero(g)) continue;
    if (std::find(gens.begin(), gens.end(), g) != gens.end()) continue;
    gens.push_back(g);
  }
  return Subgroup(rank, std::move(gens));
}

// ---------------------------------------------------------------------------
// Quotient monoid
// ---------------------------------------------------------------------------

bool QElem::is_zero() const {
  return std::all_of(torsion.begin(), torsion.end(), [](auto x) { return x == 0; }) &&
         std::all_of(free.begin(), free.end(), [](auto x) { return x == 0; });
}

std::string to_string(QElem const& x) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < x.torsion.size(); ++i) {
    if (i) out << ',';
    out << x.torsion[i];
  }
  out << ';';
  for (std::size_t i = 0; i < x.free.size(); ++i) {
    if (i) out << ',';
    out << x.free[i];
  }
  out << ')';
  return out.str();
}

QuotientMonoid::QuotientMonoid(Subgroup subgroup) : subgroup_(std::move(subgroup)) {
  for (auto const& d : subgroup_.invariant_factors()) torsion_.push_back(narrow(d));
}

QElem QuotientMonoid::zero() const {
  return QElem{std::vector<std::int64_t>(torsion_.size(), 0),
               std::vector<std::int64_t>(free_rank(), 0)};
}

QElem QuotientMonoid::q(GDegree const& n) const {
  std::vector<Integer> y = subgroup_.basis_coordinates(n);
  QElem out;
  std::size_t const r = torsion_.size();
  for (std::size_t i = 0; i < r; ++i) out.torsion.push_back(narrow(mod_floor(y[i], torsion_[i])));
  for (std::size_t i = r; i < y.size(); ++i) out.free.push_back(narrow(y[i]));
  return out;
}

QElem QuotientMonoid::add(QElem const& a, QElem const& b) const {
  if (!valid(a) || !valid(b)) throw std::invalid_argument("element not in quotient");
  QElem out = a;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    out.torsion[i] = (a.torsion[i] + b.torsion[i]) % torsion_[i];
  }
  for (std::size_t i = 0; i < out.free.size(); ++i) out.free[i] += b.free[i];
  return out;
}

QElem QuotientMonoid::negate(QElem const& a) const {
  QElem out = a;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    out.torsion[i] = (torsion_[i] - a.torsion[i]) % torsion_[i];
  }
  for (auto& z : out.free) z = -z;
  return out;
}

GDegree QuotientMonoid::section(QElem const& x) const {
  if (!valid(x)) throw std::invalid_argument("element not in quotient");
  GDegree out(ambient_rank(), 0);
  std::size_t const r = torsion_.size();
  for (std::size_t i = 0; i < x.free.size(); ++i) {
    GDegree f = subgroup_.basis_vector(r + i);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += x.free[i] * f[c];
  }
  return out;
}

std::vector<std::int64_t> QuotientMonoid::torsion_exponent(GDegree const& n) const {
  std::vector<Integer> y = subgroup_.basis_coordinates(n);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < torsion_.size(); ++i) out.push_back(narrow(y[i]));
  return out;
}

QElem QuotientMonoid::generator_degree(std::size_t i) const {
  GDegree e(ambient_rank(), 0);
  e.at(i) = 1;
  return q(e);
}

bool QuotientMonoid::valid(QElem const& x) const {
  if (x.torsion.size() != torsion_.size() || x.free.size() != free_rank()) return false;
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (x.torsion[i] < 0 || x.torsion[i] >= torsion_[i]) return false;
  }
  return true;
}

QuotientMonoid quotient_structure(Subgroup const& h) { return QuotientMonoid(h); }

}  // namespace hrg
