#pragma once

// Exact dense linear algebra over a Field: column vectors, row covectors,
// matrices, echelon forms, kernels, spectra and minimal polynomials.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "flaghyp/error.hpp"
#include "flaghyp/gf.hpp"

namespace flaghyp {

/// Column vector of V.
struct Vec {
  std::vector<Elem> c;

  Vec() = default;
  explicit Vec(std::size_t n) : c(n, 0) {}
  Vec(std::initializer_list<Elem> il) : c(il) {}
  explicit Vec(std::vector<Elem> v) : c(std::move(v)) {}

  std::size_t size() const noexcept { return c.size(); }
  Elem operator[](std::size_t i) const { return c[i]; }
  Elem& operator[](std::size_t i) { return c[i]; }
  bool is_zero() const noexcept {
    return std::all_of(c.begin(), c.end(), [](Elem e) { return e == 0; });
  }
  auto operator<=>(const Vec&) const = default;
};

/// Row vector of the dual space V*.
struct Covec {
  std::vector<Elem> c;

  Covec() = default;
  explicit Covec(std::size_t n) : c(n, 0) {}
  Covec(std::initializer_list<Elem> il) : c(il) {}
  explicit Covec(std::vector<Elem> v) : c(std::move(v)) {}

  std::size_t size() const noexcept { return c.size(); }
  Elem operator[](std::size_t i) const { return c[i]; }
  Elem& operator[](std::size_t i) { return c[i]; }
  bool is_zero() const noexcept {
    return std::all_of(c.begin(), c.end(), [](Elem e) { return e == 0; });
  }
  auto operator<=>(const Covec&) const = default;
};

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  Mat(std::initializer_list<std::initializer_list<Elem>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(Errc::SizeMismatch, "ragged matrix literal");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Mat zero(std::size_t r, std::size_t c) { return Mat(r, c); }
  /// E_{ij}: a single 1 at (i, j).
  static Mat unit(std::size_t n, std::size_t i, std::size_t j) {
    Mat m(n, n);
    m(i, j) = 1;
    return m;
  }
  static Mat from_rows(const std::vector<std::vector<Elem>>& rows) {
    Mat m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw Error(Errc::SizeMismatch, "ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.a_.begin() + i * m.cols_);
    }
    return m;
  }
  static Mat from_columns(const std::vector<Vec>& cols) {
    Mat m(cols.empty() ? 0 : cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Elem operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  const std::vector<Elem>& entries() const noexcept { return a_; }
  std::vector<Elem>& entries() noexcept { return a_; }

  std::vector<Elem> row(std::size_t i) const {
    return {a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_};
  }
  Vec column(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<std::vector<Elem>> to_rows() const {
    std::vector<std::vector<Elem>> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) r[i] = row(i);
    return r;
  }

  bool is_zero() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](Elem e) { return e == 0; });
  }

  bool operator==(const Mat& o) const noexcept {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator<(const Mat& o) const noexcept {
    if (rows_ != o.rows_) return rows_ < o.rows_;
    if (cols_ != o.cols_) return cols_ < o.cols_;
    return a_ < o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Elem> a_;
};

/// Polynomial over a field, little-endian coefficients, trailing zeros trimmed.
struct Poly {
  std::vector<Elem> coef;

  int degree() const noexcept { return static_cast<int>(coef.size()) - 1; }
  bool is_monic() const noexcept { return !coef.empty() && coef.back() == 1; }
  bool operator==(const Poly&) const = default;
};

// ---- elementary operations -------------------------------------------------

inline Mat multiply(const Field& F, const Mat& A, const Mat& B) {
  if (A.cols() != B.rows()) throw Error(Errc::SizeMismatch, "matrix product shape");
  Mat C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const Elem a = A(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) = F.add(C(i, j), F.mul(a, B(k, j)));
    }
  return C;
}

inline Vec apply(const Field& F, const Mat& M, const Vec& x) {
  if (M.cols() != x.size()) throw Error(Errc::SizeMismatch, "matrix-vector shape");
  Vec y(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Elem s = 0;
    for (std::size_t j = 0; j < M.cols(); ++j) s = F.add(s, F.mul(M(i, j), x[j]));
    y[i] = s;
  }
  return y;
}

inline Covec apply(const Field& F, const Covec& xi, const Mat& M) {
  if (M.rows() != xi.size()) throw Error(Errc::SizeMismatch, "covector-matrix shape");
  Covec y(M.cols());
  for (std::size_t j = 0; j < M.cols(); ++j) {
    Elem s = 0;
    for (std::size_t i = 0; i < M.rows(); ++i) s = F.add(s, F.mul(xi[i], M(i, j)));
    y[j] = s;
  }
  return y;
}

/// xi(x).
inline Elem evaluate(const Field& F, const Covec& xi, const Vec& x) {
  if (xi.size() != x.size()) throw Error(Errc::SizeMismatch, "pairing shape");
  Elem s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s = F.add(s, F.mul(xi[i], x[i]));
  return s;
}

inline Mat add(const Field& F, const Mat& A, const Mat& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw Error(Errc::SizeMismatch, "matrix sum shape");
  Mat C = A;
  for (std::size_t i = 0; i < C.entries().size(); ++i)
    C.entries()[i] = F.add(A.entries()[i], B.entries()[i]);
  return C;
}

inline Mat scale(const Field& F, Elem s, const Mat& A) {
  Mat C = A;
  for (auto& e : C.entries()) e = F.mul(s, e);
  return C;
}

/// s*A + t*I
inline Mat affine_shift(const Field& F, const Mat& A, Elem s, Elem t) {
  Mat C = scale(F, s, A);
  for (std::size_t i = 0; i < C.rows(); ++i) C(i, i) = F.add(C(i, i), t);
  return C;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
  return T;
}

inline Elem trace(const Field& F, const Mat& A) {
  Elem s = 0;
  for (std::size_t i = 0; i < std::min(A.rows(), A.cols()); ++i) s = F.add(s, A(i, i));
  return s;
}

/// True iff A lies on the line <I> (the zero matrix included).
inline bool is_scalar(const Mat& A) {
  if (!A.square()) return false;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (i != j && A(i, j) != 0) return false;
      if (i == j && A(i, i) != A(0, 0)) return false;
    }
  return true;
}

/// The pure tensor x (x) xi as the matrix with entries x_i xi_j.
inline Mat outer(const Field& F, const Vec& x, const Covec& xi) {
  Mat m(x.size(), xi.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < xi.size(); ++j) m(i, j) = F.mul(x[i], xi[j]);
  return m;
}

inline Mat block_diag(const std::vector<Mat>& blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Mat m(r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return m;
}

/// Scale so that the first nonzero entry is 1; zero stays zero.
inline void normalize_leading(const Field& F, std::vector<Elem>& v) {
  for (Elem e : v)
    if (e != 0) {
      const Elem s = F.inv(e);
      for (auto& x : v) x = F.mul(s, x);
      return;
    }
}

// ---- echelon forms ---------------------------------------------------------

struct Echelon {
  Mat reduced;                       // rank rows, leftmost pivots scaled to 1
  std::vector<std::size_t> pivots;   // pivot column of each row
  std::size_t rank() const noexcept { return pivots.size(); }
};

/// Reduced row echelon form with zero rows dropped; deterministic.
inline Echelon rref(const Field& F, Mat A) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t piv = r;
    while (piv < A.rows() && A(piv, c) == 0) ++piv;
    if (piv == A.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A(r, j), A(piv, j));
    const Elem s = F.inv(A(r, c));
    for (std::size_t j = c; j < A.cols(); ++j) A(r, j) = F.mul(s, A(r, j));
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i == r || A(i, c) == 0) continue;
      const Elem f = F.neg(A(i, c));
      for (std::size_t j = c; j < A.cols(); ++j) A(i, j) = F.add(A(i, j), F.mul(f, A(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  Mat reduced(r, A.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) reduced(i, j) = A(i, j);
  return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const Field& F, const Mat& A) { return rref(F, A).rank(); }

struct RankKernel {
  std::size_t rank = 0;
  std::vector<Vec> kernel;
};

inline RankKernel rank_and_kernel(const Field& F, const Mat& A) {
  auto e = rref(F, A);
  RankKernel out;
  out.rank = e.rank();
  std::vector<bool> is_pivot(A.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < A.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(A.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivots[i]] = F.neg(e.reduced(i, f));
    out.kernel.push_back(std::move(v));
  }
  return out;
}

inline std::optional<Mat> inverse(const Field& F, const Mat& A) {
  if (!A.square()) throw Error(Errc::SizeMismatch, "inverse of a non-square matrix");
  const std::size_t n = A.rows();
  Mat aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
    aug(i, n + i) = 1;
  }
  auto e = rref(F, aug);
  if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Mat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

/// Incrementally maintained row space, rows kept fully reduced.
class RowSpace {
 public:
  RowSpace(const Field& F, std::size_t width) : F_(&F), width_(width) {}

  std::size_t dim() const noexcept { return rows_.size(); }
  std::size_t width() const noexcept { return width_; }

  /// Reduces v in place against the current basis; returns true if v became zero.
  bool reduce(std::vector<Elem>& v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Elem f = v[pivots_[r]];
      if (f == 0) continue;
      const Elem nf = F_->neg(f);
      for (std::size_t j = 0; j < width_; ++j)
        if (rows_[r][j] != 0) v[j] = F_->add(v[j], F_->mul(nf, rows_[r][j]));
    }
    return std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; });
  }

  bool contains(std::vector<Elem> v) const { return reduce(v); }

  /// Adds v; returns false if v was already in the span.
  bool insert(std::vector<Elem> v) {
    if (v.size() != width_) throw Error(Errc::SizeMismatch, "row width");
    if (reduce(v)) return false;
    std::size_t p = 0;
    while (v[p] == 0) ++p;
    const Elem s = F_->inv(v[p]);
    for (auto& e : v) e = F_->mul(s, e);
    for (auto& row : rows_) {
      const Elem f = row[p];
      if (f == 0) continue;
      const Elem nf = F_->neg(f);
      for (std::size_t j = 0; j < width_; ++j) row[j] = F_->add(row[j], F_->mul(nf, v[j]));
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  /// Basis in reduced echelon form, sorted by pivot.
  Mat basis() const {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pivots_[a] < pivots_[b]; });
    Mat m(rows_.size(), width_);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = 0; j < width_; ++j) m(i, j) = rows_[order[i]][j];
    return m;
  }

 private:
  const Field* F_;
  std::size_t width_;
  std::vector<std::vector<Elem>> rows_;
  std::vector<std::size_t> pivots_;
};

// ---- projective iteration --------------------------------------------------

/// Calls fn on one representative per 1-space of F^len (first nonzero
/// coordinate = 1), in lexicographic order of the coordinate tuples. If fn
/// returns bool, returning false stops the walk; the result tells whether
/// the walk ran to completion.
template <class Fn>
bool for_each_projective_point(const Field& F, std::size_t len, Fn&& fn) {
  const Elem q = F.q();
  std::vector<Elem> v(len, 0);
  for (std::size_t lead = len; lead-- > 0;) {
    std::fill(v.begin(), v.end(), 0);
    v[lead] = 1;
    while (true) {
      if constexpr (std::is_same_v<std::invoke_result_t<Fn&, const std::vector<Elem>&>, bool>) {
        if (!fn(std::as_const(v))) return false;
      } else {
        fn(std::as_const(v));
      }
      bool exhausted = true;
      for (std::size_t i = len; i > lead + 1;) {
        --i;
        if (++v[i] < q) {
          exhausted = false;
          break;
        }
        v[i] = 0;
      }
      if (exhausted) break;
    }
  }
  return true;
}

// ---- spectra and polynomials -----------------------------------------------

struct EigenSpace {
  Elem value = 0;
  std::vector<Vec> right;
  std::vector<Covec> left;
};

/// Eigenvalues in F, found by testing M - lambda I for singularity for
/// each of the q candidates.
inline std::vector<EigenSpace> eigen_spectrum(const Field& F, const Mat& M) {
  if (!M.square()) throw Error(Errc::SizeMismatch, "spectrum of a non-square matrix");
  std::vector<EigenSpace> out;
  for (Elem lambda = 0; lambda < F.q(); ++lambda) {
    const Mat K = affine_shift(F, M, 1, F.neg(lambda));
    auto rk = rank_and_kernel(F, K);
    if (rk.kernel.empty()) continue;
    EigenSpace es;
    es.value = lambda;
    es.right = std::move(rk.kernel);
    for (auto& v : rank_and_kernel(F, transpose(K)).kernel) es.left.emplace_back(std::move(v.c));
    out.push_back(std::move(es));
  }
  return out;
}

/// True iff M has at least one eigenvalue in F.
inline bool has_eigenvalue(const Field& F, const Mat& M) {
  for (Elem lambda = 0; lambda < F.q(); ++lambda)
    if (rank(F, affine_shift(F, M, 1, F.neg(lambda))) < M.rows()) return true;
  return false;
}

inline Mat evaluate(const Field& F, const Poly& P, const Mat& M) {
  Mat acc(M.rows(), M.cols());
  for (std::size_t i = P.coef.size(); i-- > 0;) {
    acc = multiply(F, acc, M);
    for (std::size_t d = 0; d < M.rows(); ++d) acc(d, d) = F.add(acc(d, d), P.coef[i]);
  }
  return acc;
}

/// Monic generator of the annihilating ideal, via the first linear
/// dependency among I, M, M^2, ...
inline Poly minimal_polynomial(const Field& F, const Mat& M) {
  if (!M.square()) throw Error(Errc::SizeMismatch, "minimal polynomial of a non-square matrix");
  const std::size_t n = M.rows();
  std::vector<Mat> powers{Mat::identity(n)};
  for (std::size_t d = 1; d <= n; ++d) {
    powers.push_back(multiply(F, powers.back(), M));
    Mat A(n * n, d + 1);
    for (std::size_t c = 0; c <= d; ++c)
      for (std::size_t e = 0; e < n * n; ++e) A(e, c) = powers[c].entries()[e];
    auto rk = rank_and_kernel(F, A);
    if (rk.kernel.empty()) continue;
    Vec k = rk.kernel.front();
    const Elem s = F.inv(k[d]);
    Poly P;
    for (std::size_t c = 0; c <= d; ++c) P.coef.push_back(F.mul(s, k[c]));
    return P;
  }
  throw Error(Errc::SizeMismatch, "no annihilating polynomial up to degree n");  // Cayley-Hamilton
}

/// Companion block with ones on the subdiagonal and -coefficients in the
/// last column; for t^2+at+b this is [[0,-b],[1,-a]].
inline Mat companion(const Field& F, const Poly& P) {
  const std::size_t d = static_cast<std::size_t>(P.degree());
  Mat C(d, d);
  for (std::size_t i = 1; i < d; ++i) C(i, i - 1) = 1;
  for (std::size_t i = 0; i < d; ++i) C(i, d - 1) = F.neg(P.coef[i]);
  return C;
}

enum class Side { Right, Left };

/// M^2 x in <x, Mx> for every nonzero x (right), or xi M^2 in <xi, xi M>
/// for every nonzero xi (left). Exhaustive over projective representatives.
inline bool check_smat(const Field& F, const Mat& M, Side side) {
  const Mat A = side == Side::Right ? M : transpose(M);
  const Mat A2 = multiply(F, A, A);
  return for_each_projective_point(F, M.rows(), [&](const std::vector<Elem>& x) {
    RowSpace rs(F, x.size());
    rs.insert(x);
    rs.insert(apply(F, A, Vec(x)).c);
    return rs.dim() < 2 || rs.contains(apply(F, A2, Vec(x)).c);
  });
}

struct BlockBasis {
  Mat basis;       // columns v1, Mv1, v2, Mv2, ...
  Poly block;      // the irreducible quadratic minimal polynomial
  Mat block_form;  // basis^{-1} M basis = diag(C, ..., C)
};

/// Change of basis bringing M to m identical companion blocks of its
/// minimal polynomial, which must be an irreducible quadratic.
inline BlockBasis rational_block_basis(const Field& F, const Mat& M) {
  const Poly P = minimal_polynomial(F, M);
  bool irreducible = P.degree() == 2;
  for (Elem x = 0; irreducible && x < F.q(); ++x)
    if (F.add(F.add(F.mul(x, x), F.mul(P.coef[1], x)), P.coef[0]) == 0) irreducible = false;
  if (!irreducible) throw Error(Errc::NotQuadraticIrreducible, "minimal polynomial is not an irreducible quadratic");
  const std::size_t n = M.rows();
  if (n % 2 != 0) throw Error(Errc::OddDimension, "odd dimension cannot carry quadratic blocks");

  RowSpace span(F, n);
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < n && span.dim() < n; ++i) {
    Vec e(n);
    e[i] = 1;
    if (span.contains(e.c)) continue;
    Vec me = apply(F, M, e);
    span.insert(e.c);
    if (!span.insert(me.c))
      throw Error(Errc::NotQuadraticIrreducible, "block construction stalled");
    cols.push_back(std::move(e));
    cols.push_back(std::move(me));
  }
  BlockBasis out;
  out.basis = Mat::from_columns(cols);
  out.block = P;
  const auto inv = inverse(F, out.basis);
  out.block_form = multiply(F, multiply(F, *inv, M), out.basis);
  const Mat C = companion(F, P);
  if (out.block_form != block_diag(std::vector<Mat>(n / 2, C)))
    throw Error(Errc::NotQuadraticIrreducible, "conjugate is not block diagonal");
  return out;
}

}  // namespace flaghyp
