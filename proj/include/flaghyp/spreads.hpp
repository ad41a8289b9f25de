#pragma once

// Line-spreads of PG(n, q): the partition check and the constructions
// (standard, canonical, from a matrix, piecemeal).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "flaghyp/error.hpp"
#include "flaghyp/gf.hpp"
#include "flaghyp/linalg.hpp"
#include "flaghyp/projspace.hpp"

namespace flaghyp {

struct StandardTag {
  Mat basis;
  std::vector<Elem> a, b;  // elements of the quadratic extension
  std::uint32_t p = 0;     // the extension is GF(p^2)
  std::vector<std::uint32_t> modulus;
};
struct CanonicalTag {
  Mat basis;
  Elem omega = 0;
  std::uint32_t p = 0;
  std::vector<std::uint32_t> modulus;
};
struct FromMatrixTag {
  Mat matrix;
};
struct PiecemealTag {
  Mat basis;
  std::vector<Mat> blocks;
};
struct RawTag {};

using SpreadTag = std::variant<StandardTag, CanonicalTag, FromMatrixTag, PiecemealTag, RawTag>;

inline const char* spread_tag_name(const SpreadTag& t) {
  switch (t.index()) {
    case 0: return "standard";
    case 1: return "canonical";
    case 2: return "matrix";
    case 3: return "piecemeal";
    default: return "raw";
  }
}

struct LineSpread {
  std::vector<Subspace> lines;              // sorted
  std::vector<std::uint32_t> line_of_point;  // point id -> index into lines
  SpreadTag tag = RawTag{};

  const Subspace& line_through(PointId p) const { return lines.at(line_of_point.at(p)); }
  bool same_lines(const LineSpread& o) const { return lines == o.lines; }
};

struct SpreadCheck {
  bool ok = false;
  std::optional<PointId> violation;  // least point not covered exactly once
  std::size_t cover_count = 0;       // how often that point is covered
  std::optional<std::size_t> bad_line;  // a member that is not a line
};

inline SpreadCheck check_line_spread(const ProjectiveSpace& ps, const std::vector<Subspace>& lines) {
  SpreadCheck r;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].dim != 1 || lines[i].basis.cols() != ps.vec_len()) {
      r.bad_line = i;
      return r;
    }
  std::vector<std::uint32_t> count(ps.num_points(), 0);
  for (const auto& l : lines)
    for (PointId p : l.points) ++count[p];
  for (PointId p = 0; p < ps.num_points(); ++p)
    if (count[p] != 1) {
      r.violation = p;
      r.cover_count = count[p];
      return r;
    }
  r.ok = true;
  return r;
}

inline bool is_line_spread(const ProjectiveSpace& ps, const std::vector<Subspace>& lines) {
  return check_line_spread(ps, lines).ok;
}

/// Validates and indexes a family of lines.
inline LineSpread make_spread(const ProjectiveSpace& ps, std::vector<Subspace> lines, SpreadTag tag = RawTag{}) {
  const auto chk = check_line_spread(ps, lines);
  if (!chk.ok) {
    if (chk.bad_line) throw Error(Errc::NotASpread, "member " + std::to_string(*chk.bad_line) + " is not a line");
    throw Error(Errc::NotASpread, "point " + ps.format(*chk.violation) + " covered " +
                                      std::to_string(chk.cover_count) + " times");
  }
  std::sort(lines.begin(), lines.end());
  LineSpread S;
  S.line_of_point.assign(ps.num_points(), 0);
  for (std::uint32_t i = 0; i < lines.size(); ++i)
    for (PointId p : lines[i].points) S.line_of_point[p] = i;
  S.lines = std::move(lines);
  S.tag = std::move(tag);
  return S;
}

inline Subspace line_through_vectors(const ProjectiveSpace& ps, const Vec& u, const Vec& w) {
  return ps.subspace(Mat::from_rows({u.c, w.c}));
}

/// {<x, Mx>} over all points, with no checks; duplicates removed.
inline std::vector<Subspace> lines_from_matrix(const ProjectiveSpace& ps, const Mat& M) {
  std::vector<Subspace> out;
  std::vector<bool> done(ps.num_points(), false);
  for (PointId p = 0; p < ps.num_points(); ++p) {
    if (done[p]) continue;
    const Vec x = ps.point(p);
    Subspace l = ps.subspace(Mat::from_rows({x.c, apply(ps.field(), M, x).c}));
    if (l.dim == 1)
      for (PointId r : l.points) done[r] = true;
    out.push_back(std::move(l));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline LineSpread spread_from_matrix(const ProjectiveSpace& ps, const Mat& M) {
  const Field& F = ps.field();
  if (!M.square() || M.rows() != ps.vec_len()) throw Error(Errc::SizeMismatch, "matrix order must be n+1");
  if (has_eigenvalue(F, M)) throw Error(Errc::HasEigenvalue, "matrix has an eigenvalue in the base field");
  if (!check_smat(F, M, Side::Right)) throw Error(Errc::SmatFails, "M^2 x not in <x, Mx> for some x");
  return make_spread(ps, lines_from_matrix(ps, M), FromMatrixTag{M});
}

/// Image of every member under the collineation induced by g.
inline LineSpread map_spread(const ProjectiveSpace& ps, const LineSpread& S, const Mat& g) {
  std::vector<Subspace> out;
  out.reserve(S.lines.size());
  for (const auto& l : S.lines) {
    Mat img = transpose(multiply(ps.field(), g, transpose(l.basis)));
    out.push_back(ps.subspace(img));
  }
  return make_spread(ps, std::move(out));
}

namespace detail {

inline Mat basis_or_identity(const ProjectiveSpace& ps, const std::optional<Mat>& E) {
  if (!E) return Mat::identity(ps.vec_len());
  if (!E->square() || E->rows() != ps.vec_len()) throw Error(Errc::SizeMismatch, "basis must be (n+1)x(n+1)");
  if (!inverse(ps.field(), *E)) throw Error(Errc::SizeMismatch, "basis columns are dependent");
  return *E;
}

inline void require_odd(const ProjectiveSpace& ps) {
  if (ps.n() % 2 == 0) throw Error(Errc::EvenDimension, "spreads need odd n");
}

/// The quadratic extension must sit over the (prime) base field.
inline void require_extension(const ProjectiveSpace& ps, const Field& Fbar) {
  const Field& F = ps.field();
  if (!F.is_prime_field()) throw Error(Errc::FieldMismatch, "standard spreads are built over a prime base field");
  if (Fbar.k() != 2 || Fbar.p() != F.p()) throw Error(Errc::FieldMismatch, "extension must be GF(p^2) over GF(p)");
}

/// Solves s*a + t*b = w for s, t in the prime subfield.
inline std::pair<Elem, Elem> solve_pair(const Field& Fbar, const Field& F, Elem a, Elem b, Elem w) {
  const auto da = Fbar.digits(a), db = Fbar.digits(b), dw = Fbar.digits(w);
  const Elem det = F.sub(F.mul(da[0], db[1]), F.mul(da[1], db[0]));
  if (det == 0) throw Error(Errc::ProportionalPair, "pair is proportional over the base field");
  const Elem inv = F.inv(det);
  const Elem s = F.mul(inv, F.sub(F.mul(dw[0], db[1]), F.mul(dw[1], db[0])));
  const Elem t = F.mul(inv, F.sub(F.mul(da[0], dw[1]), F.mul(da[1], dw[0])));
  return {s, t};
}

}  // namespace detail

/// phi_{a,b}(c)_j = a_j c_{2j} + b_j c_{2j+1}, coordinates c relative to E.
inline std::vector<Elem> phi(const Field& Fbar, const std::vector<Elem>& a, const std::vector<Elem>& b, const Vec& c) {
  std::vector<Elem> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    out[j] = Fbar.add(Fbar.mul(a[j], c[2 * j]), Fbar.mul(b[j], c[2 * j + 1]));
  return out;
}

inline LineSpread standard_spread(const ProjectiveSpace& ps, const Field& Fbar, const std::vector<Elem>& a,
                                  const std::vector<Elem>& b, const std::optional<Mat>& basis = std::nullopt) {
  detail::require_odd(ps);
  detail::require_extension(ps, Fbar);
  const Field& F = ps.field();
  const std::size_t m = ps.vec_len() / 2;
  if (a.size() != m || b.size() != m) throw Error(Errc::SizeMismatch, "need (n+1)/2 entries in each tuple");
  for (std::size_t j = 0; j < m; ++j) {
    if (!Fbar.contains(a[j]) || !Fbar.contains(b[j])) throw Error(Errc::FieldMismatch, "tuple entry outside GF(p^2)");
    detail::solve_pair(Fbar, F, a[j], b[j], 0);  // throws ProportionalPair
  }
  const Mat E = detail::basis_or_identity(ps, basis);
  const Mat Einv = *inverse(F, E);
  const Elem omega = Fbar.generator();
  std::vector<Subspace> lines;
  std::vector<bool> done(ps.num_points(), false);
  for (PointId p = 0; p < ps.num_points(); ++p) {
    if (done[p]) continue;
    const Vec x = ps.point(p);
    auto w = phi(Fbar, a, b, apply(F, Einv, x));
    Vec c(ps.vec_len());
    for (std::size_t j = 0; j < m; ++j) {
      auto [s, t] = detail::solve_pair(Fbar, F, a[j], b[j], Fbar.mul(omega, w[j]));
      c[2 * j] = s;
      c[2 * j + 1] = t;
    }
    Subspace l = line_through_vectors(ps, x, apply(F, E, c));
    for (PointId r : l.points) done[r] = true;
    lines.push_back(std::move(l));
  }
  return make_spread(ps, std::move(lines), StandardTag{E, a, b, Fbar.p(), Fbar.modulus()});
}

struct CanonicalSpread {
  LineSpread spread;
  Mat companion_matrix;  // M_omega = diag(C, ..., C) in the coordinates of E
  Mat natural_matrix;    // E M_omega E^{-1}
  Poly p_omega;
  bool minimal_polynomial_ok = false;
  bool smat_ok = false;
  bool matches_matrix_spread = false;
};

inline CanonicalSpread canonical_spread(const ProjectiveSpace& ps, const Field& Fbar, Elem omega,
                                        const std::optional<Mat>& basis = std::nullopt) {
  detail::require_odd(ps);
  detail::require_extension(ps, Fbar);
  const Field& F = ps.field();
  const auto [qa, qb] = characteristic_quadratic(Fbar, omega);
  const std::size_t m = ps.vec_len() / 2;
  CanonicalSpread out;
  std::vector<Elem> u(m, 1), uw(m, omega);
  out.spread = standard_spread(ps, Fbar, u, uw, basis);
  const Mat E = detail::basis_or_identity(ps, basis);
  out.spread.tag = CanonicalTag{E, omega, Fbar.p(), Fbar.modulus()};
  out.p_omega = Poly{{qb, qa, 1}};
  out.companion_matrix = block_diag(std::vector<Mat>(m, companion(F, out.p_omega)));
  out.natural_matrix = multiply(F, multiply(F, E, out.companion_matrix), *inverse(F, E));
  out.minimal_polynomial_ok = minimal_polynomial(F, out.companion_matrix).coef == out.p_omega.coef;
  out.smat_ok = check_smat(F, out.companion_matrix, Side::Right);
  out.matches_matrix_spread = lines_from_matrix(ps, out.natural_matrix) == out.spread.lines;
  return out;
}

/// Coordinates (k, x) with the point [v] on line l_{k,x} of a piecemeal spread.
struct PiecemealLocation {
  std::size_t layer = 0;
  Vec offset;  // x in W_k, coordinates relative to E
};

class PiecemealSpec {
 public:
  PiecemealSpec(const Field& F, std::vector<Mat> blocks) : F_(F), blocks_(std::move(blocks)) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const Mat& A = blocks_[i];
      if (A.rows() != 2 || A.cols() != 2) throw Error(Errc::SizeMismatch, "blocks must be 2x2");
      if (has_eigenvalue(F_, A))
        throw Error(Errc::EigenvalueInBlock, "block " + std::to_string(i + 1) + " has an eigenvalue");
    }
  }

  const std::vector<Mat>& blocks() const noexcept { return blocks_; }
  std::size_t layers() const noexcept { return blocks_.size() + 1; }

  /// f_k on W_k, as the (2k)x(2k) matrix diag(A_1, ..., A_k).
  Mat f(std::size_t k) const {
    if (k == 0) return Mat(0, 0);
    return block_diag(std::vector<Mat>(blocks_.begin(), blocks_.begin() + static_cast<std::ptrdiff_t>(k)));
  }

  /// Pure coordinate bookkeeping: the line of the spread through c (relative to E).
  PiecemealLocation locate(const Vec& c) const {
    // chi(c): largest pair index with a nonzero entry
    std::size_t k = c.size() / 2;
    while (k-- > 0)
      if (c[2 * k] != 0 || c[2 * k + 1] != 0) break;
    if (k >= layers()) throw Error(Errc::AmbientMismatch, "zero vector or wrong length");
    const Elem s = c[2 * k], t = c[2 * k + 1];
    // p_{(k]}(c) = (s I + t f_k) x
    PiecemealLocation loc{k, Vec(2 * k)};
    if (k == 0) return loc;
    Mat A = affine_shift(F_, f(k), t, s);
    Vec rhs(2 * k);
    for (std::size_t i = 0; i < 2 * k; ++i) rhs[i] = c[i];
    auto inv = inverse(F_, A);
    if (!inv) throw Error(Errc::EigenvalueInBlock, "s I + t f_k singular");
    loc.offset = apply(F_, *inv, rhs);
    return loc;
  }

 private:
  Field F_;
  std::vector<Mat> blocks_;
};

/// The two spanning vectors of l_{k,x} in coordinates relative to E.
inline std::pair<Vec, Vec> piecemeal_line_vectors(const PiecemealSpec& spec, std::size_t len, std::size_t k,
                                                  const Vec& x, const Field& F) {
  Vec u(len), w(len);
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i];
  if (k > 0) {
    const Vec fx = apply(F, spec.f(k), x);
    for (std::size_t i = 0; i < fx.size(); ++i) w[i] = fx[i];
  }
  u[2 * k] = 1;
  w[2 * k + 1] = 1;
  return {u, w};
}

inline LineSpread piecemeal_spread(const ProjectiveSpace& ps, const PiecemealSpec& spec,
                                   const std::optional<Mat>& basis = std::nullopt) {
  detail::require_odd(ps);
  const Field& F = ps.field();
  const std::size_t len = ps.vec_len(), m = len / 2;
  if (spec.layers() != m) throw Error(Errc::SizeMismatch, "need (n-1)/2 blocks");
  const Mat E = detail::basis_or_identity(ps, basis);
  std::vector<Subspace> lines;
  for (std::size_t k = 0; k < m; ++k) {
    // every x in W_k, zero included
    const std::size_t d = 2 * k;
    std::vector<Elem> x(d, 0);
    while (true) {
      auto [u, w] = piecemeal_line_vectors(spec, len, k, Vec(x), F);
      lines.push_back(line_through_vectors(ps, apply(F, E, u), apply(F, E, w)));
      std::size_t i = 0;
      for (; i < d; ++i) {
        if (++x[i] < F.q()) break;
        x[i] = 0;
      }
      if (i == d) break;
    }
  }
  return make_spread(ps, std::move(lines), PiecemealTag{E, spec.blocks()});
}

/// Block [[0, lambda], [1, 0]], squaring to lambda I.
inline Mat lambda_block(Elem lambda) { return Mat{{0, lambda}, {1, 0}}; }

}  // namespace flaghyp
