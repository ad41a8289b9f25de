#pragma once

// Points, hyperplanes and subspaces of PG(n, q) with a fixed global
// enumeration: canonical representatives (first nonzero coordinate 1)
// ordered lexicographically. Hyperplanes reuse the point enumeration on
// the dual coordinates.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flaghyp/error.hpp"
#include "flaghyp/gf.hpp"
#include "flaghyp/linalg.hpp"

namespace flaghyp {

using PointId = std::uint32_t;
using HypId = std::uint32_t;

struct Subspace {
  int dim = -1;                  // projective dimension, -1 for the empty subspace
  Mat basis;                     // reduced row echelon form, dim+1 rows
  std::vector<PointId> points;   // sorted

  bool empty() const noexcept { return dim < 0; }
  bool contains(PointId p) const { return std::binary_search(points.begin(), points.end(), p); }
  bool operator==(const Subspace& o) const { return dim == o.dim && basis == o.basis; }
  bool operator<(const Subspace& o) const { return dim != o.dim ? dim < o.dim : basis < o.basis; }
};

/// Number of (k-1)-dimensional projective subspaces of PG(n-1, q), i.e. the
/// Gaussian binomial [n choose k]_q.
inline std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint64_t q) {
  if (k > n) return 0;
  std::uint64_t num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    std::uint64_t a = 1, b = 1;
    for (unsigned j = 0; j < n - i; ++j) a *= q;
    for (unsigned j = 0; j < i + 1; ++j) b *= q;
    num *= (a - 1);
    den *= (b - 1);
  }
  return num / den;
}

/// (q^{k+1}-1)/(q-1): the number of points of PG(k, q).
inline std::uint64_t theta(int k, std::uint64_t q) {
  if (k < 0) return 0;
  return gaussian_binomial(static_cast<unsigned>(k + 1), 1, q);
}

class ProjectiveSpace {
 public:
  ProjectiveSpace(Field F, int n) : F_(std::move(F)), n_(n) {
    if (n < 1) throw Error(Errc::DimOutOfRange, "projective dimension must be >= 1");
    const std::size_t len = static_cast<std::size_t>(n) + 1;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < len; ++i) {
      total *= F_.q();
      if (total > (std::uint64_t(1) << 40)) throw Error(Errc::SizeCap, "ambient space too large");
    }
    for_each_projective_point(F_, len, [&](const std::vector<Elem>& v) {
      reps_.push_back(v);
      keys_.push_back(key(v));
    });
    if (total <= (std::uint64_t(1) << 24)) {
      dense_.assign(total, UINT32_MAX);
      for (std::size_t i = 0; i < keys_.size(); ++i) dense_[keys_[i]] = static_cast<PointId>(i);
    }
    build_incidence();
  }

  const Field& field() const noexcept { return F_; }
  int n() const noexcept { return n_; }
  std::size_t vec_len() const noexcept { return static_cast<std::size_t>(n_) + 1; }
  std::size_t num_points() const noexcept { return reps_.size(); }
  std::size_t num_hyperplanes() const noexcept { return reps_.size(); }

  const std::vector<Elem>& coords(PointId i) const { return reps_.at(i); }
  Vec point(PointId i) const { return Vec(reps_.at(i)); }
  Covec hyperplane(HypId j) const { return Covec(reps_.at(j)); }

  /// Index of the point spanned by a nonzero vector (any scaling).
  PointId index_of(std::vector<Elem> v) const {
    if (v.size() != vec_len()) throw Error(Errc::AmbientMismatch, "vector length");
    if (std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; }))
      throw Error(Errc::AmbientMismatch, "zero vector has no projective point");
    normalize_leading(F_, v);
    return lookup(v);
  }
  PointId index_of(const Vec& v) const { return index_of(v.c); }
  HypId index_of(const Covec& xi) const { return index_of(xi.c); }

  /// p in H.
  bool incident(PointId p, HypId h) const {
    const std::size_t bit = std::size_t(p) * reps_.size() + h;
    if (!incidence_.empty()) return (incidence_[bit >> 6] >> (bit & 63)) & 1u;
    return dot(reps_[p], reps_[h]) == 0;
  }

  bool incident(PointId p, const Subspace& S) const {
    check_ambient(S);
    return S.contains(p);
  }

  Elem dot(const std::vector<Elem>& a, const std::vector<Elem>& b) const {
    Elem s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = F_.add(s, F_.mul(a[i], b[i]));
    return s;
  }

  /// Subspace spanned by the rows of a matrix.
  Subspace subspace(const Mat& rows) const {
    if (rows.cols() != vec_len()) throw Error(Errc::AmbientMismatch, "row length");
    auto e = rref(F_, rows);
    Subspace s;
    s.dim = static_cast<int>(e.rank()) - 1;
    s.basis = std::move(e.reduced);
    s.points = points_of(s.basis);
    return s;
  }

  Subspace point_subspace(PointId p) const { return subspace(Mat::from_rows({reps_.at(p)})); }

  Subspace hyperplane_subspace(HypId h) const {
    Mat row = Mat::from_rows({reps_.at(h)});
    std::vector<std::vector<Elem>> rows;
    for (auto& v : rank_and_kernel(F_, row).kernel) rows.push_back(v.c);
    return subspace(Mat::from_rows(rows));
  }

  Subspace span_points(const std::vector<PointId>& pts) const {
    std::vector<std::vector<Elem>> rows;
    for (auto p : pts) rows.push_back(reps_.at(p));
    if (rows.empty()) return Subspace{-1, Mat(0, vec_len()), {}};
    return subspace(Mat::from_rows(rows));
  }

  Subspace span(const std::vector<Subspace>& parts) const {
    std::vector<std::vector<Elem>> rows;
    for (const auto& s : parts) {
      check_ambient(s);
      for (std::size_t i = 0; i < s.basis.rows(); ++i) rows.push_back(s.basis.row(i));
    }
    if (rows.empty()) return Subspace{-1, Mat(0, vec_len()), {}};
    return subspace(Mat::from_rows(rows));
  }

  /// Rows spanning the annihilator of S in V*.
  Mat annihilator(const Subspace& S) const {
    check_ambient(S);
    if (S.empty()) return Mat::identity(vec_len());
    std::vector<std::vector<Elem>> rows;
    for (auto& v : rank_and_kernel(F_, S.basis).kernel) rows.push_back(v.c);
    if (rows.empty()) return Mat(0, vec_len());
    return Mat::from_rows(rows);
  }

  /// Largest common subspace; nullopt when the intersection is empty.
  std::optional<Subspace> meet(const Subspace& a, const Subspace& b) const {
    check_ambient(a);
    check_ambient(b);
    if (a.empty() || b.empty()) return std::nullopt;
    std::vector<std::vector<Elem>> rows;
    for (const Mat& ann : {annihilator(a), annihilator(b)})
      for (std::size_t i = 0; i < ann.rows(); ++i) rows.push_back(ann.row(i));
    std::vector<std::vector<Elem>> basis;
    if (rows.empty()) {
      for (std::size_t i = 0; i < vec_len(); ++i) basis.push_back(Mat::unit(vec_len(), i, i).row(i));
    } else {
      for (auto& v : rank_and_kernel(F_, Mat::from_rows(rows)).kernel) basis.push_back(v.c);
    }
    if (basis.empty()) return std::nullopt;
    return subspace(Mat::from_rows(basis));
  }

  /// Sorted hyperplane ids H with S contained in H.
  std::vector<HypId> hyperplanes_containing(const Subspace& S) const {
    const Mat ann = annihilator(S);
    return points_of(ann);
  }

  /// All subspaces of projective dimension dim (0 <= dim <= n-1), sorted
  /// lexicographically by their reduced echelon basis.
  std::vector<Subspace> enumerate(int dim) const {
    if (dim < 0 || dim > n_ - 1) throw Error(Errc::DimOutOfRange, "dim must be in [0, n-1]");
    const std::size_t d = static_cast<std::size_t>(dim) + 1, len = vec_len();
    std::vector<Subspace> out;
    std::vector<std::size_t> piv(d);
    for (std::size_t i = 0; i < d; ++i) piv[i] = i;
    while (true) {
      // free slots: (row, col) with col > piv[row] and col not a pivot
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = piv[r] + 1; c < len; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(r, c);
      std::vector<Elem> vals(slots.size(), 0);
      while (true) {
        Mat m(d, len);
        for (std::size_t r = 0; r < d; ++r) m(r, piv[r]) = 1;
        for (std::size_t s = 0; s < slots.size(); ++s) m(slots[s].first, slots[s].second) = vals[s];
        Subspace sub;
        sub.dim = dim;
        sub.points = points_of(m);
        sub.basis = std::move(m);
        out.push_back(std::move(sub));
        std::size_t s = slots.size();
        bool done = true;
        while (s-- > 0) {
          if (++vals[s] < F_.q()) {
            done = false;
            break;
          }
          vals[s] = 0;
        }
        if (done) break;
      }
      // next pivot combination
      std::size_t i = d;
      bool more = false;
      while (i-- > 0) {
        if (piv[i] < len - d + i) {
          ++piv[i];
          for (std::size_t j = i + 1; j < d; ++j) piv[j] = piv[j - 1] + 1;
          more = true;
          break;
        }
      }
      if (!more) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Sorted ids of the points in the row space of `rows` (rows independent).
  std::vector<PointId> points_of(const Mat& rows) const {
    const std::size_t d = rows.rows(), len = rows.cols();
    std::vector<PointId> pts;
    if (d == 0) return pts;
    std::vector<Elem> coef(d, 0), v(len);
    for_each_projective_point(F_, d, [&](const std::vector<Elem>& c) {
      std::fill(v.begin(), v.end(), 0);
      for (std::size_t r = 0; r < d; ++r) {
        if (c[r] == 0) continue;
        for (std::size_t j = 0; j < len; ++j) v[j] = F_.add(v[j], F_.mul(c[r], rows(r, j)));
      }
      auto w = v;
      normalize_leading(F_, w);
      pts.push_back(lookup(w));
    });
    std::sort(pts.begin(), pts.end());
    return pts;
  }

  std::string format(PointId i) const {
    std::string s = "[";
    const auto& v = reps_.at(i);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j) s += ':';
      s += std::to_string(v[j]);
    }
    return s + "]";
  }

 private:
  std::uint64_t key(const std::vector<Elem>& v) const {
    std::uint64_t k = 0;
    for (Elem e : v) k = k * F_.q() + e;
    return k;
  }

  PointId lookup(const std::vector<Elem>& canonical) const {
    const std::uint64_t k = key(canonical);
    if (!dense_.empty()) return dense_[k];
    auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    return static_cast<PointId>(it - keys_.begin());
  }

  void check_ambient(const Subspace& S) const {
    if (S.basis.cols() != vec_len()) throw Error(Errc::AmbientMismatch, "subspace from another ambient space");
  }

  // Point-hyperplane incidence bitmap, kept only for small spaces.
  void build_incidence() {
    const std::size_t N = reps_.size();
    if (N > 1024) return;
    incidence_.assign((N * N + 63) / 64, 0);
    for (PointId p = 0; p < N; ++p)
      for (HypId h = 0; h < N; ++h)
        if (dot(reps_[p], reps_[h]) == 0) {
          const std::size_t bit = std::size_t(p) * N + h;
          incidence_[bit >> 6] |= std::uint64_t(1) << (bit & 63);
        }
  }

  Field F_;
  int n_;
  std::vector<std::vector<Elem>> reps_;
  std::vector<std::uint64_t> keys_;
  std::vector<PointId> dense_;
  std::vector<std::uint64_t> incidence_;
};

}  // namespace flaghyp
