#pragma once

// Dual spreads, property (S)/(S*), spread-type hyperplanes, standardness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "flaghyp/embedding.hpp"
#include "flaghyp/hyperplane_lab.hpp"
#include "flaghyp/spreads.hpp"

namespace flaghyp {

struct DualLineSpread {
  std::vector<Subspace> members;                  // sorted, each of dimension n-2
  std::vector<std::uint32_t> member_of_hyperplane;  // hyperplane id -> member

  const Subspace& member_in(HypId h) const { return members.at(member_of_hyperplane.at(h)); }
};

namespace detail {

inline bool line_in_hyperplane(const ProjectiveSpace& ps, const Subspace& l, HypId h) {
  const auto& xi = ps.coords(h);
  for (std::size_t i = 0; i < l.basis.rows(); ++i)
    if (ps.dot(xi, l.basis.row(i)) != 0) return false;
  return true;
}

inline bool points_subset(const Subspace& small, const Subspace& big) {
  return std::includes(big.points.begin(), big.points.end(), small.points.begin(), small.points.end());
}

}  // namespace detail

/// The forced candidate L_H = {p in H : l_p in H} for every hyperplane, and
/// the check that these form a dual line-spread.
inline DualLineSpread dual_spread(const ProjectiveSpace& ps, const LineSpread& S) {
  const Field& F = ps.field();
  const int n = ps.n();
  const std::uint64_t want = theta(n - 2, F.q());
  DualLineSpread D;
  D.member_of_hyperplane.assign(ps.num_hyperplanes(), 0);
  std::map<Mat, std::uint32_t> seen;
  std::vector<Subspace> found;
  for (HypId h = 0; h < ps.num_hyperplanes(); ++h) {
    RowSpace rs(F, ps.vec_len());
    std::uint64_t count = 0;
    for (const auto& l : S.lines) {
      if (!detail::line_in_hyperplane(ps, l, h)) continue;
      count += l.points.size();
      for (std::size_t i = 0; i < l.basis.rows(); ++i) rs.insert(l.basis.row(i));
    }
    // L_H is the union of the lines inside H; it is a subspace exactly when
    // it fills its own span.
    if (rs.dim() != static_cast<std::size_t>(n - 1) || count != want)
      throw Error(Errc::NotASubspace, "L_H is not a sub-hyperplane for H = " + ps.format(h));
    Mat b = rs.basis();
    auto [it, fresh] = seen.emplace(b, static_cast<std::uint32_t>(found.size()));
    if (fresh) found.push_back(ps.subspace(b));
    D.member_of_hyperplane[h] = it->second;
  }
  // Dual line-spread: no hyperplane may contain a second member.
  std::vector<std::uint32_t> hits(ps.num_hyperplanes(), 0);
  for (const auto& L : found)
    for (HypId h : ps.hyperplanes_containing(L)) ++hits[h];
  for (HypId h = 0; h < ps.num_hyperplanes(); ++h)
    if (hits[h] != 1) throw Error(Errc::PropertySFails, "hyperplane " + ps.format(h) + " holds several members");
  // Sort members and remap.
  std::vector<std::uint32_t> order(found.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return found[x] < found[y]; });
  std::vector<std::uint32_t> rank(found.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  for (auto& m : D.member_of_hyperplane) m = rank[m];
  for (auto i : order) D.members.push_back(std::move(found[i]));
  return D;
}

struct PropertyS {
  bool s = false;       // lines of S inside each member cover that member
  bool s_star = false;  // each (l, H >= l) has exactly one member between them
};

/// Both properties by direct enumeration; D need not be a valid dual.
inline PropertyS check_property_S(const ProjectiveSpace& ps, const LineSpread& S,
                                  const std::vector<Subspace>& D) {
  PropertyS r;
  r.s = std::all_of(D.begin(), D.end(), [&](const Subspace& L) {
    return std::all_of(L.points.begin(), L.points.end(),
                       [&](PointId p) { return detail::points_subset(S.line_through(p), L); });
  });
  std::vector<std::vector<HypId>> above(D.size());
  for (std::size_t i = 0; i < D.size(); ++i) above[i] = ps.hyperplanes_containing(D[i]);
  r.s_star = std::all_of(S.lines.begin(), S.lines.end(), [&](const Subspace& l) {
    std::vector<std::size_t> over;
    for (std::size_t i = 0; i < D.size(); ++i)
      if (detail::points_subset(l, D[i])) over.push_back(i);
    for (HypId h : ps.hyperplanes_containing(l)) {
      std::size_t c = 0;
      for (auto i : over) c += std::binary_search(above[i].begin(), above[i].end(), h);
      if (c != 1) return false;
    }
    return true;
  });
  return r;
}

inline PropertyS check_property_S(const ProjectiveSpace& ps, const LineSpread& S, const DualLineSpread& D) {
  return check_property_S(ps, S, D.members);
}

struct SpreadHyperplane {
  GeometricHyperplane hyperplane;
  DualLineSpread dual;
  bool definitions_agree = false;  // {l_p in H} == {p in L_H}
  bool is_hyperplane = false;
  std::optional<SingularSubspace> singular_inside;
};

inline SpreadHyperplane spread_hyperplane(const FlagGeometry& G, const LineSpread& S, std::string id = "") {
  const auto& ps = G.space();
  SpreadHyperplane out;
  try {
    out.dual = dual_spread(ps, S);
  } catch (const Error& e) {
    throw Error(Errc::NoDual, std::string("spread admits no dual: ") + e.what());
  }
  FlagSet by_line(G.num_flags()), by_dual(G.num_flags());
  for (FlagId f = 0; f < G.num_flags(); ++f) {
    const Flag& fl = G.flag(f);
    if (detail::line_in_hyperplane(ps, S.line_through(fl.point), fl.hyp)) by_line.set(f);
    if (out.dual.member_in(fl.hyp).contains(fl.point)) by_dual.set(f);
  }
  out.definitions_agree = by_line == by_dual;
  out.hyperplane = GeometricHyperplane{std::move(by_line), SpreadOrigin{std::move(id)}};
  out.is_hyperplane = is_geometric_hyperplane(G, out.hyperplane.members);
  out.singular_inside = contained_singular_subspace(G, out.hyperplane.members);
  return out;
}

/// Basis of the space of X with X p in l_p for every point p.
inline std::vector<Mat> linewise_stabilizer(const ProjectiveSpace& ps, const LineSpread& S) {
  const Field& F = ps.field();
  const std::size_t N = ps.vec_len();
  // Linear in p, so the two basis vectors of each line suffice; each
  // covector zeta annihilating l gives zeta X u = sum zeta_i u_j X_ij = 0.
  RowSpace cons(F, N * N);
  for (const auto& l : S.lines) {
    const Mat ann = ps.annihilator(l);
    for (std::size_t r = 0; r < l.basis.rows(); ++r)
      for (std::size_t z = 0; z < ann.rows(); ++z) {
        std::vector<Elem> row(N * N);
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t j = 0; j < N; ++j) row[i * N + j] = F.mul(ann(z, i), l.basis(r, j));
        cons.insert(std::move(row));
        if (cons.dim() == N * N) return {};
      }
  }
  std::vector<Mat> out;
  for (auto& k : rank_and_kernel(F, cons.basis()).kernel) {
    Mat X(N, N);
    X.entries() = k.c;
    out.push_back(std::move(X));
  }
  return out;
}

enum class Standardness { Standard, NotStandard, Inconclusive };

inline const char* standardness_name(Standardness s) {
  switch (s) {
    case Standardness::Standard: return "STANDARD";
    case Standardness::NotStandard: return "NOT_STANDARD";
    default: return "INCONCLUSIVE";
  }
}

struct StandardnessResult {
  Standardness verdict = Standardness::Inconclusive;
  std::optional<Mat> witness;  // fixed-point-free, stabilizes every line
  std::optional<BlockBasis> blocks;
  bool block_anomaly = false;  // witness passed but block construction stalled
  std::size_t stabilizer_dim = 0;
  std::uint64_t classes_examined = 0;
};

inline StandardnessResult is_standard(const ProjectiveSpace& ps, const LineSpread& S,
                                      std::uint64_t cap = 1'000'000) {
  const Field& F = ps.field();
  StandardnessResult r;
  const auto basis = linewise_stabilizer(ps, S);
  r.stabilizer_dim = basis.size();
  const std::size_t N = ps.vec_len();
  bool capped = false;
  for_each_projective_point(F, basis.size(), [&](const std::vector<Elem>& c) {
    if (r.classes_examined >= cap) {
      capped = true;
      return false;
    }
    ++r.classes_examined;
    Mat X(N, N);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) X = add(F, X, scale(F, c[i], basis[i]));
    if (has_eigenvalue(F, X)) return true;
    r.witness = std::move(X);
    return false;
  });
  if (r.witness) {
    r.verdict = Standardness::Standard;
    if (N % 2 == 0) {
      try {
        r.blocks = rational_block_basis(F, *r.witness);
      } catch (const Error&) {
        r.block_anomaly = true;
      }
    }
  } else {
    r.verdict = capped ? Standardness::Inconclusive : Standardness::NotStandard;
  }
  return r;
}

struct Standardizer {
  Mat blocks;   // diag(M_1, ..., M_m), coordinates relative to E
  Mat natural;  // E blocks E^{-1}
  LineSpread canonical;
  bool verified = false;  // natural maps the canonical spread onto S
};

/// Solves (1, omega) = (a_j, b_j) M_j blockwise. With g = diag(M_j) one has
/// phi_{a,b}(g c) = phi_{1,omega}(c), so g carries the canonical spread
/// onto S (and g^{-1} carries S onto it).
inline Standardizer standardize_collineation(const ProjectiveSpace& ps, const LineSpread& S, Elem omega) {
  const Field& F = ps.field();
  Mat E;
  std::vector<Elem> a, b;
  std::optional<Field> Fbar;
  if (auto* t = std::get_if<StandardTag>(&S.tag)) {
    E = t->basis, a = t->a, b = t->b;
    Fbar = Field::make(t->p, 2, t->modulus);
  } else if (auto* c = std::get_if<CanonicalTag>(&S.tag)) {
    E = c->basis;
    Fbar = Field::make(c->p, 2, c->modulus);
    a.assign(ps.vec_len() / 2, 1);
    b.assign(ps.vec_len() / 2, c->omega);
  } else {
    throw Error(Errc::TagMissing, "spread carries no standard construction; use is_standard");
  }
  std::vector<Mat> Ms;
  for (std::size_t j = 0; j < a.size(); ++j) {
    auto [m11, m21] = detail::solve_pair(*Fbar, F, a[j], b[j], 1);
    auto [m12, m22] = detail::solve_pair(*Fbar, F, a[j], b[j], omega);
    Ms.push_back(Mat{{m11, m12}, {m21, m22}});
  }
  Standardizer out;
  out.blocks = block_diag(Ms);
  out.natural = multiply(F, multiply(F, E, out.blocks), *inverse(F, E));
  out.canonical = canonical_spread(ps, *Fbar, omega, E).spread;
  out.verified = map_spread(ps, out.canonical, out.natural).same_lines(S);
  return out;
}

/// Inverse of spread_hyperplane: reads l_p off H as the meet of the
/// hyperplanes paired with p, and returns the spread when H is of spread type.
inline std::optional<LineSpread> spread_from_hyperplane(const FlagGeometry& G, const FlagSet& H) {
  const auto& ps = G.space();
  std::vector<Subspace> lines;
  std::vector<bool> done(ps.num_points(), false);
  for (PointId p = 0; p < ps.num_points(); ++p) {
    if (done[p]) continue;
    std::vector<std::vector<Elem>> rows;
    for (FlagId f : G.flags_at_point(p))
      if (H.test(f)) rows.push_back(ps.coords(G.flag(f).hyp));
    if (rows.empty()) return std::nullopt;
    // the hyperplanes through l_p are exactly those paired with p
    auto ker = rank_and_kernel(ps.field(), Mat::from_rows(rows)).kernel;
    if (ker.size() != 2) return std::nullopt;
    Subspace l = line_through_vectors(ps, ker[0], ker[1]);
    if (ps.hyperplanes_containing(l).size() != rows.size()) return std::nullopt;
    for (PointId r : l.points) {
      if (done[r]) return std::nullopt;
      done[r] = true;
    }
    lines.push_back(std::move(l));
  }
  if (!is_line_spread(ps, lines)) return std::nullopt;
  LineSpread S = make_spread(ps, std::move(lines));
  try {
    if (spread_hyperplane(G, S).hyperplane.members != H) return std::nullopt;
  } catch (const Error& e) {
    if (e.code() != Errc::NoDual) throw;
    return std::nullopt;
  }
  return S;
}

}  // namespace flaghyp
