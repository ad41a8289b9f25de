#pragma once

// Subspaces and geometric hyperplanes of the flag geometry: closure,
// validation, maximality and complement connectivity.

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "flaghyp/flag_geometry.hpp"

namespace flaghyp {

/// Membership bitmap over flag ids.
using FlagSet = boost::dynamic_bitset<>;

inline FlagSet make_flag_set(const FlagGeometry& G, const std::vector<FlagId>& members) {
  FlagSet s(G.num_flags());
  for (FlagId f : members) s.set(f);
  return s;
}

inline std::vector<FlagId> members_of(const FlagSet& s) {
  std::vector<FlagId> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != FlagSet::npos; i = s.find_next(i)) out.push_back(static_cast<FlagId>(i));
  return out;
}

struct TensorOrigin {
  Mat matrix;
};
struct QuasiSingularOrigin {
  PointId point;
  HypId hyperplane;
};
struct SpreadOrigin {
  std::string spread_id;
};
struct RawOrigin {};

using Provenance = std::variant<TensorOrigin, QuasiSingularOrigin, SpreadOrigin, RawOrigin>;

inline const char* provenance_name(const Provenance& p) {
  switch (p.index()) {
    case 0: return "tensor";
    case 1: return "quasi-singular";
    case 2: return "spread";
    default: return "raw";
  }
}

struct GeometricHyperplane {
  FlagSet members;
  Provenance provenance = RawOrigin{};

  std::size_t size() const { return members.count(); }
  bool contains(FlagId f) const { return members.test(f); }
  bool operator==(const GeometricHyperplane& o) const { return members == o.members; }
};

/// Least superset of S in which every line with two members lies entirely.
inline FlagSet subspace_closure(const FlagGeometry& G, FlagSet S) {
  if (S.size() != G.num_flags()) throw Error(Errc::GeometryMismatch, "flag set size");
  std::vector<bool> saturated(G.lines().size(), false);
  std::deque<FlagId> work;
  for (auto i = S.find_first(); i != FlagSet::npos; i = S.find_next(i)) work.push_back(static_cast<FlagId>(i));
  while (!work.empty()) {
    const FlagId f = work.front();
    work.pop_front();
    for (LineId l : G.lines_through(f)) {
      if (saturated[l]) continue;
      const auto& mem = G.lines()[l].members;
      std::size_t inside = 0;
      for (FlagId g : mem) inside += S.test(g);
      if (inside < 2) continue;
      saturated[l] = true;
      for (FlagId g : mem)
        if (!S.test(g)) {
          S.set(g);
          work.push_back(g);
        }
    }
  }
  return S;
}

struct HyperplaneTally {
  bool hyperplane = false;
  bool proper = false;
  std::size_t full_lines = 0;    // lines contained in S
  std::size_t single_lines = 0;  // lines meeting S in one flag
  std::optional<LineId> violation;  // first line meeting S in 0 or 2..q flags
  std::size_t violation_meet = 0;
};

inline HyperplaneTally tally_hyperplane(const FlagGeometry& G, const FlagSet& S) {
  if (S.size() != G.num_flags()) throw Error(Errc::GeometryMismatch, "flag set size");
  HyperplaneTally t;
  t.proper = S.count() < G.num_flags();
  for (LineId l = 0; l < G.lines().size(); ++l) {
    const auto& mem = G.lines()[l].members;
    std::size_t inside = 0;
    for (FlagId g : mem) inside += S.test(g);
    if (inside == mem.size()) {
      ++t.full_lines;
    } else if (inside == 1) {
      ++t.single_lines;
    } else if (!t.violation) {
      t.violation = l;
      t.violation_meet = inside;
    }
  }
  t.hyperplane = t.proper && !t.violation;
  return t;
}

inline bool is_geometric_hyperplane(const FlagGeometry& G, const FlagSet& S) {
  return tally_hyperplane(G, S).hyperplane;
}

struct MaximalityResult {
  bool maximal = true;
  std::optional<FlagId> witness;  // external flag whose closure stalls
  FlagSet stalled;                // that closure
};

/// Checks closure(H + f) = everything for every flag f outside H.
inline MaximalityResult is_maximal_hyperplane(const FlagGeometry& G, const FlagSet& H) {
  if (!is_geometric_hyperplane(G, H)) throw Error(Errc::NotAHyperplane, "maximality needs a hyperplane");
  MaximalityResult r;
  for (FlagId f = 0; f < G.num_flags(); ++f) {
    if (H.test(f)) continue;
    FlagSet s = H;
    s.set(f);
    s = subspace_closure(G, std::move(s));
    if (!s.all()) {
      r.maximal = false;
      r.witness = f;
      r.stalled = std::move(s);
      return r;
    }
  }
  return r;
}

/// Whether the collinearity graph induced on the complement of H is connected.
inline bool complement_connected(const FlagGeometry& G, const FlagSet& H) {
  if (!is_geometric_hyperplane(G, H)) throw Error(Errc::NotAHyperplane, "connectivity needs a hyperplane");
  FlagSet outside = ~H;
  const auto start = outside.find_first();
  if (start == FlagSet::npos) return true;
  FlagSet seen(G.num_flags());
  std::deque<FlagId> queue{static_cast<FlagId>(start)};
  seen.set(start);
  while (!queue.empty()) {
    const FlagId f = queue.front();
    queue.pop_front();
    for (FlagId g : G.neighbors(f))
      if (outside.test(g) && !seen.test(g)) {
        seen.set(g);
        queue.push_back(g);
      }
  }
  return seen == outside;
}

/// First maximal singular subspace lying entirely inside S, points before hyperplanes.
inline std::optional<SingularSubspace> contained_singular_subspace(const FlagGeometry& G, const FlagSet& S) {
  const auto& ps = G.space();
  auto inside = [&](const SingularSubspace& M) {
    return std::all_of(M.members.begin(), M.members.end(), [&](FlagId f) { return S.test(f); });
  };
  for (PointId a = 0; a < ps.num_points(); ++a)
    if (auto M = G.singular_at_point(a); inside(M)) return M;
  for (HypId A = 0; A < ps.num_hyperplanes(); ++A)
    if (auto M = G.singular_at_hyperplane(A); inside(M)) return M;
  return std::nullopt;
}

}  // namespace flaghyp
