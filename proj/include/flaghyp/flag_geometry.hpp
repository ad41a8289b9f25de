#pragma once

// The point-line geometry of point-hyperplane flags of PG(n, q).
//
// Points are incident pairs (p, H), indexed in lexicographic (p, H) order.
// Lines come in two families:
//   pencil: {(p, H) : H contains L} for a sub-hyperplane L and a point p of L,
//   axial:  {(x, H) : x on l}       for a line l and a hyperplane H through l.
// Two flags are collinear iff they share the point or the hyperplane.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "flaghyp/error.hpp"
#include "flaghyp/projspace.hpp"

namespace flaghyp {

using FlagId = std::uint32_t;
using LineId = std::uint32_t;

struct Flag {
  PointId point = 0;
  HypId hyp = 0;
  bool operator==(const Flag&) const = default;
};

enum class LineKind { Pencil, Axial };

struct FlagLine {
  LineKind kind = LineKind::Pencil;
  std::uint32_t anchor = 0;   // pencil: the point p; axial: the hyperplane H
  std::uint32_t carrier = 0;  // pencil: index into sub_hyperplanes(); axial: into pg_lines()
  std::vector<FlagId> members;
};

enum class PairClass { Equal, Collinear, Polar, Special, Opposite };

constexpr int pair_distance(PairClass c) {
  switch (c) {
    case PairClass::Equal: return 0;
    case PairClass::Collinear: return 1;
    case PairClass::Polar:
    case PairClass::Special: return 2;
    case PairClass::Opposite: return 3;
  }
  return -1;
}

constexpr const char* pair_class_name(PairClass c) {
  switch (c) {
    case PairClass::Equal: return "EQUAL";
    case PairClass::Collinear: return "COLLINEAR";
    case PairClass::Polar: return "POLAR";
    case PairClass::Special: return "SPECIAL";
    case PairClass::Opposite: return "OPPOSITE";
  }
  return "?";
}

/// Maximal singular subspace M_a (based at a point) or M_A (at a hyperplane).
struct SingularSubspace {
  enum class Base { Point, Hyperplane } base_kind = Base::Point;
  std::uint32_t base = 0;
  std::vector<FlagId> members;
};

class FlagGeometry {
 public:
  static constexpr std::size_t default_flag_cap = 2'000'000;

  explicit FlagGeometry(ProjectiveSpace space, std::size_t flag_cap = default_flag_cap)
      : ps_(std::move(space)) {
    const int n = ps_.n();
    if (n < 2) throw Error(Errc::DimOutOfRange, "flag geometry needs n >= 2");
    const std::uint64_t q = ps_.field().q();
    const std::uint64_t expected = theta(n, q) * theta(n - 1, q);
    if (expected > flag_cap)
      throw Error(Errc::SizeCap, std::to_string(expected) + " flags exceed the cap of " + std::to_string(flag_cap));

    const std::size_t N = ps_.num_points();
    at_point_begin_.assign(N + 1, 0);
    on_hyp_.assign(N, {});
    for (PointId p = 0; p < N; ++p) {
      at_point_begin_[p] = static_cast<FlagId>(flags_.size());
      for (HypId h = 0; h < N; ++h)
        if (ps_.incident(p, h)) {
          on_hyp_[h].push_back(static_cast<FlagId>(flags_.size()));
          flags_.push_back({p, h});
        }
    }
    at_point_begin_[N] = static_cast<FlagId>(flags_.size());

    pg_lines_ = ps_.enumerate(1);
    sub_hyps_ = ps_.enumerate(n - 2);
    for (std::uint32_t c = 0; c < sub_hyps_.size(); ++c) {
      const auto hs = ps_.hyperplanes_containing(sub_hyps_[c]);
      for (PointId p : sub_hyps_[c].points) {
        FlagLine line{LineKind::Pencil, p, c, {}};
        for (HypId h : hs) line.members.push_back(flag_id(p, h));
        std::sort(line.members.begin(), line.members.end());
        lines_.push_back(std::move(line));
      }
    }
    for (std::uint32_t c = 0; c < pg_lines_.size(); ++c) {
      for (HypId h : ps_.hyperplanes_containing(pg_lines_[c])) {
        FlagLine line{LineKind::Axial, h, c, {}};
        for (PointId x : pg_lines_[c].points) line.members.push_back(flag_id(x, h));
        std::sort(line.members.begin(), line.members.end());
        lines_.push_back(std::move(line));
      }
    }
    lines_through_.assign(flags_.size(), {});
    for (LineId l = 0; l < lines_.size(); ++l)
      for (FlagId f : lines_[l].members) lines_through_[f].push_back(l);

    neighbors_.assign(flags_.size(), {});
    for (FlagId f = 0; f < flags_.size(); ++f) {
      auto& nb = neighbors_[f];
      for (FlagId g = at_point_begin_[flags_[f].point]; g < at_point_begin_[flags_[f].point + 1]; ++g)
        if (g != f) nb.push_back(g);
      for (FlagId g : on_hyp_[flags_[f].hyp])
        if (g != f) nb.push_back(g);
      std::sort(nb.begin(), nb.end());
    }
  }

  const ProjectiveSpace& space() const noexcept { return ps_; }
  const Field& field() const noexcept { return ps_.field(); }
  int n() const noexcept { return ps_.n(); }

  std::size_t num_flags() const noexcept { return flags_.size(); }
  const Flag& flag(FlagId f) const { return flags_.at(f); }
  const std::vector<Flag>& flags() const noexcept { return flags_; }

  std::optional<FlagId> find(PointId p, HypId h) const {
    if (p >= ps_.num_points() || h >= ps_.num_hyperplanes()) return std::nullopt;
    auto first = flags_.begin() + at_point_begin_[p], last = flags_.begin() + at_point_begin_[p + 1];
    auto it = std::lower_bound(first, last, h, [](const Flag& fl, HypId x) { return fl.hyp < x; });
    if (it == last || it->hyp != h) return std::nullopt;
    return static_cast<FlagId>(it - flags_.begin());
  }

  FlagId flag_id(PointId p, HypId h) const {
    auto f = find(p, h);
    if (!f) throw Error(Errc::GeometryMismatch, "point " + ps_.format(p) + " not on hyperplane " + ps_.format(h));
    return *f;
  }

  const std::vector<FlagLine>& lines() const noexcept { return lines_; }
  const std::vector<LineId>& lines_through(FlagId f) const { return lines_through_.at(f); }
  const std::vector<FlagId>& neighbors(FlagId f) const { return neighbors_.at(f); }
  const std::vector<Subspace>& pg_lines() const noexcept { return pg_lines_; }
  const std::vector<Subspace>& sub_hyperplanes() const noexcept { return sub_hyps_; }

  /// Flags with a given point / on a given hyperplane, ascending.
  std::vector<FlagId> flags_at_point(PointId p) const {
    std::vector<FlagId> out;
    for (FlagId g = at_point_begin_.at(p); g < at_point_begin_.at(p + 1); ++g) out.push_back(g);
    return out;
  }
  const std::vector<FlagId>& flags_on_hyperplane(HypId h) const { return on_hyp_.at(h); }

  bool collinear(FlagId a, FlagId b) const {
    return a != b && (flags_[a].point == flags_[b].point || flags_[a].hyp == flags_[b].hyp);
  }

  /// Closed-form relation between two flags.
  PairClass pair_class(FlagId a, FlagId b) const {
    check(a);
    check(b);
    if (a == b) return PairClass::Equal;
    const Flag &x = flags_[a], &y = flags_[b];
    if (x.point == y.point || x.hyp == y.hyp) return PairClass::Collinear;
    const bool p_in_K = ps_.incident(x.point, y.hyp);
    const bool q_in_H = ps_.incident(y.point, x.hyp);
    if (p_in_K && q_in_H) return PairClass::Polar;
    if (p_in_K || q_in_H) return PairClass::Special;
    return PairClass::Opposite;
  }

  /// Collinearity-graph distances from one flag (-1 if unreachable).
  std::vector<int> distances_from(FlagId a) const {
    check(a);
    std::vector<int> dist(flags_.size(), -1);
    std::deque<FlagId> queue{a};
    dist[a] = 0;
    while (!queue.empty()) {
      const FlagId f = queue.front();
      queue.pop_front();
      for (FlagId g : neighbors_[f])
        if (dist[g] < 0) {
          dist[g] = dist[f] + 1;
          queue.push_back(g);
        }
    }
    return dist;
  }

  int bfs_distance(FlagId a, FlagId b) const {
    check(b);
    return distances_from(a)[b];
  }

  /// The symp through a polar pair: flags (x, X) with x on <p, q> and
  /// X through the sub-hyperplane H cap K.
  std::vector<FlagId> symp(FlagId a, FlagId b) const {
    if (pair_class(a, b) != PairClass::Polar) throw Error(Errc::NotPolar, "symp needs a polar pair");
    const Flag &x = flags_[a], &y = flags_[b];
    const Subspace line = ps_.span_points({x.point, y.point});
    const auto hyps = ps_.points_of(Mat::from_rows({ps_.coords(x.hyp), ps_.coords(y.hyp)}));
    std::vector<FlagId> out;
    for (PointId p : line.points)
      for (HypId h : hyps) out.push_back(flag_id(p, h));
    std::sort(out.begin(), out.end());
    return out;
  }

  SingularSubspace singular_at_point(PointId a) const {
    return {SingularSubspace::Base::Point, a, flags_at_point(a)};
  }
  SingularSubspace singular_at_hyperplane(HypId A) const {
    return {SingularSubspace::Base::Hyperplane, A, flags_on_hyperplane(A)};
  }

  std::string format(FlagId f) const {
    return "(" + ps_.format(flags_.at(f).point) + "," + ps_.format(flags_.at(f).hyp) + ")";
  }

 private:
  void check(FlagId f) const {
    if (f >= flags_.size()) throw Error(Errc::GeometryMismatch, "flag id out of range");
  }

  ProjectiveSpace ps_;
  std::vector<Flag> flags_;
  std::vector<FlagId> at_point_begin_;
  std::vector<std::vector<FlagId>> on_hyp_;
  std::vector<Subspace> pg_lines_, sub_hyps_;
  std::vector<FlagLine> lines_;
  std::vector<std::vector<LineId>> lines_through_;
  std::vector<std::vector<FlagId>> neighbors_;
};

}  // namespace flaghyp
