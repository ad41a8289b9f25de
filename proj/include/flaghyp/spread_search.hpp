#pragma once

// Backtracking enumeration of line-spreads and per-spread analysis.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flaghyp/spread_analysis.hpp"

namespace flaghyp {

enum class SearchMode { Exhaustive, FirstK };

struct SearchOptions {
  SearchMode mode = SearchMode::Exhaustive;
  std::size_t first_k = 0;
  std::uint64_t node_cap = 50'000'000;
};

struct SearchResult {
  std::vector<LineSpread> spreads;  // in discovery order
  std::uint64_t nodes = 0;
};

/// Covers the least-index uncovered point with each admissible line through
/// it, lines taken in sorted order.
inline SearchResult search_spreads(const ProjectiveSpace& ps, const SearchOptions& opt = {}) {
  if (ps.n() % 2 == 0) throw Error(Errc::EvenDimension, "spreads need odd n");
  const auto all = ps.enumerate(1);
  const std::size_t P = ps.num_points();
  std::vector<std::vector<std::uint32_t>> through(P);
  for (std::uint32_t i = 0; i < all.size(); ++i)
    for (PointId p : all[i].points) through[p].push_back(i);
  const std::size_t need = static_cast<std::size_t>(P / all.front().points.size());

  SearchResult res;
  std::vector<char> covered(P, 0);
  std::vector<std::uint32_t> chosen;
  bool stop = false;

  auto rec = [&](auto&& self, PointId from) -> void {
    if (stop) return;
    if (++res.nodes > opt.node_cap) throw Error(Errc::SearchCapExceeded, "search node cap reached");
    if (chosen.size() == need) {
      std::vector<Subspace> lines;
      for (auto i : chosen) lines.push_back(all[i]);
      res.spreads.push_back(make_spread(ps, std::move(lines)));
      if (opt.mode == SearchMode::FirstK && res.spreads.size() >= opt.first_k) stop = true;
      return;
    }
    PointId p = from;
    while (covered[p]) ++p;
    for (auto li : through[p]) {
      const auto& pts = all[li].points;
      bool free = true;
      for (PointId r : pts)
        if (covered[r]) {
          free = false;
          break;
        }
      if (!free) continue;
      for (PointId r : pts) covered[r] = 1;
      chosen.push_back(li);
      self(self, p + 1 < P ? p + 1 : p);
      chosen.pop_back();
      for (PointId r : pts) covered[r] = 0;
      if (stop) return;
    }
  };
  rec(rec, 0);
  return res;
}

struct CatalogEntry {
  std::size_t index = 0;
  Standardness standard = Standardness::Inconclusive;
  bool has_dual = false;
  std::optional<bool> arises;  // only when a dual exists
  bool definitions_agree = false;
  bool is_hyperplane = false;
  bool problem_hit = false;  // non-standard yet dual-admitting
};

inline CatalogEntry analyze_spread(const FlagGeometry& G, const LineSpread& S, std::size_t index,
                                   std::uint64_t standard_cap = 1'000'000) {
  CatalogEntry e;
  e.index = index;
  e.standard = is_standard(G.space(), S, standard_cap).verdict;
  try {
    auto sh = spread_hyperplane(G, S, "catalog-" + std::to_string(index));
    e.has_dual = true;
    e.definitions_agree = sh.definitions_agree;
    e.is_hyperplane = sh.is_hyperplane;
    e.arises = arises_from_embedding(G, sh.hyperplane.members).arises;
  } catch (const Error& err) {
    if (err.code() != Errc::NoDual) throw;
  }
  e.problem_hit = e.has_dual && e.standard == Standardness::NotStandard;
  return e;
}

}  // namespace flaghyp
