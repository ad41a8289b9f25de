// Runs the twelve acceptance criteria with their runtime budgets. Each
// criterion is the library battery plus, where cheap, an independent
// recomputation of its headline numbers. One PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iostream>

#include "flaghyp/battery.hpp"
#include "oracle.hpp"

using namespace flaghyp;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void need(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }
  void absorb(const CheckResult& r) {
    need(r.passed(), r.id + " " + verdict_name(r.verdict) + " " + r.witness.dump().substr(0, 300));
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void(Outcome&)> body;
};

oracle::Gf gf2() { return oracle::Gf(2, 1, {}); }

/// Incident (point, hyperplane) pairs of PG(n,2) counted from coordinates.
std::size_t oracle_flag_count(int n) {
  const auto O = gf2();
  const auto P = oracle::projective_points(O, n + 1);
  std::size_t c = 0;
  for (const auto& x : P)
    for (const auto& xi : P) c += oracle::dot(O, xi, x) == 0;
  return c;
}

/// Spreads of PG(3,2) by bitmask exact cover over all 35 lines.
std::size_t oracle_spread_count() {
  const auto O = gf2();
  const auto P = oracle::projective_points(O, 4);
  std::map<oracle::V, int> idx;
  for (std::size_t i = 0; i < P.size(); ++i) idx[P[i]] = static_cast<int>(i);
  std::set<std::uint32_t> ls;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      std::uint32_t m = 0;
      for (const auto& x : oracle::span_points(O, {P[i], P[j]})) m |= 1u << idx[x];
      ls.insert(m);
    }
  const std::vector<std::uint32_t> L(ls.begin(), ls.end());
  std::function<std::size_t(std::uint32_t)> rec = [&](std::uint32_t cov) -> std::size_t {
    if (cov == 0x7fff) return 1;
    int low = 0;
    while (cov >> low & 1) ++low;
    std::size_t c = 0;
    for (auto m : L)
      if ((m >> low & 1) && !(m & cov)) c += rec(cov | m);
    return c;
  };
  return rec(0);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "geometry sanity (3,2)", 5,
       [](Outcome& o) {
         o.absorb(check_geometry_sanity(3, 2));
         o.need(oracle_flag_count(3) == 105, "oracle flag count");
       }},
      {2, "generalized hexagon (2,2)", 1,
       [](Outcome& o) {
         o.absorb(check_hexagon(2));
         o.need(oracle_flag_count(2) == 21, "oracle flag count");
       }},
      {3, "symps (3,2)", 10, [](Outcome& o) { o.absorb(check_symps(3, 2)); }},
      {4, "eigenvector criterion over M3(GF(2))", 30, [](Outcome& o) { o.absorb(check_eigenvector_criterion(2, 2)); }},
      {5, "quasi-singular hyperplanes", 30,
       [](Outcome& o) {
         o.absorb(check_quasi_singular(2, 2));
         o.absorb(check_quasi_singular(3, 2));
       }},
      {6, "pencil injectivity (2,2)", 60,
       [](Outcome& o) {
         const auto r = check_pencil_injectivity(2, 2);
         o.absorb(r);
         // 511 nonzero classes minus I; each pencil {M, M+I} is one equal pair
         o.need(r.witness.value("classes", 0) == 510, "class count");
         o.need(r.witness.value("pairs", 0) == 510 * 509 / 2, "pair count");
         o.need(r.witness.value("equal_pairs", 0) == 255, "equal pair count");
       }},
      {7, "hyperplane family (2,2)", 60, [](Outcome& o) { o.absorb(check_hyperplane_family(2, 2)); }},
      {8, "S_mat left/right over M4(GF(2))", 60, [](Outcome& o) { o.absorb(check_smat_sides(4, 2)); }},
      {9, "spread battery q=2,3", 60,
       [](Outcome& o) {
         const auto r2 = check_spread_battery(2);
         o.absorb(r2);
         o.absorb(check_spread_battery(3));
         o.need(r2.witness.value("size", 0) == 45, "spread hyperplane size 45");
       }},
      {10, "piecemeal battery", 600, [](Outcome& o) { o.absorb(check_piecemeal_battery()); }},
      {11, "spread search (3,2)", 600,
       [](Outcome& o) {
         const std::size_t want = oracle_spread_count();
         o.need(want == 56, "oracle spread count " + std::to_string(want));
         o.absorb(check_spread_search(3, 2, want));
       }},
      {12, "Gram diagnostics", 60,
       [](Outcome& o) {
         o.absorb(check_gram(2, 3));
         o.absorb(check_gram(3, 2));
         o.absorb(check_distance_orthogonality(3, 2));
       }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.need(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.need(s < c.budget_s, "over budget");
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ") " << s << "s"
              << (o.ok ? "" : "  -- " + o.note) << std::endl;
  }
  std::cout << (12 - failed) << "/12 criteria passed" << std::endl;
  return failed ? 1 : 0;
}
