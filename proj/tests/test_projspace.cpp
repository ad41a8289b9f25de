#include <gtest/gtest.h>

#include "flaghyp/projspace.hpp"
#include "oracle.hpp"

using namespace flaghyp;

namespace {

oracle::Gf mirror(const Field& F) {
  return oracle::Gf(F.p(), F.k(), F.k() > 1 ? F.modulus() : oracle::V{});
}

std::vector<Elem> pts_of(const ProjectiveSpace& ps, const std::set<oracle::V>& s) {
  std::vector<Elem> out;
  for (const auto& v : s) out.push_back(ps.index_of(std::vector<Elem>(v.begin(), v.end())));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(ProjSpace, PointsAreCanonicalAndOrdered) {
  for (std::uint32_t q : {2u, 3u, 4u}) {
    const ProjectiveSpace ps(Field::from_order(q), 3);
    const auto want = oracle::projective_points(mirror(ps.field()), 4);
    ASSERT_EQ(ps.num_points(), want.size());
    std::set<std::vector<Elem>> got;
    for (PointId i = 0; i < ps.num_points(); ++i) {
      const auto& c = ps.coords(i);
      EXPECT_EQ(*std::find_if(c.begin(), c.end(), [](Elem x) { return x != 0; }), 1u);
      EXPECT_EQ(ps.index_of(c), i);
      if (i) {
        EXPECT_LT(ps.coords(i - 1), c);
      }
      got.insert(c);
    }
    EXPECT_EQ(got.size(), want.size());
  }
}

TEST(ProjSpace, IndexOfNormalizes) {
  const ProjectiveSpace ps(Field::make(5), 2);
  EXPECT_EQ(ps.index_of(std::vector<Elem>{0, 3, 1}), ps.index_of(std::vector<Elem>{0, 1, 2}));
}

TEST(ProjSpace, SubspaceCountsPG32) {
  const ProjectiveSpace ps(Field::make(2), 3);
  EXPECT_EQ(ps.enumerate(0).size(), 15u);
  EXPECT_EQ(ps.enumerate(1).size(), 35u);
  EXPECT_EQ(ps.enumerate(2).size(), 15u);
}

TEST(ProjSpace, EnumerationMatchesBruteForce) {
  // oracle: distinct point sets spanned by all tuples of d+1 points
  for (auto [q, n] : std::vector<std::pair<std::uint32_t, int>>{{2, 3}, {3, 3}, {4, 2}, {2, 4}}) {
    const ProjectiveSpace ps(Field::from_order(q), n);
    const auto O = mirror(ps.field());
    const auto P = oracle::projective_points(O, n + 1);
    std::set<std::set<oracle::V>> lines, planes;
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = i + 1; j < P.size(); ++j) lines.insert(oracle::span_points(O, {P[i], P[j]}));
    EXPECT_EQ(ps.enumerate(1).size(), lines.size());
    EXPECT_EQ(gaussian_binomial(n + 1, 2, q), lines.size());
    for (const auto& L : ps.enumerate(1)) {
      std::set<oracle::V> s;
      for (auto p : L.points) s.insert(oracle::V(ps.coords(p).begin(), ps.coords(p).end()));
      ASSERT_TRUE(lines.count(s));
    }
    if (n == 3 && q == 2) {
      for (const auto& L : lines)
        for (const auto& x : P)
          if (!L.count(x)) {
            std::vector<oracle::V> g(L.begin(), L.end());
            planes.insert(oracle::span_points(O, {g[0], g[1], x}));
          }
      EXPECT_EQ(ps.enumerate(2).size(), planes.size());
    }
    for (int d = 0; d < n; ++d) EXPECT_EQ(ps.enumerate(d).size(), gaussian_binomial(n + 1, d + 1, q));
  }
}

TEST(ProjSpace, SpanExamples) {
  const ProjectiveSpace ps(Field::make(2), 3);
  const PointId e0 = ps.index_of(std::vector<Elem>{1, 0, 0, 0}), e1 = ps.index_of(std::vector<Elem>{0, 1, 0, 0}),
                e01 = ps.index_of(std::vector<Elem>{1, 1, 0, 0});
  const auto L = ps.span_points({e0, e1});
  EXPECT_EQ(L.dim, 1);
  std::vector<PointId> want{e0, e1, e01};
  std::sort(want.begin(), want.end());
  EXPECT_EQ(L.points, want);
  EXPECT_EQ(ps.span({L, ps.point_subspace(e01)}), L);
  const auto planes = ps.enumerate(2);
  const auto all = ps.span({planes[0], planes[1]});
  EXPECT_EQ(all.dim, 3);
  EXPECT_EQ(all.points.size(), 15u);
}

TEST(ProjSpace, MeetExamples) {
  const ProjectiveSpace ps(Field::make(2), 3);
  const auto planes = ps.enumerate(2);
  const auto m = ps.meet(planes[3], planes[7]);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->dim, 1);
  const PointId x3 = ps.index_of(std::vector<Elem>{0, 0, 0, 1});
  const auto plane = ps.hyperplane_subspace(x3);  // x3 = 0
  const auto line = ps.subspace(Mat{{1, 0, 0, 0}, {0, 0, 0, 1}});
  const auto pt = ps.meet(plane, line);
  ASSERT_TRUE(pt);
  EXPECT_EQ(pt->dim, 0);
  EXPECT_EQ(pt->points, (std::vector<PointId>{ps.index_of(std::vector<Elem>{1, 0, 0, 0})}));
  const auto l1 = ps.subspace(Mat{{1, 0, 0, 0}, {0, 1, 0, 0}});
  const auto l2 = ps.subspace(Mat{{0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_FALSE(ps.meet(l1, l2));
}

TEST(ProjSpace, MeetAndSpanAgreeWithPointSets) {
  const ProjectiveSpace ps(Field::make(3), 3);
  const auto lines = ps.enumerate(1);
  const auto planes = ps.enumerate(2);
  for (std::size_t i = 0; i < lines.size(); i += 7)
    for (std::size_t j = 0; j < planes.size(); j += 5) {
      std::vector<PointId> common;
      std::set_intersection(lines[i].points.begin(), lines[i].points.end(), planes[j].points.begin(),
                            planes[j].points.end(), std::back_inserter(common));
      const auto m = ps.meet(lines[i], planes[j]);
      EXPECT_EQ(m ? m->points : std::vector<PointId>{}, common);
      const auto s = ps.span({lines[i], planes[j]});
      EXPECT_EQ(s.dim, common.size() == lines[i].points.size() ? 2 : 3);
    }
}

TEST(ProjSpace, Incidence) {
  const ProjectiveSpace ps(Field::make(2), 3);
  auto id = [&](std::vector<Elem> v) { return ps.index_of(std::move(v)); };
  const HypId x3 = id({0, 0, 0, 1});
  EXPECT_TRUE(ps.incident(id({1, 0, 0, 0}), x3));
  EXPECT_FALSE(ps.incident(id({0, 0, 0, 1}), x3));
  EXPECT_TRUE(ps.incident(id({1, 1, 0, 0}), ps.subspace(Mat{{1, 0, 0, 0}, {0, 1, 0, 0}})));
}

TEST(ProjSpace, AnnihilatorAndHyperplanesContaining) {
  const ProjectiveSpace ps(Field::make(3), 3);
  const auto O = mirror(ps.field());
  for (const auto& L : ps.enumerate(1)) {
    const auto hs = ps.hyperplanes_containing(L);
    EXPECT_EQ(hs.size(), 4u);  // q+1 planes through a line of PG(3,3)
    // oracle: xi(p) = 0 for every point of L, and no other hyperplane qualifies
    std::size_t count = 0;
    for (HypId h = 0; h < ps.num_hyperplanes(); ++h) {
      const oracle::V xi(ps.coords(h).begin(), ps.coords(h).end());
      bool all = true;
      for (auto p : L.points) all = all && oracle::dot(O, xi, oracle::V(ps.coords(p).begin(), ps.coords(p).end())) == 0;
      if (all) {
        ++count;
        EXPECT_TRUE(std::binary_search(hs.begin(), hs.end(), h));
      }
    }
    EXPECT_EQ(count, hs.size());
  }
}

TEST(ProjSpace, HyperplaneSubspaceMatchesOracle) {
  const ProjectiveSpace ps(Field::make(2, 2), 2);
  const auto O = mirror(ps.field());
  for (HypId h = 0; h < ps.num_hyperplanes(); ++h) {
    const oracle::V xi(ps.coords(h).begin(), ps.coords(h).end());
    std::set<oracle::V> want;
    for (const auto& x : oracle::projective_points(O, 3))
      if (oracle::dot(O, xi, x) == 0) want.insert(x);
    EXPECT_EQ(ps.hyperplane_subspace(h).points, pts_of(ps, want));
  }
}

TEST(ProjSpace, Counts) {
  EXPECT_EQ(theta(3, 2), 15u);
  EXPECT_EQ(theta(5, 5), 3906u);
  EXPECT_EQ(gaussian_binomial(4, 2, 2), 35u);
  EXPECT_EQ(gaussian_binomial(6, 2, 5), 508431u);
}
