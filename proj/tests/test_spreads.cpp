#include <gtest/gtest.h>

#include <random>

#include "flaghyp/battery.hpp"
#include "flaghyp/spread_search.hpp"
#include "oracle.hpp"

using namespace flaghyp;

namespace {

const Mat B2{{0, 1}, {1, 1}};

template <class Fn>
void expect_code(Errc code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << errc_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

oracle::Gf mirror(const Field& F) {
  return oracle::Gf(F.p(), F.k(), F.k() > 1 ? F.modulus() : oracle::V{});
}

oracle::V ov(const std::vector<Elem>& v) { return oracle::V(v.begin(), v.end()); }

/// Partition check done from scratch on point ids.
bool oracle_partition(const ProjectiveSpace& ps, const LineSpread& S) {
  std::vector<int> cover(ps.num_points(), 0);
  for (const auto& l : S.lines) {
    if (l.points.size() != ps.field().q() + 1) return false;
    for (auto p : l.points) ++cover[p];
  }
  return std::all_of(cover.begin(), cover.end(), [](int c) { return c == 1; });
}

/// L_H for every hyperplane: union of the spread lines inside H, or empty
/// when that union is not a subspace of codimension 2.
std::vector<std::set<oracle::V>> oracle_dual(const ProjectiveSpace& ps, const LineSpread& S) {
  const auto O = mirror(ps.field());
  std::vector<std::set<oracle::V>> out;
  for (HypId h = 0; h < ps.num_hyperplanes(); ++h) {
    std::set<oracle::V> L;
    for (const auto& l : S.lines) {
      bool inside = true;
      for (auto p : l.points) inside = inside && oracle::dot(O, ov(ps.coords(h)), ov(ps.coords(p))) == 0;
      if (inside)
        for (auto p : l.points) L.insert(ov(ps.coords(p)));
    }
    // closed under spans of pairs, with the right size
    bool closed = true;
    for (auto a = L.begin(); a != L.end() && closed; ++a)
      for (auto b = std::next(a); b != L.end() && closed; ++b)
        for (const auto& x : oracle::span_points(O, {*a, *b})) closed = closed && L.count(x);
    if (!closed || L.size() != theta(ps.n() - 2, ps.field().q())) L.clear();
    out.push_back(std::move(L));
  }
  return out;
}

std::set<oracle::V> coords_of(const ProjectiveSpace& ps, const Subspace& s) {
  std::set<oracle::V> out;
  for (auto p : s.points) out.insert(ov(ps.coords(p)));
  return out;
}

/// X fixes every line and has no eigenvector, checked point by point.
bool oracle_fixed_point_free_stabilizer(const ProjectiveSpace& ps, const LineSpread& S, const Mat& X) {
  const Field& F = ps.field();
  for (PointId p = 0; p < ps.num_points(); ++p) {
    const Vec y = apply(F, X, ps.point(p));
    if (std::all_of(y.c.begin(), y.c.end(), [](Elem e) { return e == 0; })) return false;
    const PointId r = ps.index_of(y);
    if (r == p) return false;  // eigenvector
    if (!S.line_through(p).contains(r)) return false;
  }
  return true;
}

/// Number of line-spreads of PG(3,2) by bitmask exact cover.
std::size_t oracle_count_spreads_pg32() {
  const auto O = oracle::Gf(2, 1, {});
  const auto P = oracle::projective_points(O, 4);
  std::map<oracle::V, int> idx;
  for (std::size_t i = 0; i < P.size(); ++i) idx[P[i]] = static_cast<int>(i);
  std::set<std::uint32_t> lines;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      std::uint32_t m = 0;
      for (const auto& x : oracle::span_points(O, {P[i], P[j]})) m |= 1u << idx[x];
      lines.insert(m);
    }
  std::vector<std::uint32_t> L(lines.begin(), lines.end());
  const std::uint32_t full = (1u << P.size()) - 1;
  std::function<std::size_t(std::uint32_t)> rec = [&](std::uint32_t covered) -> std::size_t {
    if (covered == full) return 1;
    int low = 0;
    while (covered >> low & 1) ++low;
    std::size_t c = 0;
    for (auto m : L)
      if ((m >> low & 1) && !(m & covered)) c += rec(covered | m);
    return c;
  };
  return rec(0);
}

Mat random_invertible(const Field& F, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<Elem> d(0, F.q() - 1);
  while (true) {
    Mat M(n, n);
    for (auto& e : M.entries()) e = d(rng);
    if (inverse(F, M)) return M;
  }
}

}  // namespace

// ---- constructions

TEST(Spreads, StandardExamples) {
  const Field F2 = Field::make(2), F4 = Field::make(2, 2);
  const ProjectiveSpace ps2(F2, 3);
  const Elem w4 = F4.generator();
  const auto S = standard_spread(ps2, F4, {1, 1}, {w4, w4});
  EXPECT_EQ(S.lines.size(), 5u);
  EXPECT_TRUE(oracle_partition(ps2, S));
  EXPECT_TRUE(S.same_lines(canonical_spread(ps2, F4, w4).spread));

  const Field F3 = Field::make(3), F9 = Field::make(3, 2);
  const ProjectiveSpace ps3(F3, 3);
  const Elem w9 = F9.generator();
  const auto T = standard_spread(ps3, F9, {1, w9}, {w9, 1});
  EXPECT_EQ(T.lines.size(), 10u);
  EXPECT_TRUE(oracle_partition(ps3, T));

  expect_code(Errc::ProportionalPair, [&] { standard_spread(ps2, F4, {1, 1}, {1, 1}); });
  expect_code(Errc::EvenDimension, [&] { standard_spread(ProjectiveSpace(F2, 2), F4, {1}, {w4}); });
}

TEST(Spreads, StandardLinesAreFibresOfPhi) {
  // points on one line have proportional phi-images over GF(p^2)
  const Field F3 = Field::make(3), F9 = Field::make(3, 2);
  const ProjectiveSpace ps(F3, 3);
  const Elem w = F9.generator();
  const std::vector<Elem> a{1, w}, b{w, 1};
  const auto S = standard_spread(ps, F9, a, b);
  for (const auto& l : S.lines) {
    const auto base = phi(F9, a, b, ps.point(l.points[0]));
    for (auto p : l.points) {
      const auto v = phi(F9, a, b, ps.point(p));
      // v = c * base for c = v_j / base_j at any nonzero slot
      std::size_t j = base[0] ? 0 : 1;
      const Elem c = F9.div(v[j], base[j]);
      for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(v[k], F9.mul(c, base[k]));
    }
  }
}

TEST(Spreads, CanonicalExamples) {
  const Field F2 = Field::make(2), F4 = Field::make(2, 2);
  const ProjectiveSpace ps(F2, 3);
  const auto C = canonical_spread(ps, F4, F4.generator());
  EXPECT_EQ(C.companion_matrix, block_diag({B2, B2}));
  EXPECT_TRUE(eigen_spectrum(F2, C.natural_matrix).empty());
  EXPECT_TRUE(C.minimal_polynomial_ok && C.smat_ok && C.matches_matrix_spread);
  const auto& l = C.spread.line_through(ps.index_of(std::vector<Elem>{1, 0, 0, 0}));
  EXPECT_EQ(l, ps.subspace(Mat{{1, 0, 0, 0}, {0, 1, 0, 0}}));
  EXPECT_EQ(canonical_spread(ProjectiveSpace(F2, 5), F4, F4.generator()).spread.lines.size(), 21u);
  expect_code(Errc::FieldMismatch, [&] { canonical_spread(ps, Field::make(3, 2), 3); });
}

TEST(Spreads, FromMatrixExamples) {
  const Field F2 = Field::make(2), F5 = Field::make(5);
  const ProjectiveSpace ps(F2, 3);
  const auto S = spread_from_matrix(ps, block_diag({B2, B2}));
  EXPECT_EQ(S.lines.size(), 5u);
  EXPECT_TRUE(std::binary_search(S.lines.begin(), S.lines.end(), ps.subspace(Mat{{1, 0, 0, 0}, {0, 1, 0, 0}})));
  expect_code(Errc::HasEigenvalue, [&] { spread_from_matrix(ps, Mat::unit(4, 0, 1)); });
  Mat D(4, 4);
  for (Elem i = 0; i < 4; ++i) D(i, i) = i + 1;
  expect_code(Errc::HasEigenvalue, [&] { spread_from_matrix(ProjectiveSpace(F5, 3), D); });
  // eigenvalue-free yet failing S_mat: companion of an irreducible quartic
  const Mat Q = companion(F2, Poly{{1, 1, 0, 0, 1}});
  expect_code(Errc::SmatFails, [&] { spread_from_matrix(ps, Q); });
}

TEST(Spreads, PiecemealExamples) {
  const Field F2 = Field::make(2), F5 = Field::make(5);
  const ProjectiveSpace ps(F2, 3);
  const auto S = piecemeal_spread(ps, PiecemealSpec(F2, {B2}));
  EXPECT_EQ(S.lines.size(), 5u);
  EXPECT_EQ(is_standard(ps, S).verdict, Standardness::Standard);
  const ProjectiveSpace ps5(F5, 5);
  const auto T = piecemeal_spread(ps5, PiecemealSpec(F5, {lambda_block(2), lambda_block(3)}));
  EXPECT_EQ(T.lines.size(), 651u);
  EXPECT_TRUE(oracle_partition(ps5, T));
  expect_code(Errc::EigenvalueInBlock, [&] { PiecemealSpec(F2, {Mat::identity(2)}); });
}

TEST(Spreads, PiecemealLocateIsConsistent) {
  const Field F3 = Field::make(3);
  const ProjectiveSpace ps(F3, 5);
  const PiecemealSpec spec(F3, {lambda_block(2), Mat{{0, 1}, {1, 1}}});  // both eigenvalue-free over GF(3)
  const auto S = piecemeal_spread(ps, spec);
  EXPECT_TRUE(oracle_partition(ps, S));
  for (PointId p = 0; p < ps.num_points(); ++p) {
    const auto loc = spec.locate(ps.point(p));
    const auto [u, w] = piecemeal_line_vectors(spec, ps.vec_len(), loc.layer, loc.offset, F3);
    ASSERT_TRUE(line_through_vectors(ps, u, w).contains(p));
  }
}

TEST(Spreads, IsLineSpread) {
  const Field F2 = Field::make(2), F4 = Field::make(2, 2);
  const ProjectiveSpace ps(F2, 3);
  auto lines = canonical_spread(ps, F4, F4.generator()).spread.lines;
  EXPECT_TRUE(is_line_spread(ps, lines));
  auto fewer = lines;
  fewer.pop_back();
  EXPECT_FALSE(is_line_spread(ps, fewer));
  auto more = lines;
  for (const auto& l : ps.enumerate(1))
    if (!std::binary_search(lines.begin(), lines.end(), l)) {
      more.push_back(l);
      break;
    }
  EXPECT_FALSE(is_line_spread(ps, more));
  expect_code(Errc::NotASpread, [&] { make_spread(ps, more); });
}

// ---- duals

TEST(Spreads, DualMatchesOracleAndIsUnique) {
  std::vector<std::pair<ProjectiveSpace, LineSpread>> cases;
  for (std::uint32_t p : {2u, 3u}) {
    const ProjectiveSpace ps(Field::make(p), 3);
    const Field Fb = Field::make(p, 2);
    cases.emplace_back(ps, canonical_spread(ps, Fb, Fb.generator()).spread);
  }
  {
    const ProjectiveSpace ps(Field::make(2), 5);
    const Field Fb = Field::make(2, 2);
    const Elem w = Fb.generator();
    cases.emplace_back(ps, standard_spread(ps, Fb, {1, w, 1}, {w, 1, Fb.add(w, 1)}));
  }
  for (const auto& [ps, S] : cases) {
    const auto D = dual_spread(ps, S);
    const auto want = oracle_dual(ps, S);
    std::set<std::set<oracle::V>> oracle_members;
    for (HypId h = 0; h < ps.num_hyperplanes(); ++h) {
      ASSERT_FALSE(want[h].empty());
      EXPECT_EQ(coords_of(ps, D.member_in(h)), want[h]);
      oracle_members.insert(want[h]);
    }
    // uniqueness: the externally built family is member-for-member the same
    std::vector<Subspace> external;
    for (const auto& m : oracle_members) {
      std::vector<PointId> pts;
      for (const auto& x : m) pts.push_back(ps.index_of(std::vector<Elem>(x.begin(), x.end())));
      external.push_back(ps.span_points(pts));
    }
    std::sort(external.begin(), external.end());
    EXPECT_EQ(external, D.members);
    const auto prop = check_property_S(ps, S, external);
    EXPECT_TRUE(prop.s);
    EXPECT_TRUE(prop.s_star);
    if (ps.n() == 3) {
      EXPECT_EQ(D.members, S.lines);
    }
  }
}

TEST(Spreads, ShuffledDualBreaksBothProperties) {
  const ProjectiveSpace ps(Field::make(2), 3);
  const Field F4 = Field::make(2, 2);
  const auto S = canonical_spread(ps, F4, F4.generator()).spread;
  auto D = dual_spread(ps, S).members;
  for (const auto& l : ps.enumerate(1))
    if (!std::binary_search(D.begin(), D.end(), l)) {
      D.front() = l;
      break;
    }
  const auto prop = check_property_S(ps, S, D);
  EXPECT_FALSE(prop.s);
  EXPECT_FALSE(prop.s_star);
}

TEST(Spreads, NonStandardPiecemealHasNoDual) {
  const Field F5 = Field::make(5);
  const ProjectiveSpace ps(F5, 5);
  const auto S = piecemeal_spread(ps, PiecemealSpec(F5, {lambda_block(2), lambda_block(3)}));
  expect_code(Errc::NotASubspace, [&] { dual_spread(ps, S); });
  // oracle agrees: for some hyperplane the union of its spread lines spans
  // more than a codimension-2 subspace (rank by elimination mod 5)
  const auto O = mirror(F5);
  auto rank_mod5 = [](std::vector<std::vector<int>> rows) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < 6 && r < rows.size(); ++c) {
      auto piv = std::find_if(rows.begin() + r, rows.end(), [c](const auto& v) { return v[c] % 5; });
      if (piv == rows.end()) continue;
      std::swap(*piv, rows[r]);
      int inv = 1;
      while (rows[r][c] * inv % 5 != 1) ++inv;
      for (auto& x : rows[r]) x = x * inv % 5;
      for (std::size_t k = 0; k < rows.size(); ++k)
        if (k != r && rows[k][c]) {
          const int m = rows[k][c];
          for (std::size_t t = 0; t < 6; ++t) rows[k][t] = ((rows[k][t] - m * rows[r][t]) % 5 + 5) % 5;
        }
      ++r;
    }
    return r;
  };
  bool found = false;
  for (HypId h = 0; h < ps.num_hyperplanes() && !found; ++h) {
    std::vector<std::vector<int>> rows;
    for (const auto& l : S.lines) {
      bool in = true;
      for (auto p : l.points) in = in && oracle::dot(O, ov(ps.coords(h)), ov(ps.coords(p))) == 0;
      if (in)
        for (auto p : l.points) rows.emplace_back(ps.coords(p).begin(), ps.coords(p).end());
    }
    found = rank_mod5(rows) != 4;
  }
  EXPECT_TRUE(found);
}

// ---- spread hyperplanes

TEST(Spreads, SpreadHyperplaneCanonical) {
  const FlagGeometry G(ProjectiveSpace(Field::make(2), 3));
  const Field F4 = Field::make(2, 2);
  const auto C = canonical_spread(G.space(), F4, F4.generator());
  const auto sh = spread_hyperplane(G, C.spread, "canonical");
  EXPECT_EQ(sh.hyperplane.size(), 45u);
  EXPECT_TRUE(sh.is_hyperplane && sh.definitions_agree);
  EXPECT_FALSE(sh.singular_inside);
  // oracle: (p,H) with l_p inside H
  const auto O = mirror(G.field());
  for (FlagId f = 0; f < G.num_flags(); ++f) {
    const auto& [p, h] = G.flag(f);
    bool inside = true;
    for (auto r : C.spread.line_through(p).points)
      inside = inside && oracle::dot(O, ov(G.space().coords(h)), ov(G.space().coords(r))) == 0;
    EXPECT_EQ(sh.hyperplane.contains(f), inside);
  }
  const auto back = spread_from_hyperplane(G, sh.hyperplane.members);
  ASSERT_TRUE(back);
  EXPECT_TRUE(back->same_lines(C.spread));
  EXPECT_FALSE(spread_from_hyperplane(G, tensor_members(G, Mat::unit(4, 0, 0))));
}

TEST(Spreads, SpreadHyperplaneIsTensorHyperplaneExhaustiveAtN3Q2) {
  const FlagGeometry G(ProjectiveSpace(Field::make(2), 3));
  const Field& F = G.field();
  const auto O = mirror(F);
  std::size_t tested = 0;
  for (const auto& M : tensor_classes(F, 4)) {
    if (has_eigenvalue(F, M) || !check_smat(F, M, Side::Right)) continue;
    const auto S = spread_from_matrix(G.space(), M);
    const auto sh = spread_hyperplane(G, S);
    const auto grid = M.to_rows();
    for (FlagId f = 0; f < G.num_flags(); ++f) {
      const auto& [p, h] = G.flag(f);
      const bool in_HM = oracle::bilinear(O, ov(G.space().coords(h)), grid, ov(G.space().coords(p))) == 0;
      ASSERT_EQ(sh.hyperplane.contains(f), in_HM);
    }
    ++tested;
  }
  EXPECT_GT(tested, 0u);
  RecordProperty("classes_tested", static_cast<int>(tested));
}

TEST(Spreads, SpreadHyperplaneIsTensorHyperplaneSampledAtN3Q3) {
  std::mt19937 rng(17);
  const FlagGeometry G(ProjectiveSpace(Field::make(3), 3));
  const Field& F = G.field();
  const Mat C = companion(F, Poly{{1, 0, 1}});
  for (int t = 0; t < 12; ++t) {
    const Mat g = random_invertible(F, 4, rng);
    Mat M = multiply(F, multiply(F, g, block_diag({C, C})), *inverse(F, g));
    M = affine_shift(F, M, 1 + t % 2, t % 3);
    const auto r = check_spread_tensor_agreement(G, M);
    EXPECT_TRUE(r.passed()) << r.witness.dump();
  }
}

// ---- standardness

TEST(Spreads, StandardSpreadsAreStandardWithVerifiedWitness) {
  std::vector<std::pair<ProjectiveSpace, LineSpread>> cases;
  {
    const ProjectiveSpace ps(Field::make(3), 3);
    const Field F9 = Field::make(3, 2);
    const Elem w = F9.generator();
    cases.emplace_back(ps, standard_spread(ps, F9, {1, w}, {w, 1}));
  }
  {
    const ProjectiveSpace ps(Field::make(2), 5);
    const Field F4 = Field::make(2, 2);
    const Elem w = F4.generator();
    cases.emplace_back(ps, standard_spread(ps, F4, {1, w, 1}, {w, 1, F4.add(w, 1)}));
  }
  for (const auto& [ps, S] : cases) {
    const auto r = is_standard(ps, S);
    ASSERT_EQ(r.verdict, Standardness::Standard);
    ASSERT_TRUE(r.witness);
    EXPECT_TRUE(oracle_fixed_point_free_stabilizer(ps, S, *r.witness));
    EXPECT_FALSE(r.block_anomaly);
    EXPECT_EQ(r.stabilizer_dim, 2u);  // GF(p^2) acting on each line
    EXPECT_TRUE(spread_from_matrix(ps, *r.witness).same_lines(S));
  }
}

TEST(Spreads, PiecemealStandardnessAtN5Q5) {
  const Field F5 = Field::make(5);
  const ProjectiveSpace ps(F5, 5);
  const auto bad = is_standard(ps, piecemeal_spread(ps, PiecemealSpec(F5, {lambda_block(2), lambda_block(3)})));
  EXPECT_EQ(bad.verdict, Standardness::NotStandard);
  EXPECT_EQ(bad.stabilizer_dim, 1u);
  const auto good = is_standard(ps, piecemeal_spread(ps, PiecemealSpec(F5, {lambda_block(2), lambda_block(2)})));
  EXPECT_EQ(good.verdict, Standardness::Standard);
  EXPECT_EQ(good.stabilizer_dim, 2u);
}

TEST(Spreads, InconclusiveUnderTinyCap) {
  const Field F5 = Field::make(5);
  const ProjectiveSpace ps(F5, 5);
  const auto S = piecemeal_spread(ps, PiecemealSpec(F5, {lambda_block(2), lambda_block(3)}));
  EXPECT_EQ(is_standard(ps, S, 0).verdict, Standardness::Inconclusive);
}

TEST(Spreads, StandardizeCollineation) {
  const Field F3 = Field::make(3), F9 = Field::make(3, 2);
  const ProjectiveSpace ps(F3, 3);
  const Elem w = F9.generator();
  const auto canon = standard_spread(ps, F9, {1, 1}, {w, w});
  const auto id = standardize_collineation(ps, canon, w);
  EXPECT_EQ(id.blocks, Mat::identity(4));
  EXPECT_TRUE(id.verified);

  const auto S = standard_spread(ps, F9, {1, w}, {w, 1});
  const auto st = standardize_collineation(ps, S, w);
  EXPECT_TRUE(st.verified);
  // oracle: map each canonical line by hand and compare point sets
  std::set<std::vector<PointId>> image;
  for (const auto& l : st.canonical.lines) {
    std::vector<PointId> pts;
    for (auto p : l.points) pts.push_back(ps.index_of(apply(F3, st.natural, ps.point(p))));
    std::sort(pts.begin(), pts.end());
    image.insert(pts);
  }
  std::set<std::vector<PointId>> target;
  for (const auto& l : S.lines) target.insert(l.points);
  EXPECT_EQ(image, target);
  // the inverse direction carries S onto the canonical spread
  EXPECT_TRUE(map_spread(ps, S, *inverse(F3, st.natural)).same_lines(st.canonical));

  expect_code(Errc::TagMissing, [&] { standardize_collineation(ps, make_spread(ps, S.lines), w); });
}

// ---- search

TEST(Spreads, ExhaustiveSearchPG32) {
  const ProjectiveSpace ps(Field::make(2), 3);
  const auto res = search_spreads(ps);
  EXPECT_EQ(res.spreads.size(), oracle_count_spreads_pg32());
  EXPECT_EQ(res.spreads.size(), 56u);
  std::set<std::vector<Subspace>> distinct;
  for (const auto& S : res.spreads) {
    EXPECT_TRUE(oracle_partition(ps, S));
    distinct.insert(S.lines);
  }
  EXPECT_EQ(distinct.size(), 56u);
}

TEST(Spreads, CatalogPG32) {
  const FlagGeometry G(ProjectiveSpace(Field::make(2), 3));
  const auto res = search_spreads(G.space());
  for (std::size_t i = 0; i < res.spreads.size(); ++i) {
    const auto e = analyze_spread(G, res.spreads[i], i);
    EXPECT_EQ(e.standard, Standardness::Standard);
    EXPECT_TRUE(e.has_dual);
    EXPECT_EQ(e.arises, std::optional<bool>(true));
    EXPECT_FALSE(e.problem_hit);
  }
}

TEST(Spreads, FirstKSearchPG52) {
  const ProjectiveSpace ps(Field::make(2), 5);
  SearchOptions opt;
  opt.mode = SearchMode::FirstK;
  opt.first_k = 10;
  const auto res = search_spreads(ps, opt);
  ASSERT_EQ(res.spreads.size(), 10u);
  for (const auto& S : res.spreads) EXPECT_TRUE(oracle_partition(ps, S));
  SearchOptions tight = opt;
  tight.node_cap = 3;
  expect_code(Errc::SearchCapExceeded, [&] { search_spreads(ps, tight); });
  expect_code(Errc::EvenDimension, [&] { search_spreads(ProjectiveSpace(Field::make(2), 2)); });
}
