#pragma once

// The natural embedding of the flag geometry into the projective space of
// null-traced matrices, the saturation form f(X, Y) = trace(XY), and the
// hyperplanes it induces.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "flaghyp/flag_geometry.hpp"
#include "flaghyp/hyperplane_lab.hpp"
#include "flaghyp/linalg.hpp"

namespace flaghyp {

struct PureTensor {
  Vec x;
  Covec xi;
  Mat matrix;  // x (x) xi, first nonzero entry 1 since x and xi are canonical
};

inline PureTensor embed_flag(const FlagGeometry& G, FlagId f) {
  const auto& fl = G.flag(f);
  PureTensor t{G.space().point(fl.point), G.space().hyperplane(fl.hyp), {}};
  t.matrix = outer(G.field(), t.x, t.xi);
  return t;
}

/// sum_{i,j} x_{ij} y_{ji}
inline Elem saturation_form(const Field& F, const Mat& X, const Mat& Y) {
  if (!X.square() || X.rows() != Y.cols() || X.cols() != Y.rows())
    throw Error(Errc::SizeMismatch, "saturation form needs equal square sizes");
  Elem s = 0;
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j) s = F.add(s, F.mul(X(i, j), Y(j, i)));
  return s;
}

/// Flags (x, xi) with xi M x = 0.
inline FlagSet tensor_members(const FlagGeometry& G, const Mat& M) {
  const auto& ps = G.space();
  const Field& F = G.field();
  if (!M.square() || M.rows() != ps.vec_len()) throw Error(Errc::SizeMismatch, "matrix order must be n+1");
  std::vector<Vec> images(ps.num_points());
  for (PointId p = 0; p < ps.num_points(); ++p) images[p] = apply(F, M, ps.point(p));
  FlagSet s(G.num_flags());
  for (FlagId f = 0; f < G.num_flags(); ++f) {
    const auto& fl = G.flag(f);
    if (ps.dot(ps.coords(fl.hyp), images[fl.point].c) == 0) s.set(f);
  }
  return s;
}

inline GeometricHyperplane tensor_hyperplane(const FlagGeometry& G, const Mat& M) {
  if (M.square() && M.rows() == G.space().vec_len() && is_scalar(M))
    throw Error(Errc::ScalarMatrix, "M is a multiple of the identity; its perp is all null-traced matrices");
  GeometricHyperplane H{tensor_members(G, M), TensorOrigin{M}};
  const auto t = tally_hyperplane(G, H.members);
  if (!t.hyperplane) throw Error(Errc::NotAHyperplane, "tensor set failed validation");
  return H;
}

/// H_{a,A}: the tensor hyperplane of a (x) alpha; a need not lie on A.
inline GeometricHyperplane quasi_singular_hyperplane(const FlagGeometry& G, PointId a, HypId A) {
  const auto& ps = G.space();
  GeometricHyperplane H = tensor_hyperplane(G, outer(G.field(), ps.point(a), ps.hyperplane(A)));
  H.provenance = QuasiSingularOrigin{a, A};
  return H;
}

struct EmbeddingCheck {
  bool arises = false;
  std::size_t rank = 0;           // rank of the image vectors
  std::size_t expected_rank = 0;  // (n+1)^2 - 2
  std::optional<Mat> tensor;      // M with H = H_M when the span is a hyperplane
};

/// Does the image of H span a hyperplane of PG(M^0) whose preimage is H?
inline EmbeddingCheck arises_from_embedding(const FlagGeometry& G, const FlagSet& H) {
  const Field& F = G.field();
  const std::size_t N = G.space().vec_len();
  EmbeddingCheck out;
  out.expected_rank = N * N - 2;
  RowSpace span(F, N * N);
  for (auto i = H.find_first(); i != FlagSet::npos; i = H.find_next(i)) {
    span.insert(embed_flag(G, static_cast<FlagId>(i)).matrix.entries());
    if (span.dim() > out.expected_rank) break;
  }
  out.rank = span.dim();
  if (out.rank != out.expected_rank) return out;
  // Functionals vanishing on the span: a 2-space containing the trace.
  auto ker = rank_and_kernel(F, span.basis()).kernel;
  RowSpace trace_line(F, N * N);
  trace_line.insert(Mat::identity(N).entries());
  for (auto& k : ker) {
    if (trace_line.contains(k.c)) continue;
    Mat Mt(N, N);
    Mt.entries() = k.c;
    Mat M = transpose(Mt);  // f(M, X) = <vec(M^T), vec(X)>
    if (tensor_members(G, M) == H) {
      out.arises = true;
      out.tensor = std::move(M);
    }
    break;
  }
  return out;
}

struct GramReport {
  int n = 0;
  std::uint32_t q = 0;
  std::size_t gram_rank = 0;
  std::size_t expected_rank = 0;
  bool block_structure = false;        // reordered Gram = diag([[0,1],[1,0]]..., I)
  bool symmetric = false;
  bool pure_tensor_law = false;        // f(X,X) = xi(x)^2 on all pure tensors
  std::uint64_t pure_tensors_checked = 0;
  std::optional<bool> char2_isotropy;  // f(X,X)=0 <=> trace X = 0 (char 2 only)
  std::uint64_t isotropy_checked = 0;
  bool trace_square_law = false;       // f(X,X) = trace(X^2) on samples
  std::uint64_t samples = 0;
};

/// Structure of the saturation form on M_{n+1}(F). The char-2 isotropy law
/// is checked exhaustively when q^{(n+1)^2} <= exhaustive_limit.
inline GramReport gram_diagnostics(const Field& F, int n, std::uint64_t exhaustive_limit = 1u << 20,
                                   std::uint64_t seed = 1, std::uint64_t samples = 256) {
  const std::size_t N = static_cast<std::size_t>(n) + 1, D = N * N;
  GramReport r;
  r.n = n;
  r.q = F.q();
  r.expected_rank = D;
  Mat gram(D, D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b)
      gram(a, b) = saturation_form(F, Mat::unit(N, a / N, a % N), Mat::unit(N, b / N, b % N));
  r.gram_rank = rank(F, gram);
  r.symmetric = gram == transpose(gram);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      order.push_back(i * N + j);
      order.push_back(j * N + i);
    }
  for (std::size_t i = 0; i < N; ++i) order.push_back(i * N + i);
  Mat reordered(D, D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) reordered(a, b) = gram(order[a], order[b]);
  std::vector<Mat> blocks(N * (N - 1) / 2, Mat{{0, 1}, {1, 0}});
  blocks.push_back(Mat::identity(N));
  r.block_structure = reordered == block_diag(blocks);

  r.pure_tensor_law = true;
  for_each_projective_point(F, N, [&](const std::vector<Elem>& x) {
    for_each_projective_point(F, N, [&](const std::vector<Elem>& xi) {
      const Mat X = outer(F, Vec(x), Covec(xi));
      const Elem v = evaluate(F, Covec(xi), Vec(x));
      const Elem fxx = saturation_form(F, X, X);
      if (fxx != F.mul(v, v) || ((fxx == 0) != (v == 0))) r.pure_tensor_law = false;
      ++r.pure_tensors_checked;
    });
  });

  std::uint64_t total = 1;
  bool small = true;
  for (std::size_t i = 0; i < D && small; ++i) {
    total *= F.q();
    if (total > exhaustive_limit) small = false;
  }
  if (F.characteristic() == 2 && small) {
    bool law = true;
    Mat X(N, N);
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t t = code;
      for (auto& e : X.entries()) {
        e = static_cast<Elem>(t % F.q());
        t /= F.q();
      }
      if ((saturation_form(F, X, X) == 0) != (trace(F, X) == 0)) law = false;
      ++r.isotropy_checked;
    }
    r.char2_isotropy = law;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Elem> pick(0, F.q() - 1);
  r.trace_square_law = true;
  for (std::uint64_t s = 0; s < samples; ++s) {
    Mat X(N, N);
    for (auto& e : X.entries()) e = pick(rng);
    if (saturation_form(F, X, X) != trace(F, multiply(F, X, X))) r.trace_square_law = false;
    ++r.samples;
  }
  return r;
}

}  // namespace flaghyp
