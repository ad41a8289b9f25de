#pragma once

// JSON serialization of fields, matrices, hyperplanes and spreads, and the
// small matrix literal syntax accepted on the command line.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flaghyp/spread_analysis.hpp"

namespace flaghyp {

using json = nlohmann::json;

inline json field_to_json(const Field& F) {
  json j = {{"p", F.p()}, {"k", F.k()}};
  j["modulus"] = F.k() > 1 ? json(F.modulus()) : json(nullptr);
  return j;
}

inline Field field_from_json(const json& j) {
  try {
    std::optional<std::vector<std::uint32_t>> mod;
    if (j.contains("modulus") && !j["modulus"].is_null()) mod = j["modulus"].get<std::vector<std::uint32_t>>();
    return Field::make(j.at("p").get<std::uint32_t>(), j.value("k", 1u), mod);
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string("field: ") + e.what());
  }
}

inline json matrix_to_json(const Mat& M) { return M.to_rows(); }

inline Mat matrix_from_json(const Field& F, const json& j) {
  if (!j.is_array() || j.empty()) throw Error(Errc::Parse, "matrix must be a non-empty array of rows");
  std::vector<std::vector<Elem>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw Error(Errc::Parse, "matrix rows must be arrays");
    std::vector<Elem> row;
    for (const auto& x : r) {
      if (!x.is_number_integer()) throw Error(Errc::Parse, "matrix entries must be integers");
      const auto v = x.get<long long>();
      // negative entries are read modulo p in the prime subfield
      if (v < 0) {
        if (-v >= static_cast<long long>(F.q()) || !F.is_prime_field())
          throw Error(Errc::Parse, "entry out of range");
        row.push_back(F.neg(static_cast<Elem>(-v)));
      } else {
        if (v >= static_cast<long long>(F.q())) throw Error(Errc::Parse, "entry out of range");
        row.push_back(static_cast<Elem>(v));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw Error(Errc::Parse, "ragged matrix");
    rows.push_back(std::move(row));
  }
  return Mat::from_rows(rows);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Parse, what + ": " + e.what());
  }
}

/// Companion block of the least irreducible quadratic over F.
inline Mat default_block(const Field& F) {
  const auto [a, b] = find_irreducible_quadratic(F);
  return companion(F, Poly{{b, a, 1}});
}

namespace detail {

inline std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string strip(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

inline Mat parse_block(const Field& F, const std::string& s, std::optional<std::size_t> order) {
  if (s.empty()) throw Error(Errc::Parse, "empty matrix literal");
  if (s[0] == '@') return matrix_from_json(F, parse_json_text(read_file(s.substr(1)), "matrix file"));
  if (s[0] == '[') return matrix_from_json(F, parse_json_text(s, "matrix literal"));
  if (s == "B") return default_block(F);
  if (s.rfind("diag(", 0) == 0 && s.back() == ')') {
    std::vector<Mat> blocks;
    for (const auto& part : split_top_level(s.substr(5, s.size() - 6))) blocks.push_back(parse_block(F, part, std::nullopt));
    return block_diag(blocks);
  }
  if (s == "I" || s == "O") {
    if (!order) throw Error(Errc::Parse, s + " needs a known order; write a grid inside diag(...)");
    return s == "I" ? Mat::identity(*order) : Mat(*order, *order);
  }
  if (s[0] == 'E' && order) {
    // E01 or E0,1
    std::string digits = s.substr(1);
    std::size_t i = 0, j = 0;
    if (auto c = digits.find(','); c != std::string::npos) {
      i = std::stoul(digits.substr(0, c));
      j = std::stoul(digits.substr(c + 1));
    } else if (digits.size() == 2 && std::isdigit(digits[0]) && std::isdigit(digits[1])) {
      i = static_cast<std::size_t>(digits[0] - '0');
      j = static_cast<std::size_t>(digits[1] - '0');
    } else {
      throw Error(Errc::Parse, "bad unit matrix literal " + s);
    }
    if (i >= *order || j >= *order) throw Error(Errc::Parse, "unit matrix index out of range");
    return Mat::unit(*order, i, j);
  }
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    const auto v = std::stoul(s);
    if (v >= F.q()) throw Error(Errc::Parse, "scalar out of range");
    return Mat{{static_cast<Elem>(v)}};
  }
  throw Error(Errc::Parse, "unrecognized matrix literal " + s);
}

}  // namespace detail

/// Grids "[[0,1],[1,1]]", I, O, B, Eij, diag(...), or @file holding a grid.
inline Mat parse_matrix(const Field& F, const std::string& text, std::size_t order) {
  Mat M = detail::parse_block(F, detail::strip(text), order);
  if (M.rows() != order || M.cols() != order)
    throw Error(Errc::SizeMismatch, "matrix must be " + std::to_string(order) + "x" + std::to_string(order));
  return M;
}

// ---- hyperplanes

inline json hyperplane_to_json(const GeometricHyperplane& H, bool rle = false) {
  json j = {{"provenance", provenance_name(H.provenance)}, {"size", H.size()}, {"flags", H.members.size()}};
  if (auto* t = std::get_if<TensorOrigin>(&H.provenance)) j["matrix"] = matrix_to_json(t->matrix);
  if (auto* qs = std::get_if<QuasiSingularOrigin>(&H.provenance)) {
    j["point"] = qs->point;
    j["hyperplane"] = qs->hyperplane;
  }
  if (auto* sp = std::get_if<SpreadOrigin>(&H.provenance)) j["spread_id"] = sp->spread_id;
  const auto members = members_of(H.members);
  if (rle) {
    json runs = json::array();
    for (std::size_t i = 0; i < members.size();) {
      std::size_t k = i + 1;
      while (k < members.size() && members[k] == members[k - 1] + 1) ++k;
      runs.push_back({members[i], k - i});
      i = k;
    }
    j["rle"] = true;
    j["members"] = runs;
  } else {
    j["rle"] = false;
    j["members"] = members;
  }
  return j;
}

inline GeometricHyperplane hyperplane_from_json(const FlagGeometry& G, const json& j) {
  try {
    FlagSet s(G.num_flags());
    auto put = [&](std::uint64_t f) {
      if (f >= G.num_flags()) throw Error(Errc::Parse, "flag index out of range");
      s.set(f);
    };
    if (j.value("rle", false)) {
      for (const auto& run : j.at("members")) {
        const auto start = run.at(0).get<std::uint64_t>(), len = run.at(1).get<std::uint64_t>();
        for (std::uint64_t k = 0; k < len; ++k) put(start + k);
      }
    } else {
      for (const auto& f : j.at("members")) put(f.get<std::uint64_t>());
    }
    if (j.contains("flags") && j["flags"].get<std::uint64_t>() != G.num_flags())
      throw Error(Errc::GeometryMismatch, "hyperplane file is for a different geometry");
    return GeometricHyperplane{std::move(s), RawOrigin{}};
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string("hyperplane: ") + e.what());
  }
}

// ---- spreads

inline json spread_to_json(const ProjectiveSpace& ps, const LineSpread& S) {
  json lines = json::array();
  for (const auto& l : S.lines) lines.push_back(l.points);
  json j = {{"n", ps.n()}, {"field", field_to_json(ps.field())}, {"tag", spread_tag_name(S.tag)}, {"lines", lines}};
  if (auto* t = std::get_if<FromMatrixTag>(&S.tag)) j["matrix"] = matrix_to_json(t->matrix);
  if (auto* t = std::get_if<CanonicalTag>(&S.tag)) j["omega"] = t->omega;
  if (auto* t = std::get_if<StandardTag>(&S.tag)) {
    j["a"] = t->a;
    j["b"] = t->b;
  }
  if (auto* t = std::get_if<PiecemealTag>(&S.tag)) {
    json bl = json::array();
    for (const auto& b : t->blocks) bl.push_back(matrix_to_json(b));
    j["blocks"] = bl;
  }
  return j;
}

/// Reads a spread file; lines are lists of point indices. The result is
/// validated and carries no construction tag.
inline LineSpread spread_from_json(const ProjectiveSpace& ps, const json& j) {
  try {
    if (j.at("n").get<int>() != ps.n()) throw Error(Errc::AmbientMismatch, "spread file is for another n");
    if (j.contains("field") && !(field_from_json(j["field"]) == ps.field()))
      throw Error(Errc::FieldMismatch, "spread file is for another field");
    std::vector<Subspace> lines;
    for (const auto& l : j.at("lines")) {
      std::vector<PointId> pts;
      for (const auto& p : l) {
        const auto v = p.get<std::uint64_t>();
        if (v >= ps.num_points()) throw Error(Errc::Parse, "point index out of range");
        pts.push_back(static_cast<PointId>(v));
      }
      Subspace s = ps.span_points(pts);
      if (s.points.size() != pts.size()) throw Error(Errc::NotASpread, "listed points do not form a line");
      lines.push_back(std::move(s));
    }
    return make_spread(ps, std::move(lines));
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, std::string("spread: ") + e.what());
  }
}

}  // namespace flaghyp
