#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "curv4/tensor.hpp"
#include "curv4/types.hpp"

namespace curv4 {

/// Raised for unreadable, unparsable, or invariant-violating input files.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr const char* tensor_format_tag = "curv4.R.v1";
inline constexpr const char* frame_format_tag = "curv4.frame.v1";

// 17 significant digits: lossless for binary64.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double json_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw FileError(std::string("curv4: ") + what + " must be a number");
  return j.get<double>();
}

inline nlohmann::json parse_stream(std::istream& in, const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FileError("curv4: cannot parse " + name + ": " + e.what());
  }
  if (!doc.is_object()) throw FileError("curv4: " + name + " must hold a JSON object");
  return doc;
}

}  // namespace detail

/// Serializes a tensor as {"format": "curv4.R.v1", "matrix6": [...]} with
/// 17-significant-digit numbers.
inline void write_tensor(std::ostream& out, const CurvTensord& r) {
  out << "{\n  \"format\": \"" << detail::tensor_format_tag << "\",\n  \"matrix6\": [\n";
  for (int i = 0; i < 6; ++i) {
    out << "    [";
    for (int j = 0; j < 6; ++j) out << (j ? ", " : "") << detail::fmt17(r.matrix()(i, j));
    out << (i + 1 < 6 ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
}

inline std::string tensor_to_string(const CurvTensord& r) {
  std::ostringstream os;
  write_tensor(os, r);
  return os.str();
}

/// Reads either form of the tensor document: a full "matrix6" (validated for
/// symmetry and the Bianchi identity at 1e-9 relative), or a "components"
/// record list {i,j,k,l,value} with 1-based indices, which is completed by
/// the pair symmetries; duplicates that disagree beyond 1e-12 are rejected.
inline CurvTensord read_tensor(std::istream& in, const std::string& name = "tensor input") {
  const nlohmann::json doc = detail::parse_stream(in, name);
  if (!doc.contains("format") || doc["format"] != detail::tensor_format_tag)
    throw FileError("curv4: " + name + " lacks the format tag \"" +
                    detail::tensor_format_tag + "\"");
  const bool has_matrix = doc.contains("matrix6");
  const bool has_components = doc.contains("components");
  if (has_matrix == has_components)
    throw FileError("curv4: " + name + " needs exactly one of \"matrix6\", \"components\"");

  Mat6d a = Mat6d::Zero();
  if (has_matrix) {
    const auto& rows = doc["matrix6"];
    if (!rows.is_array() || rows.size() != 6)
      throw FileError("curv4: matrix6 must be a 6x6 array");
    for (int i = 0; i < 6; ++i) {
      if (!rows[i].is_array() || rows[i].size() != 6)
        throw FileError("curv4: matrix6 must be a 6x6 array");
      for (int j = 0; j < 6; ++j) a(i, j) = detail::json_number(rows[i][j], "matrix6 entry");
    }
    const double scale = std::max(1.0, a.norm());
    if ((a - a.transpose()).lpNorm<Eigen::Infinity>() > 1e-9 * scale)
      throw FileError("curv4: matrix6 is not symmetric");
    if (std::abs(a(0, 3) + a(1, 4) + a(2, 5)) > 1e-9 * scale)
      throw FileError("curv4: matrix6 violates the Bianchi identity");
    return CurvTensord(a);
  }

  const auto& recs = doc["components"];
  if (!recs.is_array()) throw FileError("curv4: components must be an array of records");
  Eigen::Matrix<bool, 6, 6> seen = Eigen::Matrix<bool, 6, 6>::Constant(false);
  for (const auto& rec : recs) {
    if (!rec.is_object()) throw FileError("curv4: component record must be an object");
    for (const char* key : {"i", "j", "k", "l", "value"})
      if (!rec.contains(key))
        throw FileError(std::string("curv4: component record lacks \"") + key + "\"");
    const int i = rec["i"].get<int>(), j = rec["j"].get<int>();
    const int k = rec["k"].get<int>(), l = rec["l"].get<int>();
    const double v = detail::json_number(rec["value"], "component value");
    for (int idx : {i, j, k, l})
      if (idx < 1 || idx > 4) throw FileError("curv4: component index out of range 1..4");
    if (i == j || k == l)
      throw FileError("curv4: component record needs i != j and k != l");
    const int p = detail::pair_lut.index[i - 1][j - 1];
    const int q = detail::pair_lut.index[k - 1][l - 1];
    const double sv =
        detail::pair_lut.sign[i - 1][j - 1] * detail::pair_lut.sign[k - 1][l - 1] * v;
    if (seen(p, q)) {
      if (std::abs(a(p, q) - sv) > 1e-12 * std::max(1.0, std::abs(sv)))
        throw FileError("curv4: conflicting duplicate component records");
    } else {
      a(p, q) = sv;
      a(q, p) = sv;
      seen(p, q) = true;
      seen(q, p) = true;
    }
  }
  const double scale = std::max(1.0, a.norm());
  if (std::abs(a(0, 3) + a(1, 4) + a(2, 5)) > 1e-9 * scale)
    throw FileError("curv4: components violate the Bianchi identity");
  return CurvTensord(a);
}

inline CurvTensord read_tensor_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("curv4: cannot open " + path);
  return read_tensor(in, path);
}

inline void write_tensor_file(const std::string& path, const CurvTensord& r) {
  std::ofstream out(path);
  if (!out) throw FileError("curv4: cannot open " + path + " for writing");
  write_tensor(out, r);
}

inline void write_frame(std::ostream& out, const Framed& f) {
  out << "{\n  \"format\": \"" << detail::frame_format_tag << "\",\n  \"matrix4\": [\n";
  for (int i = 0; i < 4; ++i) {
    out << "    [";
    for (int j = 0; j < 4; ++j) out << (j ? ", " : "") << detail::fmt17(f.matrix()(i, j));
    out << (i + 1 < 4 ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
}

inline Framed read_frame(std::istream& in, const std::string& name = "frame input") {
  const nlohmann::json doc = detail::parse_stream(in, name);
  if (!doc.contains("format") || doc["format"] != detail::frame_format_tag)
    throw FileError("curv4: " + name + " lacks the format tag \"" +
                    detail::frame_format_tag + "\"");
  if (!doc.contains("matrix4")) throw FileError("curv4: " + name + " lacks \"matrix4\"");
  const auto& rows = doc["matrix4"];
  if (!rows.is_array() || rows.size() != 4)
    throw FileError("curv4: matrix4 must be a 4x4 array");
  Mat4d m;
  for (int i = 0; i < 4; ++i) {
    if (!rows[i].is_array() || rows[i].size() != 4)
      throw FileError("curv4: matrix4 must be a 4x4 array");
    for (int j = 0; j < 4; ++j) m(i, j) = detail::json_number(rows[i][j], "matrix4 entry");
  }
  try {
    return Framed::from_matrix(m);
  } catch (const std::invalid_argument& e) {
    throw FileError(std::string("curv4: ") + name + ": " + e.what());
  }
}

inline Framed read_frame_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("curv4: cannot open " + path);
  return read_frame(in, path);
}

}  // namespace curv4
