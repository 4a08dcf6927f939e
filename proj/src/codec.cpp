#include "kframe/codec.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace kframe {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(errc::invalid_input, "complex scalar must be a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Index positive_index(const json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_number_integer())
    throw Error(errc::invalid_input, std::string(field) + " must be an integer");
  const long long v = doc[field].get<long long>();
  if (v < 1)
    throw Error(errc::invalid_input, std::string(field) + " must be positive");
  return static_cast<Index>(v);
}

void require_kind(const json& doc, const std::string& kind) {
  if (!doc.is_object() || !doc.contains("kind") || doc["kind"] != kind)
    throw Error(errc::invalid_input, "document is not of kind '" + kind + "'");
}

}  // namespace

json operator_to_json(const Mat& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(complex_to_json(a(i, j)));
    rows.push_back(row);
  }
  return json{{"kind", "operator"},
              {"rows", a.rows()},
              {"cols", a.cols()},
              {"entries", rows}};
}

Mat operator_from_json(const json& doc) {
  require_kind(doc, "operator");
  const Index rows = positive_index(doc, "rows");
  const Index cols = positive_index(doc, "cols");
  if (!doc.contains("entries") || !doc["entries"].is_array() ||
      static_cast<Index>(doc["entries"].size()) != rows)
    throw Error(errc::invalid_input, "entries must hold one array per row");
  Mat a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = doc["entries"][static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw Error(errc::invalid_input, "row length differs from cols");
    for (Index j = 0; j < cols; ++j)
      a(i, j) = complex_from_json(row[static_cast<std::size_t>(j)]);
  }
  require_finite(a, "operator");
  return a;
}

json frame_to_json(const FrameSystem& f) {
  json vecs = json::array();
  for (const Vec& v : f.vectors) {
    json entries = json::array();
    for (Index i = 0; i < v.size(); ++i) entries.push_back(complex_to_json(v(i)));
    vecs.push_back(entries);
  }
  return json{{"kind", "frame"}, {"dim", f.dim}, {"vectors", vecs}};
}

FrameSystem frame_from_json(const json& doc) {
  require_kind(doc, "frame");
  FrameSystem f;
  f.dim = positive_index(doc, "dim");
  if (!doc.contains("vectors") || !doc["vectors"].is_array() ||
      doc["vectors"].empty())
    throw Error(errc::invalid_input, "frame needs a nonempty vectors array");
  for (const json& jv : doc["vectors"]) {
    if (!jv.is_array() || static_cast<Index>(jv.size()) != f.dim)
      throw Error(errc::invalid_input, "vector length differs from dim");
    Vec v(f.dim);
    for (Index i = 0; i < f.dim; ++i)
      v(i) = complex_from_json(jv[static_cast<std::size_t>(i)]);
    f.vectors.push_back(v);
  }
  validate(f);
  return f;
}

json subspace_to_json(const Subspace& s) {
  return json{{"kind", "subspace"},
              {"ambient_dim", s.ambient_dim},
              {"basis", operator_to_json(s.basis)}};
}

Subspace subspace_from_json(const json& doc) {
  require_kind(doc, "subspace");
  Subspace s;
  s.ambient_dim = positive_index(doc, "ambient_dim");
  if (!doc.contains("basis"))
    throw Error(errc::invalid_input, "subspace needs a basis operator");
  s.basis = operator_from_json(doc["basis"]);
  if (s.basis.rows() != s.ambient_dim)
    throw Error(errc::invalid_input, "basis rows differ from ambient_dim");
  const Tolerance tol;
  if (fnorm(s.basis.adjoint() * s.basis - identity(s.basis.cols())) >
      tol.eq_abs * std::max(1.0, std::sqrt(double(s.basis.cols()))))
    throw Error(errc::invalid_input, "subspace basis is not orthonormal");
  return s;
}

json load_document(const std::string& path, const std::string& kind) {
  std::ifstream in(path);
  if (!in) throw Error(errc::invalid_input, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(errc::invalid_input, path + ": " + e.what());
  }
  require_kind(doc, kind);
  return doc;
}

void save_document(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(errc::invalid_input, "cannot write " + path);
  out << dump_document(doc);
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

Mat load_operator(const std::string& path) {
  return operator_from_json(load_document(path, "operator"));
}

FrameSystem load_frame(const std::string& path) {
  return frame_from_json(load_document(path, "frame"));
}

Subspace load_subspace(const std::string& path) {
  return subspace_from_json(load_document(path, "subspace"));
}

}  // namespace kframe
