#include "pmult/report.hpp"

#include <cmath>
#include <sstream>

namespace pmult {

std::string emit_report(const Report& r) { return r.doc.dump(2); }

Report parse_report(const std::string& text) {
  Report r;
  r.doc = Json::parse(text);
  r.ok = !r.doc.contains("ok") || r.doc["ok"].get<bool>();
  return r;
}

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double mag = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(x))));
  return std::round(x * mag) / mag;
}

Json complex_to_json(const Complex& c) {
  return Json::array({round_significant(c.real()), round_significant(c.imag())});
}

Complex complex_from_json(const Json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SpaceError(std::string(where) +
                     ": complex values must be two-element arrays [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json frame_descriptor(const Frame& f) {
  Json out;
  out["rank"] = f.rank();
  // Reduced row echelon form of the transposed column span; unique for the
  // subspace, so reports do not depend on the computed orthonormal basis.
  Matrix C = f.columns().transpose();
  const Eigen::Index rows = C.rows(), cols = C.cols();
  const double scale = rows > 0 && cols > 0 ? C.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-9 * std::max(scale, 1.0);
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = -1;
    double best = tol;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (std::abs(C(i, c)) > best) {
        best = std::abs(C(i, c));
        pivot = i;
      }
    }
    if (pivot < 0) continue;
    C.row(r).swap(C.row(pivot));
    C.row(r) /= C(r, c);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != r && std::abs(C(i, c)) > 0.0) C.row(i) -= C(i, c) * C.row(r);
    }
    ++r;
  }
  Json basis = Json::array();
  for (Eigen::Index i = 0; i < r; ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < cols; ++c) {
      Complex v = C(i, c);
      if (std::abs(v) <= tol) v = 0.0;
      row.push_back(complex_to_json(v));
    }
    basis.push_back(std::move(row));
  }
  out["basis"] = std::move(basis);
  return out;
}

namespace {

void render_node(const Json& j, std::ostream& os, int indent) {
  const std::string pad(2 * indent, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || v.is_array()) {
        os << pad << k << ":\n";
        render_node(v, os, indent + 1);
      } else {
        os << pad << k << ": " << v.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    // Flat numeric arrays render on one line; nested structures recurse.
    bool flat = true;
    for (const auto& v : j) {
      if (v.is_object() || (v.is_array() && !v.empty() && v[0].is_array())) {
        flat = false;
        break;
      }
    }
    if (flat) {
      os << pad << j.dump() << "\n";
    } else {
      for (const auto& v : j) render_node(v, os, indent);
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

}  // namespace

std::string render_text(const Json& doc) {
  std::ostringstream os;
  render_node(doc, os, 0);
  return os.str();
}

}  // namespace pmult
