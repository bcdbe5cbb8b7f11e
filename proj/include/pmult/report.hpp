#pragma once

#include <string>

#include "json.hpp"
#include "pmult/linalg.hpp"

namespace pmult {

using Json = nlohmann::ordered_json;

/// Structured run output. `doc` is the full JSON document; `ok` is false when
/// any query hit a numerical failure (the failing query is marked in place).
struct Report {
  Json doc;
  bool ok = true;
};

/// Deterministic serialization: byte-identical for identical documents.
std::string emit_report(const Report& r);
Report parse_report(const std::string& text);

/// Plain-text rendering of the same document.
std::string render_text(const Json& doc);

/// Round half-away-from-zero to 12 significant digits so reports are
/// comparison-stable across runs and platforms.
double round_significant(double x, int digits = 12);

Json complex_to_json(const Complex& c);
Complex complex_from_json(const Json& j, const char* where);

/// Canonical descriptor of a subspace: rank plus the reduced-row-echelon
/// basis of the coordinate span (column-pivoted, leading coordinate 1), with
/// entries rounded to 12 significant digits. Equal subspaces get equal
/// descriptors regardless of which orthonormal basis computed them.
Json frame_descriptor(const Frame& f);

}  // namespace pmult
