#pragma once

#include "opq/algebras.hpp"
#include "opq/cherns.hpp"
#include "opq/complex.hpp"
#include "opq/dg_algebra.hpp"
#include "opq/fieldtheory.hpp"

#include <json.hpp>

#include <string>

namespace opq::io {

using nlohmann::json;

/// Reads and parses a JSON file; ParseError carries the file name and position.
json load_file(const std::string &path);

// Parsers throw ParseError with a JSON pointer to the offending value.
Rational rational_from_json(const json &j, const std::string &where = "");
ChainComplex complex_from_json(const json &j, const std::string &where = "");
DgAlgebra algebra_from_json(const json &j, const std::string &where = "");
PresymplecticComplex presymplectic_from_json(const json &j, const std::string &where = "");
FieldTheory theory_from_json(const json &j, const std::string &where = "");
TriangulatedSurface surface_from_json(const json &j, const std::string &where = "");
SurfaceDiagram diagram_from_json(const json &j, const std::string &where = "");
/// Sparse matrix of a known shape from [[row, col, "p/q"], ...].
RationalMatrix matrix_from_json(const json &j, std::size_t rows, std::size_t cols, const std::string &where = "");

json to_json(const Rational &q);
json to_json(const RationalMatrix &m);
json to_json(const ChainComplex &c);
json to_json(const DgAlgebra &a);
json to_json(const PresymplecticComplex &v);
json to_json(const TriangulatedSurface &s);

/// Which kind of document a JSON value holds, judged by its keys.
enum class DocumentKind { Complex, Algebra, Presymplectic, Theory, Surface, Diagram, Unknown };
DocumentKind classify(const json &j);

} // namespace opq::io
