#pragma once

// JSON and CSV interchange. Complex numbers are [re, im] pairs everywhere.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "scalekit/moebius.hpp"
#include "scalekit/moments.hpp"
#include "scalekit/scale_group.hpp"
#include "scalekit/scaling_operator.hpp"
#include "scalekit/signal.hpp"
#include "scalekit/spectral.hpp"
#include "scalekit/stability.hpp"

namespace scalekit {

using Json = nlohmann::ordered_json;

/// Malformed input; the message names the source, line and/or field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic rendering: object keys in insertion order, floating point
/// numbers with 17 significant digits, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);

/// Parses JSON text; syntax errors become ParseError("<source>:<line>: ...").
Json parse_json(std::string_view text, const std::string& source);
std::string read_file(const std::filesystem::path& path);
/// Inline JSON when `arg` starts with '{' or '[', else the named file.
Json load_json_arg(const std::string& arg);

Json to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& field);

Json to_json(const SuMatrix& m);
/// Re-validates the determinant.
SuMatrix su_matrix_from_json(const Json& j, const std::string& field = "matrix");

/// {"p": p, "generators": [SuMatrix...]}
Json to_json(const ScaleGroup& g);
ScaleGroup group_from_json(const Json& j);

/// {"coeffs": [[re,im]...], "tail_bound": x}
Json to_json(const CoeffSeq& c);
CoeffSeq coeff_seq_from_json(const Json& j);

/// Sparse slice: [{"k": [..], "v": [re,im]}, ...]
Json to_json(const ScaleSignal& s);
ScaleSignal scale_signal_from_json(const Json& j, std::size_t arity, const std::string& field);

/// Dense tensor over time x bounding box:
///   {"arity": p, "shape": [T, w_1..w_p], "offset": [lo_1..lo_p],
///    "data": [[re,im]...]}  (row-major, time slowest)
Json to_json(const ScaleTimeSignal& s);
ScaleTimeSignal signal_from_json(const Json& j);

/// Rows "n,k_1..k_p,re,im" sorted by (n, k), after a header line.
std::string to_csv(const ScaleTimeSignal& s);
/// Header optional; arity is the column count minus 3. Repeated (n, k)
/// entries are summed.
ScaleTimeSignal signal_from_csv(std::string_view text, const std::string& source);
/// Inline dense JSON when the argument starts with '{', else a file: CSV for
/// *.csv paths, dense JSON otherwise.
ScaleTimeSignal load_signal(const std::filesystem::path& path);

Json to_json(const SpectrumGrid& g);
/// Rows "j_1..j_p,re,im".
std::string to_csv(const SpectrumGrid& g);

Json to_json(const MomentSequence& ms);
MomentSequence moments_from_json(const Json& j);
Json to_json(const PsdReport& r);
Json to_json(const IntervalMass& m);

Json to_json(const OperatorNormBracket& b);
Json to_json(const StabilityReport& r);
/// Reads back the fields empirical_verify needs (verdict, bounds, witnesses).
StabilityReport report_from_json(const Json& j);
Json to_json(const VerifyReport& r);

}  // namespace scalekit
