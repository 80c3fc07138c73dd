#ifndef WIENER_JSON_IO_HPP
#define WIENER_JSON_IO_HPP

#include "wiener/inversion.hpp"
#include "wiener/l1r.hpp"
#include "wiener/l1z.hpp"

#include <json.hpp>

#include <string>

namespace wiener {

using Json = nlohmann::ordered_json;

/// {"coeffs":[{"n":..,"re":..,"im":..}, ...], "tail":..}, sorted by n.
Json to_json(const L1ZSeq& a);
L1ZSeq l1z_from_json(const Json& j);

/// {"breakpoints":[...], "values":[{"re":..,"im":..}, ...], "l1_slack":..};
/// a nonzero origin is written as an extra "origin" field.
Json to_json(const PLFunction& f);
PLFunction pl_from_json(const Json& j);

/// {"witness":..., "residual":..., "params":{"grid":..,"degree":..,"target":..}}.
Json to_json(const InversionCertificate& c);
InversionCertificate certificate_from_json(const Json& j);

/// True for an object with a "breakpoints" field.
bool is_pl_json(const Json& j);

/// Parses text; syntax errors throw Error(invalid_input).
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// Two-space indented JSON followed by a newline.
std::string dump(const Json& j);

} // namespace wiener

#endif // WIENER_JSON_IO_HPP
