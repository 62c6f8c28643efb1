#pragma once
// JSON forms of the library's data types. Complex numbers are [re, im]
// pairs; every top-level document carries "schema_version".

#include <initializer_list>
#include <string>

#include "json.hpp"

#include "discenv/disc.hpp"
#include "discenv/domain.hpp"
#include "discenv/family.hpp"

namespace discenv {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Throws ValidationError naming the first key of `obj` not in `allowed`
/// (prefixed with `path`), or if `obj` is not an object.
void require_known_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path = "");

/// Reads a required member; throws ValidationError("<path>.<key>") when missing or mistyped.
const Json& member(const Json& obj, const char* key, const std::string& path = "");

double json_number(const Json& j, const std::string& field);
/// Double that may be the string "-inf" / "inf".
double json_extended(const Json& j, const std::string& field);
Json extended_to_json(double v);
int json_int(const Json& j, const std::string& field);

Json to_json(cplx z);
cplx cplx_from_json(const Json& j, const std::string& field);
Json point_to_json(const Point& p);
Point point_from_json(const Json& j, const std::string& field);

Json poly_to_json(const ComplexPoly& p);
ComplexPoly poly_from_json(const Json& j, const std::string& field);

/// {"schema_version", "type": "projective-disc", "lift": [[[re, im], ...], ...]}
Json disc_to_json(const ProjectiveDisc& f);
ProjectiveDisc disc_from_json(const Json& j);
Json divisor_to_json(const Divisor& d);

Json family_to_json(const DiscFamily& f);
DiscFamily family_from_json(const Json& j);

/// {"dim", "components": [{"type": "ball", "center", "radius"} |
///  {"type": "polydisc", "center", "radii"} | {"type": "halfspaces", "a", "b"}]}
Json domain_to_json(const DomainSpec& d);
DomainSpec domain_from_json(const Json& j, const std::string& path = "domain");

} // namespace discenv
