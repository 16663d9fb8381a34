#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "linrel/chains.hpp"
#include "linrel/metrics.hpp"
#include "linrel/relation.hpp"
#include "linrel/stability.hpp"
#include "linrel/subspace.hpp"

namespace linrel {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

/// Finite values as numbers, infinities as "inf" / "-inf", NaN as "nan".
[[nodiscard]] Json real_to_json(double v);
[[nodiscard]] double real_from_json(const Json& j);
[[nodiscard]] Json scalar_to_json(Scalar z);
/// A number or a [re, im] pair.
[[nodiscard]] Scalar scalar_from_json(const Json& j);

[[nodiscard]] Json to_json(const Subspace& s);
/// Columns need not be orthonormal; they are passed through span.
[[nodiscard]] Subspace subspace_from_json(const Json& j);

[[nodiscard]] Json to_json(const LinearRelation& t);
/// {"x_dim", "y_dim", "graph"} or {"matrix": rows}.
[[nodiscard]] LinearRelation relation_from_json(const Json& j);

[[nodiscard]] Json to_json(const RelativeBound& b);
[[nodiscard]] RelativeBound bound_from_json(const Json& j);

[[nodiscard]] Json to_json(const ChainIndex& n);
[[nodiscard]] Json to_json(const ChainReport& r);
[[nodiscard]] Json to_json(const InstanceSpec& s);
[[nodiscard]] InstanceSpec spec_from_json(const Json& j);
[[nodiscard]] Json to_json(const Measured& m);
[[nodiscard]] Json to_json(const Instance& inst);
[[nodiscard]] Json to_json(const SweepReport& r);
[[nodiscard]] Json to_json(const CheckReport& r);
[[nodiscard]] Json to_json(const LemmaTally& t);

/// Fixed columns: re,im,alpha,beta,gamma,gap_fwd,gap_bwd,bound,flags.
[[nodiscard]] std::string sweep_csv(const SweepReport& r);

/// The tolerances in force, echoed into reports.
[[nodiscard]] Json tolerances_json();

/// Parses a file; FormatError messages carry "path:line:column".
[[nodiscard]] Json read_json_file(const std::string& path);
/// Parses text; `origin` names the source in error messages.
[[nodiscard]] Json parse_json(const std::string& text, const std::string& origin);
void write_text_file(const std::string& path, const std::string& text);

/// Two-space indented dump with a trailing newline.
[[nodiscard]] std::string dump(const Json& j);

[[nodiscard]] std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
[[nodiscard]] std::string hex64(std::uint64_t v);

}  // namespace linrel
