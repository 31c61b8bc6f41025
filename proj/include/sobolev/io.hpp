#pragma once

#include <iosfwd>

#include <json.hpp>

#include "sobolev/banach.hpp"
#include "sobolev/gridfn.hpp"

namespace sobolev::io {

/// {"kind": string, "dim": int, "exponent": number | "inf", "weights": [number] | null}
nlohmann::json space_to_json(const banach::SpaceDescriptor& space);
banach::SpaceDescriptor space_from_json(const nlohmann::json& j);

/// {"domain": {"lo", "hi"}, "grid": {"cells"}, "space": ..., "values": flat array}
nlohmann::json grid_function_to_json(const grid::GridFunction& u);
grid::GridFunction grid_function_from_json(const nlohmann::json& j);

/// One row per node: center coordinates x0..x{d-1}, then value coordinates v0..v{m-1}.
void write_csv(const grid::GridFunction& u, std::ostream& out);

/// Shortest decimal text that round-trips the double.
std::string format_number(double v);

}  // namespace sobolev::io
