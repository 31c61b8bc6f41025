#include "sobolev/io.hpp"

#include <charconv>
#include <ostream>

#include "sobolev/errors.hpp"

namespace sobolev::io {

using nlohmann::json;

json space_to_json(const banach::SpaceDescriptor& space) {
  json j;
  j["kind"] = banach::to_string(space.kind());
  j["dim"] = space.dim();
  if (space.exponent() == banach::kInf) {
    j["exponent"] = "inf";
  } else {
    j["exponent"] = space.exponent();
  }
  j["weights"] = space.explicit_weights().empty() ? json(nullptr) : json(space.explicit_weights());
  return j;
}

banach::SpaceDescriptor space_from_json(const json& j) {
  if (!j.is_object()) throw ContractError("space descriptor must be a JSON object");
  const auto kind = banach::space_kind_from_string(j.at("kind").get<std::string>());
  const auto dim = j.at("dim").get<std::size_t>();
  double exponent = 2.0;
  if (j.contains("exponent") && !j.at("exponent").is_null()) {
    const auto& e = j.at("exponent");
    if (e.is_string()) {
      if (e.get<std::string>() != "inf") throw ContractError("exponent string must be \"inf\"");
      exponent = banach::kInf;
    } else {
      exponent = e.get<double>();
    }
  }
  std::vector<double> weights;
  if (j.contains("weights") && !j.at("weights").is_null()) weights = j.at("weights").get<std::vector<double>>();
  switch (kind) {
    case banach::SpaceKind::FiniteLr: return banach::SpaceDescriptor::finite_lr(dim, exponent);
    case banach::SpaceKind::SampledSup: return banach::SpaceDescriptor::sampled_sup(dim);
    case banach::SpaceKind::GridLr: return banach::SpaceDescriptor::grid_lr(dim, exponent, std::move(weights));
    case banach::SpaceKind::Hilbert: return banach::SpaceDescriptor::hilbert(dim);
  }
  throw ContractError("unreachable space kind");
}

json grid_function_to_json(const grid::GridFunction& u) {
  json j;
  j["domain"] = {{"lo", u.domain().lo}, {"hi", u.domain().hi}};
  j["grid"] = {{"cells", u.grid().cells()}};
  j["space"] = space_to_json(u.space());
  j["values"] = u.flat();
  return j;
}

grid::GridFunction grid_function_from_json(const json& j) {
  grid::BoxDomain domain(j.at("domain").at("lo").get<std::vector<double>>(),
                         j.at("domain").at("hi").get<std::vector<double>>());
  grid::GridSpec spec(j.at("grid").at("cells").get<std::vector<std::size_t>>());
  return grid::GridFunction(std::move(domain), std::move(spec), space_from_json(j.at("space")),
                            j.at("values").get<std::vector<double>>());
}

std::string format_number(double v) {
  if (v == banach::kInf) return "inf";
  if (v == -banach::kInf) return "-inf";
  if (v != v) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const grid::GridFunction& u, std::ostream& out) {
  const std::size_t d = u.dim();
  const std::size_t m = u.value_dim();
  for (std::size_t j = 0; j < d; ++j) out << (j ? "," : "") << 'x' << j;
  for (std::size_t k = 0; k < m; ++k) out << ",v" << k;
  out << '\n';
  for (std::size_t node = 0; node < u.node_count(); ++node) {
    const auto xi = u.center(node);
    for (std::size_t j = 0; j < d; ++j) out << (j ? "," : "") << format_number(xi[j]);
    for (double v : u.at(node)) out << ',' << format_number(v);
    out << '\n';
  }
}

}  // namespace sobolev::io
