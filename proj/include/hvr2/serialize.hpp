#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "hvr2/experiments.hpp"

namespace hvr2 {

// Key order is preserved so serialized artifacts are byte-stable.
using Json = nlohmann::ordered_json;

// Rationals travel as strings "p/q" (or "p" when the denominator is 1).
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json vec2_to_json(Vec2 v);
Vec2 vec2_from_json(const Json& j);
Json basis_to_json(const BasisPair& b);
BasisPair basis_from_json(const Json& j);
Json truncation_to_json(const Truncation& t);
Truncation truncation_from_json(const Json& j);

// Top-line action data. Table kind:
//   {"kind":"table","E":{"1":"1","-1":"1"},"t":{},"f_b2":"0","h_b2":"0"}
// Closed-form kind (term = c * m^power * base^m):
//   {"kind":"exppoly","g1":[{"c":"1","m":1,"a":"2"}],"g2":[]}
// with optional "f_b2"/"h_b2" overrides.
Json rho_to_json(const RhoSpec& rho);
RhoSpec rho_from_json(const Json& j);

// Recipe for one named module construction, e.g.
//   {"construction":"verma_H","c":["1","1","0","0"],"epsilon":"+",
//    "basis":{"b1":[1,0],"b2":[0,1]},
//    "truncation":{"depth":4,"window":8,"raising_bound":16}}
struct ConstructionDescriptor {
  std::string construction;
  std::optional<RhoSpec> rho;
  std::optional<std::array<Rational, 4>> c;
  std::optional<Rational> a;          // one-direction module level
  std::optional<char> epsilon;
  std::optional<std::pair<Rational, Rational>> lambda;
  std::optional<long> index;          // tensor-slice index
  std::optional<std::string> alg;     // "full", "E" or "t"
  BasisPair basis = standard_basis();
  Truncation truncation{};
};

ConstructionDescriptor construction_from_json(const Json& j);
Json construction_to_json(const ConstructionDescriptor& d);

// Instantiates the named construction; throws std::invalid_argument on an
// unknown name or missing parameters.
ModulePtr build_construction(const ConstructionDescriptor& d);

// Dimension tables: CSV columns offset_b1,offset_b2,dim; the JSON mirror
// carries the weight base of the module alongside the rows.
void dims_to_csv(const std::map<WeightKey, int>& dims, std::ostream& os);
Json dims_to_json(const TruncatedModule& mod, const std::map<WeightKey, int>& dims);

// Sweep reports: CSV columns setting,offset_b1,offset_b2,dim (one row per
// table entry); JSON carries the verdict and witness data as well.
void sweep_to_csv(const SweepReport& rep, std::ostream& os);
Json sweep_to_json(const SweepReport& rep);

}  // namespace hvr2
