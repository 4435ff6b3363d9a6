#include "hvr2/serialize.hpp"

#include <ostream>
#include <stdexcept>

namespace hvr2 {

namespace {

const Json& need(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string("config: missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string())
    throw std::invalid_argument("config: rationals must be strings like \"3/2\"");
  return Rational::from_string(j.get<std::string>());
}

Json vec2_to_json(Vec2 v) { return Json::array({v.x1, v.x2}); }

Vec2 vec2_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("config: lattice vectors are arrays [m1,m2]");
  return Vec2{j[0].get<long>(), j[1].get<long>()};
}

Json basis_to_json(const BasisPair& b) {
  return Json{{"b1", vec2_to_json(b.b1)}, {"b2", vec2_to_json(b.b2)}};
}

BasisPair basis_from_json(const Json& j) {
  return BasisPair{vec2_from_json(need(j, "b1")), vec2_from_json(need(j, "b2"))};
}

Json truncation_to_json(const Truncation& t) {
  return Json{{"depth", t.depth}, {"window", t.window}, {"raising_bound", t.raising_bound}};
}

Truncation truncation_from_json(const Json& j) {
  const int depth = need(j, "depth").get<int>();
  const int window = need(j, "window").get<int>();
  const int rb = j.contains("raising_bound") ? j["raising_bound"].get<int>() : -1;
  return Truncation::make(depth, window, rb);
}

namespace {

Json table_to_json(const std::map<long, Rational>& t) {
  Json out = Json::object();
  for (const auto& [k, v] : t) out[std::to_string(k)] = rational_to_json(v);
  return out;
}

std::map<long, Rational> table_from_json(const Json& j) {
  std::map<long, Rational> out;
  for (auto it = j.begin(); it != j.end(); ++it)
    out[std::stol(it.key())] = rational_from_json(it.value());
  return out;
}

Json exppoly_to_json(const ExpPolynomial& p) {
  Json out = Json::array();
  for (const ExpTerm& t : p.terms())
    out.push_back(Json{{"c", rational_to_json(t.c)}, {"m", t.m}, {"a", rational_to_json(t.a)}});
  return out;
}

ExpPolynomial exppoly_from_json(const Json& j) {
  std::vector<ExpTerm> terms;
  for (const Json& t : j)
    terms.push_back(ExpTerm{rational_from_json(need(t, "c")), need(t, "m").get<long>(),
                            rational_from_json(need(t, "a"))});
  return ExpPolynomial(std::move(terms));
}

}  // namespace

Json rho_to_json(const RhoSpec& rho) {
  if (rho.kind() == RhoSpec::Kind::Table) {
    Json out;
    out["kind"] = "table";
    out["E"] = table_to_json(rho.table_E());
    out["t"] = table_to_json(rho.table_t());
    out["f_b2"] = rational_to_json(rho.f_b2(standard_basis()));
    out["h_b2"] = rational_to_json(rho.h_b2(standard_basis()));
    return out;
  }
  Json out;
  out["kind"] = "exppoly";
  out["g1"] = exppoly_to_json(rho.g1());
  out["g2"] = exppoly_to_json(rho.g2());
  return out;
}

RhoSpec rho_from_json(const Json& j) {
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "table") {
    return RhoSpec::table(table_from_json(need(j, "E")), table_from_json(need(j, "t")),
                          rational_from_json(need(j, "f_b2")),
                          rational_from_json(need(j, "h_b2")));
  }
  if (kind == "exppoly") {
    std::optional<Rational> f, h;
    if (j.contains("f_b2")) f = rational_from_json(j["f_b2"]);
    if (j.contains("h_b2")) h = rational_from_json(j["h_b2"]);
    return RhoSpec::exp_poly(exppoly_from_json(need(j, "g1")), exppoly_from_json(need(j, "g2")),
                             f, h);
  }
  throw std::invalid_argument("config: rho kind must be \"table\" or \"exppoly\"");
}

ConstructionDescriptor construction_from_json(const Json& j) {
  ConstructionDescriptor d;
  d.construction = need(j, "construction").get<std::string>();
  if (j.contains("rho")) d.rho = rho_from_json(j["rho"]);
  if (j.contains("c")) {
    const Json& c = j["c"];
    if (!c.is_array() || c.size() != 4)
      throw std::invalid_argument("config: \"c\" must be an array of four rationals");
    d.c = std::array<Rational, 4>{rational_from_json(c[0]), rational_from_json(c[1]),
                                  rational_from_json(c[2]), rational_from_json(c[3])};
  }
  if (j.contains("a")) d.a = rational_from_json(j["a"]);
  if (j.contains("epsilon")) {
    const std::string e = j["epsilon"].get<std::string>();
    if (e != "+" && e != "-")
      throw std::invalid_argument("config: \"epsilon\" must be \"+\" or \"-\"");
    d.epsilon = e[0];
  }
  if (j.contains("lambda")) {
    const Json& l = j["lambda"];
    if (!l.is_array() || l.size() != 2)
      throw std::invalid_argument("config: \"lambda\" must be an array of two rationals");
    d.lambda = std::make_pair(rational_from_json(l[0]), rational_from_json(l[1]));
  }
  if (j.contains("i")) d.index = j["i"].get<long>();
  if (j.contains("alg")) d.alg = j["alg"].get<std::string>();
  if (j.contains("basis")) d.basis = basis_from_json(j["basis"]);
  d.truncation = truncation_from_json(need(j, "truncation"));
  return d;
}

Json construction_to_json(const ConstructionDescriptor& d) {
  Json out;
  out["construction"] = d.construction;
  if (d.rho) out["rho"] = rho_to_json(*d.rho);
  if (d.c) {
    Json c = Json::array();
    for (const Rational& x : *d.c) c.push_back(rational_to_json(x));
    out["c"] = c;
  }
  if (d.a) out["a"] = rational_to_json(*d.a);
  if (d.epsilon) out["epsilon"] = std::string(1, *d.epsilon);
  if (d.lambda)
    out["lambda"] = Json::array(
        {rational_to_json(d.lambda->first), rational_to_json(d.lambda->second)});
  if (d.index) out["i"] = *d.index;
  if (d.alg) out["alg"] = *d.alg;
  out["basis"] = basis_to_json(d.basis);
  out["truncation"] = truncation_to_json(d.truncation);
  return out;
}

namespace {

HSubalgebra alg_from_name(const std::string& name) {
  if (name == "full") return HSubalgebra::Full;
  if (name == "E") return HSubalgebra::EOnly;
  if (name == "t") return HSubalgebra::TOnly;
  throw std::invalid_argument("config: \"alg\" must be \"full\", \"E\" or \"t\"");
}

template <typename T>
const T& require(const std::optional<T>& v, const char* what, const char* who) {
  if (!v)
    throw std::invalid_argument(std::string("config: construction \"") + who +
                                "\" needs field \"" + what + "\"");
  return *v;
}

}  // namespace

ModulePtr build_construction(const ConstructionDescriptor& d) {
  const char* who = d.construction.c_str();
  if (d.construction == "laurent_T") {
    const HSubalgebra alg = d.alg ? alg_from_name(*d.alg) : HSubalgebra::Full;
    return laurent_T(require(d.rho, "rho", who), alg, d.basis, d.truncation.window);
  }
  if (d.construction == "fock")
    return fock(require(d.epsilon, "epsilon", who), require(d.a, "a", who), d.basis,
                d.truncation.depth);
  if (d.construction == "verma_H")
    return verma_H(require(d.c, "c", who), require(d.epsilon, "epsilon", who), d.basis,
                   d.truncation.depth);
  if (d.construction == "tensor_M_rho") {
    const std::array<Rational, 4>& c = require(d.c, "c", who);
    return tensor_M_rho(require(d.rho, "rho", who), require(d.epsilon, "epsilon", who), c[0],
                        d.basis, d.truncation.depth, d.truncation.window);
  }
  if (d.construction == "highest_weight_raw")
    return highest_weight_raw(require(d.rho, "rho", who), d.basis, d.truncation);
  if (d.construction == "highest_weight_V_rho")
    return highest_weight_V_rho(require(d.rho, "rho", who), d.basis, d.truncation);
  if (d.construction == "hat_V")
    return hat_V(require(d.rho, "rho", who), d.basis, d.truncation,
                 d.index ? std::optional<long>(*d.index) : std::nullopt);
  throw std::invalid_argument("config: unknown construction \"" + d.construction + "\"");
}

void dims_to_csv(const std::map<WeightKey, int>& dims, std::ostream& os) {
  os << "offset_b1,offset_b2,dim\n";
  for (const auto& [k, d] : dims) os << k.x << "," << k.y << "," << d << "\n";
}

Json dims_to_json(const TruncatedModule& mod, const std::map<WeightKey, int>& dims) {
  Json out;
  auto [b1, b2] = mod.weight_base();
  out["base1"] = rational_to_json(b1);
  out["base2"] = rational_to_json(b2);
  Json rows = Json::array();
  for (const auto& [k, d] : dims)
    rows.push_back(Json{{"offset_b1", k.x}, {"offset_b2", k.y}, {"dim", d}});
  out["rows"] = rows;
  return out;
}

void sweep_to_csv(const SweepReport& rep, std::ostream& os) {
  os << "setting,offset_b1,offset_b2,dim\n";
  for (std::size_t i = 0; i < rep.settings.size(); ++i)
    for (const auto& [k, d] : rep.tables[i])
      os << rep.settings[i] << "," << k.x << "," << k.y << "," << d << "\n";
}

Json sweep_to_json(const SweepReport& rep) {
  Json out;
  out["parameter"] = rep.parameter;
  out["settings"] = rep.settings;
  out["verdict"] = verdict_name(rep.verdict);
  out["stabilized_at"] = rep.stabilized_at;
  if (!rep.witness_ranks.empty()) out["witness_ranks"] = rep.witness_ranks;
  Json tables = Json::array();
  for (const auto& t : rep.tables) {
    Json rows = Json::array();
    for (const auto& [k, d] : t)
      rows.push_back(Json{{"offset_b1", k.x}, {"offset_b2", k.y}, {"dim", d}});
    tables.push_back(rows);
  }
  out["tables"] = tables;
  return out;
}

}  // namespace hvr2
