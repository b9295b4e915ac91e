#include "sphereiso/json_io.hpp"

#include <algorithm>
#include <fstream>

namespace sphereiso {

namespace {

json mass_to_json(const Mass& m) {
  if (!m.is_finite()) return json("inf");
  const Rat& r = m.finite();
  if (r.is_integer()) return json(r.num);
  return json{{"num", r.num}, {"den", r.den}};
}

Mass mass_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Mass::infinity();
    throw InputError("unrecognized weight string: " + j.get<std::string>());
  }
  if (j.is_object()) {
    return Mass(Rat(j.at("num").get<long long>(), j.at("den").get<long long>()));
  }
  if (j.is_number_integer()) return Mass(Rat(j.get<long long>()));
  if (j.is_number()) return Mass(Rat::from_double(j.get<double>()));
  throw InputError("weight must be a number, \"inf\", or {num,den}");
}

}  // namespace

json space_to_json(const FiniteMeasureSpace& sp) {
  json atoms = json::array();
  for (int i = 0; i < sp.size(); ++i)
    atoms.push_back({{"id", sp.id(i)}, {"weight", mass_to_json(sp.weight(i))}});
  return json{{"atoms", atoms}};
}

FiniteMeasureSpace space_from_json(const json& j) {
  std::vector<std::string> ids;
  std::vector<Mass> w;
  for (const auto& a : j.at("atoms")) {
    ids.push_back(a.at("id").get<std::string>());
    w.push_back(mass_from_json(a.at("weight")));
  }
  return FiniteMeasureSpace(std::move(ids), std::move(w));
}

json partition_to_json(const SubSigmaAlgebra& c) {
  json blocks = json::array(), lambda = json::array();
  for (std::size_t b = 0; b < c.blocks.size(); ++b) {
    json ids = json::array();
    for (int i = 0; i < c.base.size(); ++i)
      if (c.blocks[b] & bit(i)) ids.push_back(c.base.id(i));
    blocks.push_back(ids);
    lambda.push_back(mass_to_json(c.lambda[b]));
  }
  return json{{"blocks", blocks}, {"lambda", lambda}};
}

SubSigmaAlgebra partition_from_json(const FiniteMeasureSpace& base,
                                    const json& j) {
  std::vector<Mask> blocks;
  std::vector<Mass> lambda;
  for (const auto& blk : j.at("blocks")) {
    Mask m = 0;
    for (const auto& id : blk) m |= bit(base.index_of(id.get<std::string>()));
    blocks.push_back(m);
  }
  for (const auto& l : j.at("lambda")) lambda.push_back(mass_from_json(l));
  return SubSigmaAlgebra(base, std::move(blocks), std::move(lambda));
}

json vector_to_json(const LpVector& f) {
  json vals = json::object();
  for (int i = 0; i < f.space.size(); ++i) vals[f.space.id(i)] = f.values[i];
  return json{{"p", f.p}, {"values", vals}};
}

LpVector vector_from_json(const FiniteMeasureSpace& sp, const json& j) {
  std::vector<double> v(sp.size(), 0.0);
  for (const auto& [id, val] : j.at("values").items())
    v[sp.index_of(id)] = val.get<double>();
  return LpVector(sp, std::move(v), j.at("p").get<double>());
}

json operator_to_json(const LampertiOperator& T) {
  json amap = json::object(), h = json::object();
  for (int i = 0; i < T.domain().size(); ++i)
    if (T.iso.atom_map()[i] >= 0)
      amap[T.domain().id(i)] = T.codomain().id(T.iso.atom_map()[i]);
  for (int y = 0; y < T.codomain().size(); ++y)
    if (T.iso.preimage_atom(y) >= 0) h[T.codomain().id(y)] = T.h[y];
  return json{{"p", T.p}, {"atom_map", amap}, {"h", h}};
}

LampertiOperator operator_from_json(const FiniteMeasureSpace& dom,
                                    const FiniteMeasureSpace& cod,
                                    const json& j) {
  std::vector<int> amap(dom.size(), -1);
  for (const auto& [d, c] : j.at("atom_map").items())
    amap[dom.index_of(d)] = cod.index_of(c.get<std::string>());
  RegularSetIso iso = RegularSetIso::build(dom, cod, amap);
  std::vector<double> h(cod.size(), 0.0);
  for (const auto& [c, v] : j.at("h").items())
    h[cod.index_of(c)] = v.get<double>();
  return with_weight(iso, std::move(h), j.at("p").get<double>());
}

json supvector_to_json(const SupVector& f) {
  json vals = json::object();
  for (int i = 0; i < f.size(); ++i) vals[f.points[i]] = f.values[i];
  return json{{"values", vals}};
}

SupVector supvector_from_json(const json& j) {
  std::vector<std::string> pts;
  std::vector<double> vals;
  for (const auto& [id, v] : j.at("values").items()) {
    pts.push_back(id);
    vals.push_back(v.get<double>());
  }
  return SupVector(std::move(pts), std::move(vals));
}

json permutation_to_json(const std::vector<std::string>& Y,
                         const std::vector<std::string>& X,
                         const std::vector<int>& sigma) {
  json s = json::object();
  for (std::size_t y = 0; y < sigma.size(); ++y) s[Y[y]] = X[sigma[y]];
  return json{{"sigma", s}};
}

std::vector<int> permutation_from_json(const std::vector<std::string>& Y,
                                       const std::vector<std::string>& X,
                                       const json& j) {
  std::vector<int> sigma(Y.size(), -1);
  for (const auto& [y, x] : j.at("sigma").items()) {
    auto yit = std::find(Y.begin(), Y.end(), y);
    auto xit = std::find(X.begin(), X.end(), x.get<std::string>());
    if (yit == Y.end() || xit == X.end())
      throw InputError("permutation references unknown point: " + y);
    sigma[yit - Y.begin()] = (int)(xit - X.begin());
  }
  for (int v : sigma)
    if (v < 0) throw InputError("permutation does not cover all points");
  return sigma;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("parse error in " + path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace sphereiso
