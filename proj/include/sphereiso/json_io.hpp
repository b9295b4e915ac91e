#pragma once

#include <string>

#include "json.hpp"
#include "sphereiso/lamperti.hpp"
#include "sphereiso/radon_nikodym.hpp"
#include "sphereiso/sup_sphere.hpp"

namespace sphereiso {

using nlohmann::json;

// Instance file: { "atoms": [ {"id": ..., "weight": number|"inf"|
// {"num":..,"den":..}}, ... ] }
json space_to_json(const FiniteMeasureSpace& sp);
FiniteMeasureSpace space_from_json(const json& j);

// Partition file: { "blocks": [[ids]...], "lambda": [weights...] },
// relative to a base space.
json partition_to_json(const SubSigmaAlgebra& c);
SubSigmaAlgebra partition_from_json(const FiniteMeasureSpace& base,
                                    const json& j);

// Vector file: { "p": number, "values": {atomId: number} }
json vector_to_json(const LpVector& f);
LpVector vector_from_json(const FiniteMeasureSpace& sp, const json& j);

// Operator file: { "p": number, "atom_map": {domAtom: codAtom},
//                  "h": {codAtom: number} }
json operator_to_json(const LampertiOperator& T);
LampertiOperator operator_from_json(const FiniteMeasureSpace& dom,
                                    const FiniteMeasureSpace& cod,
                                    const json& j);

// Sup-vector file: { "values": {pointId: number} }
json supvector_to_json(const SupVector& f);
SupVector supvector_from_json(const json& j);

// Permutation file: { "sigma": {yId: xId} }
json permutation_to_json(const std::vector<std::string>& Y,
                         const std::vector<std::string>& X,
                         const std::vector<int>& sigma);
std::vector<int> permutation_from_json(const std::vector<std::string>& Y,
                                       const std::vector<std::string>& X,
                                       const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace sphereiso
