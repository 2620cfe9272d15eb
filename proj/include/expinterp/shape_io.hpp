#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "expinterp/shapes.hpp"

namespace expinterp {

using Json = nlohmann::json;

/// Roots as [re, im] pairs.
Json roots_to_json(const RootVector& roots);

/// Accepts [re, im] pairs or plain numbers for real roots.
RootVector roots_from_json(const Json& j);

/// Shape document: roots, lambda, net, flags and the resolution history.
/// Doubles are written in their shortest round-trip form.
Json model_to_json(const ShapeModel& model);

/// Inverse of model_to_json. Interpolators are rebuilt from the roots and
/// checked against the stored lambda. InvalidArgument on malformed input.
ShapeModel model_from_json(const Json& doc);

Json mesh_to_json(const Mesh& mesh, int point_dim);

/// Wavefront OBJ text: quads for surfaces, line elements for curves.
std::string mesh_to_obj(const Mesh& mesh, int point_dim, std::string_view name);

}  // namespace expinterp
