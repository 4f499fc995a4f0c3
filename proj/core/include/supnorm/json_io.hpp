#pragma once

#include "supnorm/quaternion_orders.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace supnorm {

class JsonIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Elements are written as "c0", "c0+c1*w" style strings; on input a number,
// such a string, or an array [c0, c1] of coordinates in (1, omega) is accepted.
FieldElement parse_element(const FieldContext& ctx, std::string_view text);
FieldElement element_from_json(const FieldContext& ctx, const nlohmann::json& j);
nlohmann::json element_to_json(const FieldElement& x);
IntCoords integral_from_json(const FieldContext& ctx, const nlohmann::json& j);

// {"field": "Qsqrt2", "rank": n, "gram": [[...], ...]}
QuadraticForm form_from_json(const nlohmann::json& j);
nlohmann::json form_to_json(const QuadraticForm& q);

// {"field": ..., "a": ..., "b": ..., "basis": [[x0, x1, x2, x3] x 4], "name": ...}
QuaternionOrder order_from_json(const nlohmann::json& j);
nlohmann::json order_to_json(const QuaternionOrder& o);

nlohmann::json read_json_file(const std::string& path);

}  // namespace supnorm
