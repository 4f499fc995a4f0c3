#include "supnorm/json_io.hpp"

#include <cctype>
#include <fstream>

namespace supnorm {

namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw JsonIoError("expected an integer or a rational string, got " + j.dump());
}

}  // namespace

FieldElement parse_element(const FieldContext& ctx, std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw JsonIoError("empty element");
  Rational c0 = 0, c1 = 0;
  // split into signed terms
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = pos + 1;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;
    bool neg = false;
    if (term[0] == '+' || term[0] == '-') {
      neg = term[0] == '-';
      term = term.substr(1);
    }
    if (term.empty()) throw JsonIoError("malformed element: " + std::string(text));
    bool omega = false;
    if (term.back() == 'w') {
      omega = true;
      term.pop_back();
      if (!term.empty() && term.back() == '*') {
        term.pop_back();
        if (term.empty()) throw JsonIoError("malformed element: " + std::string(text));
      }
      if (term.empty()) term = "1";
    }
    Rational v;
    try {
      v = parse_rational(term);
    } catch (const std::exception&) {
      throw JsonIoError("malformed element: " + std::string(text));
    }
    if (neg) v = -v;
    (omega ? c1 : c0) += v;
  }
  if (c1 != 0 && ctx.degree() == 1) throw JsonIoError("omega term over Q: " + std::string(text));
  return FieldElement(ctx, c0, c1);
}

FieldElement element_from_json(const FieldContext& ctx, const nlohmann::json& j) {
  if (j.is_array()) {
    if (j.empty() || j.size() > 2) throw JsonIoError("element arrays have one or two coordinates");
    Rational c0 = rational_from_json(j[0]);
    Rational c1 = j.size() == 2 ? rational_from_json(j[1]) : Rational(0);
    if (c1 != 0 && ctx.degree() == 1) throw JsonIoError("omega coordinate over Q");
    return FieldElement(ctx, c0, c1);
  }
  if (j.is_number_integer()) return FieldElement(ctx, Rational(j.get<std::int64_t>()));
  if (j.is_string()) return parse_element(ctx, j.get<std::string>());
  throw JsonIoError("cannot read a field element from " + j.dump());
}

nlohmann::json element_to_json(const FieldElement& x) { return x.to_string(); }

IntCoords integral_from_json(const FieldContext& ctx, const nlohmann::json& j) {
  FieldElement x = element_from_json(ctx, j);
  if (!x.is_integral()) throw JsonIoError("element is not integral: " + x.to_string());
  return x.to_int();
}

QuadraticForm form_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("gram")) throw JsonIoError("form document needs a \"gram\" entry");
  FieldContext ctx = FieldContext::from_tag(j.value("field", std::string("Q")));
  const auto& g = j.at("gram");
  if (!g.is_array() || g.empty()) throw JsonIoError("gram must be a nonempty array");
  std::size_t n = g.size();
  if (j.contains("rank") && j.at("rank").get<std::size_t>() != n) throw JsonIoError("rank does not match the gram size");
  FMatrix A;
  for (const auto& row : g) {
    if (!row.is_array() || row.size() != n) throw JsonIoError("gram must be square");
    FVector r;
    for (const auto& e : row) r.push_back(element_from_json(ctx, e));
    A.push_back(r);
  }
  return QuadraticForm::from_gram(ctx, A);
}

nlohmann::json form_to_json(const QuadraticForm& q) {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& row : q.gram()) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(element_to_json(e));
    g.push_back(r);
  }
  return {{"field", q.context().tag()}, {"rank", q.rank()}, {"gram", g}};
}

QuaternionOrder order_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw JsonIoError("order document must be an object");
  for (const char* key : {"a", "b", "basis"})
    if (!j.contains(key)) throw JsonIoError(std::string("order document needs \"") + key + "\"");
  FieldContext ctx = FieldContext::from_tag(j.value("field", std::string("Q")));
  QuaternionAlgebra alg(ctx, element_from_json(ctx, j.at("a")), element_from_json(ctx, j.at("b")));
  const auto& b = j.at("basis");
  if (!b.is_array() || b.size() != 4) throw JsonIoError("basis must list four quaternions");
  std::array<Quaternion, 4> basis;
  for (int k = 0; k < 4; ++k) {
    const auto& v = b[k];
    if (!v.is_array() || v.size() != 4) throw JsonIoError("each basis quaternion has four coordinates");
    for (int c = 0; c < 4; ++c) basis[k].x[c] = element_from_json(ctx, v[c]);
  }
  return order_from_basis(alg, basis, j.value("name", std::string("custom")));
}

nlohmann::json order_to_json(const QuaternionOrder& o) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& q : o.basis) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& c : q.x) v.push_back(element_to_json(c));
    basis.push_back(v);
  }
  return {{"name", o.name},
          {"field", o.algebra.context().tag()},
          {"a", element_to_json(o.algebra.a())},
          {"b", element_to_json(o.algebra.b())},
          {"basis", basis}};
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonIoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw JsonIoError(path + ": " + e.what());
  }
}

}  // namespace supnorm
