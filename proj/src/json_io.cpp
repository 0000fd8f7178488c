#include "json_io.hpp"

namespace crdeg {

json gq_json(const GQ& x) { return {{"c", x.re().get_str()}, {"ci", x.im().get_str()}}; }

json terms_json(const Series& s) {
  json out = json::array();
  for (const auto& [m, c] : s.terms()) {
    json e = json::array();
    for (int v = 0; v < m.nvars(); ++v) e.push_back(m[v]);
    out.push_back({{"c", c.re().get_str()}, {"ci", c.im().get_str()}, {"e", e}});
  }
  return out;
}

json series_json(const Series& s) {
  json vars = json::array();
  for (const auto& b : s.vars()->blocks()) vars.push_back({b.name, b.arity});
  return {{"vars", vars}, {"order", s.order()}, {"exact", s.exact()}, {"terms", terms_json(s)}, {"text", s.str()}};
}

namespace {

std::string str_field(const json& t, const char* key, const std::string& what) {
  if (!t.contains(key)) return "0";
  const json& v = t.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(Errc::invalid_input, what + ": field \"" + key + "\" must be a string \"a/b\" or an integer");
}

}  // namespace

GQ gq_from_json(const json& j, const std::string& what) {
  if (j.is_number_integer()) return GQ(mpq_class(j.get<long>()));
  if (j.is_string()) return GQ::parse(j.get<std::string>(), "0");
  if (!j.is_object()) throw Error(Errc::invalid_input, what + ": expected {\"c\":..., \"ci\":...}");
  try {
    return GQ::parse(str_field(j, "c", what), str_field(j, "ci", what));
  } catch (const std::invalid_argument&) {
    throw Error(Errc::invalid_input, what + ": malformed rational");
  }
}

Series series_from_json(const json& terms, const VarsPtr& vars, int order, bool exact, const std::string& what) {
  if (!terms.is_array()) throw Error(Errc::invalid_input, what + ": series literal must be a list of terms");
  Series s(vars, order, exact);
  for (size_t i = 0; i < terms.size(); ++i) {
    const json& t = terms[i];
    const std::string w = what + "[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("e")) throw Error(Errc::invalid_input, w + ": term needs an \"e\" exponent list");
    const json& e = t.at("e");
    if (!e.is_array() || static_cast<int>(e.size()) != vars->size())
      throw Error(Errc::invalid_input, w + ": exponent list must have " + std::to_string(vars->size()) + " entries");
    Mono m(vars->size());
    for (int v = 0; v < vars->size(); ++v) {
      if (!e[v].is_number_integer() || e[v].get<int>() < 0 || e[v].get<int>() > 255)
        throw Error(Errc::invalid_input, w + ": exponents must be integers in 0..255");
      if (e[v].get<int>()) m.set(v, e[v].get<int>());
    }
    GQ c = gq_from_json(t, w);
    if (m.deg() > order) {
      if (exact) throw Error(Errc::invalid_input, w + ": term of degree " + std::to_string(m.deg()) + " exceeds order " + std::to_string(order));
      continue;
    }
    s.add_term(m, c);
  }
  return s;
}

}  // namespace crdeg
