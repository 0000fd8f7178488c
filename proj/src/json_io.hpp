#pragma once

#include <json.hpp>

#include "series.hpp"

namespace crdeg {

using json = nlohmann::json;

// {"c": "a/b", "ci": "c/d", "e": [...]} per term, graded-lex order
json terms_json(const Series& s);
json series_json(const Series& s);
json gq_json(const GQ& x);  // {"c", "ci"}

// terms literal into `vars`; `what` names the field in error messages
Series series_from_json(const json& terms, const VarsPtr& vars, int order, bool exact, const std::string& what);
GQ gq_from_json(const json& j, const std::string& what);

}  // namespace crdeg
