#include "problem.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>

namespace crdeg {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr))
    throw Error(Errc::internal, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += hex[md[i] >> 4], out += hex[md[i] & 15];
  return out;
}

namespace {

// exact polynomial literals are read at this order, then cut to the working one
constexpr int kPolyOrder = 1 << 20;

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw Error(Errc::invalid_input, what + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw Error(Errc::invalid_input, what + ": unknown field \"" + k + "\"");
}

int int_field(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw Error(Errc::invalid_input, what + ": missing field \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw Error(Errc::invalid_input, what + "." + key + ": expected an integer");
  return v.get<int>();
}

std::optional<int> opt_int(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) return std::nullopt;
  return int_field(j, key, what);
}

bool bool_field(const json& j, const char* key, bool dflt, const std::string& what) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) throw Error(Errc::invalid_input, what + "." + key + ": expected true or false");
  return j.at(key).get<bool>();
}

void check_block_order(const json& j, int declared, const std::string& what) {
  if (auto o = opt_int(j, "order", what); o && *o != declared)
    throw Error(Errc::order_mismatch, what + ".order = " + std::to_string(*o) + " disagrees with the problem order " +
                                          std::to_string(declared));
}

// literal read at its declared precision, then cut to the working order
Series read_series(const json& terms, const VarsPtr& vars, bool poly, int declared, int t, const std::string& what) {
  if (poly) return series_from_json(terms, vars, kPolyOrder, true, what).at(t);
  if (t > declared)
    throw Error(Errc::order_mismatch, what + ": truncated data of order " + std::to_string(declared) +
                                          " cannot be used at order " + std::to_string(t));
  return series_from_json(terms, vars, declared, false, what).truncated(t);
}

ManifoldPtr read_manifold(const json& j, int declared, int t, const std::string& what) {
  only_keys(j, {"n", "d", "Q", "polynomial", "order"}, what);
  const int n = int_field(j, "n", what), d = int_field(j, "d", what);
  if (n < 0 || d < 1) throw Error(Errc::invalid_input, what + ": need n >= 0 and d >= 1");
  check_block_order(j, declared, what);
  const bool poly = bool_field(j, "polynomial", false, what);
  if (!j.contains("Q") || !j.at("Q").is_array()) throw Error(Errc::invalid_input, what + ".Q: expected a list of series");
  const json& Q = j.at("Q");
  if (static_cast<int>(Q.size()) != d)
    throw Error(Errc::invalid_input, what + ".Q: expected " + std::to_string(d) + " components");
  // literals are over (z, chi, tau); the base context has w between z and chi
  VarsPtr lit = make_vars({{"z", n}, {"chi", n}, {"tau", d}});
  VarsPtr base = base_vars(n, d);
  std::vector<int> where(2 * n + d);
  for (int i = 0; i < n; ++i) where[i] = i, where[n + i] = n + d + i;
  for (int k = 0; k < d; ++k) where[2 * n + k] = 2 * n + d + k;
  std::vector<Series> q;
  for (int k = 0; k < d; ++k) {
    const std::string w = what + ".Q[" + std::to_string(k) + "]";
    Series s = read_series(Q[k], lit, poly, declared, t, w);
    q.push_back(remap(s, base, where));
  }
  return std::make_shared<const Manifold>(Manifold::validate(n, d, std::move(q)));
}

FormalMap read_map(const json& j, const ManifoldPtr& S, const ManifoldPtr& T, int declared, int t) {
  const std::string what = "map";
  only_keys(j, {"components", "order", "polynomial"}, what);
  check_block_order(j, declared, what);
  const bool poly = bool_field(j, "polynomial", false, what);
  if (!j.contains("components") || !j.at("components").is_array())
    throw Error(Errc::invalid_input, "map.components: expected a list of series");
  const json& C = j.at("components");
  if (static_cast<int>(C.size()) != T->N())
    throw Error(Errc::invalid_input, "map.components: expected " + std::to_string(T->N()) + " components (N' of the target)");
  VarsPtr lit = make_vars({{"z", S->n()}, {"w", S->d()}});
  std::vector<int> where(S->N());
  for (int v = 0; v < S->N(); ++v) where[v] = v;
  std::vector<Series> H;
  for (size_t c = 0; c < C.size(); ++c) {
    Series s = read_series(C[c], lit, poly, declared, t, "map.components[" + std::to_string(c) + "]");
    H.push_back(remap(s, S->vars(), where));
  }
  return FormalMap(S, T, std::move(H));
}

ProblemOptions read_options(const json& j, int N) {
  ProblemOptions o;
  const std::string what = "options";
  only_keys(j, {"k_max", "levels", "trials", "seed", "samples", "points", "jet_order", "mode"}, what);
  o.k_max = opt_int(j, "k_max", what);
  if (auto v = opt_int(j, "levels", what)) o.levels = *v;
  if (auto v = opt_int(j, "trials", what)) o.trials = *v;
  if (auto v = opt_int(j, "samples", what)) o.samples = *v;
  o.jet_order = opt_int(j, "jet_order", what);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw Error(Errc::invalid_input, "options.seed: expected a nonnegative integer");
    o.seed = j.at("seed").get<uint64_t>();
  }
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) throw Error(Errc::invalid_input, "options.mode: expected a string");
    o.mode = j.at("mode").get<std::string>();
    if (*o.mode != "nondeg" && *o.mode != "one_deg")
      throw Error(Errc::invalid_input, "options.mode: expected \"nondeg\" or \"one_deg\"");
  }
  if (j.contains("points")) {
    const json& P = j.at("points");
    if (!P.is_array()) throw Error(Errc::invalid_input, "options.points: expected a list of points");
    for (size_t i = 0; i < P.size(); ++i) {
      const std::string w = "options.points[" + std::to_string(i) + "]";
      if (!P[i].is_array() || static_cast<int>(P[i].size()) != 2 * N)
        throw Error(Errc::invalid_input, w + ": expected " + std::to_string(2 * N) + " coordinates (z, w, chi, tau)");
      std::vector<GQ> p;
      for (size_t k = 0; k < P[i].size(); ++k) p.push_back(gq_from_json(P[i][k], w + "[" + std::to_string(k) + "]"));
      o.points.push_back(std::move(p));
    }
  }
  return o;
}

std::string parse_error_text(const std::string& text, const json::parse_error& e) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  std::string msg = e.what();
  if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
  return "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text, const Overrides& ov) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::invalid_input, parse_error_text(text, e));
  }
  only_keys(j, {"order", "source", "target", "map", "options"}, "problem");
  ProblemFile P;
  P.digest = sha256_hex(text);
  P.declared_order = int_field(j, "order", "problem");
  if (P.declared_order < 1) throw Error(Errc::invalid_input, "problem.order: must be >= 1");
  P.order = ov.order.value_or(P.declared_order);
  if (P.order < 1) throw Error(Errc::invalid_input, "--order must be >= 1");
  if (!j.contains("source")) throw Error(Errc::invalid_input, "problem: missing field \"source\"");
  P.source = read_manifold(j.at("source"), P.declared_order, P.order, "source");
  P.target = j.contains("target") ? read_manifold(j.at("target"), P.declared_order, P.order, "target") : P.source;
  if (j.contains("map")) P.map = read_map(j.at("map"), P.source, P.target, P.declared_order, P.order);
  if (j.contains("options")) P.options = read_options(j.at("options"), P.source->N());
  if (ov.k_max) P.options.k_max = ov.k_max;
  if (ov.levels) P.options.levels = *ov.levels;
  if (ov.trials) P.options.trials = *ov.trials;
  if (ov.seed) P.options.seed = *ov.seed;
  return P;
}

ProblemFile parse_problem(const std::string& path, const Overrides& ov) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_input, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str(), ov);
}

}  // namespace crdeg
