#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "mapcheck.hpp"

namespace crdeg {

struct ProblemOptions {
  std::optional<int> k_max;
  int levels = 4;
  int trials = 64;
  uint64_t seed = 0;
  int samples = 3;
  std::vector<std::vector<GQ>> points;  // source points (z, w, chi, tau)
  std::optional<int> jet_order;
  std::optional<std::string> mode;      // jets: "nondeg" or "one_deg"
};

// command line values override the file
struct Overrides {
  std::optional<int> order, k_max, levels, trials;
  std::optional<uint64_t> seed;
};

struct ProblemFile {
  int order = 0;           // working truncation
  int declared_order = 0;  // as written in the file
  ManifoldPtr source, target;
  std::optional<FormalMap> map;
  ProblemOptions options;
  std::string digest;      // sha256 of the raw input bytes
};

ProblemFile parse_problem_text(const std::string& text, const Overrides& ov = {});
ProblemFile parse_problem(const std::string& path, const Overrides& ov = {});

std::string sha256_hex(const std::string& bytes);

}  // namespace crdeg
