#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mapcheck.hpp"

namespace crdeg {

struct RowId {
  Multi alpha;
  int l = 0;
};

// L^alpha rho'_{l, Z'}(H, Hbar) for |alpha| <= k_max, alphas graded-lex
struct DegeneracyRows {
  int k_max = 0;
  int Nprime = 0, dprime = 0;
  std::vector<Multi> alphas;
  std::vector<std::vector<std::vector<Series>>> rows;  // [alpha][l][component]
  std::vector<std::vector<Vec>> at0;

  const std::vector<Series>& row(const RowId& r) const;
  const Vec& row0(const RowId& r) const;
  int alpha_index(const Multi& a) const;
};

DegeneracyRows degeneracy_rows(const FormalMap& H, int k_max, const std::vector<Series>* gens = nullptr);
// largest k_max the orders allow
int max_kmax(const FormalMap& H);
int default_kmax(const FormalMap& H);

struct MinorWitness {
  RowId row;
  int column = 0;
  Series reduced;
};

struct Constancy {
  enum Verdict { constant, non_constant, inconclusive } verdict = inconclusive;
  bool symbolic_checked = false;
  bool symbolic_constant = false;
  int minors_checked = 0;
  std::optional<MinorWitness> witness;
  std::vector<int> pivots;  // z' columns of the leading minor
  // sampling
  bool sampled = false;
  std::vector<std::vector<GQ>> points;
  std::vector<int> s_at_points;
  std::optional<size_t> point_witness;
  std::string note;
};

struct DegeneracyReport {
  int Nprime = 0, dprime = 0, k_max = 0, order = 0;
  std::vector<int> dims;
  int k0 = 0, s = 0;
  std::vector<RowId> basis;  // N' - s rows, alpha = 0 rows first
  bool certified = false;
  std::string certificate;  // reason or "valid up to k_max"
  Constancy constancy;
};

DegeneracyReport degeneracy_at_origin(const DegeneracyRows& rows);

// symbolic bordered-minor probe on the z' parts
Constancy constant_rank_probe(const FormalMap& H, const DegeneracyRows& rows, const DegeneracyReport& rep);

struct SamplingOptions {
  int count = 3;
  uint64_t seed = 0;
  std::vector<std::vector<GQ>> points;  // user supplied (z0, w0, chi0, tau0); w0 recomputed if empty
};

// draws (or takes) points on the complexified source and recomputes s there
void sample_constancy(const FormalMap& H, const DegeneracyReport& rep, const SamplingOptions& opt, Constancy& out);

// map transported to the re-centered pair at source point p
FormalMap transport_map(const FormalMap& H, const std::vector<GQ>& p);

struct DeltaSystem {
  std::vector<int> pivots;      // z' columns
  std::vector<int> others;      // remaining z' columns
  Series Delta;                 // restricted to (z, w, 0, w)
  GQ Delta0;
  std::vector<std::vector<Series>> Delta_mk;  // [m][k index into others]
  std::vector<std::vector<GQ>> Delta_mk0;
  bool relations_hold = true;
  int relations_checked = 0;
  int order = 0;
};
DeltaSystem delta_system(const FormalMap& H, const DegeneracyRows& rows, const DegeneracyReport& rep);

struct HolVF {
  int jet_order = 0;
  int unknowns = 0, equations = 0;
  int dim = 0;                 // solution space dimension at this jet order
  int dim0 = 0;                // dim {X(0)}
  std::vector<Vec> values_at_0;  // basis of {X(0)}
};
HolVF hol_vector_fields(const FormalMap& H, int jet_order, const std::vector<Series>* gens = nullptr);

struct Diagnostic {
  std::string name;
  std::string status;  // PASS FAIL SKIPPED WARN
  std::string detail;
};
std::vector<Diagnostic> bounds_diagnostics(const FormalMap& H, const DegeneracyReport& rep);

// identity map M -> M
FormalMap identity_map(const ManifoldPtr& M);

struct DegeneracyAnalysis {
  DegeneracyReport report;
  std::optional<HolVF> holvf;
  std::vector<Diagnostic> bounds;
};
struct AnalysisOptions {
  int k_max = -1;
  bool probe = true;
  bool holvf = true;
  int jet_order = -1;
  bool sample = false;
  SamplingOptions sampling;
};
DegeneracyAnalysis analyze_degeneracy(const FormalMap& H, const AnalysisOptions& opt);

}  // namespace crdeg
