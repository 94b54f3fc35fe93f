#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "kdyn/equilibrium.hpp"
#include "kdyn/models.hpp"

namespace kdyn::cli {

using json = nlohmann::ordered_json;

inline const std::vector<std::string> kCommands = {"degrees", "jordan", "relative", "cesaro",
                                                   "green",   "iterate", "mixing",  "chain"};

struct CupEntry {
  int p = 0, q = 0;
  ExactMatrix table;  // rows: basis of H^{p+q}; columns: pairs (i, j) row-major
};

struct ModelConfig {
  std::string type;  // torus | mazur | raw
  int k = 0;
  ExactMatrix A;                                // torus
  std::vector<int> word;                        // mazur
  std::vector<ExactMatrix> blocks;              // raw
  std::vector<ExactVector> kahler;              // raw
  std::vector<ExactMatrix> pushforward;         // raw, optional
  std::vector<CupEntry> cup;                    // raw, optional
};

struct Tolerances {
  double eigen = 1e-9;               // eigenclass residual for relative degrees
  double submultiplicativity = 1e-9;
  double angle = 1e-3;               // subsequence sampling window in green
  double divergence = 1e-3;          // spread that counts as a divergent plain sequence
};

struct JordanSection {
  std::optional<ExactMatrix> matrix;  // defaults to blocks[p] of the model
  int p = 1;
};

struct RelativeSection {
  int s = 0;
  std::optional<ExactVector> T;  // defaults to the Cesaro class of degree s
  std::optional<GaussRational> lambda_T;
};

struct CesaroSection {
  int s = 1;
  std::optional<ExactVector> S;  // defaults to the Kaehler class of degree s
};

struct GreenSection {
  long sample_from = 200;
  long sample_to = 2000000;
  int targets = 8;
  double nu = 1;
};

struct IterateSection {
  std::vector<std::vector<long>> G;
  ExactMatrix Lambda;
  std::vector<equilibrium::TrigPolynomial> u;  // one per component of E
  double nu = 1;
  int power = 1;  // 0 selects the smallest admissible power
  long resolution = 0;  // 0: 2^14 in dimension 1, 2^7 in dimension 2, 2^4 otherwise
  std::vector<int> levels;
};

struct MixingSection {
  std::string mode = "characters";  // characters | trig
  equilibrium::Frequency m, m_prime;
  std::optional<equilibrium::TrigPolynomial> phi, psi;
  long n_lo = 1, n_hi = 100;
  bool grid = true;
  bool ergodic = false;
};

struct RunConfig {
  std::string command;
  long precision_bits = 128;
  std::optional<ModelConfig> model;
  long n_max = 200, N_max = 200;
  long grid_resolution = 0;
  Tolerances tolerances;
  std::string output_path;
  std::string format = "json";
  std::optional<JordanSection> jordan;
  std::optional<RelativeSection> relative;
  std::optional<CesaroSection> cesaro;
  std::optional<GreenSection> green;
  std::optional<IterateSection> iterate;
  std::optional<MixingSection> mixing;
};

/// Throws Error(ParseError) with line and column for malformed text and
/// Error(ValidationError) naming the violated rule otherwise. Exact fields take
/// strings ("3/2", "1.5", "1+2i") or integers.
RunConfig parse_config(const std::string& text);

/// Fully resolved config: every default written out. Re-parses to an equal config.
json config_to_json(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

/// Builds the graded action described by the model section.
models::GradedCohomologyAction build_action(const ModelConfig& model);

}  // namespace kdyn::cli
