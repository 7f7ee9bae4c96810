#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "omc/errors.hpp"
#include "omc/fitness.hpp"
#include "omc/geometry.hpp"

namespace omc {

// Genome layout: defect_scale, then the three taper exponents (a, hx, hy).
inline constexpr int kGenomeSize = 4;
using Genome = std::array<double, kGenomeSize>;

struct GeneBounds {
  double lo = 0.0;
  double hi = 1.0;
};

// Search box for the taper/defect profile.  The mirror cell and cell counts
// stay fixed during the run.
struct DesignBounds {
  GeneBounds defect_scale{0.70, 0.95};
  GeneBounds exp_a{0.3, 3.0};
  GeneBounds exp_hx{0.3, 3.0};
  GeneBounds exp_hy{0.3, 3.0};

  void validate() const;
  std::array<GeneBounds, kGenomeSize> as_array() const {
    return {defect_scale, exp_a, exp_hx, exp_hy};
  }
};

struct GaConfig {
  int population_size = 50;
  int generations = 100;
  double crossover_fraction = 0.9;
  double mutation_rate = 0.1;
  double mutation_scale = 0.05;  // relative to each gene's bound width
  int elitism_count = 2;
  std::uint64_t rng_seed = 1;
  int parallel_evaluations = 1;

  void validate() const;
};

// Outcome of scoring one genome.  Failed solver calls carry fitness 0 and a
// reason in note instead of aborting the search.
struct Evaluation {
  double fitness = 0.0;
  double omega_o_hz = 0.0;
  double q_o = 0.0;
  double omega_m_hz = 0.0;
  double g0_hz = 0.0;
  std::string note;
};

struct EvaluationRecord {
  int generation = 0;
  int individual = 0;
  Genome genes{};
  Evaluation result;
};

struct GenerationSummary {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Genome best_genes{};
};

struct OptimizationTrace {
  std::vector<EvaluationRecord> evaluations;
  std::vector<GenerationSummary> generations;

  // line-delimited JSON, one line per evaluation; identical runs serialize
  // byte-identically
  std::string to_json_lines() const;
};

// Raised when fitness stays at zero long enough that the bounded region has
// no usable designs; carries everything evaluated up to that point.
class GaInfeasibleError : public InfeasibleError {
public:
  GaInfeasibleError(const std::string& what, OptimizationTrace t)
      : InfeasibleError(what), trace(std::move(t)) {}
  OptimizationTrace trace;
};

using GaObjective = std::function<Evaluation(const Genome&)>;

struct GaResult {
  Genome best_genes{};
  Evaluation best;
  OptimizationTrace trace;
};

// Generational GA with tournament selection (size 3), uniform crossover,
// per-gene Gaussian mutation clamped to bounds, and elitism.  All random
// draws happen on the calling thread in a fixed order, so equal seeds give
// bit-identical traces; the objective may be evaluated concurrently (up to
// parallel_evaluations workers) and must be thread-safe.
GaResult ga_optimize_objective(const GaConfig& cfg, const DesignBounds& bounds,
                               const GaObjective& objective);

struct DesignGaResult {
  DesignVector best;
  Evaluation best_evaluation;
  OptimizationTrace trace;
};

// Maximizes fitness() over the taper/defect genome with the surrogate solver
// as the objective.  Solver failures score zero so the search can cross
// infeasible regions.
DesignGaResult ga_optimize(const GaConfig& cfg, const DesignVector& base,
                           const DesignBounds& bounds, const FitnessWindows& win,
                           const MaterialParams& mat);

}  // namespace omc
