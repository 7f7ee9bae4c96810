#include "omc/genetic.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

namespace omc {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double gaussian(std::mt19937_64& rng, double sigma) {
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

std::vector<Evaluation> evaluate_population(const std::vector<Genome>& pop,
                                            const GaObjective& objective,
                                            int workers) {
  std::vector<Evaluation> out(pop.size());
  if (workers <= 1 || pop.size() <= 1) {
    for (std::size_t i = 0; i < pop.size(); ++i) out[i] = objective(pop[i]);
    return out;
  }

  std::vector<std::exception_ptr> failures(pop.size());
  std::atomic<std::size_t> next{0};
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), pop.size());
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    threads.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= pop.size()) return;
        try {
          out[i] = objective(pop[i]);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();

  // results and errors always surface in individual order, never completion order
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

int tournament_winner(std::mt19937_64& rng, const std::vector<Evaluation>& evals,
                      int population) {
  std::uniform_int_distribution<int> pick(0, population - 1);
  int winner = pick(rng);
  for (int round = 1; round < 3; ++round) {
    const int challenger = pick(rng);
    if (evals[static_cast<std::size_t>(challenger)].fitness >
        evals[static_cast<std::size_t>(winner)].fitness) {
      winner = challenger;
    } else if (evals[static_cast<std::size_t>(challenger)].fitness ==
                   evals[static_cast<std::size_t>(winner)].fitness &&
               challenger < winner) {
      winner = challenger;
    }
  }
  return winner;
}

}  // namespace

void DesignBounds::validate() const {
  for (const auto& gene : as_array()) {
    if (!(gene.lo < gene.hi)) {
      throw ValidationError("gene bounds must satisfy lo < hi");
    }
  }
  if (!(defect_scale.lo > 0.0) || defect_scale.hi > 1.0) {
    throw ValidationError("defect_scale bounds must lie inside (0, 1]");
  }
  if (!(exp_a.lo > 0.0) || !(exp_hx.lo > 0.0) || !(exp_hy.lo > 0.0)) {
    throw ValidationError("taper exponent bounds must be positive");
  }
}

void GaConfig::validate() const {
  if (population_size < 4) {
    throw ValidationError("population_size must be at least 4");
  }
  if (generations < 1) {
    throw ValidationError("generations must be at least 1");
  }
  if (elitism_count < 0 || elitism_count >= population_size) {
    throw ValidationError("elitism_count must be smaller than the population");
  }
  if (crossover_fraction < 0.0 || crossover_fraction > 1.0 || mutation_rate < 0.0 ||
      mutation_rate > 1.0) {
    throw ValidationError("crossover_fraction and mutation_rate must lie in [0, 1]");
  }
  if (!(mutation_scale > 0.0)) {
    throw ValidationError("mutation_scale must be positive");
  }
  if (parallel_evaluations < 1) {
    throw ValidationError("parallel_evaluations must be at least 1");
  }
}

std::string OptimizationTrace::to_json_lines() const {
  std::string out;
  for (const EvaluationRecord& rec : evaluations) {
    nlohmann::json line{
        {"generation", rec.generation},
        {"individual", rec.individual},
        {"genes", rec.genes},
        {"fitness", rec.result.fitness},
        {"omega_o_hz", rec.result.omega_o_hz},
        {"q_o", rec.result.q_o},
        {"omega_m_hz", rec.result.omega_m_hz},
        {"g0_hz", rec.result.g0_hz},
        {"note", rec.result.note},
    };
    out += line.dump();
    out += '\n';
  }
  return out;
}

GaResult ga_optimize_objective(const GaConfig& cfg, const DesignBounds& bounds,
                               const GaObjective& objective) {
  cfg.validate();
  bounds.validate();
  if (!objective) {
    throw ValidationError("ga_optimize_objective requires an objective");
  }

  const auto box = bounds.as_array();
  const int population = cfg.population_size;
  std::mt19937_64 rng(cfg.rng_seed);

  std::vector<Genome> pop(static_cast<std::size_t>(population));
  for (Genome& genome : pop) {
    for (int k = 0; k < kGenomeSize; ++k) {
      genome[static_cast<std::size_t>(k)] =
          uniform(rng, box[static_cast<std::size_t>(k)].lo,
                  box[static_cast<std::size_t>(k)].hi);
    }
  }

  GaResult result;
  bool have_best = false;
  int zero_streak = 0;

  for (int gen = 0; gen < cfg.generations; ++gen) {
    const std::vector<Evaluation> evals =
        evaluate_population(pop, objective, cfg.parallel_evaluations);

    GenerationSummary summary;
    summary.generation = gen;
    std::size_t gen_best = 0;
    double sum = 0.0;
    bool all_zero = true;
    for (std::size_t i = 0; i < evals.size(); ++i) {
      EvaluationRecord rec;
      rec.generation = gen;
      rec.individual = static_cast<int>(i);
      rec.genes = pop[i];
      rec.result = evals[i];
      result.trace.evaluations.push_back(std::move(rec));

      sum += evals[i].fitness;
      if (evals[i].fitness != 0.0) all_zero = false;
      if (evals[i].fitness > evals[gen_best].fitness) gen_best = i;
    }
    summary.best_fitness = evals[gen_best].fitness;
    summary.mean_fitness = sum / static_cast<double>(evals.size());
    summary.best_genes = pop[gen_best];
    if (cfg.elitism_count >= 1 && !result.trace.generations.empty()) {
      assert(summary.best_fitness >=
             result.trace.generations.back().best_fitness);
    }
    result.trace.generations.push_back(summary);

    if (!have_best || evals[gen_best].fitness > result.best.fitness) {
      result.best_genes = pop[gen_best];
      result.best = evals[gen_best];
      have_best = true;
    }

    zero_streak = all_zero ? zero_streak + 1 : 0;
    if (zero_streak >= 5) {
      throw GaInfeasibleError(
          "every candidate scored zero fitness for 5 consecutive generations; "
          "the bounded search region looks infeasible",
          std::move(result.trace));
    }

    if (gen + 1 == cfg.generations) break;

    // rank for elitism: fitness descending, index ascending on ties
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return evals[a].fitness > evals[b].fitness;
    });

    std::vector<Genome> next;
    next.reserve(pop.size());
    for (int e = 0; e < cfg.elitism_count; ++e) {
      next.push_back(pop[order[static_cast<std::size_t>(e)]]);
    }
    while (next.size() < pop.size()) {
      const int p1 = tournament_winner(rng, evals, population);
      const int p2 = tournament_winner(rng, evals, population);
      Genome child = pop[static_cast<std::size_t>(p1)];
      if (uniform(rng, 0.0, 1.0) < cfg.crossover_fraction) {
        for (int k = 0; k < kGenomeSize; ++k) {
          if (uniform(rng, 0.0, 1.0) < 0.5) {
            child[static_cast<std::size_t>(k)] =
                pop[static_cast<std::size_t>(p2)][static_cast<std::size_t>(k)];
          }
        }
      }
      for (int k = 0; k < kGenomeSize; ++k) {
        if (uniform(rng, 0.0, 1.0) < cfg.mutation_rate) {
          const auto& gene = box[static_cast<std::size_t>(k)];
          double value = child[static_cast<std::size_t>(k)] +
                         gaussian(rng, cfg.mutation_scale * (gene.hi - gene.lo));
          child[static_cast<std::size_t>(k)] = std::clamp(value, gene.lo, gene.hi);
        }
      }
      next.push_back(child);
    }
    pop = std::move(next);
  }

  return result;
}

DesignGaResult ga_optimize(const GaConfig& cfg, const DesignVector& base,
                           const DesignBounds& bounds, const FitnessWindows& win,
                           const MaterialParams& mat) {
  base.validate();
  win.validate();
  mat.validate();

  const GaObjective objective = [&](const Genome& genes) {
    DesignVector candidate = base;
    candidate.defect_scale = genes[0];
    candidate.taper_exponents = {genes[1], genes[2], genes[3]};
    Evaluation ev;
    try {
      const CavitySolution sol = cavity_response(candidate, mat);
      ev.fitness = fitness(sol, win);
      ev.omega_o_hz = sol.omega_o.hz();
      ev.q_o = sol.q_o;
      ev.omega_m_hz = sol.omega_m.hz();
      ev.g0_hz = sol.g0.hz();
    } catch (const Error& e) {
      ev = Evaluation{};
      ev.note = e.what();
    }
    return ev;
  };

  GaResult raw = ga_optimize_objective(cfg, bounds, objective);

  DesignGaResult result;
  result.best = base;
  result.best.defect_scale = raw.best_genes[0];
  result.best.taper_exponents = {raw.best_genes[1], raw.best_genes[2],
                                 raw.best_genes[3]};
  result.best_evaluation = raw.best;
  result.trace = std::move(raw.trace);
  return result;
}

}  // namespace omc
