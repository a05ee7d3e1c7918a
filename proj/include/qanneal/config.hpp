#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "network.hpp"

namespace qanneal
{

/*! \brief Knobs shared by the three engines.
 *
 * The heat bath is modelled only through its effect (random perturbation
 * angles and Metropolis temperature); its physical temperature regime
 * 0 < kT << delta_e is assumed, not simulated.
 */
struct engine_config
{
  std::uint64_t seed = 1;

  /* quantum engines */
  double dt = 0.1;
  double sigma = 1.0;
  std::size_t max_steps = 10000;
  bool bath = true;
  std::size_t max_qubits = 16;
  double equilibrium_tol = 1e-8;
  double energy_tol_rel = 1e-8; ///< scaled by the sum of gate energy gaps
  std::size_t plateau_steps = 50;
  std::optional<assignment> initial; ///< one-way start; defaults to a=0, b=1 on every link

  /* classical engine; max_steps is the proposal budget per restart */
  double temperature = 1.5;
  double cooling = 1.0; ///< geometric factor applied per proposal; 1 keeps T fixed
  std::size_t restarts = 20;
  double assumed_per_restart_success = 0.5;
  double confidence_threshold = 0.95;

  std::size_t trace_stride = 1; ///< record every k-th step
};

enum class verdict
{
  solved,
  unsat_evidence,        ///< two-way: constrained subspace energy floor stays positive
  unsat_with_confidence, ///< classical: no solution after all restarts
  budget_exhausted
};

inline const char* to_string( verdict v )
{
  switch ( v )
  {
  case verdict::solved:
    return "solved";
  case verdict::unsat_evidence:
    return "unsat_evidence";
  case verdict::unsat_with_confidence:
    return "unsat_with_confidence";
  case verdict::budget_exhausted:
    return "budget_exhausted";
  }
  return "unknown";
}

struct anneal_outcome
{
  verdict result = verdict::budget_exhausted;
  std::optional<assignment> solution;
  std::size_t iterations = 0;
  double final_energy = 0.0;
  double energy_floor = 0.0; ///< two-way only
  double confidence = 0.0;   ///< classical only, in [0, 1)
};

} // namespace qanneal
