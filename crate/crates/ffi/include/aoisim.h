#ifndef AOISIM_H
#define AOISIM_H

/* Kept in sync with src/lib.rs by hand; cbindgen.toml reproduces this
 * layout where the tool is available. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AoisimScheduler {
  AOISIM_SCHEDULER_ALOHA_FORWARD = 0,
  AOISIM_SCHEDULER_ORACLE = 1,
  AOISIM_SCHEDULER_MAM = 2,
  AOISIM_SCHEDULER_IMAS = 3,
  AOISIM_SCHEDULER_B_IMAS = 4,
  AOISIM_SCHEDULER_ABDR = 5,
  AOISIM_SCHEDULER_B_ABDR = 6,
} AoisimScheduler;

typedef enum AoisimStatus {
  AOISIM_STATUS_OK = 0,
  AOISIM_STATUS_NULL_POINTER = 1,
  AOISIM_STATUS_BAD_ARGUMENT = 2,
  AOISIM_STATUS_NUMERIC = 3,
  AOISIM_STATUS_PANIC = 4,
} AoisimStatus;

/**
 * Opaque simulation handle.
 */
typedef struct AoisimSim AoisimSim;

/**
 * Closed-form references for one parameter point.
 */
typedef struct AoisimBound {
  /**
   * Capture probability for a tagged device's transmission.
   */
  double success_prob;
  /**
   * Per-device end-to-end delivery rate.
   */
  double delivery_rate;
  double aaoi;
  double paoi;
} AoisimBound;

/**
 * Per-slot symbol budget; mirrors `SymbolBudget`.
 */
typedef struct AoisimBudget {
  uint64_t t_total;
  uint64_t t_pilot;
  uint64_t t_id;
  uint64_t t_relay_id;
  uint64_t t_rts;
  uint64_t buffer_size;
} AoisimBudget;

/**
 * Scalar network description; per-device erasure vectors are not
 * exposed over the ABI. `rts_minislots == 0` selects the continuous
 * contention model.
 */
typedef struct AoisimConfig {
  uint32_t n_eds;
  uint32_t n_channels;
  uint32_t n_relays;
  uint32_t buffer_size;
  uint32_t rts_minislots;
  double activation_prob;
  double erasure_p1;
  double erasure_p2;
  double rts_max_delay;
  uint64_t horizon_slots;
  uint64_t warmup_slots;
  uint64_t seed;
} AoisimConfig;

/**
 * Aggregate statistics over the measured window so far.
 */
typedef struct AoisimMetrics {
  uint64_t slots_recorded;
  uint64_t ap_collisions;
  uint64_t erased_transmissions;
  uint64_t overhead_symbols;
  double aaoi;
  double aaoi_se;
  double paoi;
  double paoi_se;
  double delivery_rate;
} AoisimMetrics;

#ifdef __cplusplus
extern "C" {
#endif  /* __cplusplus */

/**
 * Static name for a status code, e.g. for log messages. Never null.
 */
const char *aoisim_status_name(enum AoisimStatus status);

/**
 * Fills `out` with the closed-form bound at the given parameters.
 */
enum AoisimStatus aoisim_bound(uint32_t n_eds,
                               double activation_prob,
                               uint32_t n_channels,
                               uint32_t n_relays,
                               double erasure_p1,
                               struct AoisimBound *out);

/**
 * Finds the activation probability minimizing the bound; writes it to
 * `out`.
 */
enum AoisimStatus aoisim_optimize_activation(uint32_t n_eds,
                                             uint32_t n_channels,
                                             uint32_t n_relays,
                                             double erasure_p1,
                                             double *out);

/**
 * Stationary tail of the time-average network AoI: Pr{AoI > delta}.
 */
enum AoisimStatus aoisim_network_aoi_ccdf(double delta,
                                          uint32_t n_eds,
                                          double delivery_rate,
                                          double *out);

/**
 * Writes the default symbol budget into `out`.
 */
enum AoisimStatus aoisim_budget_default(struct AoisimBudget *out);

/**
 * Per-slot signaling overhead of a scheme, in symbols.
 */
enum AoisimStatus aoisim_overhead_symbols(enum AoisimScheduler scheduler,
                                          const struct AoisimBudget *budget,
                                          uint32_t n_relays,
                                          uint64_t *out);

/**
 * Worst-case RTS contention budget in symbols, for the memoryless
 * (`buffered == 0`) or buffered variant.
 */
enum AoisimStatus aoisim_max_rts_budget(const struct AoisimBudget *budget,
                                        uint32_t n_relays,
                                        uint32_t buffered,
                                        uint64_t *out);

/**
 * Writes the default network into `out`.
 */
enum AoisimStatus aoisim_config_default(struct AoisimConfig *out);

/**
 * Creates a simulation; on success `*out` owns the handle.
 */
enum AoisimStatus aoisim_sim_new(const struct AoisimConfig *config,
                                 enum AoisimScheduler scheduler,
                                 struct AoisimSim **out);

/**
 * Advances the simulation by `slots` slots, capped at the configured
 * horizon.
 */
enum AoisimStatus aoisim_sim_step(struct AoisimSim *sim, uint64_t slots);

/**
 * Runs the simulation to its horizon.
 */
enum AoisimStatus aoisim_sim_run(struct AoisimSim *sim);

/**
 * Snapshots current metrics. Fails with `AOISIM_STATUS_BAD_ARGUMENT`
 * while no measured slot has completed (still warming up).
 */
enum AoisimStatus aoisim_sim_metrics(const struct AoisimSim *sim,
                                     struct AoisimMetrics *out);

/**
 * Current slot index of a simulation.
 */
enum AoisimStatus aoisim_sim_slot(const struct AoisimSim *sim, uint64_t *out);

/**
 * Releases a handle. Null is a no-op.
 */
void aoisim_sim_free(struct AoisimSim *sim);

#ifdef __cplusplus
}  /* extern "C" */
#endif  /* __cplusplus */

#endif  /* AOISIM_H */
