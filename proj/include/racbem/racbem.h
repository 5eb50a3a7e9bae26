#ifndef RACBEM_RACBEM_H
#define RACBEM_RACBEM_H

#include <stddef.h>
#include <stdint.h>

#if defined(RACBEM_BUILDING)
#define RB_API __attribute__((visibility("default")))
#else
#define RB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the numeric values double as CLI exit codes. */
typedef enum rb_status {
  RB_OK = 0,
  RB_INVALID_ARGUMENT = 2,
  RB_DIMENSION_MISMATCH = 3,
  RB_CAP_EXCEEDED = 4,
  RB_DEGENERATE_POSTSELECTION = 5,
  RB_NON_CONVERGENCE = 6,
  RB_INFEASIBLE = 7,
  RB_IO = 8,
  RB_PARSE = 9,
  RB_SCHEMA = 10,
  RB_INTERNAL = 11
} rb_status;

typedef struct rb_coupling rb_coupling;
typedef struct rb_circuit rb_circuit;
typedef struct rb_noise rb_noise;
typedef struct rb_poly rb_poly;

RB_API const char* rb_version(void);
/* Message of the last failing call on this thread ("" if none). */
RB_API const char* rb_last_error(void);
RB_API const char* rb_status_name(rb_status status);
/* Frees strings returned through char** out-parameters. */
RB_API void rb_string_free(char* s);
/* 0 selects the hardware concurrency. */
RB_API rb_status rb_set_num_threads(unsigned n);

/* Coupling maps: "t5", "ladder15" or JSON {"n_qubits", "edges"}. */
RB_API rb_status rb_coupling_bundled(const char* name, rb_coupling** out);
RB_API rb_status rb_coupling_from_json(const char* json, rb_coupling** out);
RB_API rb_status rb_coupling_to_json(const rb_coupling* c, char** out);
RB_API void rb_coupling_free(rb_coupling* c);

/* Random circuit on the whole coupling map. depth 0 is rejected. */
RB_API rb_status rb_circuit_generate(const rb_coupling* map, double p_cnot, int depth,
                                     uint64_t seed, rb_circuit** out);
/* RACBEM on n_sys + 1 qubits over the bundled device maps; depth 0 = default. */
RB_API rb_status rb_circuit_racbem(int n_sys, double p_cnot, int depth, uint64_t seed,
                                   rb_circuit** out);
RB_API rb_status rb_circuit_from_json(const char* json, rb_circuit** out);
RB_API rb_status rb_circuit_to_json(const rb_circuit* c, char** out);
RB_API rb_status rb_circuit_to_text(const rb_circuit* c, char** out);
RB_API rb_status rb_circuit_info(const rb_circuit* c, int* n_qubits, size_t* depth,
                                 size_t* gate_count);
/* Number of coupling violations (0 = valid). */
RB_API rb_status rb_circuit_validate(const rb_circuit* c, const rb_coupling* map,
                                     size_t* violations);
/* Upper-left block with qubit 0 as the ancilla: 2^(n-1) x 2^(n-1) complex
   entries, row-major, interleaved re/im. `len` is the length of `out` in
   doubles and must equal 2 * 4^(n-1). */
RB_API rb_status rb_circuit_block(const rb_circuit* c, double* out, size_t len);
/* Probability that the first m qubits read 0 starting from |0...0>. */
RB_API rb_status rb_circuit_success_probability(const rb_circuit* c, int m, double* p);
/* Histogram JSON {"shots", "counts"}; noise may be NULL. */
RB_API rb_status rb_circuit_sample(const rb_circuit* c, const rb_noise* noise, double sigma,
                                   uint64_t shots, const int* measured, size_t n_measured,
                                   uint64_t seed, char** counts_json);
RB_API void rb_circuit_free(rb_circuit* c);

RB_API rb_status rb_noise_from_json(const char* json, rb_noise** out);
/* Synthetic model over the device map for n_total qubits. */
RB_API rb_status rb_noise_synth(int n_total, uint64_t seed, rb_noise** out);
RB_API rb_status rb_noise_scale(const rb_noise* m, double sigma, rb_noise** out);
RB_API rb_status rb_noise_to_json(const rb_noise* m, char** out);
RB_API void rb_noise_free(rb_noise* m);

/* Minimax fit. target_json: {"kind": "inverse"|"cos_sqrt"|"sin_sqrt"|
   "lorentzian_sqrt"|"gibbs"|"gibbs_sqrt_x"|"odd_gibbs", "kappa", "t", "eta",
   "E", "beta"}. parity: "even", "odd" or "none". */
RB_API rb_status rb_remez(const char* target_json, int degree, const char* parity, double a,
                          double b, rb_poly** out, double* error);
RB_API rb_status rb_poly_from_json(const char* json, rb_poly** out);
RB_API rb_status rb_poly_to_json(const rb_poly* p, char** out);
RB_API rb_status rb_poly_eval(const rb_poly* p, double x, double* y);
RB_API rb_status rb_poly_degree(const rb_poly* p, int* degree);
RB_API void rb_poly_free(rb_poly* p);
/* {"phi": phase JSON, "varphi": circuit phase JSON, "iterations",
   "node_error_bound"}; both phase objects carry the residual. */
RB_API rb_status rb_phase_factors(const rb_poly* f, char** out);

/* Runs "racbem-bench", "linpack", "timeseries", "spectral", "metts" or
   "sv-stats" with a JSON config. jsonl: one record per line; csv: the same
   records as CSV; artifacts: task-specific JSON (plans, series, traces).
   Any output pointer may be NULL. */
RB_API rb_status rb_task_run(const char* task, const char* config_json, char** jsonl,
                             char** csv, char** artifacts);

#ifdef __cplusplus
}
#endif

#endif
