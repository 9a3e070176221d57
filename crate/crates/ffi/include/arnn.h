#ifndef ARNN_H
#define ARNN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum ArnnStatus {
  ARNN_STATUS_OK = 0,
  ARNN_STATUS_NULL_ARGUMENT = 1,
  ARNN_STATUS_INVALID_UTF8 = 2,
  ARNN_STATUS_INVALID_ARGUMENT = 3,
  ARNN_STATUS_PARSE = 4,
  ARNN_STATUS_CONSTRUCTION = 5,
  ARNN_STATUS_TIMEOUT = 6,
  ARNN_STATUS_HORIZON_EXCEEDED = 7,
  ARNN_STATUS_UNKNOWN_SIGN = 8,
  ARNN_STATUS_LABEL_MISSING = 9,
  ARNN_STATUS_PANIC = 10,
} ArnnStatus;

/**
 * Outcome of a run that produced a verdict.
 */
typedef enum ArnnVerdict {
  ARNN_VERDICT_REJECT = 0,
  ARNN_VERDICT_ACCEPT = 1,
} ArnnVerdict;

/**
 * A compiled or loaded network.
 */
typedef struct ArnnNetwork ArnnNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library and valid until the next call.
 */
const char *arnn_last_error_message(void);

/**
 * Library version, static.
 */
const char *arnn_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void arnn_string_free(char *s);

/**
 * Releases a network handle. Null is ignored.
 *
 * # Safety
 * `net` must come from this library and not have been freed.
 */
void arnn_network_free(struct ArnnNetwork *net);

/**
 * Loads a network file. Oracle tables resolve against the file's directory.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` a writable pointer.
 */
enum ArnnStatus arnn_network_load(const char *path, struct ArnnNetwork **out_net);

/**
 * Parses network text; `base_dir` (nullable) resolves oracle table paths.
 *
 * # Safety
 * String arguments must be nul-terminated; `out_net` writable.
 */
enum ArnnStatus arnn_network_parse(const char *source,
                                   const char *base_dir,
                                   struct ArnnNetwork **out_net);

/**
 * Network text in the file format. Free the result with
 * [`arnn_string_free`].
 *
 * # Safety
 * `net` must be a live handle; `out_text` writable.
 */
enum ArnnStatus arnn_network_to_text(const struct ArnnNetwork *net, char **out_text);

/**
 * Number of neurons, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t arnn_network_neuron_count(const struct ArnnNetwork *net);

/**
 * Runs `word` for at most `budget` ticks with sign decisions limited to
 * `precision` digits. A missing verdict is [`ArnnStatus::Timeout`]; a
 * raised flag line is [`ArnnStatus::HorizonExceeded`].
 *
 * # Safety
 * `net` must be a live handle, `word` nul-terminated, `out_verdict`
 * writable.
 */
enum ArnnStatus arnn_network_run(const struct ArnnNetwork *net,
                                 const char *word,
                                 size_t budget,
                                 uint32_t precision,
                                 enum ArnnVerdict *out_verdict);

/**
 * Hierarchy row of a network under the built-in degree order, as text
 * (`bounded-automata`, `turing` or `oracle <labels>`). `timing_labels` is
 * an array of `n_timing` strings and may be null when `n_timing` is 0.
 *
 * # Safety
 * `net` must be a live handle; `timing_labels` must point to `n_timing`
 * nul-terminated strings; `out_text` writable.
 */
enum ArnnStatus arnn_network_classify(const struct ArnnNetwork *net,
                                      const char *const *timing_labels,
                                      size_t n_timing,
                                      char **out_text);

/**
 * Compiles DFA text into a network.
 *
 * # Safety
 * `source` nul-terminated; `out_net` writable.
 */
enum ArnnStatus arnn_compile_dfa(const char *source, struct ArnnNetwork **out_net);

/**
 * Compiles two-stack machine text into a network.
 *
 * # Safety
 * `source` nul-terminated; `out_net` writable.
 */
enum ArnnStatus arnn_compile_two_stack(const char *source, struct ArnnNetwork **out_net);

/**
 * Builds the oracle-consulting network for the table `bits[0..n_bits]`
 * (nonzero is 1) over `alphabet`. `label` may be null.
 *
 * # Safety
 * `bits` must point to `n_bits` bytes; strings nul-terminated; `out_net`
 * writable.
 */
enum ArnnStatus arnn_build_oracle_net(const uint8_t *bits,
                                      size_t n_bits,
                                      const char *alphabet,
                                      const char *label,
                                      struct ArnnNetwork **out_net);

/**
 * Length-lex index of `s` over `alphabet`; the empty string is 1.
 *
 * # Safety
 * Strings nul-terminated; `out_index` writable.
 */
enum ArnnStatus arnn_index_of_string(const char *alphabet, const char *s, uint64_t *out_index);

/**
 * String at a length-lex index. Free the result with [`arnn_string_free`].
 *
 * # Safety
 * `alphabet` nul-terminated; `out_text` writable.
 */
enum ArnnStatus arnn_string_of_index(const char *alphabet, uint64_t index, char **out_text);

/**
 * First `n` binary digits of a language's characteristic real, as a
 * string of `0` and `1`. `language` is the text of a language file.
 *
 * # Safety
 * `language` nul-terminated; `out_text` writable.
 */
enum ArnnStatus arnn_encode_language(const char *language, uint64_t n, char **out_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARNN_H */
