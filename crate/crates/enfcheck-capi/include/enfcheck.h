/* C interface to the enfcheck interference analyzer.
 *
 * Every fallible call returns an int status code (see ENF_*). On
 * failure, enf_last_error() returns a message valid until the next
 * call into the library from the same thread.
 *
 * Ownership:
 *   - enf_document_parse handles are released with enf_document_free
 *   - strings written to out-parameters are released with
 *     enf_string_free
 *   - the pointer from enf_last_error is borrowed; do not free it
 */

#ifndef ENFCHECK_H
#define ENFCHECK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ENF_OK 0
#define ENF_ERR_NULL_ARGUMENT 1
#define ENF_ERR_UTF8 2
#define ENF_ERR_PARSE 3
#define ENF_ERR_UNKNOWN_NAME 4
#define ENF_ERR_ANALYSIS 5

/* Opaque handle to a parsed model document. */
typedef struct EnfDocument EnfDocument;

/* Parses a NUL-terminated model document into *out. */
int enf_document_parse(const char *text, EnfDocument **out);

/* Releases a handle. NULL is a no-op. */
void enf_document_free(EnfDocument *doc);

/* Verifies the named network against every policy in the document.
 * Writes the JSON report to *json_out. If interference_out is not
 * NULL it receives 1 when interference was found, 0 otherwise.
 * max_states bounds the exploration (for example 1000000). */
int enf_verify(const EnfDocument *doc, const char *network,
               size_t max_states, int *interference_out, char **json_out);

/* Transforms the named edit automaton to its I/O form and writes the
 * Graphviz rendering to *dot_out. Nonzero strict refuses undefined
 * inputs; zero passes them through unchanged. */
int enf_transform_dot(const EnfDocument *doc, const char *name, int strict,
                      char **dot_out);

/* Writes the Graphviz rendering of the named network's reachable
 * global state graph to *dot_out. */
int enf_network_dot(const EnfDocument *doc, const char *network,
                    size_t max_states, char **dot_out);

/* Releases a string produced by this library. NULL is a no-op. */
void enf_string_free(char *s);

/* Message for the most recent failure on the calling thread. */
const char *enf_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* ENFCHECK_H */
