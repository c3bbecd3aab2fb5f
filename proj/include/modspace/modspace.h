#ifndef MODSPACE_MODSPACE_H
#define MODSPACE_MODSPACE_H

/*
 * C interface to the modspace library.
 *
 * All objects are opaque handles created and destroyed here; every function
 * returns an ms_status, with MS_OK == 0 on success.  On failure the handle
 * outputs are untouched and ms_last_error() describes the problem for the
 * calling thread.  Strings returned through char** are heap-allocated and
 * must be released with ms_string_free().
 *
 * Field files: magic "MSFLD1", u32 LE dim, u32 LE N, f64 LE step, then
 * N^dim complex values as interleaved f64 (re, im), row-major, axis 0
 * slowest.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ms_field ms_field;

typedef enum ms_status {
    MS_OK = 0,
    MS_ERR_IO = 2,
    MS_ERR_GRID_MISMATCH = 3,
    MS_ERR_BAD_ARG = 4,
    MS_ERR_NOT_A_FRAME = 5,
    MS_ERR_NUMERIC = 6,
    MS_ERR_INTERNAL = 7
} ms_status;

const char* ms_last_error(void);
void ms_string_free(char* s);

/* fields ------------------------------------------------------------- */

/* values: interleaved (re, im) doubles of length 2 N^dim, or NULL for the
 * zero field. */
ms_status ms_field_create(int dim, int n, double step, const double* values, ms_field** out);
ms_status ms_field_read(const char* path, ms_field** out);
ms_status ms_field_write(const ms_field* f, const char* path);
void ms_field_free(ms_field* f);

int ms_field_dim(const ms_field* f);
int ms_field_n(const ms_field* f);
double ms_field_step(const ms_field* f);
size_t ms_field_count(const ms_field* f);
/* copies 2 * count doubles into out */
ms_status ms_field_values(const ms_field* f, double* out, size_t capacity);

/* self-dual grid helpers */
ms_status ms_gaussian_window(int dim, int n, double step, ms_field** out);

/* operations ---------------------------------------------------------- */

/* full-lattice STFT with the canonical Gaussian window of the field's own
 * grid when window is NULL; output lives on 2*dim axes. */
ms_status ms_stft(const ms_field* f, const ms_field* window, ms_field** out);

/* norm manifest: see manifest documentation; prints via *out */
ms_status ms_norm(const ms_field* f, const char* manifest_json, double* out);

/* trace map at a grid point z (length d2) */
ms_status ms_trace(const ms_field* f, int d1, int d2, int d3, const double* z, ms_field** out);

/* STFT trace identity residual, Gaussian windows */
ms_status ms_trace_residual(const ms_field* f, int d1, int d2, int d3, const double* z, double* out);

/* amplitude (3d axes) -> Kohn-Nirenberg symbol (2d axes) */
ms_status ms_psdo_reduce(const ms_field* amplitude, ms_field** symbol);

/* apply Op_t(symbol) (quant t in {0, 0.5, 1}) or Op(amplitude) to f; the
 * kind is inferred from the ranks (symbol: 2 * dim(f), amplitude: 3 * dim(f)) */
ms_status ms_psdo_apply(const ms_field* symbol_or_amplitude, double quant_t, const ms_field* f,
                        ms_field** out);

/* Schatten I_p quasi-norm of Op_0(symbol) (is_amplitude == 0) or
 * Op(amplitude) (is_amplitude != 0) */
ms_status ms_schatten(const ms_field* symbol_or_amplitude, int is_amplitude, double p, double* out);

/* verification --------------------------------------------------------- */

/* suite: young | moyal | trace | reduce | transfer | schatten | all;
 * manifest_json may be NULL; threads <= 0 reads MODSPACE_THREADS.
 * *report receives the JSON document; *all_passed is 1 iff every criterion
 * passed. */
ms_status ms_verify(const char* suite, const char* manifest_json, int deterministic, int threads,
                    char** report, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
