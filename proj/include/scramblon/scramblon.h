#ifndef SCRAMBLON_SCRAMBLON_H
#define SCRAMBLON_SCRAMBLON_H

/* C interface to libscramblon: teleportation correlators and two-qubit
 * information measures of the large-q SYK scramblon theory.
 *
 * Every fallible call returns scr_status; on failure scr_last_error() gives a
 * message for the calling thread. Strings handed out by the library are
 * released with scr_string_free. */

#include <stddef.h>

#if defined(_WIN32)
#  ifdef SCR_BUILDING_LIBRARY
#    define SCR_API __declspec(dllexport)
#  else
#    define SCR_API __declspec(dllimport)
#  endif
#else
#  define SCR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scr_status {
  SCR_OK = 0,
  SCR_ERR_ARGUMENT = 1,
  SCR_ERR_DOMAIN = 2,
  SCR_ERR_CONFIG = 3,
  SCR_ERR_IO = 4,
  SCR_ERR_NO_CONVERGENCE = 5,
  SCR_ERR_NONPHYSICAL = 6,
  SCR_ERR_INFINITE_SIZE = 7,
  SCR_ERR_STATE = 8,
  SCR_ERR_INTERNAL = 9
} scr_status;

/* Row status of a grid point. */
typedef enum scr_row_status {
  SCR_ROW_OK = 0,
  SCR_ROW_CLAMPED = 1,
  SCR_ROW_NONPHYSICAL = 2,
  SCR_ROW_NO_CONVERGENCE = 3,
  SCR_ROW_DOMAIN = 4
} scr_row_status;

typedef struct scr_model scr_model;
typedef struct scr_sweep scr_sweep;

typedef struct scr_point_result {
  double re[4];  /* I1..I4 */
  double im[4];
  double err[4];
  double rho2;
  double rho4;
  double mutual_info; /* nats */
  double negativity;
  int status;         /* scr_row_status */
} scr_point_result;

SCR_API const char* scr_version(void);
SCR_API const char* scr_last_error(void);
SCR_API const char* scr_status_string(scr_status status);
SCR_API void scr_string_free(char* s);

/* n <= 0 or n = INFINITY selects the N = inf probe limit. */
SCR_API scr_status scr_model_create(int q, double v, double beta, double n, scr_model** out);
SCR_API void scr_model_destroy(scr_model* model);

SCR_API scr_status scr_point_evaluate(const scr_model* model, double t_left, double t_right,
                                      double mu, int encode_len, scr_point_result* out);
/* JSON document with every intermediate quantity of the point. */
SCR_API scr_status scr_point_report_json(const scr_model* model, double t_left,
                                         double t_right, double mu, int encode_len,
                                         char** out_json);

SCR_API scr_status scr_sweep_load(const char* path, scr_sweep** out);
SCR_API scr_status scr_sweep_from_json(const char* text, scr_sweep** out);
/* name: fig4, fig5, fig6 or fig7 */
SCR_API scr_status scr_sweep_preset(const char* name, scr_sweep** out);
SCR_API scr_status scr_sweep_config_json(const scr_sweep* sweep, char** out_json);
/* threads = 0 means one worker per hardware thread. */
SCR_API scr_status scr_sweep_set_threads(scr_sweep* sweep, int threads);
/* path NULL keeps the current path, "" selects standard output; format NULL
 * keeps the current format, otherwise "csv" or "json". */
SCR_API scr_status scr_sweep_set_output(scr_sweep* sweep, const char* path, const char* format);
SCR_API scr_status scr_sweep_run(scr_sweep* sweep);
SCR_API scr_status scr_sweep_counts(const scr_sweep* sweep, size_t* rows, size_t* failed);
SCR_API scr_status scr_sweep_row(const scr_sweep* sweep, size_t index, double* t_left,
                                 double* t_right, double* mu, double* n, int* encode_len,
                                 scr_point_result* out);
/* Writes the table (and sidecar metadata when a path is set). */
SCR_API scr_status scr_sweep_write(const scr_sweep* sweep);
/* Renders the table into a string instead. */
SCR_API scr_status scr_sweep_render(const scr_sweep* sweep, char** out_text);
SCR_API void scr_sweep_destroy(scr_sweep* sweep);

#ifdef __cplusplus
}
#endif

#endif
