#ifndef VORTEXLAB_H
#define VORTEXLAB_H

/* C interface to the vortexlab core. All entry points return vrt_status;
 * on failure vrt_last_error() holds a message for the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vrt_status {
  VRT_OK = 0,
  VRT_VALIDATION = 2, /* bad arguments or config */
  VRT_NUMERICAL = 3,  /* blow-up, non-finite values, failed identity */
  VRT_IO = 4          /* filesystem or serialization trouble */
} vrt_status;

/* Library version, "major.minor.patch". Static storage. */
const char* vrt_version(void);

/* Message from the most recent failing call on this thread, or "" if the
 * most recent call succeeded. Valid until the next call on the thread. */
const char* vrt_last_error(void);

/* A scalar field on the n-by-n periodic grid of side length L, row-major
 * with x along rows, plus a timestamp. */
typedef struct vrt_field vrt_field;

/* Creates a field from n*n values (row-major, values[i*n + j] at
 * (x_i, y_j)). NULL values gives the zero field. */
vrt_status vrt_field_create(size_t n, double side_length, double time,
                            const double* values, vrt_field** out);

/* Snapshot file round-trip (lossless binary format). */
vrt_status vrt_field_load(const char* path, vrt_field** out);
vrt_status vrt_field_save(const vrt_field* field, const char* path);

void vrt_field_destroy(vrt_field* field);

/* Any out pointer may be NULL to skip that item. */
vrt_status vrt_field_info(const vrt_field* field, size_t* n,
                          double* side_length, double* time);

/* Borrowed pointer to the n*n sample array; valid while the field lives. */
const double* vrt_field_values(const vrt_field* field);

/* Grid integral of the field. */
vrt_status vrt_integrate(const vrt_field* field, double* out);

/* Lebesgue p-norm, p >= 1. */
vrt_status vrt_lp_norm(const vrt_field* field, double p, double* out);

/* Divergence-free velocity recovered from vorticity; writes two new fields
 * (x and y components) owned by the caller. */
vrt_status vrt_velocity_from_vorticity(const vrt_field* omega,
                                       vrt_field** out_ux,
                                       vrt_field** out_uy);

/* Closed-form split norms of the plane singular kernel over a disc of the
 * given radius: L1 mass inside, sup magnitude outside. */
vrt_status vrt_kernel_split_norms(double radius, double* out_inner_l1,
                                  double* out_outer_sup);

/* One viscous run from a JSON config file. Writes the run directory and a
 * run report under out_dir. seed = 0 keeps the config's datum seed, any
 * other value overrides it. */
vrt_status vrt_run_ns(const char* config_path, const char* out_dir,
                      size_t seed);

/* Full viscosity sweep from a JSON config file. workers = 0 takes the
 * worker count from the config, seed = 0 keeps the config's datum seed.
 * Writes run directories plus report.json under out_dir. */
vrt_status vrt_run_sweep(const char* config_path, const char* out_dir,
                         size_t workers, size_t seed);

/* Runs the dual solves for every viscosity and source in the config and
 * checks each duality residual against 1e-10 times its scale. Writes
 * dual_check.json under out_dir (pass NULL or "" to skip the file).
 * seed = 0 keeps the config's datum seed. Returns VRT_NUMERICAL when any
 * residual fails the bound. */
vrt_status vrt_dual_check(const char* config_path, const char* out_dir,
                          size_t seed);

/* Deep renormalization tables for a sweep directory previously written by
 * vrt_run_sweep with the same config. Writes <sweep_dir>/renorm.json. */
vrt_status vrt_renorm_report(const char* config_path, const char* sweep_dir);

/* Re-exports a report.json into out_dir as "json" or "csv". */
vrt_status vrt_export_report(const char* report_path, const char* format,
                             const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* VORTEXLAB_H */
