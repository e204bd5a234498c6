/*
 * C interface to the barriers library: Grassmannian and sphere geometry,
 * quadric charts, harmonic map flows and Gauss map audits.
 *
 * Objects are opaque handles created by *_create functions and released with
 * the matching *_destroy. Every fallible call returns a barriers_status;
 * barriers_last_error() holds the message of the most recent failure on the
 * calling thread. Matrices are column-major unless stated otherwise.
 */
#ifndef BARRIERS_BARRIERS_H
#define BARRIERS_BARRIERS_H

#include <stddef.h>
#include <stdint.h>

#if defined(BARRIERS_BUILDING_LIBRARY)
#define BARRIERS_API __attribute__((visibility("default")))
#else
#define BARRIERS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum barriers_status {
  BARRIERS_OK = 0,
  BARRIERS_ERR_INVALID_INPUT = 1,
  BARRIERS_ERR_DEGENERATE_INPUT = 2,
  BARRIERS_ERR_UNSUPPORTED_GRADE = 3,
  BARRIERS_ERR_ZERO_TANGENT = 4,
  BARRIERS_ERR_INVALID_DIRECTION = 5,
  BARRIERS_ERR_DEGENERATE_FLAG = 6,
  BARRIERS_ERR_INSUFFICIENT_SAMPLING = 7,
  BARRIERS_ERR_NOT_ON_QUADRIC = 8,
  BARRIERS_ERR_CHART_DOMAIN = 9,
  BARRIERS_ERR_IMMERSION_DEGENERACY = 10,
  BARRIERS_ERR_CONFIG = 11,
  BARRIERS_ERR_STALLED_FLOW = 12,
  BARRIERS_ERR_BUFFER_TOO_SMALL = 98,
  BARRIERS_ERR_INTERNAL = 99
} barriers_status;

BARRIERS_API const char* barriers_version(void);
BARRIERS_API const char* barriers_status_name(barriers_status status);
BARRIERS_API const char* barriers_last_error(void);

/* ---- random helpers (deterministic per seed) ---------------------------- */

/* `count` uniform points on S^{dim-1}, written as `count` columns of length dim. */
BARRIERS_API barriers_status barriers_sample_sphere(int dim, uint64_t seed, size_t count, double* out);
/* Haar-random special orthogonal dim x dim matrix. */
BARRIERS_API barriers_status barriers_random_rotation(int dim, uint64_t seed, double* out);

/* ---- oriented Grassmannian ---------------------------------------------- */

typedef struct barriers_gpoint barriers_gpoint;
typedef struct barriers_gtangent barriers_gtangent;

typedef enum barriers_membership {
  BARRIERS_INSIDE = 0,
  BARRIERS_BOUNDARY = 1,
  BARRIERS_OUTSIDE = 2
} barriers_membership;

/* Point from an orthonormal n x p frame. */
BARRIERS_API barriers_status barriers_gpoint_create(int n, int p, const double* frame, barriers_gpoint** out);
BARRIERS_API void barriers_gpoint_destroy(barriers_gpoint* w);
BARRIERS_API void barriers_gpoint_dims(const barriers_gpoint* w, int* n, int* p);
BARRIERS_API barriers_status barriers_gpoint_frame(const barriers_gpoint* w, double* out, size_t len);
/* C(n,p) Plücker coordinates, lexicographic multi-index order. */
BARRIERS_API barriers_status barriers_gpoint_plucker(const barriers_gpoint* w, double* out, size_t len);

/* Tangent with row-major p x (n-p) coefficients. If `normals` is NULL the
 * normal frame is the deterministic completion of the base frame. */
BARRIERS_API barriers_status barriers_gtangent_create(const barriers_gpoint* base, const double* normals,
                                                      const double* coeffs, barriers_gtangent** out);
BARRIERS_API void barriers_gtangent_destroy(barriers_gtangent* x);
/* Canonical form: rank and min(p, n-p) rates (zero-padded). */
BARRIERS_API barriers_status barriers_gtangent_canonical(const barriers_gtangent* x, int* rank, double* lambda,
                                                         size_t len);
BARRIERS_API barriers_status barriers_gtangent_norm(const barriers_gtangent* x, double* out);
BARRIERS_API barriers_status barriers_gtangent_reconstruction_error(const barriers_gtangent* x, double* out);
BARRIERS_API barriers_status barriers_t_max(const barriers_gtangent* x, double* out);
BARRIERS_API barriers_status barriers_geodesic(const barriers_gtangent* x, double t, barriers_gpoint** out,
                                               int* rescaled);

/* Descending principal angles (p values) and the geodesic distance. */
BARRIERS_API barriers_status barriers_principal_angles(const barriers_gpoint* a, const barriers_gpoint* b,
                                                       double* angles, size_t len, double* distance);
BARRIERS_API barriers_status barriers_bg_contains(const barriers_gpoint* w, const barriers_gpoint* w2,
                                                  double shrink, barriers_membership* out);
BARRIERS_API barriers_status barriers_main_region_probe(const barriers_gtangent* x1, double epsilon,
                                                        const barriers_gpoint* w2, int grid, int* member,
                                                        double* s_min, double* s_max);

/* ---- sphere regions ------------------------------------------------------ */

typedef struct barriers_tube_region barriers_tube_region;

BARRIERS_API barriers_status barriers_tube_region_create(int dim, const double* base, const double* direction,
                                                         double epsilon, barriers_tube_region** out);
/* Region from `flag_count` orthonormal interior normals and x0. */
BARRIERS_API barriers_status barriers_tube_region_maximal_set(int dim, int flag_count, const double* flag,
                                                              const double* x0, double epsilon,
                                                              barriers_tube_region** out);
BARRIERS_API void barriers_tube_region_destroy(barriers_tube_region* r);
BARRIERS_API barriers_status barriers_tube_region_circle(const barriers_tube_region* r, double* base,
                                                         double* direction, double* epsilon, double* radius);
BARRIERS_API barriers_status barriers_tube_contains(const barriers_tube_region* r, const double* x, int* inside,
                                                    double* margin);
BARRIERS_API barriers_status barriers_sweepout_leaf_find(const barriers_tube_region* r, const double* x, int grid,
                                                         double* t_values, size_t cap, size_t* count);
BARRIERS_API barriers_status barriers_retract_into_region(const barriers_tube_region* r, const double* x,
                                                          uint64_t seed, double* out);

/* Components smaller than 1% of the samples are counted only in
 * raw_components (sampling debris where a leaf touches the barrier tube). */
typedef struct barriers_disconnection_spec {
  int has_leaf;
  double t0;
  int samples;
  uint64_t seed;
  int neighbors;
  double cutoff_factor;
  double leaf_band;
} barriers_disconnection_spec;

BARRIERS_API barriers_status barriers_region_disconnection(const barriers_tube_region* r,
                                                           const barriers_disconnection_spec* spec,
                                                           int* components, int* raw_components, int* surviving);

/* ---- quadric model of G(2, k+2); complex vectors interleave (re, im) ----- */

BARRIERS_API barriers_status barriers_grassmann_to_quadric(const barriers_gpoint* w, double* z, size_t len);
BARRIERS_API barriers_status barriers_quadric_to_grassmann(int size, const double* z, barriers_gpoint** out);
BARRIERS_API barriers_status barriers_quadric_residual(int size, const double* z, double* out);
BARRIERS_API barriers_status barriers_ho_chart(int size, const double* z, double* xi);
BARRIERS_API barriers_status barriers_ho_chart_inv(int k, const double* xi, double* z);
BARRIERS_API barriers_status barriers_hyperplane_margins(int size, const double* z, double* m_h, double* m_h_prime);
BARRIERS_API barriers_status barriers_fs_distance(int size, const double* a, const double* b, double* out);
BARRIERS_API barriers_status barriers_fs_speed(int size, const double* z, const double* dz, double* out);
BARRIERS_API barriers_status barriers_split_s2xs2(const barriers_gpoint* w, double* a, double* b);

/* ---- harmonic map flow --------------------------------------------------- */

typedef struct barriers_mesh barriers_mesh;
typedef struct barriers_flow_trace barriers_flow_trace;

typedef enum barriers_domain_kind { BARRIERS_TORUS_GRID = 0, BARRIERS_ICOSPHERE = 1 } barriers_domain_kind;
typedef enum barriers_target_kind {
  BARRIERS_TARGET_SPHERE = 0,
  BARRIERS_TARGET_PRODUCT = 1,
  BARRIERS_TARGET_GRASSMANN_2_4 = 2
} barriers_target_kind;
typedef enum barriers_init_kind {
  BARRIERS_INIT_CONSTANT = 0,
  BARRIERS_INIT_IDENTITY = 1,
  BARRIERS_INIT_GREAT_CIRCLE = 2,
  BARRIERS_INIT_CAP = 3
} barriers_init_kind;
typedef enum barriers_flow_status {
  BARRIERS_FLOW_CONVERGED_CONSTANT = 0,
  BARRIERS_FLOW_CONVERGED_NONCONSTANT = 1,
  BARRIERS_FLOW_MAX_ITERS = 2,
  BARRIERS_FLOW_STALLED = 3
} barriers_flow_status;

typedef struct barriers_mesh_info {
  int vertices;
  int edges;
  int faces;
  int euler_characteristic;
  double total_mass;
} barriers_mesh_info;

typedef struct barriers_flow_spec {
  barriers_target_kind target;
  int sphere_dim; /* m of S^m for sphere targets, first factor for products */
  int second_dim; /* second factor for products */
  double product_scale;
  barriers_init_kind init;
  double cap_radius;      /* cap initialization around the region base point */
  uint64_t init_seed;
  double step;
  long max_iters;
  double tension_tol;
  double oscillation_tol;
  int constrained;                    /* retract into `region` after each step */
  const barriers_tube_region* region; /* may be NULL in free mode */
  uint64_t seed;
  int trace_every;
} barriers_flow_spec;

typedef struct barriers_trace_row {
  long iter;
  double energy;
  double max_tension;
  double oscillation;
  double step;
} barriers_trace_row;

typedef struct barriers_flow_summary {
  barriers_flow_status status;
  long iters;
  double initial_energy;
  double final_energy;
  double final_oscillation;
  double final_max_tension;
  size_t barrier_events;
  int energy_monotone;
  double max_constraint_residual;
} barriers_flow_summary;

typedef struct barriers_barrier_event {
  int vertex;
  long iter;
  double depth;
} barriers_barrier_event;

BARRIERS_API barriers_status barriers_mesh_create(barriers_domain_kind kind, int nu, int nv, int level,
                                                  barriers_mesh** out);
BARRIERS_API void barriers_mesh_destroy(barriers_mesh* mesh);
BARRIERS_API barriers_status barriers_mesh_get_info(const barriers_mesh* mesh, barriers_mesh_info* out);

/* Fills defaults: sphere S², cap init of radius 0.4, step 0.2, 5e4 iterations,
 * tension 1e-6, oscillation 1e-2, free mode, seed 42, trace every 10. */
BARRIERS_API void barriers_flow_spec_defaults(barriers_flow_spec* spec);
BARRIERS_API barriers_status barriers_initial_energy(const barriers_mesh* mesh, const barriers_flow_spec* spec,
                                                     double* energy, double* max_tension);
BARRIERS_API barriers_status barriers_flow_run(const barriers_mesh* mesh, const barriers_flow_spec* spec,
                                               barriers_flow_trace** out);
BARRIERS_API void barriers_flow_trace_destroy(barriers_flow_trace* trace);
BARRIERS_API barriers_status barriers_flow_trace_summary(const barriers_flow_trace* trace,
                                                         barriers_flow_summary* out);
BARRIERS_API size_t barriers_flow_trace_rows(const barriers_flow_trace* trace);
BARRIERS_API barriers_status barriers_flow_trace_row(const barriers_flow_trace* trace, size_t i,
                                                     barriers_trace_row* out);
BARRIERS_API barriers_status barriers_flow_trace_event(const barriers_flow_trace* trace, size_t i,
                                                       barriers_barrier_event* out);
BARRIERS_API const char* barriers_flow_status_name(barriers_flow_status status);

/* ---- Gauss maps ------------------------------------------------------------ */

typedef struct barriers_immersion barriers_immersion;

typedef enum barriers_immersion_kind {
  BARRIERS_IMM_EQUATOR = 0,
  BARRIERS_IMM_CLIFFORD_TORUS = 1,
  BARRIERS_IMM_GENERALIZED_CLIFFORD = 2,
  BARRIERS_IMM_DISTANCE_SPHERE = 3
} barriers_immersion_kind;

typedef struct barriers_immersion_spec {
  barriers_immersion_kind kind;
  int k;           /* equator dimension */
  int m;           /* ambient sphere dimension (equator, distance sphere) */
  int p, q;        /* generalized Clifford factors */
  double radius;   /* distance sphere */
} barriers_immersion_spec;

typedef struct barriers_gauss_audit {
  double min_margin;
  double epsilon;
  int grid;
  int h1_zero_asserted;
  int worst_dim;
  double worst_point[8];
  char kind[32];
  char verdict[160];
} barriers_gauss_audit;

BARRIERS_API barriers_status barriers_immersion_create(const barriers_immersion_spec* spec,
                                                       barriers_immersion** out);
/* Composition with the equatorial inclusion into `extra` more dimensions. */
BARRIERS_API barriers_status barriers_immersion_include(const barriers_immersion* imm, int extra,
                                                        barriers_immersion** out);
BARRIERS_API void barriers_immersion_destroy(barriers_immersion* imm);
BARRIERS_API void barriers_immersion_dims(const barriers_immersion* imm, int* k, int* m);
BARRIERS_API barriers_status barriers_mean_curvature(const barriers_immersion* imm, const double* params,
                                                     double* out);
BARRIERS_API barriers_status barriers_hypersurface_gauss(const barriers_immersion* imm, const double* params,
                                                         double* out);
BARRIERS_API barriers_status barriers_gauss_map_tension(const barriers_immersion* imm, int n, double* out);
BARRIERS_API barriers_status barriers_gauss_audit_sphere(const barriers_immersion* imm,
                                                         const barriers_tube_region* region, int grid,
                                                         int h1_zero_asserted, barriers_gauss_audit* out);
BARRIERS_API barriers_status barriers_gauss_audit_grassmann(const barriers_immersion* imm,
                                                            const barriers_gtangent* x1, double epsilon, int grid,
                                                            int h1_zero_asserted, barriers_gauss_audit* out);

#ifdef __cplusplus
}
#endif

#endif /* BARRIERS_BARRIERS_H */
