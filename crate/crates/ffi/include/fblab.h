#ifndef FBLAB_H
#define FBLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FblabKernel {
  FBLAB_KERNEL_HEAT = 0,
  FBLAB_KERNEL_DIFFERENTIATED = 1,
} FblabKernel;

typedef enum FblabSetting {
  FBLAB_SETTING_NATURAL = 0,
  FBLAB_SETTING_LEBESGUE = 1,
  FBLAB_SETTING_ESSENTIAL = 2,
  FBLAB_SETTING_ESSENTIAL_PROBABILISTIC = 3,
  FBLAB_SETTING_MODIFIED = 4,
} FblabSetting;

typedef enum FblabStatus {
  FBLAB_STATUS_OK = 0,
  FBLAB_STATUS_NULL_POINTER = 1,
  FBLAB_STATUS_DOMAIN = 2,
  FBLAB_STATUS_CERTIFICATION = 3,
  FBLAB_STATUS_INCONCLUSIVE = 4,
  FBLAB_STATUS_UNSUPPORTED = 5,
  FBLAB_STATUS_CONFIG = 6,
  FBLAB_STATUS_TIME_TOO_SMALL = 7,
  FBLAB_STATUS_NON_FINITE = 8,
  FBLAB_STATUS_PANIC = 9,
  FBLAB_STATUS_OTHER = 10,
} FblabStatus;

// Opaque system handle.
typedef struct FblabSystem FblabSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *fblab_version(void);

// Copy the last error message of this thread into `buf` (NUL-terminated, truncated to
// `len`). Returns the full message length without the terminator.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t fblab_last_error(char *buf, size_t len);

// First `count` positive zeros of J_nu into `out`.
//
// # Safety
// `out` must point to `count` writable doubles.
enum FblabStatus fblab_zeros(double nu, size_t count, double *out);

// Fourier-Bessel system with room for `capacity` functions.
//
// # Safety
// `out` must be a valid pointer; on success it receives a handle to free with
// `fblab_system_free`.
enum FblabStatus fblab_system_new(enum FblabSetting setting,
                                  double nu,
                                  size_t capacity,
                                  struct FblabSystem **out);

// Jacobi trigonometric system with parameters (alpha, beta).
//
// # Safety
// As for `fblab_system_new`.
enum FblabStatus fblab_system_jacobi(double alpha, double beta, struct FblabSystem **out);

// Release a handle; null is ignored.
//
// # Safety
// `sys` must be null or a handle not yet freed.
void fblab_system_free(struct FblabSystem *sys);

// Eigenvalue of function `n` (1-based; 0-based for Jacobi).
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum FblabStatus fblab_system_eigenvalue(const struct FblabSystem *sys, size_t n, double *out);

// Value of function `n` at `x`.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum FblabStatus fblab_system_eval(const struct FblabSystem *sys, size_t n, double x, double *out);

// New derivative of function `n` at `x`.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum FblabStatus fblab_system_derivative(const struct FblabSystem *sys,
                                         size_t n,
                                         double x,
                                         double *out);

// Heat or differentiated heat kernel at (t, x, y) with the default truncation policy.
// The system needs enough capacity for t; otherwise the call reports a domain error.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum FblabStatus fblab_heat_kernel(const struct FblabSystem *sys,
                                   enum FblabKernel kind,
                                   double t,
                                   double x,
                                   double y,
                                   double *out);

// Capacity a system of order `nu` needs for kernels at every t above the default t_min.
size_t fblab_kernel_capacity(double nu);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FBLAB_H */
