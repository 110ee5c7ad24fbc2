#pragma once

namespace ampere {

/// Single source of truth for the numeric tolerances used across the
/// toolkit. Overridable from the CLI via --tol name=value.
struct Tolerances {
  double geom = 1e-12;     // polygon convexity / orientation slack
  double conv = 1e-10;     // PL convexity certificate (gradient monotonicity)
  double psd = 1e-12;      // positive-(semi)definiteness margin
  double ineq = 1e-9;      // inequality slack in lemma/bound checks
  double meas = 1e-6;      // measure comparisons and refinement Cauchy tests
  double cmp = 1e-8;       // pointwise comparison slack
  double bc = 1e-9;        // boundary data match
  double solve = 1e-6;     // relative mass residual for Aleksandrov solvers
  double lin = 1e-10;      // relative residual for linear solves
  double lin_abs = 1e-14;  // absolute residual floor for linear solves
  double fp = 1e-9;        // fixed-point gap for the continuation
};

}  // namespace ampere
