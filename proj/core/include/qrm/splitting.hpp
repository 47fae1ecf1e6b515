#pragma once

// Ground-state gap E1 - E0 resolved below double-precision resolution.
//
// Deep in the superradiant phase the two lowest levels are a tunnelling doublet
// whose splitting decays like exp(-c * Omega/omega0); at Omega/omega0 = 800,
// g = 1.2 it is ~1e-70 against energies of order 400, far beneath the rounding
// floor of any double-precision eigensolver. The two doublet members live in
// opposite parity sectors, so each is the ground state of its own tridiagonal
// block and can be pinned down by Sturm-sequence bisection in multiprecision
// arithmetic.

#include "qrm/model.hpp"

namespace qrm {

struct GapOptions {
    int n_start = 32;
    int n_cap = 4096;
    double rel_tol = 1e-6;  // relative change of the gap allowed under one doubling
};

struct GroundGap {
    double gap = 0.0;            // E1 - E0
    double ground_energy = 0.0;  // E0 (double rounding of the resolved value)
    int n_max_used = 0;
    bool converged = false;      // stable under doubling of the cutoff
    bool resolved = true;        // false when the gap is below the finest arithmetic tier
    int digits = 0;              // decimal digits used; 0 means plain double precision
};

/// E1 - E0 of a fixed truncation.
GroundGap ground_gap(const ModelParams& params, const Truncation& trunc);

/// Doubles the cutoff until the gap itself is stable to rel_tol.
GroundGap resolve_ground_gap(const ModelParams& params, const GapOptions& options = {});

}  // namespace qrm
