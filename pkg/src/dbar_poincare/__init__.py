"""Numerical verification of explicit L^p Poincare and Sobolev constants for dbar.

Domains are ellipsoids in C^n.  The package integrates Bochner-Martinelli type
kernels, assembles explicit constants with provenance chains, checks the
inequalities on concrete fields, estimates sharp constants, and solves
``dbar u = g`` in the plane to test an improved L^2 estimate.
"""

from .errors import (ConfigurationError, DegeneracyError, DegenerateFamilyError,
                     DomainMembershipError, InfeasibleSingularityError, OutOfDomainError,
                     PshError, ResolutionError, WindowError)
from .geometry import DomainKind, DomainModel, make_domain, sample_interior
from .quadrature import boundary_rule, integrate_singular, interior_rule, rules_for, target_rule
from .fields import (FieldSpec, WeightSpec, check_psh, constant, eval_field, gaussian_bump,
                     holo_poly, linear_real_weight, make_weight, mixed_poly, monomial,
                     quadratic_weight, weight_sum, zero_weight)
from .bm_kernels import apply_boundary_bm, apply_interior_bm, reconstruct_bm
from .constants import (ConstantReport, hormander_constants, fixed_psi_constants,
                        kernel_bound_boundary, kernel_bound_interior, max_modulus_delta,
                        poincare_delta)
from .verify import (VerificationRecord, default_battery, run_battery, verify_inequality,
                     verify_kernel_bounds, verify_kmh_identity, verify_trace)
from .sharpness import SharpnessResult, estimate_sharp_constant
from .dbar import (check_improved_bound, hormander_instances, minimal_solution, solve_cauchy)
from .cli import emit_report, main

__version__ = "0.1.0"
