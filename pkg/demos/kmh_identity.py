"""Both sides of the integration-by-parts identity for (0,1)-forms in the plane."""

from dbar_poincare import make_domain, verify_kmh_identity
from dbar_poincare.verify import kmh_instances

disc = make_domain("UnitDisc")
for alpha, phi in kmh_instances(disc):
    recs = [verify_kmh_identity(disc, alpha, phi, resolution=m) for m in (8, 16, 32, 64)]
    rel = "  ".join(f"{r.details['relative_residual']:.1e}" for r in recs)
    print(f"lhs {recs[-1].lhs:10.6g}  rhs {recs[-1].rhs:10.6g}  residual at 8/16/32/64: {rel}")
