"""
Errors and warnings raised by riccati_evans.

Numerical failures derive from RiccatiEvansError; configuration problems use
Django's ImproperlyConfigured instead. Recoverable caveats are reported as
RiccatiEvansWarning subclasses so callers can filter or escalate them.
"""


class RiccatiEvansError(Exception):
    pass


class SingularLimit(RiccatiEvansError):
    def __init__(self, message=None):
        super().__init__(
            message
            or "epsilon = 0 has no slow system; use the layer or reduced problem"
        )


class DegenerateJump(RiccatiEvansError):
    pass


class FoldCollision(RiccatiEvansError):
    def __init__(self, u, w, message=None):
        self.u = u
        self.w = w
        super().__init__(
            message
            or f"reduced orbit reached the fold at (u, w) = ({u:.6g}, {w:.6g}) "
            "away from the canard point"
        )


class NoConvergence(RiccatiEvansError):
    def __init__(self, message, best_residual=None):
        self.best_residual = best_residual
        if best_residual is not None:
            message = f"{message} (best residual {best_residual:.3e})"
        super().__init__(message)


class DomainTooShort(RiccatiEvansError):
    def __init__(self, residual, tol_bc):
        self.residual = residual
        self.tol_bc = tol_bc
        super().__init__(
            f"boundary projection residual {residual:.3e} exceeds tol_bc "
            f"{tol_bc:.1e}; increase the truncation lengths"
        )


class ContinuationStuck(RiccatiEvansError):
    def __init__(self, last_good_c, c_target):
        self.last_good_c = last_good_c
        self.c_target = c_target
        super().__init__(
            f"continuation towards c = {c_target:.6g} stalled at the minimum "
            f"step; last converged c = {last_good_c:.10g}"
        )


class BadProfileFile(RiccatiEvansError):
    pass


class OutOfDomain(RiccatiEvansError):
    def __init__(self, z, lo, hi):
        self.z = z
        super().__init__(
            f"z = {z:.6g} lies outside the wave grid [{lo:.6g}, {hi:.6g}]"
        )


class BranchPoint(RiccatiEvansError):
    def __init__(self, lam, branch_point):
        self.lam = lam
        self.branch_point = branch_point
        super().__init__(
            f"lambda = {lam!r} is within 1e-12 of the branch point {branch_point!r}"
        )


class NearDegenerate(RiccatiEvansError):
    pass


class NoStabilisingWeight(RiccatiEvansError):
    pass


class DegenerateFrame(RiccatiEvansError):
    pass


class NotInChart(RiccatiEvansError):
    def __init__(self, chart_label, condition):
        self.chart_label = chart_label
        self.condition = condition
        super().__init__(
            f"plane is not in chart {chart_label!r}: top block condition "
            f"number {condition:.3e}"
        )


class ChartSingularity(RiccatiEvansError):
    def __init__(self, z_hit, norm, chart_label=None):
        self.z_hit = z_hit
        self.norm = norm
        self.chart_label = chart_label
        super().__init__(
            f"Riccati solution left chart {chart_label!r} near z = {z_hit:.6g} "
            f"(|W| = {norm:.3e})"
        )


class OnPath(RiccatiEvansError):
    def __init__(self, lam, value):
        self.lam = lam
        self.value = value
        super().__init__(
            f"|E| = {abs(value):.3e} at lambda = {lam!r} on the contour; move "
            "the contour off the zero or pole"
        )


class NonConvergentRefinement(RiccatiEvansError):
    pass


class ClusterUnresolved(RiccatiEvansError):
    def __init__(self, cell, winding):
        self.cell = cell
        self.winding = winding
        super().__init__(
            f"cell {cell} still has winding {winding} at the minimum cell size"
        )


class RootLost(RiccatiEvansError):
    def __init__(self, c, lam):
        self.c = c
        self.lam = lam
        super().__init__(f"lost the tracked root near lambda = {lam!r} at c = {c:.10g}")


class RiccatiEvansWarning(UserWarning):
    pass


class ChartSingularityWarning(RiccatiEvansWarning):
    pass


class ResidualWarning(RiccatiEvansWarning):
    pass


class ProfileWarning(RiccatiEvansWarning):
    pass
