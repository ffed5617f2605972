"""Residual reports shared by the closed-form and kernel checks."""

from __future__ import annotations

from dataclasses import dataclass

from .series import TruncSeries

# checks reported in the {check_name, i, j, order, passed, first_failure} shape
KERNEL_CHECKS = frozenset(
    {"main-eq", "orbit", "framed-system", "boundary", "quasivicious", "refined", "prop2-derivation"}
)


@dataclass
class IdentityReport:
    """Outcome of checking ``residual == 0`` through ``t^order``."""

    identity: str
    order_checked: int
    first_nonzero: dict | None = None
    check_name: str = ""
    i: int | None = None
    j: int | None = None

    @property
    def residual_zero(self):
        return self.first_nonzero is None

    @property
    def passed(self):
        return self.residual_zero

    @classmethod
    def from_residual(cls, identity, residual, order=None, **kwargs):
        if isinstance(residual, TruncSeries):
            if order is not None:
                residual = residual.truncate(min(order, residual.order))
            first = residual.first_nonzero()
            checked = residual.order
        else:
            # a plain sequence of scalars, index = t-power
            residual = list(residual)
            if order is not None:
                residual = residual[: order + 1]
            checked = len(residual) - 1
            first = next(
                ({"t_power": n, "x_exp": 0, "y_exp": 0, "u_deg": 0, "value": str(v)}
                 for n, v in enumerate(residual) if v),
                None,
            )
        return cls(identity, checked, first, **kwargs)

    @classmethod
    def from_equal(cls, identity, lhs, rhs, order=None, **kwargs):
        return cls.from_residual(identity, lhs - rhs, order, **kwargs)

    def identity_json(self):
        return {
            "identity": self.identity,
            "order_checked": self.order_checked,
            "residual_zero": self.residual_zero,
            "first_nonzero": self.first_nonzero,
        }

    def check_json(self):
        return {
            "check_name": self.check_name or self.identity,
            "identity": self.identity,
            "i": self.i,
            "j": self.j,
            "order": self.order_checked,
            "passed": self.passed,
            "first_failure": self.first_nonzero,
        }

    def to_json(self):
        if self.check_name in KERNEL_CHECKS:
            return self.check_json()
        out = self.identity_json()
        if self.check_name:
            out = {"check_name": self.check_name, **out}
        return out

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        where = f" ({self.i},{self.j})" if self.i is not None and self.j is not None else (
            f" ({self.i})" if self.i is not None else "")
        tail = "" if self.passed else f"  first nonzero: {self.first_nonzero}"
        return f"{status} [{self.check_name}{where}] {self.identity} through t^{self.order_checked}{tail}"


def all_passed(reports):
    return all(r.passed for r in reports)
