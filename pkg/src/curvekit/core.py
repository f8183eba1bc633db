"""Surface signatures and the small arithmetic kernel shared by every module.

Conventions that the rest of the package relies on:

* a surface is described by (genus, punctures); boundary components are
  treated as punctures throughout,
* complexity(sig) = 3*genus + punctures - 3 measures how many disjoint
  curves fit; the toolkit supports complexity 1 and 2 plus the pants-level
  pieces (complexity 0) that show up inside complements,
* logarithms are base 2 and log2_or_zero(0) == 0, so cut-off sums never see
  a math domain error,
* cutoff(n, m) is the truncation bracket: values <= m are dropped to 0,
  larger values pass through unchanged,
* floating comparisons get an absolute slack of COMPARISON_SLACK; every
  inequality the checkers assert has at least integer-sized structural
  slack, so 1e-9 never flips a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParamsError, UnsupportedSignatureError

COMPARISON_SLACK = 1e-9

# Cut-off threshold below which the contributing-subsurface family is no
# longer guaranteed finite by the off-geodesic twisting bound.
MIN_SAFE_CUTOFF = 200


@dataclass(frozen=True, order=True)
class SurfaceSig:
    """Topological type (genus, punctures) of a surface."""

    genus: int
    punctures: int

    def __post_init__(self) -> None:
        if self.genus < 0 or self.punctures < 0:
            raise InvalidParamsError(
                f"negative genus/punctures: ({self.genus}, {self.punctures})"
            )

    def __str__(self) -> str:
        return f"S_{self.genus},{self.punctures}"


S11 = SurfaceSig(1, 1)
S04 = SurfaceSig(0, 4)
S05 = SurfaceSig(0, 5)
S12 = SurfaceSig(1, 2)

#: Signatures with a full engine behind them (complexity 1 and 2).
SUPPORTED_SIGNATURES = (S11, S04, S05, S12)

SIGNATURE_NAMES = {
    "s11": S11,
    "s04": S04,
    "s05": S05,
    "s12": S12,
}


def complexity(sig: SurfaceSig) -> int:
    """Count of curves in a maximal multicurve: 3g + n - 3."""
    return 3 * sig.genus + sig.punctures - 3


def euler_characteristic(sig: SurfaceSig) -> int:
    """chi = 2 - 2g - n."""
    return 2 - 2 * sig.genus - sig.punctures


def require_supported(sig: SurfaceSig) -> SurfaceSig:
    """Reject signatures the engines cannot handle (complexity not in {1, 2})."""
    if sig not in SUPPORTED_SIGNATURES:
        raise UnsupportedSignatureError(
            f"{sig} has complexity {complexity(sig)}; supported: "
            + ", ".join(str(s) for s in SUPPORTED_SIGNATURES)
        )
    return sig


def cutoff(n: int, m: int) -> int:
    """Truncation bracket: 0 if n <= m, else n.

    m is the cut-off constant; n is a distance.  Negative n never occurs in
    valid callers and is rejected to catch sign bugs early.
    """
    if n < 0:
        raise InvalidParamsError(f"cutoff of negative value {n}")
    if m < 0:
        raise InvalidParamsError(f"negative cutoff constant {m}")
    return 0 if n <= m else n


def log2_or_zero(x: float) -> float:
    """Base-2 log with log(0) = 0, matching the convention of every sum here."""
    if x < 0:
        raise InvalidParamsError(f"log of negative value {x}")
    if x == 0:
        return 0.0
    return math.log2(x)


def leq_with_slack(lhs: float, rhs: float) -> bool:
    """lhs <= rhs up to the package-wide absolute slack."""
    return lhs <= rhs + COMPARISON_SLACK


def dist_leq_two_log_plus_two(d: int, i: int) -> bool:
    """Exact integer test for d <= 2*log2(i) + 2 (with log2(0) = 0).

    Rearranged to 2^(d-2) <= i^2 so no floating point is involved.
    """
    if i < 0 or d < 0:
        raise InvalidParamsError("negative distance or intersection")
    if i == 0:
        return d <= 2
    if d <= 2:
        return True
    return (1 << (d - 2)) <= i * i
