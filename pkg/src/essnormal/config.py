"""Numerical tolerances.

All thresholds live in one frozen :class:`Tolerances` record.  The active
record is held in a :mod:`contextvars` variable so overrides are scoped to
the calling context and never leak across threads::

    with using_tolerances(real=1e-10):
        contact_profile(phi)
"""

import contextlib
import contextvars
import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    # ratfun
    gcd: float = 1e-9
    map_equal: float = 1e-9
    unimodular: float = 1e-9
    pole: float = 1e-12
    root_residual: float = 1e-8
    # jets
    zero: float = 1e-12
    base_match: float = 1e-9
    # contact
    circle: float = 1e-7
    real: float = 1e-8
    real_abs: float = 1e-12
    selfmap_slack: float = 1e-9
    max_jet_order: int = 30
    blaschke: float = 1e-10
    # cf_interp
    pd: float = 1e-10
    sep: float = 1e-6
    pick_slack: float = 1e-12
    # essnorm
    derivative_one: float = 1e-7
    data: float = 1e-6
    sum: float = 1e-8
    outer: float = 1e-9
    jet_match: float = 1e-8
    almost_inverse: float = 1e-7
    # h2num
    hermitian: float = 1e-12
    kahan_min_size: int = 512
    branch: float = 1e-9


_current = contextvars.ContextVar("essnormal_tolerances", default=Tolerances())


def tolerances():
    """Return the tolerances active in the current context."""
    return _current.get()


@contextlib.contextmanager
def using_tolerances(**overrides):
    token = _current.set(dataclasses.replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
