"""Deterministic parameter sweeps written as CSV.

Every quantity is a function of three qubit parameters: the first state
amplitude ``c0`` (real when swept, ``c1 = sqrt(1 - c0^2)``), the first
spectrum weight ``p0`` and the control weight ``p``. Swept axes run over
``linspace(0, 1, n)``; unswept ones come from the fixed state/spectrum/p.
Rows are emitted in row-major order over the axes ``c0, p0, p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .entangled import SchmidtPair, alpha_closed_form
from .errors import DegenerateOutcomeError, ValidationError
from .metrics import fidelity_pure, l1_coherence
from .switch import ControlQubit, condition_on_control, hiding_switch_closed_form, sign_value
from .tensor_core import PureState, hermitian_eig

QUANTITIES = ("ef_surface", "work", "fidelity", "coherence", "ppt_min_eig")
AXES = ("c0", "p0", "p")


def fmt(x: float) -> str:
    if not np.isfinite(x):
        return "nan"
    if x == 0:
        return "0"
    return format(float(x), ".12g")


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    grid: dict = field(default_factory=lambda: {"c0": 101, "p0": 101})
    p: float = 0.5
    sign: str = "+"
    spectrum: tuple = (0.5, 0.5)
    state: tuple = (2**-0.5, 2**-0.5)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValidationError(f"unknown quantity {self.quantity!r}; choose from {', '.join(QUANTITIES)}")
        if not self.grid:
            raise ValidationError("sweep needs at least one axis")
        for axis, n in self.grid.items():
            if axis not in AXES:
                raise ValidationError(f"unknown axis {axis!r}; choose from {', '.join(AXES)}")
            if int(n) < 2:
                raise ValidationError(f"axis {axis} needs at least 2 points, got {n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p must lie in [0, 1], got {self.p}")
        sign_value(self.sign)
        spectrum = tuple(float(x) for x in self.spectrum)
        if len(spectrum) != 2 or min(spectrum) < 0 or abs(sum(spectrum) - 1.0) > 1e-12:
            raise ValidationError(f"spectrum must be a qubit probability vector, got {spectrum}")
        state = tuple(complex(z) for z in self.state)
        if len(state) != 2:
            raise ValidationError("state must have two amplitudes")
        norm = np.sqrt(sum(abs(z) ** 2 for z in state))
        if norm == 0:
            raise ValidationError("state must be non-zero")
        grid = {a: int(self.grid[a]) for a in AXES if a in self.grid}
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "spectrum", spectrum)
        object.__setattr__(self, "state", tuple(z / norm for z in state))
        object.__setattr__(self, "p", float(self.p))

    @property
    def axes(self) -> tuple[str, ...]:
        return tuple(self.grid)

    def describe(self) -> str:
        grid = ",".join(f"{a}:{n}" for a, n in self.grid.items())
        state = ",".join(fmt(z.real) if z.imag == 0 else str(z) for z in self.state)
        return (f"switchsim {__version__} sweep quantity={self.quantity} grid={grid} p={fmt(self.p)} "
                f"sign={'+' if sign_value(self.sign) > 0 else '-'} spectrum={','.join(fmt(x) for x in self.spectrum)} "
                f"state={state}")


def _cells(spec: SweepSpec):
    axes = spec.axes
    values = [np.linspace(0.0, 1.0, spec.grid[a]) for a in axes]
    for combo in itertools.product(*values):
        point = dict(zip(axes, (float(v) for v in combo)))
        if "c0" in point:
            c0 = point["c0"]
            amps = (complex(c0), complex(np.sqrt(max(1.0 - c0 * c0, 0.0))))
        else:
            amps = spec.state
        if "p0" in point:
            p0 = point["p0"]
            spectrum = (p0, 1.0 - p0)
        else:
            spectrum = spec.spectrum
        p = point.get("p", spec.p)
        yield combo, amps, spectrum, p


def _conditional_qubit(amps, spectrum, p, sign):
    psi = PureState(np.asarray(amps))
    out = hiding_switch_closed_form(np.diag(spectrum), psi.density(), ControlQubit(p))
    return psi, condition_on_control(out, sign)


def evaluate(spec: SweepSpec) -> tuple[list[tuple], np.ndarray]:
    """All grid points and the quantity at each (``nan`` for zero-probability outcomes)."""
    points, values, pending = [], [], []
    for combo, amps, spectrum, p in _cells(spec):
        points.append(combo)
        q = spec.quantity
        try:
            if q == "ef_surface":
                pair = SchmidtPair(*amps)
                a = alpha_closed_form(pair, spectrum, p, spec.sign)
                tr = np.trace(a).real
                if tr < 1e-14:
                    raise DegenerateOutcomeError("zero-probability outcome", tr)
                psi = pair.amplitudes
                values.append(float(np.vdot(psi, a @ psi).real / tr))
            elif q == "ppt_min_eig":
                a = alpha_closed_form(SchmidtPair(*amps), spectrum, p, spec.sign)
                pt = a.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)
                pending.append(pt)
                values.append(None)
            else:
                psi, cond = _conditional_qubit(amps, spectrum, p, spec.sign)
                if q == "fidelity":
                    values.append(fidelity_pure(psi, cond.normalized))
                elif q == "coherence":
                    values.append(l1_coherence(cond.normalized))
                else:
                    pending.append(np.asarray(cond.normalized.matrix))
                    values.append(None)
        except DegenerateOutcomeError:
            values.append(float("nan"))
    if pending:
        lam = hermitian_eig(np.stack(pending))[0]
        if spec.quantity == "ppt_min_eig":
            reduced = lam[:, 0]
        else:
            lam = np.clip(lam, 0.0, None)
            logs = np.log(np.where(lam > 0, lam, 1.0))
            reduced = np.log(2.0) + np.sum(lam * logs, axis=1)
            reduced = np.maximum(reduced, 0.0)
        it = iter(reduced)
        values = [float(next(it)) if v is None else v for v in values]
    return points, np.array(values, dtype=float)


def to_csv(spec: SweepSpec) -> str:
    points, values = evaluate(spec)
    lines = ["# " + spec.describe(), ",".join(spec.axes + (spec.quantity,))]
    for combo, v in zip(points, values):
        lines.append(",".join([fmt(x) for x in combo] + [fmt(v)]))
    return "\n".join(lines) + "\n"


def write_csv(spec: SweepSpec, out_path) -> Path:
    path = Path(out_path)
    text = to_csv(spec)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header names and the numeric body of a sweep CSV (comment lines skipped)."""
    rows = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    header = rows[0].split(",")
    body = np.array([[float(x) for x in ln.split(",")] for ln in rows[1:]])
    return header, body
