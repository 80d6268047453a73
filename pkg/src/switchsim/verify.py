"""Named self-checks pairing every closed form with an independent numerical route.

Each check returns its largest residual; it passes when that residual is at
most the check's tolerance. Modules are called through their attributes so a
patched function is picked up (this is how the harness is fault-tested).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import channels, entangled, metrics, sampling, switch
from .errors import DegenerateOutcomeError
from .tensor_core import DensityMatrix, PureState, hermitian_eig

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    name: str
    description: str
    residual: float
    tolerance: float
    seconds: float
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  error={self.error}" if self.error else ""
        return (f"{status} {self.name:<28} max_residual={self.residual:.3e} "
                f"tol={self.tolerance:.0e} ({self.seconds:.2f}s){extra}")


@dataclass(frozen=True)
class Check:
    name: str
    description: str
    tolerance: float
    fn: Callable[[np.random.Generator], float]


def _max(acc: float, value) -> float:
    return max(acc, float(np.max(np.abs(value))))


def _hiding_pair(spectrum):
    ch = channels.hiding_channel(channels.HidingSpec.square(spectrum))
    return ch, ch


def check_completeness(rng):
    res = 0.0
    for d in (2, 3, 4):
        for _ in range(10):
            ch = channels.hiding_channel(channels.HidingSpec.square(sampling.random_spectrum(d, rng)))
            res = max(res, channels.completeness_residual(ch.operators))
            k1 = channels.KrausChannel(sampling.random_kraus(d, 3, rng))
            k2 = channels.KrausChannel(sampling.random_kraus(d, 2, rng))
            res = max(res, channels.completeness_residual(switch.switched_kraus(k1, k2).operators))
    return res


def check_hiding_invariance(rng):
    res = 0.0
    for d in (2, 3, 4):
        spec = channels.HidingSpec.square(sampling.random_spectrum(d, rng))
        ch = channels.hiding_channel(spec)
        for _ in range(20):
            rho = sampling.random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1)))
            res = _max(res, channels.apply(ch, rho).matrix - np.diag(spec.spectrum))
    return res


def check_nohiding(rng):
    res = 0.0
    for d in (2, 3, 4):
        spec = channels.HidingSpec.square(sampling.random_spectrum(d, rng))
        for _ in range(10):
            psi = sampling.random_pure_state(d, rng)
            out = channels.dilate(spec, psi)
            res = _max(res, channels.system_marginal(out).matrix - np.diag(spec.spectrum))
            recovered = channels.recover_input(out)
            fid = np.vdot(psi.amplitudes, recovered.matrix @ psi.amplitudes).real
            res = max(res, abs(1.0 - fid))
    return res


def check_switch_closed_form(rng):
    res = 0.0
    for d in (2, 3, 4):
        for _ in range(100):
            spectrum = sampling.random_spectrum(d, rng)
            ch1, ch2 = _hiding_pair(spectrum)
            rho = sampling.random_pure_state(d, rng).density()
            c = switch.ControlQubit(rng.uniform())
            brute = switch.apply_switch(ch1, ch2, rho, c).joint.matrix
            closed = switch.hiding_switch_closed_form(np.diag(spectrum), rho, c).joint.matrix
            res = _max(res, brute - closed)
    return res


def check_switch_dilation(rng):
    res = 0.0
    for d in (2, 3):
        for _ in range(10):
            ch1, ch2 = _hiding_pair(sampling.random_spectrum(d, rng))
            psi = sampling.random_pure_state(d, rng)
            c = switch.ControlQubit(rng.uniform())
            dil = switch.switch_dilation(ch1, ch2, psi, c)
            res = max(res, abs(np.linalg.norm(dil.amplitudes) - 1.0))
            brute = switch.apply_switch(ch1, ch2, psi.density(), c).joint.matrix
            res = _max(res, switch.dilation_marginal(dil).matrix - brute)
    return res


def check_masking(rng):
    res = 0.0
    for d in (2, 3):
        for _ in range(20):
            spectrum = sampling.random_spectrum(d, rng)
            ch1, ch2 = _hiding_pair(spectrum)
            rho = sampling.random_density_matrix(d, rng)
            c = switch.ControlQubit(rng.uniform())
            out = switch.apply_switch(ch1, ch2, rho, c)
            system, control = metrics.masking_reduced_states(out)
            sigma = np.diag(spectrum)
            t = np.trace(sigma @ rho.matrix @ sigma).real
            expected = np.array([[c.p, t * c.coherence], [t * c.coherence, 1.0 - c.p]])
            res = _max(res, system.matrix - sigma)
            res = _max(res, control.matrix - expected)
    return res


def check_conditioning(rng):
    res = 0.0
    for d in (2, 3, 4):
        for _ in range(20):
            spectrum = sampling.random_spectrum(d, rng)
            ch1, ch2 = _hiding_pair(spectrum)
            rho = sampling.random_pure_state(d, rng).density()
            c = switch.ControlQubit(rng.uniform())
            out = switch.apply_switch(ch1, ch2, rho, c)
            sigma = np.diag(spectrum)
            srs = sigma @ rho.matrix @ sigma
            probs = 0.0
            for s in (1, -1):
                cond = switch.condition_on_control(out, s)
                res = _max(res, cond.unnormalized.matrix - (sigma / 2 + s * c.coherence * srs))
                probs += cond.prob
            res = max(res, abs(probs - 1.0))
    return res


def _conditioned_oracle(spectrum, psi, p, sign):
    ch1, ch2 = _hiding_pair(spectrum)
    out = switch.apply_switch(ch1, ch2, psi.density(), switch.ControlQubit(p))
    return switch.condition_on_control(out, sign)


def check_fidelity(rng):
    res = 0.0
    for d in (2, 3):
        for _ in range(30):
            spectrum = sampling.random_spectrum(d, rng)
            psi = sampling.random_pure_state(d, rng)
            p = rng.uniform()
            cond = _conditioned_oracle(spectrum, psi, p, "+")
            direct = metrics.fidelity_pure(psi, cond.normalized)
            closed = metrics.conditional_fidelity_closed_form(spectrum, psi, p)
            res = max(res, abs(direct - closed))
            floor = float(np.abs(psi.amplitudes) ** 2 @ spectrum)
            res = max(res, max(floor - closed, 0.0))
    return res


def check_coherence(rng):
    res = 0.0
    for d in (2, 3, 4):
        for _ in range(20):
            spectrum = sampling.random_spectrum(d, rng)
            psi = sampling.random_pure_state(d, rng)
            p = rng.uniform()
            for s in ("+", "-"):
                try:
                    cond = _conditioned_oracle(spectrum, psi, p, s)
                except DegenerateOutcomeError:
                    continue
                closed = metrics.conditional_coherence_closed_form(spectrum, psi, p, s)
                res = max(res, abs(metrics.l1_coherence(cond.normalized) - closed))
    return res


def check_work_values(rng):
    state = PureState(np.array([1.0, 1.0]) / np.sqrt(2))
    w_sigma = metrics.entropy_and_work(DensityMatrix(np.eye(2) / 2)).work
    w_plus = metrics.entropy_and_work(_conditioned_oracle((0.5, 0.5), state, 0.5, "+").normalized).work
    w_minus = metrics.entropy_and_work(_conditioned_oracle((0.5, 0.5), state, 0.5, "-").normalized).work
    if abs(w_sigma) > 1e-12:
        return 1.0
    # reported values are rounded to three decimals
    return max(abs(w_plus - 0.020), abs(w_minus - 0.057))


def check_eigenvalues(rng):
    res = 0.0
    for _ in range(50):
        spectrum = sampling.random_spectrum(2, rng)
        psi = sampling.random_pure_state(2, rng)
        p = rng.uniform()
        for s in ("+", "-"):
            try:
                cond = _conditioned_oracle(spectrum, psi, p, s)
            except DegenerateOutcomeError:
                continue
            numeric = hermitian_eig(cond.normalized.matrix)[0]
            closed = sorted(metrics.conditional_eigenvalues_closed_form(spectrum, psi, p, s))
            res = _max(res, numeric - closed)
    return res


def _random_pair(rng):
    theta = rng.uniform(0, np.pi / 2)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=2))
    return entangled.SchmidtPair(np.cos(theta) * phases[0], np.sin(theta) * phases[1])


def check_alpha(rng):
    res = 0.0
    for _ in range(30):
        pair = _random_pair(rng)
        p0 = rng.uniform()
        p = rng.uniform()
        out = entangled.switch_on_half(pair, (p0, 1 - p0), switch.ControlQubit(p))
        closed_out = entangled.switch_on_half_closed_form(pair, (p0, 1 - p0), switch.ControlQubit(p))
        res = _max(res, out.joint.matrix - closed_out.joint.matrix)
        total = 0.0
        for s in ("+", "-"):
            try:
                alpha = entangled.conditional_alpha(out, s)
            except DegenerateOutcomeError:
                continue
            res = _max(res, alpha.alpha.matrix - entangled.alpha_closed_form(pair, (p0, 1 - p0), p, s))
            total += alpha.prob
        res = max(res, abs(total - 1.0))
    return res


def check_ppt(rng):
    res = 0.0
    for _ in range(30):
        pair = _random_pair(rng)
        p0 = rng.uniform()
        p = rng.uniform()
        out = entangled.switch_on_half(pair, (p0, 1 - p0), switch.ControlQubit(p))
        for s in ("+", "-"):
            try:
                alpha = entangled.conditional_alpha(out, s).alpha
            except DegenerateOutcomeError:
                continue
            report = entangled.ppt_report(alpha, entangled.ClosedFormParams(pair, (p0, 1 - p0), p, s))
            if not report.separable:
                return 1.0
            res = max(res, report.residual)
    return res


def check_entanglement_fidelity(rng):
    res = 0.0
    for _ in range(30):
        c0 = rng.uniform()
        p0 = rng.uniform()
        pair = entangled.SchmidtPair.from_real(c0)
        out = entangled.switch_on_half(pair, (p0, 1 - p0), switch.ControlQubit(0.5))
        alpha = entangled.conditional_alpha(out, "+").alpha.normalize()
        direct = entangled.entanglement_fidelity(pair, alpha)
        res = max(res, abs(direct - entangled.entanglement_fidelity_closed_form(c0, p0)))
    return res


def check_modified_fidelity(rng):
    res = 0.0
    for _ in range(5):
        pair = _random_pair(rng)
        p0 = rng.uniform()
        out = entangled.switch_on_half(pair, (p0, 1 - p0), switch.ControlQubit(rng.uniform()))
        alpha = entangled.conditional_alpha(out, "+").alpha.normalize()
        plain = entangled.entanglement_fidelity(pair, alpha)
        best = entangled.modified_entanglement_fidelity(pair, alpha)
        res = max(res, max(plain - best.value, 0.0))
        u = best.best_unitary
        res = _max(res, u.conj().T @ u - np.eye(2))
    return res


CHECKS: tuple[Check, ...] = (
    Check("completeness", "Kraus completeness of hiding and switched channels", 1e-12, check_completeness),
    Check("eq2_hiding_invariance", "hiding map sends every input to sigma", 1e-12, check_hiding_invariance),
    Check("nohiding_dilation", "dilation marginal is sigma, ancilla holds the input", 1e-10, check_nohiding),
    Check("eq5_closed_form", "switched hiding maps: brute force vs closed form", 1e-10, check_switch_closed_form),
    Check("eq6_switch_dilation", "isometric switch traces down to the channel output", 1e-10, check_switch_dilation),
    Check("eq7_eq8_masking", "system and control marginals", 1e-10, check_masking),
    Check("eq11_conditioning", "control-conditioned system blocks", 1e-10, check_conditioning),
    Check("eq12_fidelity", "conditional fidelity closed form and its lower bound", 1e-10, check_fidelity),
    Check("eq13_coherence", "l1 coherence of conditional states", 1e-10, check_coherence),
    Check("eq14_work_values", "extractable work in the uniform qubit case", 5e-4, check_work_values),
    Check("eq15_eigenvalues", "qubit conditional eigenvalues", 1e-10, check_eigenvalues),
    Check("eq18_alpha", "conditional two-qubit states after switching on B", 1e-10, check_alpha),
    Check("eq19_ppt", "partial-transpose eigenvalues and separability", 1e-10, check_ppt),
    Check("eq20_entanglement_fidelity", "entanglement fidelity at p = 1/2", 1e-10, check_entanglement_fidelity),
    Check("eq21_modified_fidelity", "local-unitary optimized fidelity bounds", 1e-10, check_modified_fidelity),
)


def select(only=None) -> list[Check]:
    """Checks whose name equals or starts with one of ``only`` (all if empty)."""
    if not only:
        return list(CHECKS)
    chosen = [c for c in CHECKS if any(c.name == o or c.name.startswith(o) for o in only)]
    if not chosen:
        names = ", ".join(c.name for c in CHECKS)
        raise KeyError(f"no check matches {list(only)}; available: {names}")
    return chosen


def run_checks(only=None, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    results = []
    for check in select(only):
        rng = np.random.default_rng([seed, sum(map(ord, check.name))])
        t0 = time.perf_counter()
        try:
            residual = float(check.fn(rng))
            error = None
        except Exception as exc:  # a crashing check is a failing check
            residual, error = float("inf"), f"{type(exc).__name__}: {exc}"
        if not np.isfinite(residual) and error is None:
            error = "non-finite residual"
        results.append(CheckResult(check.name, check.description, residual, check.tolerance,
                                   time.perf_counter() - t0, error))
    return results
