"""Command-line entry point: ``switchsim {verify,demo-work,demo-mask,condition,sweep}``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, io, sweep, verify
from .channels import HidingSpec, KrausChannel, hiding_channel
from .errors import DegenerateOutcomeError, SwitchSimError
from .metrics import entropy_and_work, l1_coherence, maskable_pair_check, masking_reduced_states
from .switch import ControlQubit, apply_switch, condition_on_control, sign_value
from .tensor_core import DensityMatrix, PureState


class UsageError(Exception):
    pass


def parse_amplitudes(text: str) -> np.ndarray:
    """``"0.7071,0.7071"`` or ``"1,0.5+0.5j"`` -> complex vector."""
    try:
        return np.array([complex(tok.strip().replace(" ", "")) for tok in text.split(",")], dtype=np.complex128)
    except ValueError as exc:
        raise UsageError(f"cannot parse amplitudes {text!r}") from exc


def parse_spectrum(text: str) -> HidingSpec:
    try:
        values = [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse spectrum {text!r}") from exc
    return HidingSpec.square(values)


def parse_grid(text: str) -> dict:
    """``"c0=101,p0=101"`` -> ``{"c0": 101, "p0": 101}``."""
    grid = {}
    for tok in text.split(","):
        name, _, n = tok.partition("=")
        if not n:
            raise UsageError(f"grid entries look like axis=points, got {tok!r}")
        try:
            grid[name.strip()] = int(n)
        except ValueError as exc:
            raise UsageError(f"grid size for {name!r} must be an integer") from exc
    return grid


def _state(args, dim: int | None = None) -> DensityMatrix:
    if getattr(args, "state_file", None):
        obj = io.load(args.state_file)
        rho = obj.density() if isinstance(obj, PureState) else obj
    else:
        rho = PureState.from_unnormalized(parse_amplitudes(args.state)).density()
    if dim is not None and rho.dim != dim:
        raise UsageError(f"state has dimension {rho.dim}, channel acts on {dim}")
    return rho


def _pure(args) -> PureState:
    return PureState.from_unnormalized(parse_amplitudes(args.state))


def _fmt_matrix(m: np.ndarray) -> str:
    def cell(z):
        z = complex(z)
        if abs(z.imag) < 5e-13:
            return f"{z.real: .6f}"
        return f"{z.real: .6f}{z.imag:+.6f}j"

    return "\n".join("  [" + ", ".join(cell(z) for z in row) + "]" for row in m)


def cmd_verify(args) -> int:
    try:
        results = verify.run_checks(args.only, seed=args.seed)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return 1
    print(f"all {len(results)} checks passed")
    return 0


def cmd_demo_work(args) -> int:
    spec = parse_spectrum(args.spectrum)
    psi = _pure(args)
    if psi.dim != spec.in_dim:
        raise UsageError("state and spectrum dimensions differ")
    ch = hiding_channel(spec)
    out = apply_switch(ch, ch, psi.density(), ControlQubit(args.p))
    print(f"W(σ)={entropy_and_work(spec.sigma).work:.4f}")
    for label, s in (("ρ₊", "+"), ("ρ₋", "-")):
        try:
            w = entropy_and_work(condition_on_control(out, s).normalized).work
            print(f"W({label})={w:.4f}")
        except DegenerateOutcomeError:
            print(f"W({label})=undefined (outcome probability 0)")
    return 0


def cmd_demo_mask(args) -> int:
    spec = parse_spectrum(args.spectrum)
    ch = hiding_channel(spec)
    c = ControlQubit(args.p)
    rho = _state(args, spec.in_dim)
    system, control = masking_reduced_states(apply_switch(ch, ch, rho, c))
    print("system marginal:")
    print(_fmt_matrix(system.matrix))
    print("control marginal:")
    print(_fmt_matrix(control.matrix))
    if args.other_state:
        other = PureState.from_unnormalized(parse_amplitudes(args.other_state))
        verdict = maskable_pair_check(spec, _pure(args), other)
        _, control2 = masking_reduced_states(apply_switch(ch, ch, other.density(), c))
        gap = float(np.max(np.abs(control.matrix - control2.matrix)))
        print(f"maskable={verdict.maskable} residual={verdict.residual:.6g} "
              f"Tr(σρσ)={verdict.trace_psi:.6g} vs {verdict.trace_phi:.6g} control_gap={gap:.3e}")
    return 0


def cmd_condition(args) -> int:
    c = ControlQubit(args.p)
    if args.channel_file:
        ch = io.load_channel(args.channel_file)
    else:
        ch = hiding_channel(parse_spectrum(args.spectrum))
    if not isinstance(ch, KrausChannel):
        raise UsageError("channel file does not describe a channel")
    rho = _state(args, ch.in_dim)
    out = apply_switch(ch, ch, rho, c)
    signs = ("+", "-") if args.sign is None else (args.sign,)
    for s in signs:
        label = "ρ₊" if sign_value(s) > 0 else "ρ₋"
        try:
            cond = condition_on_control(out, s)
        except DegenerateOutcomeError as exc:
            print(f"{label}: degenerate outcome (probability {exc.prob:.3e})")
            continue
        work = entropy_and_work(cond.normalized)
        print(f"{label}: prob={cond.prob:.6f} l1_coherence={l1_coherence(cond.normalized):.6f} "
              f"W={work.work:.6f}")
        print(_fmt_matrix(cond.normalized.matrix))
    return 0


def cmd_sweep(args) -> int:
    spec = sweep.SweepSpec(
        quantity=args.quantity,
        grid=parse_grid(args.grid),
        p=args.p,
        sign=args.sign,
        spectrum=tuple(float(x) for x in args.spectrum.split(",")),
        state=tuple(parse_amplitudes(args.state)),
    )
    path = sweep.write_csv(spec, args.out)
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="switchsim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"switchsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run every closed-form vs numerical check")
    p.add_argument("--only", action="append", help="run checks whose name starts with this (repeatable)")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    def common(sp, state=True):
        sp.add_argument("--spectrum", default="0.5,0.5", help="hiding-map output spectrum, e.g. 0.3,0.7")
        if state:
            sp.add_argument("--state", default="0.7071,0.7071",
                            help="input amplitudes, comma-separated re or re+imj (renormalized)")
        sp.add_argument("--p", type=float, default=0.5, help="control weight on |0>")

    p = sub.add_parser("demo-work", help="extractable work of sigma and the conditional states")
    common(p)
    p.set_defaults(func=cmd_demo_work)

    p = sub.add_parser("demo-mask", help="marginals of the switch output")
    common(p)
    p.add_argument("--state-file", help="JSON state to use instead of --state")
    p.add_argument("--other-state", help="second input to compare against")
    p.set_defaults(func=cmd_demo_mask)

    p = sub.add_parser("condition", help="print the control-conditioned states")
    common(p)
    p.add_argument("--sign", choices=["+", "-"], help="only this outcome")
    p.add_argument("--state-file", help="JSON state to use instead of --state")
    p.add_argument("--channel-file", help="JSON channel to switch instead of the hiding map")
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("sweep", help="grid sweep to CSV")
    common(p)
    p.add_argument("--quantity", required=True, choices=sweep.QUANTITIES)
    p.add_argument("--grid", default="c0=101,p0=101", help="axes among c0,p0,p with point counts")
    p.add_argument("--sign", default="+", choices=["+", "-"])
    p.add_argument("--out", required=True, help="CSV destination")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except SwitchSimError as exc:
        print(f"switchsim: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
