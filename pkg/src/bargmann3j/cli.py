"""Command-line interface: ``bargmann3j {exact,compare,sweep,verify}``.

Exit codes: 0 success, 1 internal check failed (oracle mismatch, failing
suite), 2 bad input or unwritable output.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import bargmann_moment_3j, racah_3j
from .geometry import EPS_CAUSTIC, EPS_FUZZ, Classification, GeometryError, classify_configuration
from .halfint import HalfInt, JmConfig, SelectionOutcome, parse_halfint, selection_rules
from .semiclassical import Convention, SignConvention, asymptotic_3j
from .verify import format_report, run_all

__all__ = ["main", "build_parser", "CompareRow", "compare_row", "SweepSpec", "sweep_rows", "CSV_HEADER"]

CSV_HEADER = [
    "twice_j1",
    "twice_j2",
    "twice_j3",
    "twice_m1",
    "twice_m2",
    "twice_m3",
    "exact",
    "asymptotic",
    "S",
    "delta_z",
    "abs_err",
    "status",
]

CONFIG_KEYS = {"convention", "sign", "eps_caustic", "eps_fuzz"}


class UsageError(Exception):
    pass


def fmt(x: Optional[float]) -> str:
    return "" if x is None else format(float(x), ".12g")


@dataclass(frozen=True)
class Settings:
    convention: Convention = Convention.HALF_SHIFT
    sign: SignConvention = SignConvention.PLUS
    eps_caustic: float = EPS_CAUSTIC
    eps_fuzz: float = EPS_FUZZ


def _enum_value(enum_cls, text: str):
    try:
        return enum_cls(text)
    except ValueError:
        choices = ", ".join(e.value for e in enum_cls)
        raise UsageError(f"{text!r} is not one of: {choices}") from None


def load_settings(path: Optional[str]) -> dict:
    """key=value lines; '#' starts a comment."""
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    parser = configparser.ConfigParser(comment_prefixes=("#", ";"))
    try:
        parser.read_string("[settings]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"malformed config file: {exc}") from None
    out = dict(parser["settings"])
    unknown = set(out) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return out


def resolve_settings(args) -> Settings:
    raw = load_settings(getattr(args, "config", None))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    try:
        return Settings(
            convention=_enum_value(Convention, raw.get("convention", Convention.HALF_SHIFT.value)),
            sign=_enum_value(SignConvention, raw.get("sign", SignConvention.PLUS.value)),
            eps_caustic=float(raw.get("eps_caustic", EPS_CAUSTIC)),
            eps_fuzz=float(raw.get("eps_fuzz", EPS_FUZZ)),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_config(values: Sequence[str]) -> JmConfig:
    if len(values) != 6:
        raise UsageError("expected six numbers: j1 j2 j3 m1 m2 m3")
    try:
        hv = [parse_halfint(v) for v in values]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        return JmConfig(tuple(hv[:3]), tuple(hv[3:]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------- exact


def cmd_exact(args, out) -> int:
    c = parse_config(args.numbers)
    ev = racah_3j(c)
    status = 0
    oracle = None
    if args.oracle:
        oracle = "MATCH" if bargmann_moment_3j(c).value == ev.value else "MISMATCH"
        status = 0 if oracle == "MATCH" else 1
    if args.format == "json":
        doc = {
            "j": [str(x) for x in c.j],
            "m": [str(x) for x in c.m],
            "sign": ev.value.sign,
            "radicand": str(ev.value.radicand),
            "value": float(ev),
            "text": str(ev),
            "zero_reason": None if ev.zero_reason is None else str(ev.zero_reason),
        }
        if oracle is not None:
            doc["oracle"] = oracle
        out.write(json.dumps(doc) + "\n")
    else:
        if ev.zero_reason is not None or ev.value.is_zero():
            out.write(f"{ev}\n")
        else:
            out.write(f"{ev} ≈ {fmt(float(ev))}\n")
        if oracle is not None:
            out.write(f"oracle: {oracle}\n")
    return status


# ---------------------------------------------------------------- compare


@dataclass(frozen=True)
class CompareRow:
    config: JmConfig
    exact: float
    asymptotic: Optional[float]
    S: Optional[float]
    delta_z: Optional[float]
    abs_err: Optional[float]
    status: str

    def csv_fields(self) -> list[str]:
        return [str(x) for x in self.config.twice_j + self.config.twice_m] + [
            fmt(self.exact),
            fmt(self.asymptotic),
            fmt(self.S),
            fmt(self.delta_z),
            fmt(self.abs_err),
            self.status,
        ]

    def as_dict(self) -> dict:
        return {
            "j": [str(x) for x in self.config.j],
            "m": [str(x) for x in self.config.m],
            "exact": self.exact,
            "asymptotic": self.asymptotic,
            "S": self.S,
            "delta_z": self.delta_z,
            "abs_err": self.abs_err,
            "status": self.status,
        }


def compare_row(c: JmConfig, settings: Settings = Settings()) -> CompareRow:
    """Exact vs leading-order value; abs_err compares magnitudes (the sign is undetermined)."""
    outcome = selection_rules(c)
    exact = float(racah_3j(c))
    if outcome is not SelectionOutcome.VALID:
        return CompareRow(c, exact, None, None, None, None, str(outcome))
    status = classify_configuration(c, shift=0.0, eps=settings.eps_caustic, fuzz=settings.eps_fuzz)
    if status is not Classification.ALLOWED:
        return CompareRow(c, exact, None, None, None, None, str(status))
    try:
        r = asymptotic_3j(c, settings.convention, settings.sign, settings.eps_caustic, settings.eps_fuzz)
    except GeometryError as exc:
        name = type(exc).__name__
        label = {"CausticError": "Caustic", "ClassicallyForbidden": "Forbidden"}.get(name, name)
        return CompareRow(c, exact, None, None, None, None, label)
    err = abs(abs(r.value) - abs(exact))
    return CompareRow(c, exact, r.value, r.S, r.delta_z, err, str(Classification.ALLOWED))


def cmd_compare(args, out) -> int:
    settings = resolve_settings(args)
    row = compare_row(parse_config(args.numbers), settings)
    if args.format == "json":
        out.write(json.dumps(row.as_dict()) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerow(row.csv_fields())
    else:
        out.write(f"config     {row.config}\n")
        out.write(f"status     {row.status}\n")
        out.write(f"exact      {fmt(row.exact)}\n")
        out.write(f"asymptotic {fmt(row.asymptotic)}\n")
        out.write(f"S          {fmt(row.S)}\n")
        out.write(f"delta_z    {fmt(row.delta_z)}\n")
        out.write(f"abs_err    {fmt(row.abs_err)}\n")
    return 0


# ---------------------------------------------------------------- sweep


@dataclass(frozen=True)
class SweepSpec:
    base: JmConfig
    axis: str  # "scale-j" or "vary-m1"
    values: tuple = field(default_factory=tuple)

    def configs(self) -> list[JmConfig]:
        if not self.values:
            raise UsageError("the value list is empty")
        if self.axis == "scale-j":
            out = []
            for lam in self.values:
                try:
                    out.append(self.base.scaled(Fraction(lam)))
                except ValueError as exc:
                    raise UsageError(str(exc)) from None
            return out
        if self.axis == "vary-m1":
            m2 = self.base.m[1]
            return [JmConfig(self.base.j, (HalfInt(v.twice), m2, -(v + m2))) for v in self.values]
        raise UsageError(f"unknown sweep axis {self.axis!r}")


def sweep_rows(spec: SweepSpec, settings: Settings = Settings()) -> list[CompareRow]:
    return [compare_row(c, settings) for c in spec.configs()]


def _sweep_values(args, base: JmConfig):
    if args.axis == "scale-j":
        if args.values is None:
            raise UsageError("scale-j needs --values")
        try:
            return tuple(Fraction(v) for v in args.values)
        except (ValueError, ZeroDivisionError):
            raise UsageError("scale factors must be rationals such as 2 or 3/2") from None
    if args.values is None:
        tj = base.twice_j[0]
        return tuple(HalfInt(t) for t in range(-tj, tj + 1, 2))
    try:
        return tuple(parse_halfint(v) for v in args.values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_sweep(args, out) -> int:
    settings = resolve_settings(args)
    base = parse_config(list(args.j) + list(args.m))
    spec = SweepSpec(base, args.axis, _sweep_values(args, base))
    rows = sweep_rows(spec, settings)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_fields())
    if args.out in (None, "-"):
        out.write(buf.getvalue())
    else:
        try:
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                fh.write(buf.getvalue())
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(args, out) -> int:
    results = run_all(args.level, args.seed)
    out.write(format_report(results))
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # let "-1/2" through as a positional value
        self._negative_number_matcher = re.compile(r"^-(\d+(/\d+)?|\d*\.\d+)$")
        self._has_negative_number_optionals = []

    def error(self, message):
        raise UsageError(message)


def _add_semiclassical_flags(p):
    p.add_argument("--convention", choices=[c.value for c in Convention], default=None)
    p.add_argument("--sign", choices=[s.value for s in SignConvention], default=None)
    p.add_argument("--eps-caustic", dest="eps_caustic", default=None)
    p.add_argument("--eps-fuzz", dest="eps_fuzz", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bargmann3j", description="Exact and semiclassical Wigner 3j-symbols.")
    parser.add_argument("--config", help="key=value file with defaults (convention, sign, eps_caustic, eps_fuzz)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", help="exact value from the Racah sum")
    p.add_argument("numbers", nargs=6, metavar="N", help="j1 j2 j3 m1 m2 m3 (e.g. 3/2 or 1.5)")
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.add_argument("--oracle", action="store_true", help="cross-check with the Gaussian-moment formula")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("compare", help="exact vs asymptotic value for one configuration")
    p.add_argument("numbers", nargs=6, metavar="N", help="j1 j2 j3 m1 m2 m3")
    p.add_argument("--format", choices=["human", "json", "csv"], default="human")
    _add_semiclassical_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="CSV table of exact vs asymptotic values")
    p.add_argument("--j", nargs=3, required=True, metavar="J")
    p.add_argument("--m", nargs=3, required=True, metavar="M")
    p.add_argument("--axis", choices=["scale-j", "vary-m1"], default="scale-j")
    p.add_argument("--values", nargs="*", default=None, help="scale factors or m1 values")
    p.add_argument("--out", default=None, help="output CSV path (default stdout)")
    _add_semiclassical_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"bargmann3j: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
