"""Batch verification driver and invariant calculator.

Subcommands:
  verify    run the identity suites over a configured grid and write a JSON
            report; exit 0 iff everything holds.
  tau-lens  print the perturbative invariant series of a lens space.
  theta     print the theta-diagram weight against its closed form.

Flags override a TOML config file; the WEYLLAB_CONFIG environment variable
overrides the default config path.  Exit codes: 0 pass, 1 verification
failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import tempfile
import time
from dataclasses import dataclass, field, fields
from fractions import Fraction

from . import __version__
from .diagrams import (
    JacobiDiagram,
    bubble_with_legs,
    dumbbell,
    flip_vertex,
    strut,
    strut_power,
    theta,
    weight,
    wu_check,
    y_diagram,
)
from .exact import HbarSeries, MultiPoly
from .laplace import (
    c_constant,
    check_dhd,
    check_hcrf,
    e_op,
    e_value,
    g_star_space,
    h_star_space,
    i2_trivial,
    lens_tau,
    o_eq_e_check,
    reduce_identity,
)
from .liealg import (
    LieAlgebraData,
    ad_apply,
    build_sl,
    casimir,
    cubic_casimir_sl3,
    sym_char,
)
from .oracle import McConfig, gauss_mc, weyl_ratio
from .rootsys import build_root_system, disc_poly, invariants, weyl_invariant_basis

SUITES = ("hcrf", "dhd", "reduce", "wu", "oe", "theta", "mc")

_ALGEBRAS = ("sl2", "sl3")
_ROOT_SYSTEMS = ("A1", "A2", "A3", "B2", "G2")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    algebras: tuple[str, ...] = _ALGEBRAS
    root_systems: tuple[str, ...] = _ROOT_SYSTEMS
    max_degree: int = 8
    series_order: int = 8
    framings: tuple[int, ...] = (1, -1, 2, -2, 3)
    mc_samples: int = 100_000
    mc_seed: int = 42
    mc_fhbar: float = -0.5
    output: str | None = None

    def validate(self) -> "SuiteConfig":
        if self.max_degree < 2 or self.max_degree % 2:
            raise ConfigError("max_degree must be an even bound >= 2")
        if self.series_order < 0:
            raise ConfigError("series_order must be nonnegative")
        if not self.framings or any(not isinstance(f, int) or f == 0 for f in self.framings):
            raise ConfigError("framings must be nonzero integers")
        for a in self.algebras:
            if a not in _ALGEBRAS:
                raise ConfigError(f"unknown algebra {a!r}; choose from {_ALGEBRAS}")
        for r in self.root_systems:
            if r not in _ROOT_SYSTEMS:
                raise ConfigError(f"unknown root system {r!r}; choose from {_ROOT_SYSTEMS}")
        if self.mc_samples < 10_000:
            raise ConfigError("mc_samples must be at least 10^4")
        if not self.mc_fhbar < 0:
            raise ConfigError("mc_fhbar must be negative")
        return self

    def to_json_dict(self) -> dict:
        return {
            "algebras": list(self.algebras),
            "root_systems": list(self.root_systems),
            "max_degree": self.max_degree,
            "series_order": self.series_order,
            "framings": list(self.framings),
            "mc_samples": self.mc_samples,
            "mc_seed": self.mc_seed,
            "mc_fhbar": repr(self.mc_fhbar),
            "output": self.output,
        }


@dataclass
class Report:
    config: SuiteConfig
    checks: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def overall_pass(self) -> bool:
        return all(c.get("equal", c.get("within", True)) for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "tool": {"name": "weyllab", "version": __version__},
            "config": self.config.to_json_dict(),
            "checks": self.checks,
            "overall_pass": self.overall_pass,
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
        }


def _lie_algebra(name: str) -> LieAlgebraData:
    return build_sl(2 if name == "sl2" else 3)


def _root_system(name: str):
    return build_root_system(name[0], int(name[1]))


def invariant_basis(L: LieAlgebraData, max_degree: int) -> list[tuple[str, MultiPoly]]:
    """Monomials in the generating invariants up to the degree bound,
    including the constant 1 (which pins the reduction constant)."""
    c = casimir(L)
    if L.name == "sl2":
        out = []
        for a in range(max_degree // 2 + 1):
            out.append((f"C^{a}" if a != 1 else "C", c**a))
        return out
    c3 = cubic_casimir_sl3(L)
    out = []
    for total in range(max_degree + 1):
        for b in range(total // 3 + 1):
            rest = total - 3 * b
            if rest % 2:
                continue
            a = rest // 2
            if 2 * a + 3 * b != total:
                continue
            name = "*".join(
                part
                for part in (
                    f"C^{a}" if a > 1 else ("C" if a == 1 else ""),
                    f"C3^{b}" if b > 1 else ("C3" if b == 1 else ""),
                )
                if part
            ) or "1"
            out.append((name, c**a * c3**b))
    return out


def _sample_polys(L: LieAlgebraData, count: int = 4, degree: int = 4) -> list[MultiPoly]:
    """Deterministic pseudo-random polynomials of bounded degree."""
    rng = random.Random(12345 + L.dim)
    gens = L.ring.gens()
    out = []
    for _ in range(count):
        p = L.ring.zero()
        for _ in range(5):
            term = L.ring.const(rng.randint(-3, 3))
            for _ in range(rng.randint(0, degree)):
                term = term * gens[rng.randrange(len(gens))]
            p = p + term
        out.append(p)
    return out


def wu_test_diagrams() -> list[tuple[str, JacobiDiagram]]:
    return [
        ("strut", strut()),
        ("strut^2", strut_power(2)),
        ("strut^3", strut_power(3)),
        ("y", y_diagram()),
        ("dumbbell", dumbbell()),
        ("bubble", bubble_with_legs()),
        ("theta", theta()),
    ]


def _series_pair(record: dict, lhs: HbarSeries, rhs: HbarSeries) -> dict:
    record["lhs"] = lhs.text()
    record["rhs"] = rhs.text()
    record["equal"] = lhs == rhs
    return record


# -- suites ---------------------------------------------------------------------


def _suite_hcrf(cfg: SuiteConfig, checks: list[dict]) -> None:
    for name in cfg.algebras:
        L = _lie_algebra(name)
        for label, p in invariant_basis(L, cfg.max_degree):
            lhs, rhs = check_hcrf(L, p)
            checks.append(
                {
                    "suite": "hcrf",
                    "identity": "harish_chandra_restriction",
                    "algebra": name,
                    "input": label,
                    "lhs": lhs.text(),
                    "rhs": rhs.text(),
                    "equal": lhs == rhs,
                }
            )


def _suite_dhd(cfg: SuiteConfig, checks: list[dict]) -> None:
    for name in cfg.root_systems:
        rs = _root_system(name)
        image = h_star_space(rs)
        from .laplace import laplacian

        value = laplacian(image, disc_poly(rs))
        checks.append(
            {
                "suite": "dhd",
                "identity": "laplacian_kills_disc",
                "root_system": name,
                "lhs": value.text(),
                "rhs": "0",
                "equal": value.is_zero(),
            }
        )
    for name in cfg.algebras:
        L = _lie_algebra(name)
        c = c_constant(L.root_system)
        for label, p in invariant_basis(L, cfg.max_degree):
            if max(p.total_degree(), 0) % 2:
                continue
            lhs, rhs = check_dhd(L, p)
            checks.append(
                {
                    "suite": "dhd",
                    "identity": "iterated_laplacian_reduction",
                    "algebra": name,
                    "input": label,
                    "constant": str(c),
                    "lhs": str(lhs),
                    "rhs": str(rhs),
                    "equal": lhs == rhs,
                }
            )


def _suite_reduce(cfg: SuiteConfig, checks: list[dict], tamper_c: bool) -> None:
    for name in cfg.algebras:
        L = _lie_algebra(name)
        c = c_constant(L.root_system)
        c_used = c + 1 if tamper_c else None
        for f in cfg.framings:
            for label, p in invariant_basis(L, cfg.max_degree):
                lhs, rhs = reduce_identity(L, f, p, c_value=c_used)
                checks.append(
                    _series_pair(
                        {
                            "suite": "reduce",
                            "identity": "reduce_identity",
                            "algebra": name,
                            "framing": f,
                            "input": label,
                        },
                        lhs,
                        rhs,
                    )
                )
        space = g_star_space(L)
        for f in cfg.framings:
            for i, g in enumerate(_sample_polys(L)):
                for x in L.basis:
                    image = e_op(space, f, ad_apply(L, x, g))
                    checks.append(
                        {
                            "suite": "reduce",
                            "identity": "e_intertwiner",
                            "algebra": name,
                            "framing": f,
                            "input": f"ad_{x}(g{i})",
                            "lhs": image.text(),
                            "rhs": "0",
                            "equal": image.is_zero(),
                        }
                    )
        if name == "sl2":
            for i, g in enumerate(_sample_polys(L, degree=3)):
                for x in L.basis:
                    adg = ad_apply(L, x, g)
                    for k in range(1, 7):
                        value = sym_char(L, k, adg)
                        checks.append(
                            {
                                "suite": "reduce",
                                "identity": "char_intertwiner",
                                "algebra": name,
                                "input": f"ad_{x}(g{i}) on V_{k}",
                                "lhs": str(value),
                                "rhs": "0",
                                "equal": value == 0,
                            }
                        )


def _suite_wu(cfg: SuiteConfig, checks: list[dict]) -> None:
    for name in cfg.algebras:
        L = _lie_algebra(name)
        for f in (1, -1, 2):
            for label, d in wu_test_diagrams():
                lhs, rhs = wu_check(L, f, d)
                checks.append(
                    _series_pair(
                        {
                            "suite": "wu",
                            "identity": "bracket_vs_laplacian",
                            "algebra": name,
                            "framing": f,
                            "input": label,
                        },
                        lhs,
                        rhs,
                    )
                )


def _suite_oe(cfg: SuiteConfig, checks: list[dict]) -> None:
    for name in cfg.root_systems:
        rs = _root_system(name)
        basis = weyl_invariant_basis(rs, min(6, cfg.max_degree))
        for f in cfg.framings:
            for i, p in enumerate(basis):
                lhs, rhs = o_eq_e_check(rs, f, p, cfg.series_order)
                checks.append(
                    _series_pair(
                        {
                            "suite": "oe",
                            "identity": "moment_rule_equals_e",
                            "root_system": name,
                            "framing": f,
                            "input": f"w_inv_{i}(deg {max(p.total_degree(), 0)})",
                            "order": cfg.series_order,
                        },
                        lhs,
                        rhs,
                    )
                )
        c = c_constant(rs)
        phi = rs.phi_plus
        for f in (1, -1):
            series = i2_trivial(rs, f, 0)
            lead = series.coefficient(-phi).constant_value()
            expected = c / Fraction(-2 * f) ** phi
            checks.append(
                {
                    "suite": "oe",
                    "identity": "i2_leading_term",
                    "root_system": name,
                    "framing": f,
                    "lhs": str(lead),
                    "rhs": str(expected),
                    "equal": lead == expected,
                }
            )
            unit = lens_tau(rs, f, 10)
            checks.append(
                {
                    "suite": "oe",
                    "identity": "lens_unit",
                    "root_system": name,
                    "framing": f,
                    "order": 10,
                    "lhs": unit.text(),
                    "rhs": "1",
                    "equal": unit == HbarSeries.one().truncate(10),
                }
            )


def _suite_theta(cfg: SuiteConfig, checks: list[dict]) -> None:
    for name in cfg.algebras:
        L = _lie_algebra(name)
        value = weight(theta(), L).constant_value()
        expected = 24 * invariants(L.root_system).rho_norm_sq
        checks.append(
            {
                "suite": "theta",
                "identity": "theta_weight",
                "algebra": name,
                "lhs": str(value),
                "rhs": str(expected),
                "equal": value == expected,
            }
        )
        flipped = weight(flip_vertex(theta(), 0), L).constant_value()
        checks.append(
            {
                "suite": "theta",
                "identity": "theta_antisymmetry",
                "algebra": name,
                "lhs": str(flipped),
                "rhs": str(-value),
                "equal": flipped == -value,
            }
        )


def _suite_mc(cfg: SuiteConfig, checks: list[dict]) -> None:
    mc = McConfig(samples=cfg.mc_samples, seed=cfg.mc_seed, fhbar=cfg.mc_fhbar)
    fh = Fraction(cfg.mc_fhbar).limit_denominator(10**9)
    cases = []
    for name in cfg.algebras:
        L = _lie_algebra(name)
        space = g_star_space(L)
        c = casimir(L)
        cases.append((f"{name}:C", space, c))
        cases.append((f"{name}:C^2", space, c * c))
        hspace = h_star_space(L.root_system)
        disc = disc_poly(L.root_system)
        cases.append((f"{name}:disc^2", hspace, disc * disc))
    for label, space, p in cases:
        estimate, stderr = gauss_mc(space, mc, p)
        expected = float(e_value(space, p, fh))
        within = abs(estimate - expected) <= 4 * stderr
        checks.append(
            {
                "suite": "mc",
                "identity": "gaussian_oracle",
                "input": label,
                "estimate": repr(estimate),
                "stderr": repr(stderr),
                "expected": repr(expected),
                "samples": cfg.mc_samples,
                "seed": cfg.mc_seed,
                "within": within,
            }
        )
    for name in cfg.algebras:
        L = _lie_algebra(name)
        expected_ratio = (4 * math.pi) ** L.root_system.phi_plus / float(
            c_constant(L.root_system)
        )
        results = []
        for label, p in (("1", L.ring.one()), ("C", casimir(L))):
            ratio, stderr = weyl_ratio(L, mc, p)
            results.append((ratio, stderr))
            within = abs(ratio - expected_ratio) <= 4 * stderr
            checks.append(
                {
                    "suite": "mc",
                    "identity": "weyl_reduction_ratio",
                    "algebra": name,
                    "input": label,
                    "estimate": repr(ratio),
                    "stderr": repr(stderr),
                    "expected": repr(expected_ratio),
                    "samples": cfg.mc_samples,
                    "seed": cfg.mc_seed,
                    "within": within,
                }
            )
        (r1, s1), (r2, s2) = results
        combined = math.sqrt(s1 * s1 + s2 * s2)
        checks.append(
            {
                "suite": "mc",
                "identity": "ratio_p_independence",
                "algebra": name,
                "estimate": repr(r1 - r2),
                "stderr": repr(combined),
                "expected": "0.0",
                "samples": cfg.mc_samples,
                "seed": cfg.mc_seed,
                "within": abs(r1 - r2) <= 4 * combined,
            }
        )


_SUITE_RUNNERS = {
    "hcrf": lambda cfg, checks, tamper: _suite_hcrf(cfg, checks),
    "dhd": lambda cfg, checks, tamper: _suite_dhd(cfg, checks),
    "reduce": _suite_reduce,
    "wu": lambda cfg, checks, tamper: _suite_wu(cfg, checks),
    "oe": lambda cfg, checks, tamper: _suite_oe(cfg, checks),
    "theta": lambda cfg, checks, tamper: _suite_theta(cfg, checks),
    "mc": lambda cfg, checks, tamper: _suite_mc(cfg, checks),
}


def run_suite(
    config: SuiteConfig, suites: tuple[str, ...] = ("all",), tamper_c: bool = False
) -> Report:
    """Run the selected verification suites over the configured grid."""
    config.validate()
    selected = SUITES if "all" in suites else tuple(s for s in SUITES if s in suites)
    unknown = set(suites) - set(SUITES) - {"all"}
    if unknown:
        raise ConfigError(f"unknown suites: {sorted(unknown)}")
    report = Report(config=config)
    for suite in selected:
        start = time.perf_counter()
        _SUITE_RUNNERS[suite](config, report.checks, tamper_c)
        report.timings[suite] = time.perf_counter() - start
    return report


def write_report(report: Report, path: str) -> None:
    """Atomic JSON write: temp file in the target directory, then rename."""
    payload = json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".weyllab-report-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- invariant printers ----------------------------------------------------------


def compute_lens_tau(rs_name: str, p: int, order: int) -> str:
    rs = _root_system(rs_name)
    return lens_tau(rs, p, order).text()


def compute_theta(algebra: str, flip: bool = False) -> tuple[Fraction, Fraction]:
    L = _lie_algebra(algebra)
    d = flip_vertex(theta(), 0) if flip else theta()
    contraction = weight(d, L).constant_value()
    closed_form = 24 * invariants(L.root_system).rho_norm_sq
    return contraction, closed_form


# -- command line -----------------------------------------------------------------


def _load_config(path: str | None, args: argparse.Namespace) -> SuiteConfig:
    values: dict = {}
    if path:
        try:
            import tomllib  # Python >= 3.11
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        known = {f.name for f in fields(SuiteConfig)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for key in ("max_degree", "series_order", "mc_samples", "mc_seed", "mc_fhbar", "output"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "algebras", None):
        values["algebras"] = tuple(args.algebras.split(","))
    if getattr(args, "root_systems", None):
        values["root_systems"] = tuple(args.root_systems.split(","))
    if getattr(args, "framings", None):
        try:
            values["framings"] = tuple(int(x) for x in args.framings.split(","))
        except ValueError as exc:
            raise ConfigError(f"framings must be integers: {exc}") from exc
    for key in ("algebras", "root_systems", "framings"):
        if key in values and isinstance(values[key], list):
            values[key] = tuple(values[key])
    try:
        return SuiteConfig(**values).validate()
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyllab",
        description="Exact verification suites for Laplacian evaluation operators, "
        "weight systems, and lens-space invariant series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run verification suites, write a JSON report")
    verify.add_argument(
        "--suite",
        action="append",
        choices=SUITES + ("all",),
        default=None,
        help="suite to run (repeatable; default all)",
    )
    verify.add_argument("--config", default=None, help="TOML config file")
    verify.add_argument("--output", default=None, help="report path (default: report.json)")
    verify.add_argument("--max-degree", dest="max_degree", type=int, default=None)
    verify.add_argument("--series-order", dest="series_order", type=int, default=None)
    verify.add_argument("--algebras", default=None, help="comma-separated, e.g. sl2,sl3")
    verify.add_argument("--root-systems", dest="root_systems", default=None,
                        help="comma-separated, e.g. A1,A2,G2")
    verify.add_argument("--framings", default=None, help="comma-separated nonzero integers")
    verify.add_argument("--mc-samples", dest="mc_samples", type=int, default=None)
    verify.add_argument("--mc-seed", dest="mc_seed", type=int, default=None)
    verify.add_argument("--mc-fhbar", dest="mc_fhbar", type=float, default=None)
    verify.add_argument(
        "--tamper-c",
        action="store_true",
        help="negative control: corrupt the reduction constant and expect failure",
    )

    tau = sub.add_parser("tau-lens", help="print the lens-space invariant series")
    tau.add_argument("-p", "--framing", type=int, required=True, help="surgery framing (nonzero)")
    tau.add_argument("--algebra", default="A1", choices=_ROOT_SYSTEMS,
                     help="root system (default A1)")
    tau.add_argument("--order", type=int, default=10)

    th = sub.add_parser("theta", help="print the theta weight and its closed form")
    th.add_argument("--algebra", required=True, choices=_ALGEBRAS)
    th.add_argument("--flip-vertex", action="store_true",
                    help="negative control: reverse one cyclic order")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            config_path = args.config or os.environ.get("WEYLLAB_CONFIG")
            config = _load_config(config_path, args)
            suites = tuple(args.suite) if args.suite else ("all",)
            report = run_suite(config, suites=suites, tamper_c=args.tamper_c)
            output = config.output or "report.json"
            write_report(report, output)
            failures = [c for c in report.checks if not c.get("equal", c.get("within", True))]
            status = "PASS" if report.overall_pass else "FAIL"
            print(f"{status}: {len(report.checks)} checks, {len(failures)} failures -> {output}")
            for failing in failures[:5]:
                print(f"  first failing: {failing['suite']}/{failing['identity']}", file=sys.stderr)
                break
            return 0 if report.overall_pass else 1
        if args.command == "tau-lens":
            if args.framing == 0:
                parser.error("framing must be nonzero")
            print(compute_lens_tau(args.algebra, args.framing, args.order))
            return 0
        if args.command == "theta":
            contraction, closed_form = compute_theta(args.algebra, flip=args.flip_vertex)
            print(contraction)
            print(closed_form)
            return 0 if contraction == closed_form else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
