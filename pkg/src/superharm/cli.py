"""Command-line front end.

Subcommands map one-to-one onto the verification entry points:

  harmonic-basis    kernel basis of one slice + formula-basis comparison
  singular-vectors  enumerate the singular vectors of one slice
  verify-theorem    irreducibility + decomposition suite over a label grid
  check-brackets    bracket homomorphism for one scheme or the whole grid
  check-identities  operator-pair identities and scalar-action laws
  stabilizer        the eta-stabilizer characterization of osp

Exit codes: 0 all PASS, 1 any FAIL, 2 configuration error,
3 INCONCLUSIVE_CAP (every check inside the window passed but a cap was
the binding constraint — kept distinct so CI can treat it separately).

Reports are emitted as text or as JSON with a versioned top-level
"schema" key; identical configurations produce byte-identical JSON up
to the elapsed_ms field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .algebra import GradingScheme, Label, SchemeKind, enumerate_slice
from .harmonic import (
    compare_bases,
    harmonic_kernel,
    identity_report,
    singular_vectors,
    theorem_suite,
    xu_basis,
)
from .linalg import MatrixBudgetError
from .report import Verdict, VerificationReport
from .representations import osp_stabilizer_check, verify_homomorphism

SCHEMA = "superharm-report/1"

_NATURAL_GRID = [(1, 1), (2, 1), (2, 2), (2, 3)]
_TWISTED_GRID = [(4, 1, 1, 3), (4, 2, 1, 3)]  # (n, m, n1, n2)


class ConfigError(ValueError):
    """Bad or missing command-line parameters (exit code 2)."""


@dataclass
class JobConfig:
    command: str
    scheme: Optional[str] = None
    n: Optional[int] = None
    m: Optional[int] = None
    n1: Optional[int] = None
    n2: Optional[int] = None
    l: Optional[int] = None
    lp: Optional[int] = None
    k: Optional[int] = None
    lmax: Optional[int] = None
    lpmax: Optional[int] = None
    kmin: Optional[int] = None
    kmax: Optional[int] = None
    cap: Optional[int] = None
    theorem: Optional[str] = None
    fmt: str = "text"
    out: Optional[str] = None
    jobs: int = 1

    # ---- validation (all before any computation) ----

    def resolve_scheme(self, default_kind: Optional[SchemeKind] = None
                       ) -> GradingScheme:
        if self.scheme is not None:
            kind = SchemeKind(self.scheme)
        elif default_kind is not None:
            kind = default_kind
        else:
            raise ConfigError("--scheme is required for this command")
        if self.n is None or self.m is None:
            raise ConfigError("--n and --m are required")
        twisted = kind in (SchemeKind.GL_TWISTED, SchemeKind.OSP_EVEN_TWISTED,
                           SchemeKind.OSP_ODD_TWISTED)
        if twisted and (self.n1 is None or self.n2 is None):
            raise ConfigError("twisted schemes need --n1 and --n2")
        if not twisted and (self.n1 is not None or self.n2 is not None):
            raise ConfigError("--n1/--n2 apply only to twisted schemes")
        try:
            if twisted:
                return GradingScheme(kind, self.n, self.m, self.n1, self.n2)
            return GradingScheme(kind, self.n, self.m)
        except ValueError as err:
            raise ConfigError(str(err)) from err

    def resolve_labels(self, scheme: GradingScheme) -> List[Label]:
        if scheme.is_gl:
            if self.k is not None or self.kmin is not None or self.kmax is not None:
                raise ConfigError("--k/--kmin/--kmax apply only to osp schemes")
            if self.l is not None or self.lp is not None:
                if self.l is None or self.lp is None:
                    raise ConfigError("--l and --lp go together")
                if self.lmax is not None or self.lpmax is not None:
                    raise ConfigError("give either --l/--lp or --lmax/--lpmax")
                return [(self.l, self.lp)]
            if self.lmax is not None:
                lpmax = self.lmax if self.lpmax is None else self.lpmax
                return [(a, b) for a in range(self.lmax + 1)
                        for b in range(lpmax + 1)]
            raise ConfigError("gl schemes need --l/--lp or --lmax")
        if self.l is not None or self.lp is not None or self.lmax is not None \
                or self.lpmax is not None:
            raise ConfigError("--l/--lp/--lmax/--lpmax apply only to gl schemes")
        if self.k is not None:
            if self.kmin is not None or self.kmax is not None:
                raise ConfigError("give either --k or --kmin/--kmax")
            return [self.k]
        if self.kmax is not None:
            return list(range(self.kmin or 0, self.kmax + 1))
        raise ConfigError("osp schemes need --k or --kmax")

    def resolve_cap(self, scheme: GradingScheme) -> Optional[int]:
        if (scheme.is_twisted or scheme.has_x0) and self.cap is None:
            raise ConfigError(
                f"--cap is required for {scheme.kind.value} (infinite slices)")
        return self.cap


def _config_from_args(args: argparse.Namespace) -> JobConfig:
    fields = ("scheme", "n", "m", "n1", "n2", "l", "lp", "k", "lmax",
              "lpmax", "kmin", "kmax", "cap", "theorem", "fmt", "out", "jobs")
    values = {name: getattr(args, name, None) for name in fields}
    if values["fmt"] is None:
        values["fmt"] = "text"
    if values["jobs"] is None:
        values["jobs"] = 1
    return JobConfig(command=args.command, **values)


# ===================================================================
# subcommand runners (each returns one VerificationReport)
# ===================================================================

def _run_harmonic_basis(cfg: JobConfig) -> VerificationReport:
    scheme = cfg.resolve_scheme()
    label = cfg.resolve_labels(scheme)[0]
    cap = cfg.resolve_cap(scheme)
    sl = enumerate_slice(scheme, label, cap)
    kern = harmonic_kernel(sl)
    report = VerificationReport(
        check="harmonic-basis",
        scheme=scheme.kind.value,
        params=_scheme_params(scheme),
        label=label,
        cap=cap,
        dimensions={"slice": sl.dimension(), "kernel": kern.dimension()},
        vectors={"kernel": [v.render() for v in kern.vectors]},
    )
    try:
        formula = xu_basis(sl)
    except ValueError:
        report.explanation = ("no formula basis for this scheme; "
                              "kernel basis reported")
        return report
    report.vectors["formula"] = [v.render() for v in formula.vectors]
    report.subreports.append(compare_bases(sl))
    report.consolidate_subreports()
    report.explanation = "kernel and formula bases computed and compared"
    return report


def _run_singular_vectors(cfg: JobConfig) -> VerificationReport:
    scheme = cfg.resolve_scheme()
    label = cfg.resolve_labels(scheme)[0]
    cap = cfg.resolve_cap(scheme)
    sl = enumerate_slice(scheme, label, cap)
    svs = singular_vectors(sl)
    report = VerificationReport(
        check="singular-vectors",
        scheme=scheme.kind.value,
        params=_scheme_params(scheme),
        label=label,
        cap=cap,
        dimensions={"slice": sl.dimension(), "count": svs.count()},
        singular_vectors=[{"vector": p.render(),
                           "weight": [str(c) for c in wt]}
                          for wt, p in svs.entries],
    )
    report.explanation = (
        f"{svs.count()} singular vectors in the harmonic slice"
        + ("" if svs.complete else " (within the degree window)"))
    return report


_THEOREM_NATURAL = {"1": SchemeKind.GL_NATURAL,
                    "3": SchemeKind.OSP_EVEN_NATURAL,
                    "4": SchemeKind.OSP_ODD_NATURAL}
_THEOREM_TWISTED = {"2": SchemeKind.GL_TWISTED,
                    "3": SchemeKind.OSP_EVEN_TWISTED,
                    "4": SchemeKind.OSP_ODD_TWISTED}


def _run_verify_theorem(cfg: JobConfig) -> VerificationReport:
    tid = cfg.theorem
    wants_twisted = cfg.n1 is not None or cfg.n2 is not None
    table = _THEOREM_TWISTED if (tid == "2" or wants_twisted) else _THEOREM_NATURAL
    if tid not in table:
        raise ConfigError(f"theorem {tid} has no "
                          f"{'twisted' if wants_twisted else 'natural'} variant")
    scheme = cfg.resolve_scheme(default_kind=table[tid])
    labels = cfg.resolve_labels(scheme)
    cap = cfg.resolve_cap(scheme)
    try:
        return theorem_suite(tid, scheme, labels, cap, jobs=cfg.jobs)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _grid_schemes() -> List[GradingScheme]:
    out = []
    for kind in (SchemeKind.GL_NATURAL, SchemeKind.OSP_EVEN_NATURAL,
                 SchemeKind.OSP_ODD_NATURAL):
        out.extend(GradingScheme(kind, n, m) for n, m in _NATURAL_GRID)
    for kind in (SchemeKind.GL_TWISTED, SchemeKind.OSP_EVEN_TWISTED,
                 SchemeKind.OSP_ODD_TWISTED):
        out.extend(GradingScheme(kind, n, m, n1, n2)
                   for n, m, n1, n2 in _TWISTED_GRID)
    return out


def _run_scheme_suite(cfg: JobConfig, check: str, runner) -> VerificationReport:
    """check-brackets / check-identities: one scheme when given, else the
    whole default grid."""
    if cfg.scheme is not None or cfg.n is not None:
        return runner(cfg.resolve_scheme())
    schemes = _grid_schemes()
    report = VerificationReport(
        check=check,
        dimensions={"schemes": len(schemes)},
    )
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            report.subreports = list(pool.map(runner, schemes))
    else:
        report.subreports = [runner(s) for s in schemes]
    report.consolidate_subreports()
    n_fail = sum(1 for r in report.subreports if r.verdict is Verdict.FAIL)
    report.explanation = f"{len(schemes)} schemes checked, {n_fail} failed"
    return report


def _run_check_brackets(cfg: JobConfig) -> VerificationReport:
    return _run_scheme_suite(cfg, "bracket-suite",
                             lambda s: verify_homomorphism(s))


def _run_check_identities(cfg: JobConfig) -> VerificationReport:
    return _run_scheme_suite(cfg, "identity-suite",
                             lambda s: identity_report(s, cfg.cap))


def _run_stabilizer(cfg: JobConfig) -> VerificationReport:
    scheme = cfg.resolve_scheme()
    try:
        return osp_stabilizer_check(scheme)
    except ValueError as err:
        raise ConfigError(str(err)) from err


_RUNNERS = {
    "harmonic-basis": _run_harmonic_basis,
    "singular-vectors": _run_singular_vectors,
    "verify-theorem": _run_verify_theorem,
    "check-brackets": _run_check_brackets,
    "check-identities": _run_check_identities,
    "stabilizer": _run_stabilizer,
}


def _scheme_params(scheme: GradingScheme) -> dict:
    params = {"n": scheme.n, "m": scheme.m}
    if scheme.is_twisted:
        params["n1"] = scheme.n1
        params["n2"] = scheme.n2
    return params


# ===================================================================
# argument parsing and entry point
# ===================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superharm",
        description="Exact verification of supersymmetric harmonic "
                    "decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--scheme", choices=[k.value for k in SchemeKind])
        sp.add_argument("--n", type=int)
        sp.add_argument("--m", type=int)
        sp.add_argument("--n1", type=int)
        sp.add_argument("--n2", type=int)
        sp.add_argument("--l", type=int)
        sp.add_argument("--lp", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--lmax", type=int)
        sp.add_argument("--lpmax", type=int)
        sp.add_argument("--kmin", type=int)
        sp.add_argument("--kmax", type=int)
        sp.add_argument("--cap", type=int)
        sp.add_argument("--format", dest="fmt", choices=("text", "json"),
                        default="text")
        sp.add_argument("--out")
        sp.add_argument("--jobs", type=int, default=1)

    for name, help_text in (
        ("harmonic-basis", "kernel basis of one graded slice, with the "
                           "formula-basis comparison where one exists"),
        ("singular-vectors", "enumerate singular vectors of one slice"),
        ("check-brackets", "bracket homomorphism (one scheme or full grid)"),
        ("check-identities", "operator identities (one scheme or full grid)"),
        ("stabilizer", "eta-stabilizer characterization (natural osp)"),
    ):
        add_common(sub.add_parser(name, help=help_text))
    vt = sub.add_parser("verify-theorem",
                        help="irreducibility/decomposition suite on a grid")
    vt.add_argument("theorem", choices=("1", "2", "3", "4"))
    add_common(vt)
    return parser


def _emit(report: VerificationReport, cfg: JobConfig) -> None:
    if cfg.fmt == "json":
        payload = {"schema": SCHEMA}
        payload.update(report.to_dict())
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = report.render_text() + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(report: VerificationReport) -> int:
    worst = report.verdict
    if worst is Verdict.FAIL:
        return 1
    if worst is Verdict.INCONCLUSIVE_CAP:
        return 3
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    if cfg.jobs < 1:
        print("superharm: --jobs must be at least 1", file=sys.stderr)
        return 2
    started = time.monotonic()
    try:
        report = _RUNNERS[cfg.command](cfg)
    except ValueError as err:
        # ConfigError and the domain errors raised by slice/label validation
        print(f"superharm: {err}", file=sys.stderr)
        return 2
    except MatrixBudgetError as err:
        print(f"superharm: computation exceeds SUPERHARM_MAX_CELLS: {err}",
              file=sys.stderr)
        return 2
    report.elapsed_ms = int((time.monotonic() - started) * 1000)
    _emit(report, cfg)
    return _exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
