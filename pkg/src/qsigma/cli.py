"""Command-line harness: list, verify, verify-all, coeffs."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from . import fps, qkernel, sigma
from .errors import QSigmaError
from .fps import format_rational
from .identities import FAIL, PRECONDITION, get_record, registry, verify_all
from .identities import verify_formal, verify_numeric
from .identities.records import FORMAL, NUMERIC

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
MAX_UPTO = 200
SERIES = ("sigma", "sigma-star", "S", "D", "T")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    identity: str | None = None
    order: int | None = None
    precision: int | None = None
    backend: str | None = None
    seed: int = 0
    samples: int = 3
    params: dict[str, str] = field(default_factory=dict)
    json_path: str | None = None
    as_json: bool = False
    series: str | None = None
    upto: int | None = None
    csv_path: str | None = None

    def validate(self) -> None:
        if self.order is not None and self.order < 1:
            raise UsageError("--order must be >= 1")
        if self.precision is not None and self.precision < 64:
            raise UsageError("--precision must be >= 64")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if self.command == "verify":
            try:
                rec = get_record(self.identity)
            except KeyError:
                raise UsageError(f"unknown identity {self.identity!r}") from None
            if self.backend is not None and self.backend not in rec.backends:
                raise UsageError(f"{rec.id} supports {', '.join(rec.backends)} only")
        if self.command == "coeffs":
            if self.series not in SERIES:
                raise UsageError(f"unknown series {self.series!r}")
            if self.upto is None or not 0 <= self.upto <= MAX_UPTO:
                raise UsageError(f"--upto must be in 0..{MAX_UPTO}")


def _param(text: str) -> tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name or not value:
        raise argparse.ArgumentTypeError(f"expected name=p/q, got {text!r}")
    return name.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsigma", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    ls = sub.add_parser("list", help="list registered identities")
    ls.add_argument("--json", dest="as_json", action="store_true")

    v = sub.add_parser("verify", help="verify one identity")
    v.add_argument("identity")
    v.add_argument("--order", type=int)
    v.add_argument("--backend", choices=(FORMAL, NUMERIC))
    v.add_argument("--precision", type=int)
    v.add_argument("--param", dest="params", action="append", type=_param, default=[],
                   metavar="NAME=P/Q")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=3)
    v.add_argument("--json", dest="json_path", metavar="PATH")

    va = sub.add_parser("verify-all", help="verify every identity on every backend")
    va.add_argument("--order", type=int)
    va.add_argument("--precision", type=int)
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--json", dest="json_path", metavar="PATH")

    c = sub.add_parser("coeffs", help="coefficient tables")
    c.add_argument("series", choices=SERIES)
    c.add_argument("--upto", type=int, required=True)
    c.add_argument("--csv", dest="csv_path", metavar="PATH")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    d["params"] = dict(d.get("params") or [])
    d.setdefault("samples", 3)
    return RunConfig(**d)


# -- commands ------------------------------------------------------------------------
def cmd_list(cfg: RunConfig, out) -> int:
    rows = [{"id": r.id, "title": r.title, "backends": list(r.backends),
             "params": {p.name: p.mode for p in r.params},
             "default_order": r.default_order if FORMAL in r.backends else None,
             "default_precision": r.default_precision if NUMERIC in r.backends else None}
            for r in registry()]
    if cfg.as_json:
        json.dump(rows, out, indent=2)
        out.write("\n")
        return EXIT_PASS
    for row in rows:
        defaults = []
        if row["default_order"] is not None:
            defaults.append(f"order={row['default_order']}")
        if row["default_precision"] is not None:
            defaults.append(f"precision={row['default_precision']}")
        out.write(f"{row['id']:<12} {','.join(row['backends']):<16} "
                  f"{' '.join(defaults):<26} {row['title']}\n")
    return EXIT_PASS


def exit_code(reports) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return EXIT_FAIL
    if PRECONDITION in statuses:
        return EXIT_ERROR
    return EXIT_PASS


def _emit(reports, out, json_path: str | None, single: bool) -> None:
    for r in reports:
        out.write(r.to_json() + "\n")
        if r.message:
            print(f"{r.identity_id}: {r.message}", file=sys.stderr)
    if json_path:
        payload = reports[0].to_dict() if single else [r.to_dict() for r in reports]
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def cmd_verify(cfg: RunConfig, out) -> int:
    rec = get_record(cfg.identity)
    backend = cfg.backend or (FORMAL if FORMAL in rec.backends else NUMERIC)
    if backend == FORMAL:
        reports = [verify_formal(rec, cfg.order, cfg.seed, cfg.params)]
    else:
        reports = verify_numeric(rec, cfg.precision, cfg.seed, cfg.samples, cfg.params)
    _emit(reports, out, cfg.json_path, single=len(reports) == 1)
    return exit_code(reports)


def cmd_verify_all(cfg: RunConfig, out) -> int:
    summary = verify_all(cfg.order, cfg.precision, cfg.seed)
    _emit(summary.reports, out, cfg.json_path, single=False)
    counts = summary.counts()
    print(f"{len(summary.reports)} reports: " +
          ", ".join(f"{k} {v}" for k, v in counts.items()), file=sys.stderr)
    return EXIT_PASS if summary.ok else exit_code(summary.reports) or EXIT_FAIL


def coefficient_rows(series: str, upto: int) -> list[tuple[int, object]]:
    """(n, coefficient) rows for one of the supported tables."""
    if series == "T":
        rows = [(1 - 24 * m, sigma.t_coefficient(1 - 24 * m)) for m in range(upto, 0, -1)]
        return rows + [(24 * m + 1, sigma.t_coefficient(24 * m + 1)) for m in range(upto + 1)]
    if series == "sigma":
        return list(enumerate(sigma.SigmaCoefficients.compute(max(upto, 1)).values[:upto + 1]))
    if series == "sigma-star":
        star = sigma.SigmaCoefficients.compute(max(upto, 1)).star_values
        return [(n, star[n - 1]) for n in range(1, upto + 1)]
    ctx = fps.make_context({}, max(upto, 1))
    s = qkernel.s_series(ctx) if series == "S" else qkernel.d_series(ctx)
    return list(enumerate(s.q_coefficients(upto)))


def cmd_coeffs(cfg: RunConfig, out) -> int:
    rows = coefficient_rows(cfg.series, cfg.upto)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "coefficient"])
    for n, c in rows:
        w.writerow([n, format_rational(c)])
    text = buf.getvalue()
    out.write(text)
    if cfg.csv_path:
        with open(cfg.csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return EXIT_PASS


COMMANDS = {"list": cmd_list, "verify": cmd_verify, "verify-all": cmd_verify_all,
            "coeffs": cmd_coeffs}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        cfg.validate()
        return COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"qsigma: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except QSigmaError as exc:
        print(f"qsigma: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
