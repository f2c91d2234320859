"""Command-line surface: exact series emission, verification reports,
stationary-phase tables, state-integral checks and radial matching, with a
persistent on-disk cache for the expensive exact series.

JSON is the single machine interface (CSV only for radial sample tables);
every command exits nonzero if any check it ran failed, so the suite can sit
directly in CI.
"""

from __future__ import annotations

import argparse
import fcntl
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import CODE_REVISION, __version__
from .rings import qq_str
from .series import PuiseuxSeries
from . import qseries, qdiff

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# configuration and cache
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    precision_bits: int = 192
    series_order: int = 400
    lambda_range: tuple = (0, 0)
    tau: complex = 0.5 + 0.5j
    theta: float = 0.6283185307179586  # pi/5
    N_range: tuple = (120, 200, 4)
    K: int = 10
    output_path: str | None = None
    cache_dir: str | None = None
    use_cache: bool = True

    @classmethod
    def from_file(cls, path):
        """Simple key=value format; unknown keys rejected."""
        cfg = cls()
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if not hasattr(cfg, key):
                raise KeyError(f"unknown config key: {key}")
            cur = getattr(cfg, key)
            if isinstance(cur, bool):
                setattr(cfg, key, val.lower() in ("1", "true", "yes"))
            elif isinstance(cur, int):
                setattr(cfg, key, int(val))
            elif isinstance(cur, float):
                setattr(cfg, key, float(val))
            elif isinstance(cur, tuple):
                setattr(cfg, key, tuple(int(x) for x in val.split(",")))
            elif key == "tau":
                setattr(cfg, key, complex(val))
            else:
                setattr(cfg, key, val)
        return cfg


def cache_dir(cfg: RunConfig | None = None) -> Path:
    override = os.environ.get("PRETZEL237_CACHE_DIR")
    if override:
        return Path(override)
    if cfg is not None and cfg.cache_dir:
        return Path(cfg.cache_dir)
    return Path.home() / ".cache" / "pretzel237"


def _cache_path(base: Path, key: dict) -> Path:
    blob = json.dumps(key, sort_keys=True)
    digest = hashlib.sha256(blob.encode()).hexdigest()[:24]
    return base / f"{key['family']}-{digest}.json"


def cached_series(family: str, lam: int, j: int, sign: str, order: int,
                  base: Path | None = None, use_cache: bool = True) -> PuiseuxSeries:
    """Series through the cache: cold computes and stores, warm round-trips.

    Entries are keyed by the full parameter tuple plus the code revision tag,
    so stale exact data is never served after a formula change.  The store
    uses an advisory lock; identical keys always carry identical payloads, so
    a lost race is harmless.
    """
    key = {"schema_version": SCHEMA_VERSION, "family": family, "lambda": lam,
           "j": j, "sign": sign, "order": order, "revision": CODE_REVISION}
    base = base if base is not None else cache_dir()
    path = _cache_path(base, key)
    if use_cache and path.exists():
        data = json.loads(path.read_text())
        if data.get("key") == key:
            return PuiseuxSeries.from_json(data["payload"])
    series = qseries.h_series(qseries.SeriesFamilyKey(lam, j, sign), order)
    if use_cache:
        base.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"key": key, "payload": series.to_json()},
                             sort_keys=True)
        with open(path.with_suffix(".lock"), "w") as lock:
            fcntl.flock(lock, fcntl.LOCK_EX)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(payload)
            tmp.replace(path)
            fcntl.flock(lock, fcntl.LOCK_UN)
    return series


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit(data, args) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _mp_str(x, digits: int) -> str:
    from mpmath import mp
    return mp.nstr(x, digits, strip_zeros=False)


def _complex_json(z, digits: int):
    from mpmath import mp
    return {"re": _mp_str(mp.re(z), digits), "im": _mp_str(mp.im(z), digits),
            "digits": digits}


def _parse_range(text: str) -> list:
    """'a..b' inclusive, 'a..b:s' stepped, or a single integer."""
    if ".." in text:
        lo, _, rest = text.partition("..")
        hi, _, step = rest.partition(":")
        return list(range(int(lo), int(hi) + 1, int(step) if step else 1))
    return [int(text)]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_hseries(args) -> int:
    if args.j not in range(6):
        print("error: j must be in 0..5", file=sys.stderr)
        return 2
    series = cached_series("h", args.lam, args.j, args.sign, args.order,
                           use_cache=not args.no_cache)
    _emit({"kind": "hseries", "lambda": args.lam, "j": args.j,
           "sign": args.sign, "order": args.order,
           "series": series.to_json()}, args)
    return 0


def cmd_verify(args) -> int:
    lams = _parse_range(args.lam_range)
    order = args.order
    reports = []

    def add(check, lam, ok, witness=None):
        rec = {"check": check, "lambda": lam, "order": order, "pass": bool(ok)}
        if witness is not None:
            rec["first_nonzero_term"] = witness
        reports.append(rec)

    which = args.which
    if which == "recurrence":
        for lam in lams:
            for j in range(6):
                for branch in ("inside", "outside"):
                    r = qdiff.recurrence_residual(j, lam, branch, order)
                    add(f"recurrence j={j} {branch}", lam, r.is_zero(),
                        _witness(r))
    elif which == "det":
        for lam in lams:
            det = qdiff.wronskian_det(lam, order)
            ok = det.eq_mod(qdiff.det_expected(lam, order))
            add("det", lam, ok, _witness(det - qdiff.det_expected(lam, order)))
    elif which == "orthogonality":
        for lam in lams:
            r = qdiff.orthogonality_residual(lam, order)
            add("orthogonality", lam, r.is_zero())
    elif which == "quadratic":
        for lam in lams:
            r = qdiff.quadratic_relation(lam, order)
            add("quadratic", lam, r.is_zero(), _witness(r))
    elif which == "selfdual-symbolic":
        rep = qdiff.verify_symbolic_selfduality()
        add("selfdual-symbolic", None, rep["pass"])
        reports[-1]["detail"] = {k: v for k, v in rep.items() if k != "pass"}
    elif which == "symmetry":
        for lam in lams:
            for j in range(6):
                ok, sign, fails = qseries.symmetry_check(lam, j, order)
                add(f"symmetry j={j} (sign {sign:+d})", lam, ok)
    elif which == "gz-compare":
        for j in (3, 4, 5):
            ok, res = qseries.gz_comparison(j, order)
            add(f"gz-compare j={j}", None, ok)
    else:
        print(f"error: unknown verification {which}", file=sys.stderr)
        return 2
    ok_all = all(r["pass"] for r in reports)
    _emit({"kind": "verify", "which": which, "reports": reports,
           "pass": ok_all}, args)
    return 0 if ok_all else 1


def _witness(series: PuiseuxSeries):
    fnz = series.first_nonzero()
    if fnz is None:
        return None
    k, c = fnz
    return {"exponent_eighths": k, "coefficient": qq_str(c)}


def cmd_statphase(args) -> int:
    from .statphase import critical_points, gaussian_expand
    pts = critical_points(args.prec)
    wanted = [p for p in pts
              if (args.field is None or p.field.label.startswith(args.field))
              and (args.sigma is None or p.label == args.sigma)]
    out = []
    for p in wanted:
        exp_ = gaussian_expand(p, args.K)
        entry = {
            "sigma": p.label, "field": p.field.label,
            "embedding_index": p.embedding_index,
            "alpha_coords": [qq_str(c) for c in p.alpha.coords],
            "delta_coords": [qq_str(c) for c in exp_.delta.coords],
            "c": [
                {"k": k,
                 "lambda_coeffs": [[qq_str(c) for c in
                                    exp_.c[k].coeff(d).coords]
                                   for d in range(exp_.c[k].degree + 1)]}
                for k in range(args.K + 1)
            ],
        }
        out.append(entry)
    _emit({"kind": "statphase", "K": args.K, "points": out}, args)
    return 0


def cmd_stateintegral(args) -> int:
    from mpmath import mp
    from .numerics import ModularPair, descendant_Z, factorization_residual
    pair = ModularPair(complex(args.tau), args.prec)
    digits = int(args.prec / 3.33)
    with mp.workprec(args.prec + 32):
        result = {"kind": "stateintegral", "tau": _complex_json(pair.tau, digits),
                  "lambda": args.lam, "lambda_prime": args.lambdap,
                  "prec_bits": args.prec}
        if args.check_factorization:
            res, lhs, rhs = factorization_residual(pair, args.lam, args.lambdap,
                                                   args.order)
            result["Z_scaled"] = _complex_json(lhs, digits)
            result["series_rhs"] = _complex_json(rhs, digits)
            result["residual"] = _mp_str(res, 8)
            result["pass"] = bool(res < mp.mpf(10) ** (-args.tolerance_digits))
        else:
            z = descendant_Z(pair, args.lam, args.lambdap)
            result["Z"] = _complex_json(z, digits)
            result["pass"] = True
    _emit(result, args)
    return 0 if result["pass"] else 1


def cmd_radial(args) -> int:
    from .radial import asymptotic_match, radial_samples
    import dataclasses
    theta = _parse_theta(args.theta)
    if args.table:
        samples = radial_samples(args.j, args.sign, theta,
                                 _parse_range(args.N_range), args.prec)
        lines = ["N,re,im"]
        for s in samples:
            lines.append(f"{s.N},{_mp_str(s.value.real, 30)},{_mp_str(s.value.imag, 30)}")
        text = "\n".join(lines) + "\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    rep = asymptotic_match(args.j, args.sign, theta, K=args.K, prec=args.prec,
                           N_list=_parse_range(args.N_range))
    data = dataclasses.asdict(rep)
    data["kind"] = "radial-match"
    ok = rep.matches_designated and rep.digits_matched >= args.min_digits
    data["pass"] = bool(ok)
    _emit(data, args)
    return 0 if ok else 1


def _parse_theta(text: str) -> float:
    import math
    if text.startswith("pi/"):
        return math.pi / float(text[3:])
    if text.endswith("pi"):
        return float(text[:-2] or 1) * math.pi
    return float(text)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pretzel237",
        description="Exact q-series and state-integral numerics for the "
                    "(-2,3,7)-pretzel knot")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--config", help="key=value config file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hseries", help="emit one exact series")
    p.add_argument("--lambda", dest="lam", type=int, default=0)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--output")
    p.set_defaults(fn=cmd_hseries)

    p = sub.add_parser("verify", help="run an exact verification")
    p.add_argument("which", choices=("recurrence", "det", "orthogonality",
                                     "quadratic", "selfdual-symbolic",
                                     "symmetry", "gz-compare"))
    p.add_argument("--lambda", dest="lam_range", default="0..1",
                   help="range a..b")
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--output")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("statphase", help="stationary-phase coefficient tables")
    p.add_argument("--field", choices=("xi", "eta"))
    p.add_argument("--sigma", choices=tuple(f"sigma{i}" for i in range(1, 7)))
    p.add_argument("--K", type=int, default=5)
    p.add_argument("--prec", type=int, default=256)
    p.add_argument("--output")
    p.set_defaults(fn=cmd_statphase)

    p = sub.add_parser("stateintegral", help="descendant state integral")
    p.add_argument("--tau", default="0.5+0.5j")
    p.add_argument("--lambda", dest="lam", type=int, default=0)
    p.add_argument("--lambdap", type=int, default=0)
    p.add_argument("--prec", type=int, default=192)
    p.add_argument("--order", type=int, default=800)
    p.add_argument("--check-factorization", action="store_true")
    p.add_argument("--tolerance-digits", type=int, default=30)
    p.add_argument("--output")
    p.set_defaults(fn=cmd_stateintegral)

    p = sub.add_parser("radial", help="radial samples and asymptotic matching")
    p.add_argument("--theta", default="pi/5")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--sign", choices=("plus", "minus"), default="plus")
    p.add_argument("--K", type=int, default=10)
    p.add_argument("--prec", type=int, default=256)
    p.add_argument("--N-range", dest="N_range", default="120..200:4")
    p.add_argument("--min-digits", type=int, default=5)
    p.add_argument("--table", action="store_true",
                   help="emit the (N, value) CSV instead of matching")
    p.add_argument("--output")
    p.set_defaults(fn=cmd_radial)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.config:
        cfg = RunConfig.from_file(args.config)
        if cfg.cache_dir and "PRETZEL237_CACHE_DIR" not in os.environ:
            os.environ["PRETZEL237_CACHE_DIR"] = cfg.cache_dir
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
