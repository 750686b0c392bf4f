"""Command-line front end.

    walkprove count  --steps E,W,NE,SW --n 8 --end 0,0
    walkprove guess  --steps W,S,NE --kind algebraic --N 80 --out P.txt
    walkprove prove  --steps W,S,NE --mode exact --out kreweras.cert
    walkprove pcurv  --operator L.txt --primes 3-30

Exit codes: 0 success, 1 mathematical failure (no relation, verification
failed), 2 usage error. Options may also come from a flat key=value config
file (``--config``); ``--dump-config`` prints every key with its default.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("walkprove")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- configuration


@dataclass
class RunConfig:
    steps: str = "W,S,NE"
    section: str = "x0"
    N: int = 80
    kind: str = "algebraic"
    primes: int = 2
    prime_bits: int = 31
    prime_file: str = ""
    points: list = field(default_factory=list)  # x-points for sections with x
    x0: int | None = None
    max_main_degree: int = 6
    max_t_degree: int = 12
    margin: float = 0.2
    mode: str = "series"
    N_verify: int = 0
    out: str = ""
    threads: int = 0  # 0 = available cores

    def validate(self) -> None:
        from .walks import SECTIONS, StepSet

        StepSet.parse(self.steps)
        if self.section not in SECTIONS:
            raise UsageError(f"section must be one of {SECTIONS}")
        if self.kind not in ("algebraic", "differential"):
            raise UsageError("kind must be 'algebraic' or 'differential'")
        if self.mode not in ("series", "exact"):
            raise UsageError("mode must be 'series' or 'exact'")
        if self.N < 2 or self.primes < 1 or self.max_main_degree < 1 or self.max_t_degree < 0:
            raise UsageError("N >= 2, primes >= 1, degrees must be non-negative")
        if not 8 <= self.prime_bits <= 31:
            raise UsageError("prime_bits must lie in 8..31 (numpy int64 kernels)")

    def thread_count(self) -> int:
        return self.threads or os.cpu_count() or 1

    def prime_list(self) -> list[int]:
        """The configured primes: WALKPROVE_PRIMES or prime_file when set, else the pool."""
        from .exactarith import is_prime, prime_pool
        from .exactarith.primes import read_prime_list

        src = os.environ.get("WALKPROVE_PRIMES") or self.prime_file
        if src:
            ps = read_prime_list(src)
            bad = [p for p in ps if not is_prime(p)]
            if bad or not ps:
                raise UsageError(f"prime list {src!r} is empty or has non-primes {bad}")
            return ps[: self.primes] if len(ps) >= self.primes else ps
        return prime_pool(self.primes, bits=self.prime_bits)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def int_list(text: str) -> list[int]:
    """'1,2,5' or '1-90' (non-negative; inclusive ranges mix with single values)."""
    out = []
    for part in text.replace(",", " ").split():
        if "-" in part:
            a, b = part.split("-", 1)
            out += list(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _coerce(key: str, value: str):
    typ = _FIELD_TYPES[key]
    if key == "points":
        return int_list(value)
    if key == "x0":
        return int(value) if value.strip() not in ("", "none") else None
    if "int" in typ:
        return int(value)
    if "float" in typ:
        return float(value)
    return value.strip()


def read_config(path, cfg: RunConfig | None = None) -> RunConfig:
    """Flat key=value text; ``include = file`` reads a prime-list file
    (relative to the config file) into prime_file."""
    cfg = cfg or RunConfig()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in ("include", "prime_file"):
            inc = Path(value)
            cfg.prime_file = str(inc if inc.is_absolute() else path.parent / inc)
            continue
        if key not in _FIELD_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            setattr(cfg, key, _coerce(key, value))
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return cfg


def dump_config(cfg: RunConfig) -> str:
    out = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if isinstance(v, list):
            v = ",".join(map(str, v))
        out.append(f"{f.name} = {'' if v is None else v}")
    return "\n".join(out)


def _apply_args(cfg: RunConfig, args) -> RunConfig:
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg


# ---------------------------------------------------------------- commands


def _parse_end(text: str) -> tuple[int, int]:
    try:
        i, j = (int(s) for s in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--end expects i,j, got {text!r}") from exc
    return i, j


def cmd_count(args, cfg: RunConfig) -> int:
    from .walks import StepSet, count, count_slice

    steps = StepSet.parse(cfg.steps)
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    if args.end:
        i, j = _parse_end(args.end)
        if min(i, j) < 0:
            raise UsageError("endpoint coordinates must be non-negative")
        print(count(steps, args.n, i, j))
        return EXIT_OK
    table = count_slice(steps, args.n)
    for i in range(table.shape[0]):
        print(" ".join(str(v) for v in table[i]))
    return EXIT_OK


def cmd_guess(args, cfg: RunConfig) -> int:
    from .guess import AnsatzGrid, ReconstructionError, ShapeMismatch, modular_guess_pipeline
    from .walks import SectionSpec, StepSet

    steps = StepSet.parse(cfg.steps)
    t0 = time.time()
    spec = SectionSpec(steps, cfg.section, cfg.N)
    if cfg.kind == "differential" and cfg.x0 is not None and not args.reconstruct:
        return _guess_operator_images(spec, cfg, t0)
    try:
        grid = AnsatzGrid(cfg.kind, cfg.max_main_degree, cfg.max_t_degree, cfg.N)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    kw = dict(margin=cfg.margin, threads=cfg.thread_count(), points=cfg.points or None)
    if cfg.x0 is not None:
        kw["at"] = cfg.x0
    if args.reconstruct and cfg.kind == "differential" and cfg.x0 is not None:
        from .guess import gcrd_local

        kw.update(local=gcrd_local(cfg.max_main_degree, cfg.max_t_degree), max_primes=cfg.primes,
                  ansatz_unknowns=(cfg.max_main_degree + 1) * (cfg.max_t_degree + 1))
        primes = None
    else:
        primes = cfg.prime_list()
    try:
        rep = modular_guess_pipeline(spec, grid, primes=primes, **kw)
    except (ReconstructionError, ShapeMismatch) as exc:
        print(f"no relation: {exc} (precision {cfg.N})", file=sys.stderr)
        return EXIT_MATH
    if rep.candidate is None:
        print(f"no relation found up to precision {cfg.N}", file=sys.stderr)
        return EXIT_MATH
    if cfg.out:
        Path(cfg.out).write_text(rep.to_text() + "\n")
    print(_summary(rep, time.time() - t0))
    return EXIT_OK


def _summary(rep, secs: float) -> str:
    from .exactarith import MultiPoly

    c = rep.candidate
    if isinstance(c, MultiPoly):
        degs = " ".join(f"deg{g}={c.degree(g)}" for g in c.gens)
        coeffs = c.terms.values()
    else:
        degs = f"order={c.order} degt<={c.max_degree()}"
        coeffs = [v for q in c.poly_coeffs() for v in q.c]
    digits = max((len(str(abs(getattr(v, "numerator", v)))) for v in coeffs), default=0)
    return (f"{degs} digits={digits} primes={len(rep.primes)} margin={rep.margin:.2f} "
            f"time={secs:.1f}s")


def _guess_operator_images(spec, cfg: RunConfig, t0: float) -> int:
    """One modular image per prime at x = x0: basis operators and their gcrd."""
    from .guess import guess_operators_mod_p
    from .ore import gcrd_mod_p
    from .walks import specialize_section

    order, deg = cfg.max_main_degree, cfg.max_t_degree
    lines, status = [], EXIT_OK
    for p in cfg.prime_list():
        arr = spec.array(p)
        vals = [int(v) for v in (specialize_section(arr, cfg.x0, p) if arr.ndim == 2 else arr)]
        ops = guess_operators_mod_p(vals, p, order, deg)
        if not ops:
            print(f"p={p}: no operator of order {order}, degt<={deg} from {cfg.N} terms")
            status = EXIT_MATH
            continue
        g = ops[0] if len(ops) == 1 else gcrd_mod_p(ops, p)
        print(f"p={p} x0={cfg.x0}: {len(ops)} operators order={order} "
              f"degt<={max(o.max_degree() for o in ops)}; gcrd order={g.order} "
              f"degt={g.max_degree()}")
        lines.append(f"# p = {p}, x0 = {cfg.x0}, gcrd (coefficients mod p)")
        lines.append(g.to_str())
    if cfg.out and lines:
        Path(cfg.out).write_text("\n".join(lines) + "\n")
    print(f"time={time.time() - t0:.1f}s")
    return status


def cmd_prove(args, cfg: RunConfig) -> int:
    from .exactarith import MultiPoly
    from .kernelproof import Certificate, ProofConfig, recheck, run_proof_pipeline
    from .walks import StepSet

    steps = StepSet.parse(cfg.steps)
    if args.candidate:
        text = _read(args.candidate)
        if text.startswith("walkprove-certificate"):
            cert = Certificate.from_text(text)
            results = recheck(cert)
            for name, ok in results.items():
                print(f"{name}: {'ok' if ok else 'FAILED'}")
            good = bool(results) and all(results.values()) and cert.status == "verified"
            return EXIT_OK if good else EXIT_MATH
        try:
            cand = MultiPoly.parse(_strip_comments(text), ("T", "t", "x"))
        except ValueError as exc:
            raise UsageError(f"cannot parse candidate: {exc}") from exc
    else:
        cand = None
    pc = ProofConfig(N_guess=cfg.N, N_verify=cfg.N_verify or None, mode=cfg.mode,
                     primes=cfg.primes, max_main_degree=cfg.max_main_degree,
                     max_t_degree=cfg.max_t_degree, threads=cfg.thread_count())
    if cfg.x0 is not None:
        pc.x0 = cfg.x0
    cert = run_proof_pipeline(steps, pc, cfg.out or None, candidate=cand)
    for c in cert.claims:
        print(f"{c.name}: {'ok' if c.ok else 'FAILED'} | {c.result}")
    print(f"status: {cert.status}" + (f" ({cert.failed_stage})" if cert.failed_stage else ""))
    return EXIT_OK if cert.status == "verified" else EXIT_MATH


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _strip_comments(text: str) -> str:
    return " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()


def parse_prime_range(text: str) -> list[int]:
    """'3-30' (inclusive), '3,5,7' or '' -> primes in that set."""
    from .exactarith import is_prime

    text = text.strip()
    if not text:
        return []
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = (int(s) for s in part.split("-", 1))
            out += [q for q in range(max(a, 2), b + 1) if is_prime(q)]
        elif part:
            q = int(part)
            if not is_prime(q):
                raise UsageError(f"{q} is not prime")
            out.append(q)
    return sorted(set(out))


def cmd_pcurv(args, cfg: RunConfig) -> int:
    from .ore import BadReduction, OreOperator, p_curvature_zero

    try:
        primes = parse_prime_range(args.primes)
    except ValueError as exc:
        raise UsageError(f"bad prime range {args.primes!r}") from exc
    try:
        L = OreOperator.parse(_operator_text(_read(args.operator)))
    except ValueError as exc:
        raise UsageError(f"cannot parse operator: {exc}") from exc
    print(f"{'p':>6}  p-curvature")
    for p in primes:
        try:
            verdict = "zero" if p_curvature_zero(L, p) else "nonzero"
        except (BadReduction, ZeroDivisionError):
            verdict = "bad reduction"
        if p < L.order and verdict == "nonzero":
            verdict += " (p < order)"
        print(f"{p:>6}  {verdict}")
    return EXIT_OK


def _operator_text(text: str) -> str:
    """Operator text from a bare operator file or a guess report."""
    for line in text.splitlines():
        if line.startswith("candidate:"):
            return line.split(":", 1)[1].strip()
    return _strip_comments(text)


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walkprove", description=__doc__.split("\n")[0])
    ap.add_argument("--config", help="key=value config file")
    ap.add_argument("--dump-config", action="store_true", help="print defaults and exit")
    ap.add_argument("--threads", type=int, help="worker threads (default: available cores)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command")

    def common(p, n_name="N"):
        p.add_argument("--steps", help="compass steps, e.g. E,W,NE,SW")
        if n_name:
            p.add_argument("--N", type=int, dest="N", help="series precision")
        p.add_argument("--primes", type=int, help="number of primes")
        p.add_argument("--x0", type=int, help="specialize x to this integer")
        p.add_argument("--out", help="output file")

    c = sub.add_parser("count", help="walk counts f(n; i, j)")
    c.add_argument("--steps", help="compass steps, e.g. E,W,NE,SW")
    c.add_argument("--n", type=int, required=True, help="walk length")
    c.add_argument("--end", help="endpoint i,j (default: whole slice)")

    g = sub.add_parser("guess", help="guess an algebraic or differential equation")
    common(g)
    g.add_argument("--kind", choices=("algebraic", "differential"))
    g.add_argument("--section", choices=("x0", "0y", "00", "11", "U", "V"))
    g.add_argument("--points", type=int_list, help="x-points for sections with x, e.g. 1-90")
    g.add_argument("--max-main-degree", type=int, dest="max_main_degree",
                   help="deg_T bound, or operator order")
    g.add_argument("--max-t-degree", type=int, dest="max_t_degree")
    g.add_argument("--margin", type=float)
    g.add_argument("--reconstruct", action="store_true",
                   help="with --kind differential --x0: rebuild the gcrd over QQ, "
                        "adding up to --primes primes")

    pr = sub.add_parser("prove", help="guess, verify and write a certificate")
    common(pr)
    pr.add_argument("--mode", choices=("series", "exact"))
    pr.add_argument("--N-verify", type=int, dest="N_verify", help="series verification order")
    pr.add_argument("--max-main-degree", type=int, dest="max_main_degree")
    pr.add_argument("--max-t-degree", type=int, dest="max_t_degree")
    pr.add_argument("--candidate", help="polynomial P(T,t,x) or certificate file to check")

    pc = sub.add_parser("pcurv", help="p-curvature table of an operator")
    pc.add_argument("--operator", required=True, help="file holding the operator text")
    pc.add_argument("--primes", default="", help="prime range such as 3-30 or 5,7,11")
    return ap


_COMMANDS = {"count": cmd_count, "guess": cmd_guess, "prove": cmd_prove, "pcurv": cmd_pcurv}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = read_config(args.config) if args.config else RunConfig()
        if args.dump_config:
            print(dump_config(cfg))
            return EXIT_OK
        if args.command is None:
            ap.print_usage(sys.stderr)
            return EXIT_USAGE
        # pcurv has its own --primes (a range), not a prime count
        if args.command == "pcurv":
            cfg.threads = args.threads or cfg.threads
        else:
            _apply_args(cfg, args)
        cfg.validate()
        return _COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"walkprove: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # bad step strings and malformed inputs surface as ValueError
        print(f"walkprove: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
