"""Command-line front end for reproducible batch runs.

Structured JSON goes to standard out (the canonical machine interface);
human-readable summaries and the run manifest go to standard error.
Exit codes: 0 success, 1 property-failure, 2 usage error or malformed
input.  MFORGE_BOUND overrides brute-force size bounds; --seed fixes
the RNG of sampled suites.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from dataclasses import dataclass, field as dfield

from . import __version__
from .connectivity import is_3connected, kappa, linking_set
from .construct import (ConstructError, certificate_from_json,
                        charconflict_certificate, counterexample,
                        pappus_certificate, verify_certificate)
from .geometry import GeometryError, ag, pg, pg_size
from .matrix import Matrix, MatrixError
from .matroid import (MatroidError, MinorSpec, longest_line, matroid_from_json,
                      minor, simplify_epsilon)
from .subfield import SubfieldError, scaled_subfield_check
from .witness import PipelineError, extract_long_line, proof_replay_fixture


@dataclass
class RunManifest:
    command: str
    arguments: list
    input_digests: dict = dfield(default_factory=dict)
    tool_version: str = __version__
    outputs: list = dfield(default_factory=list)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "arguments": list(self.arguments),
            "inputDigests": dict(self.input_digests),
            "toolVersion": self.tool_version,
            "outputs": list(self.outputs),
            "wallTime": self.wall_time,
        }


class UsageError(ValueError):
    pass


def _read_json(path: str, manifest: RunManifest):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc}")
    manifest.input_digests[path] = hashlib.sha256(data).hexdigest()
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno} "
                         f"column {exc.colno}")


def _load_matroid(path: str, manifest: RunManifest):
    d = _read_json(path, manifest)
    if isinstance(d, dict) and "matroid" in d:
        d = d["matroid"]
    try:
        return matroid_from_json(d)
    except (KeyError, MatroidError, MatrixError) as exc:
        raise UsageError(f"{path}: not a matroid file ({exc})")


def _emit(payload: dict, manifest: RunManifest, summary: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    sys.stdout.write(text + "\n")
    manifest.outputs.append({
        "digest": hashlib.sha256(text.encode()).hexdigest(),
        "summary": summary,
    })
    sys.stderr.write(summary + "\n")


def _labels(arg: str) -> list:
    return [t for t in arg.split(",") if t]


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mforge", description=__doc__)
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for sampled property suites")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate canonical objects")
    gs = g.add_subparsers(dest="what", required=True)
    for kind in ("pg", "ag"):
        p = gs.add_parser(kind)
        p.add_argument("--rank", type=int, required=True)
        p.add_argument("--q", type=int, required=True)
    p = gs.add_parser("counterexample")
    p.add_argument("--index", type=int, default=3)
    p.add_argument("--q", type=int, required=True)

    c = sub.add_parser("check", help="decision procedures")
    cs = c.add_subparsers(dest="what", required=True)
    p = cs.add_parser("three-connected")
    p.add_argument("file")
    p = cs.add_parser("line-minor")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("file")
    p = cs.add_parser("rank-axioms")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("file")

    p = sub.add_parser("kappa", help="connectivity between two label sets")
    p.add_argument("--s", required=True, help="comma-separated labels")
    p.add_argument("--t", required=True, help="comma-separated labels")
    p.add_argument("file")

    p = sub.add_parser("subfield-check", help="scaled-subfield decision")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("file", help="matrix JSON")

    ce = sub.add_parser("certify", help="emit certificates")
    ces = ce.add_subparsers(dest="what", required=True)
    p = ces.add_parser("nonrep")
    p.add_argument("--index", type=int, default=3)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("verify", help="re-check a certificate against a matroid")
    p.add_argument("cert")
    p.add_argument("file")

    ex = sub.add_parser("extract", help="witness extraction")
    exs = ex.add_subparsers(dest="what", required=True)
    p = exs.add_parser("long-line")
    p.add_argument("--fixture", action="store_true",
                   help="run the shipped rank-5 GF(4) instance")
    p.add_argument("--matrix", help="standard-form matrix JSON")
    p.add_argument("--x", help="extension element")
    p.add_argument("--q", type=int)

    p = sub.add_parser("growth-table",
                       help="point counts of PG(k-1,q) against the formula")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--maxrank", type=int, required=True)
    return ap


def _cmd_gen(args, manifest) -> int:
    if args.what in ("pg", "ag"):
        M = (pg if args.what == "pg" else ag)(args.rank, args.q)
        _emit({"matroid": M.to_json()}, manifest,
              f"{args.what}({args.rank},{args.q}): {len(M.ground)} columns, "
              f"rank {M.rank()}")
        return 0
    Mn, Mnp, C = counterexample(args.index, args.q)
    _emit({"matroid": Mnp.to_json(), "circuit": sorted(C)}, manifest,
          f"counterexample(n={args.index}, q={args.q}): "
          f"{len(Mnp.ground)} elements, rank {Mnp.rank()}")
    return 0


def _cmd_check(args, manifest, rng) -> int:
    M = _load_matroid(args.file, manifest)
    if args.what == "three-connected":
        ok, viol = is_3connected(M)
        _emit({"threeConnected": ok,
               "violatingSide": sorted(viol) if viol else None},
              manifest, "3-connected" if ok else f"2-separation {sorted(viol)}")
        return 0 if ok else 1
    if args.what == "line-minor":
        k, spec = longest_line(M)
        present = k >= args.k
        _emit({"k": args.k, "longestLine": k, "present": present,
               "witness": spec.to_json() if present else None},
              manifest, "present" if present else "absent")
        return 0
    # rank-axioms
    ground = list(M.ground)
    bad = None
    for _ in range(args.samples):
        X = frozenset(e for e in ground if rng.random() < 0.5)
        Y = frozenset(e for e in ground if rng.random() < 0.5)
        rx, ry = M.rank(X), M.rank(Y)
        if not (0 <= rx <= len(X)) or (X <= Y and rx > ry):
            bad = ("monotonicity", sorted(X), sorted(Y))
            break
        if M.rank(X | Y) + M.rank(X & Y) > rx + ry:
            bad = ("submodularity", sorted(X), sorted(Y))
            break
        e = rng.choice(ground)
        if not 0 <= M.rank(X | {e}) - rx <= 1:
            bad = ("unit-increase", sorted(X), [e])
            break
    _emit({"samples": args.samples, "violation": bad}, manifest,
          "rank axioms hold on all samples" if bad is None
          else f"violated: {bad[0]}")
    return 0 if bad is None else 1


def _cmd_kappa(args, manifest) -> int:
    M = _load_matroid(args.file, manifest)
    S, T = _labels(args.s), _labels(args.t)
    value = kappa(M, S, T)
    Z, _ = linking_set(M, S, T)
    _emit({"kappa": value, "linkingSet": sorted(Z)}, manifest,
          f"kappa = {value}, linking set {sorted(Z)}")
    return 0


def _cmd_subfield(args, manifest) -> int:
    d = _read_json(args.file, manifest)
    try:
        A = Matrix.from_json(d)
    except (KeyError, MatrixError, TypeError) as exc:
        raise UsageError(f"{args.file}: not a matrix file ({exc})")
    cert = scaled_subfield_check(A, args.q)
    _emit({"certificate": cert.to_json()}, manifest,
          "scaled GF(%d)-matrix" % args.q if cert.ok
          else f"not scalable: cycle obstruction {list(cert.cycle)}")
    return 0


def _cmd_certify(args, manifest) -> int:
    Mn, Mnp, C = counterexample(args.index, args.q)
    if args.q == 2:
        cert = charconflict_certificate(Mnp, C, args.q)
    else:
        cert = pappus_certificate(Mnp, C, args.q)
    if not verify_certificate(cert, Mnp):
        raise ConstructError("emitted certificate failed re-verification")
    _emit({"certificate": cert.to_json()}, manifest,
          f"{cert.kind} certificate for counterexample(n={args.index}, "
          f"q={args.q})")
    return 0


def _cmd_verify(args, manifest) -> int:
    cd = _read_json(args.cert, manifest)
    if isinstance(cd, dict) and "certificate" in cd:
        cd = cd["certificate"]
    M = _load_matroid(args.file, manifest)
    try:
        cert = certificate_from_json(cd)
        ok = verify_certificate(cert, M)
    except (KeyError, ConstructError, MatroidError) as exc:
        raise UsageError(f"{args.cert}: {exc}")
    _emit({"valid": ok}, manifest,
          "certificate valid" if ok else "certificate REJECTED")
    return 0 if ok else 1


def _cmd_extract(args, manifest) -> int:
    if args.fixture or not args.matrix:
        Mp, x, A, emb, q = proof_replay_fixture()
    else:
        if not (args.x and args.q):
            raise UsageError("--matrix requires --x and --q")
        d = _read_json(args.matrix, manifest)
        try:
            A = Matrix.from_json(d)
        except (KeyError, MatrixError, TypeError) as exc:
            raise UsageError(f"{args.matrix}: not a matrix file ({exc})")
        from .matroid import LinearMatroid
        Mp, x, q = LinearMatroid(A), args.x, args.q
        emb = MinorSpec(frozenset([x]), frozenset())
    try:
        spec, trace = extract_long_line(Mp, x, None, A, emb, q)
    except PipelineError as exc:
        _emit({"error": str(exc), "stage": exc.stage,
               "trace": exc.trace.to_json() if exc.trace else None},
              manifest, f"pipeline failed at stage {exc.stage}")
        return 1
    k, _ = longest_line(minor(Mp, spec))
    _emit({"minorSpec": spec.to_json(), "longestLine": k,
           "trace": trace.to_json()}, manifest,
          f"U_2,{k} witness extracted")
    return 0


def _cmd_growth(args, manifest) -> int:
    rows = []
    ok = True
    for k in range(1, args.maxrank + 1):
        si, _, eps = simplify_epsilon(pg(k, args.q))
        expected = pg_size(k, args.q)
        rows.append({"rank": k, "epsilon": eps, "formula": expected})
        ok = ok and eps == expected
    _emit({"q": args.q, "rows": rows, "allMatch": ok}, manifest,
          "all point counts match the formula" if ok else "MISMATCH")
    return 0 if ok else 1


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    manifest = RunManifest(command=args.cmd, arguments=argv)
    rng = random.Random(args.seed)
    start = time.monotonic()
    try:
        if args.cmd == "gen":
            status = _cmd_gen(args, manifest)
        elif args.cmd == "check":
            status = _cmd_check(args, manifest, rng)
        elif args.cmd == "kappa":
            status = _cmd_kappa(args, manifest)
        elif args.cmd == "subfield-check":
            status = _cmd_subfield(args, manifest)
        elif args.cmd == "certify":
            status = _cmd_certify(args, manifest)
        elif args.cmd == "verify":
            status = _cmd_verify(args, manifest)
        elif args.cmd == "extract":
            status = _cmd_extract(args, manifest)
        else:
            status = _cmd_growth(args, manifest)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (MatroidError, MatrixError, GeometryError, SubfieldError,
            ConstructError) as exc:
        sys.stderr.write(f"property failure: {exc}\n")
        return 1
    manifest.wall_time = round(time.monotonic() - start, 6)
    sys.stderr.write(json.dumps(manifest.to_json(), sort_keys=True) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
