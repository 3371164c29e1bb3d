"""Command-line front end.

Exit codes: 0 all certified checks pass, 2 parameter condition violated,
3 input format error, 4 computation over the size caps, 1 internal error.
Every `gen` run writes the construction, a certificate, and a manifest
with SHA-256 digests; primary outputs are byte-identical across thread
counts and repeated runs with the same seed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, additive, formats, ripmat, thinsets, turan
from .arith import is_prime
from .errors import FormatError, ParameterConditionViolated, PhasecertError, TooLarge

TOL = 1e-9


def _json_default(o):
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"not JSON serializable: {type(o)}")


def _emit(report: dict) -> None:
    print(json.dumps(report, sort_keys=True, indent=2, default=_json_default))


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.stem + ".manifest.json")


def _write_manifest(args, out: Path, parameters: dict, outputs: list, t0: float) -> None:
    formats.write_manifest(
        _manifest_path(out), command=sys.argv[1:], parameters=parameters,
        seed=getattr(args, "seed", None), version=__version__, outputs=outputs,
        timings={"wall_s": round(time.perf_counter() - t0, 3)})


def _load_matrix(path: str) -> np.ndarray:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"{path}: no such file")
    head = p.open("rb").read(4)
    if head == formats.MAGIC:
        return formats.read_frame_binary(p)
    return formats.read_frame_text(p)


# ---------------------------------------------------------------- gen


def cmd_gen_rip(args) -> int:
    t0 = time.perf_counter()
    params = ripmat.ConstructionParams.override(
        L=args.L, U=args.U, M_digits=args.M, r_digits=args.r, m=args.m)
    A = ripmat.build_set_A(args.p, params)
    B = ripmat.build_set_B(args.p, params)
    frame = ripmat.build_frame(args.p, A, B, N=args.N)
    out = Path(args.out)
    formats.write_frame_binary(out, frame.matrix)
    cert = {
        "p": frame.p.p, "params": params.to_json(), "set_A": list(frame.set_A),
        "set_B": list(frame.set_B), "columns": [list(c) for c in frame.columns],
        "n_rows": frame.n_rows, "n_columns": frame.n_columns,
        "proof_checks": params.proof_checks(args.p),
    }
    cert_path = out.with_name(out.stem + ".cert.json")
    formats.write_json(cert_path, cert)
    _write_manifest(args, out, {"p": args.p, "L": args.L, "U": args.U, "M": args.M,
                                "r": args.r, "N": args.N, "m": args.m},
                    [out, cert_path], t0)
    return 0


def cmd_gen_thinset(args) -> int:
    t0 = time.perf_counter()
    mode = "two_stage" if args.two_stage else "one_iteration"
    T, cert = thinsets.construct_thin_set(
        args.N, mu=args.mu, mode=mode, strict=args.strict,
        P0=args.P if args.P is not None else args.P0, P1=args.P1,
        R0=args.R if args.R is not None else args.R0, R1=args.R1,
        variant=args.variant, scan=args.scan, seed=args.seed, threads=args.threads)
    out = Path(args.out)
    obj = T.to_json()
    obj["certificate"] = cert.to_json()
    formats.write_json(out, obj)
    outputs = [out]
    if args.emit_profile:
        mags = thinsets.profile_magnitudes(T, 1, T.modulus - 1)
        formats.write_profile_csv(args.emit_profile, range(1, T.modulus), mags)
        outputs.append(Path(args.emit_profile))
    _write_manifest(args, out, {"N": args.N, "mu": args.mu, "mode": mode,
                                "P0": cert.P0, "P1": cert.P1, "R0": cert.R0,
                                "R1": cert.R1, "variant": args.variant,
                                "scan": args.scan}, outputs, t0)
    return 0


def cmd_gen_turan(args) -> int:
    t0 = time.perf_counter()
    z, cert = turan.construct_turan(
        args.N, mu=args.mu, P0=args.P0, P1=args.P1, R0=args.R0,
        strict=args.strict, variant=args.variant, scan=args.scan,
        threads=args.threads)
    out = Path(args.out)
    obj = z.to_json()
    obj["N"] = args.N
    obj["certificate"] = cert.to_json()
    formats.write_json(out, obj)
    _write_manifest(args, out, {"N": args.N, "mu": args.mu, "P0": cert.P0,
                                "P1": cert.P1, "R0": cert.R0,
                                "variant": args.variant}, [out], t0)
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify_coherence(args) -> int:
    mat = _load_matrix(args.input)
    mu = ripmat.coherence(mat)
    n = mat.shape[0]
    report = {"mu": mu}
    ok = True
    if is_prime(n):
        expected = 1.0 / (n ** 0.5)
        ok = abs(mu - expected) <= TOL
        report.update({"expected": expected, "pass": ok})
    else:
        report["pass"] = True
    _emit(report)
    return 0 if ok else 1


def cmd_verify_rip(args) -> int:
    mat = _load_matrix(args.input)
    mu = ripmat.coherence(mat)
    delta = ripmat.exact_rip_constant(mat, args.k)
    bound = (args.k - 1) * mu
    ok = delta <= bound + TOL
    _emit({"k": args.k, "mu": mu, "delta_exact": delta,
           "delta_from_coherence": bound, "pass": ok})
    return 0 if ok else 1


def cmd_verify_flat_rip(args) -> int:
    mat = _load_matrix(args.input)
    mu = ripmat.coherence(mat)
    delta = ripmat.flat_rip_constant(mat, args.k, mode=args.mode,
                                     trials=args.trials, seed=args.seed)
    ok = delta <= args.k * mu + TOL
    _emit({"k": args.k, "mu": mu, "delta_flat": delta, "mode": args.mode,
           "bound_k_mu": args.k * mu,
           "rip_bounds": ripmat.rip_bounds(mu, delta, args.k, args.s), "pass": ok})
    return 0 if ok else 1


def cmd_verify_fourier(args) -> int:
    obj = formats.read_json(args.input)
    if "elements" not in obj:
        raise FormatError(f"{args.input}: not a residue-set file")
    S = thinsets.ResidueMultiset.from_json(obj)
    prof = thinsets.fourier_max_profile(S, scan=args.scan, seed=args.seed,
                                        threads=args.threads)
    report = prof.to_json()
    ok = True
    cert = obj.get("certificate") or {}
    bound = cert.get("composed_bound")
    if bound is not None:
        ok = prof.max_normalized <= bound + TOL
        report.update({"certified_bound": bound, "pass": ok})
    else:
        report["pass"] = True
    _emit(report)
    return 0 if ok else 1


def cmd_verify_energy(args) -> int:
    obj = formats.read_json(args.input)
    try:
        m = int(obj["modulus"])
        A = additive.ResidueSet.of(m, obj["A"])
        B = additive.ResidueSet.of(m, obj["B"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{args.input}: {exc}") from exc
    conv = additive.additive_energy(A, B, mode="convolution")
    brute = additive.additive_energy(A, B, mode="brute")
    negB = additive.additive_energy(A, B.negate(), mode="convolution")
    ok = conv.energy == brute.energy == negB.energy
    _emit({"energy_convolution": conv.energy, "energy_brute": brute.energy,
           "energy_negated": negB.energy, "sizes": [len(A), len(B)], "pass": ok})
    return 0 if ok else 1


def cmd_verify_sumset(args) -> int:
    obj = formats.read_json(args.input)
    try:
        M, r = int(obj["M"]), int(obj["r"])
        A = [additive.CubePoint(digits=tuple(d), M=M, r=r) for d in obj["A"]]
        B = [additive.CubePoint(digits=tuple(d), M=M, r=r) for d in obj["B"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{args.input}: {exc}") from exc
    res = additive.verify_cube_sumset_bound(A, B)
    _emit(res)
    return 0 if res["pass"] else 1


# ---------------------------------------------------------------- export


def cmd_export(args) -> int:
    src = Path(args.input)
    if not src.exists():
        raise FormatError(f"{args.input}: no such file")
    out = Path(args.out)
    head = src.open("rb").read(4)
    is_json = head[:1] in (b"{", b"[")
    if args.format in ("text", "binary"):
        if is_json:
            raise FormatError("text/binary export needs a matrix input")
        mat = _load_matrix(src)
        if args.format == "text":
            formats.write_frame_text(out, mat)
        else:
            formats.write_frame_binary(out, mat)
    elif args.format == "csv":
        if not is_json:
            raise FormatError("csv export needs a set or point-set JSON input")
        obj = formats.read_json(src)
        if "elements" in obj:
            S = thinsets.ResidueMultiset.from_json(obj)
            mags = thinsets.profile_magnitudes(S, 1, S.modulus - 1)
            formats.write_profile_csv(out, range(1, S.modulus), mags)
        elif "points" in obj:
            z = turan.TuranPointSet.from_json(obj)
            N = int(obj.get("N", 0)) or 1024
            s, q, m = z.arrays()
            ks = np.arange(1, N + 1, dtype=np.int64)
            mags = np.abs(np.exp(2j * np.pi * (ks[:, None] * s[None, :] % q[None, :]) / q[None, :]) @ m)
            formats.write_profile_csv(out, ks, mags, value_header="|sum|")
        else:
            raise FormatError("csv export needs a set or point-set JSON input")
        cert = obj.get("certificate")
        if cert is not None:
            cert = dict(cert)
            man = _manifest_path(src)
            if man.exists():
                cert["manifest_digest"] = formats.sha256_file(man)
            formats.write_json(out.with_name(out.stem + ".cert.json"), cert)
    else:
        raise FormatError(f"unknown format {args.format!r}")
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p, seed=True):
    p.add_argument("--threads", type=int, default=None)
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="phasecert")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    gen = sub.add_parser("gen", help="generate a construction + certificate")
    gsub = gen.add_subparsers(dest="target", required=True)

    gr = gsub.add_parser("rip")
    gr.add_argument("--p", type=int, required=True)
    gr.add_argument("--L", type=int, required=True)
    gr.add_argument("--U", type=int, required=True)
    gr.add_argument("--M", type=int, required=True)
    gr.add_argument("--r", type=int, required=True)
    gr.add_argument("--N", type=int, default=None)
    gr.add_argument("--m", type=int, default=2)
    gr.add_argument("--out", required=True)
    _add_common(gr)
    gr.set_defaults(fn=cmd_gen_rip)

    gt = gsub.add_parser("thinset")
    gt.add_argument("--N", type=int, required=True)
    gt.add_argument("--mu", type=float, default=None)
    gmode = gt.add_mutually_exclusive_group()
    gmode.add_argument("--one-iteration", action="store_true", dest="one_iteration")
    gmode.add_argument("--two-stage", action="store_true", dest="two_stage")
    gt.add_argument("--P", type=int, default=None)
    gt.add_argument("--R", type=int, default=None)
    gt.add_argument("--P0", type=int, default=None)
    gt.add_argument("--P1", type=int, default=None)
    gt.add_argument("--R0", type=int, default=None)
    gt.add_argument("--R1", type=int, default=None)
    gt.add_argument("--variant", choices=["nonzero", "all_integers"], default="nonzero")
    gt.add_argument("--scan", choices=["full", "sampled", "none"], default="full")
    gt.add_argument("--strict", action="store_true")
    gt.add_argument("--emit-profile", default=None)
    gt.add_argument("--out", required=True)
    _add_common(gt)
    gt.set_defaults(fn=cmd_gen_thinset)

    gu = gsub.add_parser("turan")
    gu.add_argument("--N", type=int, required=True)
    gu.add_argument("--mu", type=float, default=None)
    gu.add_argument("--P0", type=int, default=None)
    gu.add_argument("--P1", type=int, default=None)
    gu.add_argument("--R0", type=int, default=None)
    gu.add_argument("--variant", choices=["nonzero", "all_integers"], default="nonzero")
    gu.add_argument("--scan", choices=["full", "none"], default="full")
    gu.add_argument("--strict", action="store_true")
    gu.add_argument("--out", required=True)
    _add_common(gu)
    gu.set_defaults(fn=cmd_gen_turan)

    ver = sub.add_parser("verify", help="verify an artifact, exit 0 iff pass")
    vsub = ver.add_subparsers(dest="target", required=True)

    vc = vsub.add_parser("coherence")
    vc.add_argument("input")
    _add_common(vc)
    vc.set_defaults(fn=cmd_verify_coherence)

    vr = vsub.add_parser("rip")
    vr.add_argument("input")
    vr.add_argument("--k", type=int, required=True)
    _add_common(vr)
    vr.set_defaults(fn=cmd_verify_rip)

    vf = vsub.add_parser("flat-rip")
    vf.add_argument("input")
    vf.add_argument("--k", type=int, required=True)
    vf.add_argument("--s", type=int, default=1)
    vf.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    vf.add_argument("--trials", type=int, default=10**4)
    _add_common(vf)
    vf.set_defaults(fn=cmd_verify_flat_rip)

    vo = vsub.add_parser("fourier")
    vo.add_argument("input")
    vo.add_argument("--scan", choices=["full", "sampled"], default="full")
    _add_common(vo)
    vo.set_defaults(fn=cmd_verify_fourier)

    ve = vsub.add_parser("energy")
    ve.add_argument("input")
    _add_common(ve)
    ve.set_defaults(fn=cmd_verify_energy)

    vs = vsub.add_parser("sumset")
    vs.add_argument("input")
    _add_common(vs)
    vs.set_defaults(fn=cmd_verify_sumset)

    ex = sub.add_parser("export", help="lossless format conversion")
    ex.add_argument("input")
    ex.add_argument("--format", choices=["text", "binary", "csv"], required=True)
    ex.add_argument("--out", required=True)
    ex.set_defaults(fn=cmd_export)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParameterConditionViolated as exc:
        print(f"parameter condition violated: {exc}", file=sys.stderr)
        return 2
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 3
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return 4
    except (PhasecertError, Exception) as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
