"""Command line front end.

Subcommands: construct, verify, encode, decode, simulate, capacity. Any
library error ends the process with a nonzero status after printing the
error class name on stderr; a failed verification prints the witness and
exits with status 1.
"""

import argparse
import sys

import numpy as np

from . import capacity as cap
from . import construct as con
from . import decode as dec
from . import simulate as sim
from . import verify as ver
from .errors import BadRange, InconsistentSpec, SqgtError
from .fileio import read_matrix, write_matrix
from .model import CodeParams, NoiseModel, apply_noise, syndrome, validate_params

CONSTRUCT_METHODS = (
    "scale-disjunct",
    "random-disjunct",
    "concat-disjunct",
    "scale-separable",
    "bose-chowla",
    "concat-separable",
    "random-binary",
    "lindstrom",
)
VERIFY_PROPERTIES = ("sq-disjunct", "sq-separable", "bin-disjunct", "bin-sep-cgt", "bin-sep-qgt")
DECODE_ALGORITHMS = ("disjunct", "concat", "lindstrom", "ml", "bp")


def _int_list(raw: str) -> list[int]:
    return [int(x) for x in raw.replace(",", " ").split()]


def _thresholds(args) -> tuple[int, ...]:
    if args.thresholds:
        return tuple(_int_list(args.thresholds))
    raise BadRange("this method needs --thresholds with the full eta vector")


def _load(path):
    C, q, Q, eta = read_matrix(path)
    return C, q, Q, tuple(eta)


def _rebuild_concat(C, q, eta, d, e) -> con.ConcatSpec:
    step = eta[1]
    _, spec = con.concat_disjunct(np.ones((1, 1), dtype=int), d, e, q, step)
    scales = spec.scales
    if C.shape[1] % len(scales):
        raise InconsistentSpec(
            f"n={C.shape[1]} is not divisible by the {len(scales)} blocks"
        )
    nb = C.shape[1] // len(scales)
    base = C[:, :nb] // scales[0]
    rebuilt = np.hstack([s * base for s in scales])
    if not np.array_equal(rebuilt, C):
        raise InconsistentSpec("code is not a scaled-block concatenation for these parameters")
    params = CodeParams.equidistant(q, step, 1, d, e)
    return con.ConcatSpec(base=base, scales=scales, d=d, e=e, eta_step=step, params=params)


def _rebuild_lindstrom(C, q, eta, kappa) -> con.LindstromSpec:
    step = eta[1]
    if C.shape[0] != 2**kappa - 1:
        raise InconsistentSpec(f"m={C.shape[0]} does not match kappa={kappa}")
    if np.any(C % step):
        raise InconsistentSpec("entries are not multiples of the threshold step")
    levels = (q - 1) // step
    q2 = levels.bit_length() - 1
    subsets = tuple(con.ordered_subsets(kappa))
    full_widths = [q2 + len(S) for S in subsets]
    if C.shape[1] > sum(full_widths):
        raise InconsistentSpec(f"n={C.shape[1]} exceeds the construction size {sum(full_widths)}")
    widths = []
    remaining = C.shape[1]
    for w in full_widths:
        take = min(w, remaining)
        widths.append(take)
        remaining -= take
    chains = tuple(tuple(con._default_chain(S)) for S in subsets)
    params = CodeParams.equidistant(q, step, 1, C.shape[1], 0)
    return con.LindstromSpec(
        kappa=kappa, q=q, eta_step=step, q2=q2, subsets=subsets, chains=chains,
        widths=tuple(widths), matrix=C // step, params=params,
    )


def _cmd_construct(args) -> int:
    seed = args.seed
    if args.method == "scale-disjunct":
        base, *_ = _load(args.base)
        C, params = con.scale_disjunct(base, args.d, args.e, args.q, _thresholds(args))
    elif args.method == "scale-separable":
        base, *_ = _load(args.base)
        C, params = con.scale_separable(
            base, args.d, args.e, args.q, _thresholds(args), base_kind=args.base_kind
        )
    elif args.method == "random-disjunct":
        levels = args.levels if args.levels else (args.q - 1) // args.eta
        C, params = con.random_disjunct(
            args.n, args.d, levels, args.eta, e=args.e, p0=args.p0, delta=args.delta,
            seed=seed, q=args.q, m=args.m, m_multiplier=args.m_multiplier,
        )
    elif args.method == "concat-disjunct":
        base, *_ = _load(args.base)
        C, spec = con.concat_disjunct(base, args.d, args.e, args.q, args.eta)
        params = spec.params
    elif args.method == "concat-separable":
        base, *_ = _load(args.base)
        C, spec = con.concat_separable(base, args.d, args.e, args.q, args.eta)
        params = spec.params
    elif args.method == "bose-chowla":
        C, params = con.bose_chowla_code(args.n, args.d, args.q, args.eta)
    elif args.method == "random-binary":
        C, params = con.random_binary_separable(
            args.n, args.d, _thresholds(args), args.alpha, e=args.e, delta=args.delta,
            seed=seed, m=args.m, m_multiplier=args.m_multiplier,
        )
    else:  # lindstrom
        C, spec = con.lindstrom(args.kappa, args.q, args.eta, n=args.n)
        params = spec.params
    write_matrix(args.out, C, params.q, params.Q, params.eta)
    print(f"wrote {C.shape[0]}x{C.shape[1]} code {params} to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    C, q, Q, eta = _load(args.code)
    if args.property == "sq-disjunct":
        params = CodeParams(q=q, Q=Q, eta=eta, l=1, u=args.d, e=args.e)
        validate_params(params)
        witness = ver.is_sq_disjunct(C, params, budget=args.budget)
    elif args.property == "sq-separable":
        u = args.u if args.u else args.d
        params = CodeParams(q=q, Q=Q, eta=eta, l=args.l, u=u, e=args.e)
        validate_params(params)
        witness = ver.is_sq_separable(C, params, budget=args.budget)
    elif args.property == "bin-disjunct":
        witness = ver.is_binary_disjunct_cgt(C, args.d, args.e, budget=args.budget)
    elif args.property == "bin-sep-cgt":
        witness = ver.is_binary_separable_cgt(C, args.d, args.e, budget=args.budget)
    else:
        witness = ver.is_binary_separable_qgt(C, args.d, args.e, budget=args.budget)
    if witness is None:
        print("PASS")
        return 0
    print(f"WITNESS {witness}")
    return 1


def _cmd_encode(args) -> int:
    C, q, Q, eta = _load(args.code)
    subjects = _int_list(args.defectives) if args.defectives else []
    y = syndrome(C, subjects, eta)
    if args.gamma_p or args.gamma_n:
        y = apply_noise(y, Q, NoiseModel(args.gamma_p, args.gamma_n), args.seed)
    print(" ".join(str(int(v)) for v in y))
    return 0


def _cmd_decode(args) -> int:
    C, q, Q, eta = _load(args.code)
    z = np.array(_int_list(args.syndrome), dtype=np.int64)
    noise = NoiseModel(args.gamma_p, args.gamma_n)
    if args.algorithm == "disjunct":
        params = CodeParams(q=q, Q=Q, eta=eta, l=1, u=args.d, e=args.e)
        validate_params(params)
        found = dec.decode_disjunct(C, params, z)
    elif args.algorithm == "concat":
        spec = _rebuild_concat(C, q, eta, args.d, args.e)
        found = dec.decode_concat(spec, z)
    elif args.algorithm == "lindstrom":
        spec = _rebuild_lindstrom(C, q, eta, args.kappa)
        found = dec.decode_lindstrom(spec, z)
    elif args.algorithm == "ml":
        u = args.u if args.u else args.d
        params = CodeParams(q=q, Q=Q, eta=eta, l=args.l, u=u, e=args.e)
        validate_params(params)
        found = dec.decode_ml(C, params, z, noise)
    else:  # bp
        params = CodeParams(q=q, Q=Q, eta=eta, l=1, u=args.d, e=args.e)
        validate_params(params)
        cfg = dec.BpConfig(max_iters=args.iterations, damping=args.damping, tol=args.bp_tol)
        marg = dec.bp_decode(C, params, z, noise, d=args.d, cfg=cfg)
        if args.select == "top-d":
            found = dec.select_topd(marg, args.d)
        else:
            found = dec.select_threshold(marg)
    print(",".join(str(i) for i in found))
    return 0


def _cmd_simulate(args) -> int:
    with open(args.config) as fh:
        cfg = sim.parse_config(fh.read())
    rows = sim.run_simulation(cfg, threads=args.threads)
    text = sim.rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_capacity(args) -> int:
    pt, quant, bits = cap.capacity_search(
        args.d, args.q, args.Q, grid_step=args.grid_step, budget=args.budget,
        refine=not args.no_refine,
    )
    probs = " ".join(f"{p:.6g}" for p in pt)
    print(f"P_T = [{probs}]  quantizer = {quant}  alpha = {bits:.6f} bits")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="sqgt", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a test matrix")
    c.add_argument("--method", required=True, choices=CONSTRUCT_METHODS)
    c.add_argument("--out", required=True)
    c.add_argument("--base", help="matrix file with the binary base code")
    c.add_argument("--n", type=int)
    c.add_argument("--d", type=int, default=1)
    c.add_argument("--e", type=int, default=0)
    c.add_argument("--q", type=int, default=2)
    c.add_argument("--eta", type=int, default=1, help="threshold step (equidistant methods)")
    c.add_argument("--thresholds", help="full eta vector, comma separated")
    c.add_argument("--levels", type=int, help="nonzero levels for random-disjunct")
    c.add_argument("--alpha", type=int, default=1, help="threshold index for random-binary")
    c.add_argument("--kappa", type=int, default=2)
    c.add_argument("--p0", type=float)
    c.add_argument("--delta", type=float, default=1.0)
    c.add_argument("--m", type=int, help="override the formula row count")
    c.add_argument("--m-multiplier", type=float, default=1.0)
    c.add_argument("--base-kind", choices=("cgt", "qgt"), default="cgt")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=_cmd_construct)

    v = sub.add_parser("verify", help="brute-force check a code property")
    v.add_argument("--code", required=True)
    v.add_argument("--property", required=True, choices=VERIFY_PROPERTIES)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--e", type=int, default=0)
    v.add_argument("--l", type=int, default=1)
    v.add_argument("--u", type=int)
    v.add_argument("--budget", type=int, default=ver.DEFAULT_BUDGET)
    v.set_defaults(func=_cmd_verify)

    e = sub.add_parser("encode", help="syndrome of a defective set")
    e.add_argument("--code", required=True)
    e.add_argument("--defectives", default="", help="1-based subject indices, comma separated")
    e.add_argument("--gamma-p", type=float, default=0.0)
    e.add_argument("--gamma-n", type=float, default=0.0)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=_cmd_encode)

    d = sub.add_parser("decode", help="recover defectives from a syndrome")
    d.add_argument("--code", required=True)
    d.add_argument("--syndrome", required=True)
    d.add_argument("--algorithm", required=True, choices=DECODE_ALGORITHMS)
    d.add_argument("--d", type=int, default=1)
    d.add_argument("--e", type=int, default=0)
    d.add_argument("--l", type=int, default=1)
    d.add_argument("--u", type=int)
    d.add_argument("--kappa", type=int, default=2)
    d.add_argument("--gamma-p", type=float, default=0.0)
    d.add_argument("--gamma-n", type=float, default=0.0)
    d.add_argument("--iterations", type=int, default=20)
    d.add_argument("--damping", type=float, default=0.0)
    d.add_argument("--bp-tol", type=float)
    d.add_argument("--select", choices=("top-d", "threshold"), default="top-d")
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=_cmd_decode)

    s = sub.add_parser("simulate", help="run an error-rate sweep to CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=_cmd_simulate)

    k = sub.add_parser("capacity", help="search input distributions and quantizers")
    k.add_argument("--d", type=int, required=True)
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--Q", type=int, required=True)
    k.add_argument("--grid-step", type=float, default=0.01)
    k.add_argument("--budget", type=int, default=10_000_000)
    k.add_argument("--no-refine", action="store_true")
    k.set_defaults(func=_cmd_capacity)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SqgtError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
