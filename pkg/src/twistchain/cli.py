"""Command-line front end.

Subcommands: `verify r|k|chain|symmetry|fusion`, `spectrum`, `decompose`,
`bethe solve|check|complete`, `reproduce tableK`.  Every subcommand
accepts either flags or `--manifest FILE` (a JSON object with the same
keys as the flags; unknown keys are rejected).  Results are emitted as a
canonical JSON document on stdout or into `--out`.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import bethe, chain, jsonio, kmatrix, linalg, qsymm, rmatrix, tables
from .bethe import BetheRootSet, SolveConfig
from .chain import ChainSpec
from .kmatrix import BoundaryCase
from .rmatrix import ModelSpec

_MANIFEST_KEYS = {
    "command", "family", "case", "n", "sites", "eta", "beta", "xi_minus",
    "mu_minus", "mu_plus", "thetas", "samples", "seed", "starts", "m",
    "mcap", "tol", "out", "table", "cartan_only", "site", "roots", "u",
}


class UsageError(Exception):
    pass


def _parse_complex(text) -> complex:
    if isinstance(text, (list, tuple)):
        return complex(text[0], text[1])
    parts = str(text).split(",")
    if len(parts) != 2:
        raise UsageError(f"complex values are written re,im (got {text!r})")
    return complex(float(parts[0]), float(parts[1]))


def _parse_ints(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    return tuple(int(x) for x in str(text).split(","))


def _parse_thetas(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(_parse_complex(t) for t in text)
    return tuple(_parse_complex(part) for part in str(text).split(";") if part)


def _apply_manifest(args):
    if not getattr(args, "manifest", None):
        return args
    with open(args.manifest, "rb") as f:
        doc = json.load(f)
    unknown = set(doc) - _MANIFEST_KEYS
    if unknown:
        raise UsageError(f"unknown manifest keys: {sorted(unknown)}")
    for key, value in doc.items():
        if key == "command":
            continue
        setattr(args, key, value)
    return args


def _model(args) -> ModelSpec:
    return ModelSpec(args.family, int(args.n), _parse_complex(args.eta))


def _case(args) -> BoundaryCase:
    kwargs = {}
    if getattr(args, "beta", None) is not None:
        kwargs["beta"] = _parse_complex(args.beta)
    if getattr(args, "xi_minus", None) is not None:
        kwargs["xi_minus"] = _parse_complex(args.xi_minus)
    if getattr(args, "mu_minus", None) is not None:
        kwargs["mu_minus"] = _parse_complex(args.mu_minus)
    if getattr(args, "mu_plus", None) is not None:
        kwargs["mu_plus"] = _parse_complex(args.mu_plus)
    return BoundaryCase(args.family, args.case, **kwargs)


def _chain_spec(args) -> ChainSpec:
    thetas = _parse_thetas(args.thetas) if getattr(args, "thetas", None) else ()
    return ChainSpec(_model(args), _case(args), int(args.sites), thetas)


def _manifest_echo(args) -> dict:
    echo = {}
    for key in sorted(_MANIFEST_KEYS):
        value = getattr(args, key, None)
        if value is not None and key not in ("out",):
            echo[key] = value
    return echo


def _emit(args, payload, ok: bool, started: float) -> int:
    doc = jsonio.result_document(_manifest_echo(args), payload, time.time() - started)
    data = jsonio.encode(doc)
    if getattr(args, "out", None):
        with open(args.out, "wb") as f:
            f.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0 if ok else 1


def _cmd_verify_r(args):
    started = time.time()
    rep = rmatrix.verify_r(_model(args), int(args.samples), int(args.seed), float(args.tol))
    return _emit(args, rep.as_dict(), rep.all_passed, started)


def _cmd_verify_k(args):
    started = time.time()
    rep = kmatrix.verify_k(_model(args), _case(args), int(args.samples),
                           int(args.seed), float(args.tol))
    return _emit(args, rep.as_dict(), rep.all_passed, started)


def _cmd_verify_chain(args):
    started = time.time()
    rep = chain.verify_chain(_chain_spec(args), int(args.samples), int(args.seed))
    return _emit(args, rep.as_dict(), rep.all_passed, started)


def _cmd_verify_symmetry(args):
    started = time.time()
    spec = _chain_spec(args)
    alg = qsymm.algebra_for_case(spec.case, spec.model.n)
    target = chain.hamiltonian(spec).matrix
    rep = qsymm.verify_symmetry(target, alg, spec.model.eta, spec.n_sites,
                                cartan_only=bool(args.cartan_only), tol=float(args.tol))
    alg_rep = qsymm.verify_algebra(alg, spec.model.eta, tol=float(args.tol))
    ok = rep.all_passed and alg_rep.all_passed
    return _emit(args, {"hamiltonian": rep.as_dict(), "algebra": alg_rep.as_dict()}, ok, started)


def _cmd_verify_fusion(args):
    started = time.time()
    rep = chain.verify_fusion(_chain_spec(args), int(args.site))
    return _emit(args, rep.as_dict(), rep.all_passed, started)


def _cmd_spectrum(args):
    started = time.time()
    spec = _chain_spec(args)
    clusters = linalg.eig(chain.hamiltonian(spec).matrix)
    return _emit(args, jsonio.spectrum_payload(clusters), True, started)


def _cmd_decompose(args):
    started = time.time()
    spec = _chain_spec(args)
    dec = qsymm.decompose_spectrum(spec)
    payload = {
        "blocks": [{
            "label": list(b.label), "deg": b.dim, "multiplicity": b.multiplicity,
            "starred": b.starred, "weyl_dimension": b.weyl_dimension,
            "hw_count": b.hw_count,
        } for b in dec.blocks],
        "anomalies": [{"eigenvalue": jsonio.cnum(a["eigenvalue"]), "deg": a["degeneracy"]}
                      for a in dec.anomalies],
        "total_dimension": dec.total_dimension(),
    }
    ok = not dec.anomalies and dec.total_dimension() == spec.dim
    return _emit(args, payload, ok, started)


def _solve_config(args) -> SolveConfig:
    return SolveConfig(starts=int(args.starts), rng_seed=int(args.seed))


def _cmd_bethe_solve(args):
    started = time.time()
    spec = _chain_spec(args)
    sols = bethe.solve(spec, _parse_ints(args.m), _solve_config(args))
    payload = {"solutions": [jsonio.rootset_payload(s) for s in sols]}
    return _emit(args, payload, True, started)


def _cmd_bethe_check(args):
    started = time.time()
    spec = _chain_spec(args)
    roots = jsonio.rootset_from_payload(json.loads(args.roots))
    res = bethe.residuals(spec, roots)
    payload = {"residuals": [jsonio.cnum(r) for r in res],
               "max_abs": float(np.max(np.abs(res))) if len(res) else 0.0}
    return _emit(args, payload, payload["max_abs"] < float(args.tol), started)


def _cmd_bethe_complete(args):
    started = time.time()
    spec = _chain_spec(args)
    report = bethe.completeness(spec, _parse_ints(args.mcap), _solve_config(args))
    return _emit(args, jsonio.match_report_payload(report), report.complete, started)


def _cmd_reproduce(args):
    started = time.time()
    cfg = SolveConfig(starts=int(args.starts), rng_seed=int(args.seed))
    rep = tables.reproduce(args.table, cfg)
    return _emit(args, rep.as_dict(), rep.passed, started)


def _add_model_flags(p, sites=False):
    p.add_argument("--family", default="a-twisted",
                   help="a-twisted (d = 2n) or d-twisted (d = 2n + 2)")
    p.add_argument("--n", default=1, type=int, help="rank")
    p.add_argument("--eta", default="0,-0.1", help="anisotropy as re,im")
    if sites:
        p.add_argument("--sites", default=2, type=int, help="chain length N")
        p.add_argument("--thetas", default=None,
                       help="inhomogeneities 're,im;re,im;...' (one per site)")


def _add_case_flags(p):
    p.add_argument("--case", default="I", help="boundary case name")
    p.add_argument("--beta", default=None, help="beta-diag parameter (re,im)")
    p.add_argument("--xi-minus", dest="xi_minus", default=None)
    p.add_argument("--mu-minus", dest="mu_minus", default=None)
    p.add_argument("--mu-plus", dest="mu_plus", default=None)


def _add_common(p):
    p.add_argument("--manifest", default=None, help="JSON file supplying the options")
    p.add_argument("--out", default=None, help="write the result document to this path")
    p.add_argument("--tol", default=1e-9, type=float)
    p.add_argument("--samples", default=20, type=int)
    p.add_argument("--seed", default=0, type=int)
    p.add_argument("--threads", default=1, type=int,
                   help="kept at 1 for bit-stable output ordering")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="twistchain", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="identity suites").add_subparsers(
        dest="what", required=True)
    p = verify.add_parser("r", help="R-matrix identities")
    _add_model_flags(p); _add_common(p); p.set_defaults(func=_cmd_verify_r)
    p = verify.add_parser("k", help="reflection-equation identities")
    _add_model_flags(p); _add_case_flags(p); _add_common(p); p.set_defaults(func=_cmd_verify_k)
    p = verify.add_parser("chain", help="transfer-matrix and Hamiltonian identities")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.set_defaults(func=_cmd_verify_chain)
    p = verify.add_parser("symmetry", help="quantum-group commutators")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.add_argument("--cartan-only", dest="cartan_only", action="store_true")
    p.set_defaults(func=_cmd_verify_symmetry)
    p = verify.add_parser("fusion", help="fused transfer functional relation")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.add_argument("--site", default=1, type=int)
    p.set_defaults(func=_cmd_verify_fusion)

    p = sub.add_parser("spectrum", help="Hamiltonian eigenvalue clusters")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("decompose", help="irreducible-block decomposition of the spectrum")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.set_defaults(func=_cmd_decompose)

    bethe_sub = sub.add_parser("bethe", help="Bethe-ansatz operations").add_subparsers(
        dest="what", required=True)
    p = bethe_sub.add_parser("solve", help="find root sets of given cardinalities")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.add_argument("--m", required=False, default="1", help="cardinalities, e.g. 2,1")
    p.add_argument("--starts", default=2000, type=int)
    p.set_defaults(func=_cmd_bethe_solve)
    p = bethe_sub.add_parser("check", help="residuals of a given root set")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.add_argument("--roots", required=True, help='JSON {"levels": [[[re,im],...],...]}')
    p.set_defaults(func=_cmd_bethe_check)
    p = bethe_sub.add_parser("complete", help="match all eigenvalues against root sets")
    _add_model_flags(p, sites=True); _add_case_flags(p); _add_common(p)
    p.add_argument("--mcap", default="2", help="per-level cardinality caps")
    p.add_argument("--starts", default=2000, type=int)
    p.set_defaults(func=_cmd_bethe_complete)

    p = sub.add_parser("reproduce", help="re-derive a bundled golden table")
    p.add_argument("table", help="table1 .. table22")
    _add_common(p)
    p.add_argument("--starts", default=2000, type=int)
    p.set_defaults(func=_cmd_reproduce)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        args = _apply_manifest(args)
        return args.func(args)
    except (np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
