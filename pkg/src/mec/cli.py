"""Command-line front end: `mec SUBCOMMAND [flags]`, JSON documents out.

Inputs are JSON (a bare array, or an object with "p" / "q" / "dists" keys;
one document may carry both marginals) or CSV with one distribution per line
when --csv is given. Every run is deterministic: the same inputs and flags
produce byte-identical output, and floats are serialized so they re-read
bit-for-bit.

Exit codes: 0 success; 2 input or usage problem (diagnostic names the
offending field); 3 violated internal invariant.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .coupling import (
    SparseCoupling,
    is_valid_coupling,
    min_entropy_coupling_dense,
    min_entropy_coupling_sparse,
)
from .distributions import (
    NORMALIZATION_TOL,
    Distribution,
    make_distribution,
    renyi_entropy,
    shannon_entropy,
)
from .errors import InputError, InternalError
from .majorization import glb, glb_many
from .multiway import min_entropy_joint_k
from .oracle import brute_force_min_entropy
from .reports import bounds_report, metric_estimate

_ENGINES = {
    "dense": min_entropy_coupling_dense,
    "sparse": min_entropy_coupling_sparse,
}


@dataclass(frozen=True, slots=True)
class JobSpec:
    """One fully-parsed CLI invocation."""

    subcommand: str
    p_path: str | None
    q_path: str | None
    dists_path: str | None
    alpha: float | None
    engine: str
    output_format: str
    csv: bool
    renormalize: bool
    tol: float
    out_path: str | None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mec",
        description="Near-minimum-entropy couplings and majorization bounds.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(sp: argparse.ArgumentParser, p=False, q=False, dists=False) -> None:
        if p:
            sp.add_argument("--p", metavar="FILE", help="first marginal")
        if q:
            sp.add_argument("--q", metavar="FILE", help="second marginal")
        if dists:
            sp.add_argument("--dists", metavar="FILE", help="all marginals, one per row")
        sp.add_argument("--csv", action="store_true", help="inputs are CSV, one distribution per line")
        sp.add_argument("--renormalize", action="store_true", help="scale inputs to sum 1")
        sp.add_argument("--tol", type=float, default=NORMALIZATION_TOL, metavar="T",
                        help="normalization tolerance (default 1e-9)")
        sp.add_argument("--out", metavar="FILE", help="write the document here instead of stdout")

    sp = sub.add_parser("glb", help="greatest lower bound in the majorization order")
    add_common(sp, p=True, q=True)

    sp = sub.add_parser("couple", help="pairwise coupling within 1 bit of optimal")
    add_common(sp, p=True, q=True)
    sp.add_argument("--engine", choices=("dense", "sparse"), default="sparse")
    sp.add_argument("--format", choices=("dense", "sparse"), default="sparse",
                    dest="output_format", help="emit entries or a row-major matrix")

    sp = sub.add_parser("couple-k", help="k-marginal coupling within ceil(log2 k) bits")
    add_common(sp, dists=True)

    sp = sub.add_parser("entropy", help="Shannon (default) or Renyi entropy in bits")
    add_common(sp, p=True)
    sp.add_argument("--alpha", type=float, default=None, metavar="A",
                    help="Renyi order in (0,1) or (1,inf); omit for Shannon")

    sp = sub.add_parser("bounds", help="joint/mutual-information/conditional bounds")
    add_common(sp, p=True, q=True)

    sp = sub.add_parser("metric", help="coupling-entropy pseudo-metric estimate")
    add_common(sp, p=True, q=True)

    sp = sub.add_parser("oracle-check", help="certify the gap against brute force (small n)")
    add_common(sp, p=True, q=True)
    sp.add_argument("--engine", choices=("dense", "sparse"), default="sparse")

    return parser


def _job_from_args(ns: argparse.Namespace) -> JobSpec:
    return JobSpec(
        subcommand=ns.subcommand,
        p_path=getattr(ns, "p", None),
        q_path=getattr(ns, "q", None),
        dists_path=getattr(ns, "dists", None),
        alpha=getattr(ns, "alpha", None),
        engine=getattr(ns, "engine", "sparse"),
        output_format=getattr(ns, "output_format", "sparse"),
        csv=ns.csv,
        renormalize=ns.renormalize,
        tol=ns.tol,
        out_path=ns.out,
    )


def _vector(obj: object, field: str) -> list[float]:
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{field}: expected a non-empty array of numbers")
    values = []
    for x in obj:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"{field}: expected numbers, found {x!r}")
        values.append(float(x))
    return values


def _json_doc(path: str, field: str) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{field}: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{field}: {path} is not valid JSON: {exc}") from exc


def _csv_rows(path: str, field: str) -> list[list[float]]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [line.strip() for line in fh]
    except OSError as exc:
        raise InputError(f"{field}: cannot read {path}: {exc}") from exc
    rows = []
    for line in lines:
        if not line:
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise InputError(f"{field}: {path} has a non-numeric token: {exc}") from exc
    if not rows:
        raise InputError(f"{field}: {path} contains no rows")
    return rows


def _pick(doc: object, key: str, path: str) -> list[float]:
    if isinstance(doc, dict):
        if key not in doc:
            raise InputError(f'{key}: {path} has no "{key}" key')
        return _vector(doc[key], key)
    return _vector(doc, key)


def _load_marginals(job: JobSpec, need_q: bool) -> tuple[list[float], list[float] | None]:
    if job.p_path is None:
        raise InputError("p: missing --p FILE")
    if job.csv:
        rows = _csv_rows(job.p_path, "p")
        p = rows[0]
        if job.q_path is not None:
            q = _csv_rows(job.q_path, "q")[0]
        elif need_q:
            if len(rows) < 2:
                raise InputError("q: missing --q FILE (or a second row in the --p file)")
            q = rows[1]
        else:
            q = None
        return p, q
    doc = _json_doc(job.p_path, "p")
    p = _pick(doc, "p", job.p_path) if isinstance(doc, dict) else _vector(doc, "p")
    if job.q_path is not None:
        q = _pick(_json_doc(job.q_path, "q"), "q", job.q_path)
    elif need_q:
        if isinstance(doc, dict) and "q" in doc:
            q = _vector(doc["q"], "q")
        else:
            raise InputError('q: missing --q FILE (or a "q" key in the --p document)')
    else:
        q = None
    return p, q


def _load_dists(job: JobSpec) -> list[list[float]]:
    if job.dists_path is None:
        raise InputError("dists: missing --dists FILE")
    if job.csv:
        return _csv_rows(job.dists_path, "dists")
    doc = _json_doc(job.dists_path, "dists")
    if isinstance(doc, dict):
        if "dists" not in doc:
            raise InputError(f'dists: {job.dists_path} has no "dists" key')
        doc = doc["dists"]
    if not isinstance(doc, list) or not doc:
        raise InputError("dists: expected a non-empty array of arrays")
    return [_vector(row, f"dists[{i}]") for i, row in enumerate(doc)]


def _dist(raw: list[float], field: str, job: JobSpec) -> Distribution:
    try:
        return make_distribution(raw, renormalize=job.renormalize, tol=job.tol)
    except InputError as exc:
        raise InputError(f"{field}: {exc}") from exc


def _coupling_doc(m: SparseCoupling, h_glb: float, gap_bits: float, dense: bool) -> dict:
    h = shannon_entropy(m.values())
    doc: dict = {"n_rows": m.n_rows, "n_cols": m.n_cols}
    if dense:
        matrix = [[0.0] * m.n_cols for _ in range(m.n_rows)]
        for e in m.entries:
            matrix[e.row][e.col] = e.value
        doc["matrix"] = matrix
    else:
        doc["entries"] = [{"i": e.row, "j": e.col, "v": e.value} for e in m.entries]
    doc["entropy_bits"] = h
    doc["glb_entropy_bits"] = h_glb
    doc["gap_bound_bits"] = h_glb + gap_bits
    return doc


def _execute(job: JobSpec) -> dict:
    if job.subcommand == "glb":
        p, q = _load_marginals(job, need_q=True)
        z = glb(_dist(p, "p", job), _dist(q, "q", job))
        return {"glb": list(z.masses), "entropy_bits": shannon_entropy(z.masses)}

    if job.subcommand == "couple":
        p, q = _load_marginals(job, need_q=True)
        dp, dq = _dist(p, "p", job), _dist(q, "q", job)
        m = _ENGINES[job.engine](dp, dq)
        h_glb = shannon_entropy(glb(dp, dq).masses)
        return _coupling_doc(m, h_glb, 1.0, dense=job.output_format == "dense")

    if job.subcommand == "couple-k":
        rows = _load_dists(job)
        ds = [_dist(row, f"dists[{i}]", job) for i, row in enumerate(rows)]
        joint = min_entropy_joint_k(ds)
        h_glb = shannon_entropy(glb_many(ds).masses)
        kappa = (len(ds) - 1).bit_length()
        return {
            "dims": list(joint.dims),
            "entries": [{"coords": list(e.coords), "v": e.value} for e in joint.entries],
            "entropy_bits": shannon_entropy(joint.values()),
            "glb_entropy_bits": h_glb,
            "gap_bound_bits": h_glb + kappa,
        }

    if job.subcommand == "entropy":
        p, _ = _load_marginals(job, need_q=False)
        dp = _dist(p, "p", job)
        if job.alpha is None:
            return {"entropy_bits": shannon_entropy(dp.masses), "alpha": None}
        try:
            value = renyi_entropy(dp.masses, job.alpha)
        except InputError as exc:
            raise InputError(f"alpha: {exc}") from exc
        return {"entropy_bits": value, "alpha": job.alpha}

    if job.subcommand == "bounds":
        p, q = _load_marginals(job, need_q=True)
        r = bounds_report(_dist(p, "p", job), _dist(q, "q", job))
        return {
            "H_p": r.h_p,
            "H_q": r.h_q,
            "H_glb": r.h_glb,
            "joint_lower": r.joint_lower,
            "mi_upper": r.mi_upper,
            "cond_lower_x_given_y": r.cond_lower_x_given_y,
            "cond_lower_y_given_x": r.cond_lower_y_given_x,
        }

    if job.subcommand == "metric":
        p, q = _load_marginals(job, need_q=True)
        est = metric_estimate(_dist(p, "p", job), _dist(q, "q", job))
        return {"d_hat": est.d_hat, "lower": est.lower, "upper": est.upper}

    if job.subcommand == "oracle-check":
        p, q = _load_marginals(job, need_q=True)
        dp, dq = _dist(p, "p", job), _dist(q, "q", job)
        m = _ENGINES[job.engine](dp, dq)
        ok, why = is_valid_coupling(m, dp, dq, tol=job.tol)
        if not ok:
            raise InternalError(f"engine produced an invalid coupling: {why}")
        opt = brute_force_min_entropy(dp, dq)
        alg = shannon_entropy(m.values())
        return {"opt": opt.opt_value, "alg": alg, "gap": alg - opt.opt_value}

    raise InputError(f"unknown subcommand {job.subcommand!r}")


def run(argv: list[str] | None = None) -> int:
    """Parse, execute, and emit one document; returns the exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    job = _job_from_args(ns)
    try:
        doc = _execute(job)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    text = json.dumps(doc, indent=2) + "\n"
    if job.out_path:
        try:
            with open(job.out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: out: cannot write {job.out_path}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
