"""Command-line front end: ``cohomex group|cohomology|verify|census|snf``.

Exit codes: 0 success, 1 failed claim or internal invariant violation,
2 usage or parse error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .cache import ResultCache, default_cache_dir
from .cohomology import DEFAULT_BUDGET, CoefficientSpec, INTEGRAL, cohomology
from .errors import InvariantViolation, ParseError, PrecisionError, ResourceError, UnsupportedError
from .exponents import (
    CLAIMS,
    ExponentSummary,
    check_cor1,
    check_cor4,
    check_lemma1,
    check_prop1,
    check_prop2,
    check_transfer_bound,
    epsilon,
    extension_class_order,
    lemma1_bound,
)
from .groups import (
    DEFAULT_DEPTH,
    FiniteGroup,
    abelian_invariants,
    build_family_group,
    center,
    generated_subgroup,
    is_cyclic_subgroup,
    normalize_params,
    parse_descriptor,
    parse_family_params,
    wreath_sylow,
)
from .intlinalg import (
    DEFAULT_BIT_BOUND,
    AbelianGroupInvariants,
    homology_at,
    parse_matrices,
    smith_normal_form,
    snf_local,
)
from .report import CohomologyReport, JobSpec, degree_entry, parse_degrees, render

log = logging.getLogger("cohomex")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _open_cache(path) -> ResultCache | None:
    path = path or default_cache_dir()
    return ResultCache(path) if path else None


def invariants_cached(G: FiniteGroup, coeffs: CoefficientSpec, n: int,
                      cache: ResultCache | None, budget: int = DEFAULT_BUDGET,
                      max_bits: int = DEFAULT_BIT_BOUND) -> AbelianGroupInvariants:
    if cache is not None:
        hit = cache.get(G.descriptor, str(coeffs), n)
        if hit is not None:
            return AbelianGroupInvariants.from_json(hit)
    inv = cohomology(G, coeffs, n, budget=budget, bit_bound=max_bits)
    if cache is not None:
        cache.put(G.descriptor, str(coeffs), n, inv.to_json())
    return inv


def run_cohomology(job: JobSpec, cache: ResultCache | None = None) -> CohomologyReport:
    start = time.monotonic()
    G = parse_descriptor(job.descriptor)
    rep = CohomologyReport("cohomology", G.descriptor, G.order, str(job.coeffs))
    for n in job.degrees:
        if time.monotonic() - start > job.time_limit:
            raise ResourceError(f"time limit {job.time_limit}s reached before degree {n}")
        inv = invariants_cached(G, job.coeffs, n, cache, job.budget_generators, job.max_bits)
        rep.degrees.append(degree_entry(n, inv))
    rep.timing = {"seconds": round(time.monotonic() - start, 3),
                  "cache_hits": cache.hits if cache else 0,
                  "cache_misses": cache.misses if cache else 0}
    return rep


# ------------------------------------------------------------- census

def census_grid(primes, max_param: int) -> list:
    seen = {}
    for p in primes:
        for a in range(1, max_param + 1):
            for b in range(1, max_param + 1):
                for g in range(1, max_param + 1):
                    for d in range(0, g + 1):
                        P = normalize_params(p, a, b, g, d)
                        seen.setdefault(tuple(P), P)
    return sorted(seen.values(), key=tuple)


def census_cell(params, degrees: range, budget: int, cache_dir, depth: int) -> dict:
    cache = ResultCache(cache_dir) if cache_dir else None
    eps = epsilon(params)
    row = ExponentSummary(params, eps, params.p ** (params.gamma - params.delta),
                          params.p ** params.gamma, None)
    try:
        G = build_family_group(params)
    except ResourceError as exc:
        row.skipped = str(exc)
        return row.to_json()
    row.m = extension_class_order(params, G)
    try:
        row.lemma1_n = lemma1_bound(G, max(depth, eps))
    except ResourceError as exc:
        row.skipped = str(exc)
    for n in degrees:
        if n <= 0:
            continue
        try:
            inv = invariants_cached(G, INTEGRAL, n, cache, budget)
        except ResourceError as exc:
            row.skipped = f"degree {n}: {exc}"
            break
        row.exponents[n] = inv.exponent
        if row.first_epsilon_degree is None and inv.exponent == params.p ** eps:
            row.first_epsilon_degree = n
    return row.to_json()


def run_census(primes, max_param: int, degrees: range, budget: int, cache_dir=None,
               workers: int = 1, depth: int = DEFAULT_DEPTH) -> CohomologyReport:
    start = time.monotonic()
    grid = census_grid(primes, max_param)
    args = [(P, degrees, budget, str(cache_dir) if cache_dir else None, depth) for P in grid]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(census_cell, *zip(*args)))
    else:
        rows = [census_cell(*a) for a in args]
    rep = CohomologyReport("census", coeffs=str(INTEGRAL), census=rows)
    rep.timing = {"seconds": round(time.monotonic() - start, 3), "cache_hits": 0, "cache_misses": 0}
    return rep


# ------------------------------------------------------------- verify

def _pick_subgroup(G: FiniteGroup, spec: str | None):
    if spec:
        try:
            elems = [G.word(w) for w in spec.split(",")]
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad subgroup generators {spec!r}: {exc}") from None
        return generated_subgroup(G, elems)
    names = [n for n, _ in G.generators]
    if G.descriptor.startswith("family:"):
        return generated_subgroup(G, [G.generator("c")])
    Z = center(G)
    if not is_cyclic_subgroup(G, Z):
        raise ParseError(f"center of {G.descriptor} is not cyclic; pass --subgroup (generators {names})")
    return Z


def run_verify(claim: str, target: str, degrees: range, subgroup: str | None = None,
               depth: int = DEFAULT_DEPTH) -> CohomologyReport:
    start = time.monotonic()
    if claim == "transfer":
        body = target.split(":", 1)[-1]
        kv = dict(item.split("=") for item in body.split(",")) if "=" in body else {}
        try:
            p, n = int(kv["p"]), int(kv["n"])
        except (KeyError, ValueError):
            raise ParseError("transfer target must look like wreath:p=2,n=2") from None
        verdicts = [check_transfer_bound(p, n, degrees)]
        G = wreath_sylow(p, n)
    elif claim == "prop2":
        P = parse_family_params(target)
        G = build_family_group(P)
        summary, v = check_prop2(P, degrees, G)
        verdicts = [v]
    else:
        G = parse_descriptor(target)
        if claim == "cor4":
            verdicts = [check_cor4(G, degrees.stop - 1)]
        elif claim == "lemma1":
            verdicts = [check_lemma1(G, degrees, depth)]
        elif claim == "prop1":
            verdicts = [check_prop1(G, _pick_subgroup(G, subgroup), degrees)]
        elif claim == "cor1":
            verdicts = [check_cor1(G, _pick_subgroup(G, subgroup), degrees)]
        else:
            raise ParseError(f"unknown claim {claim!r}")
    rep = CohomologyReport("verify", G.descriptor, G.order, str(INTEGRAL), verdicts=[v.to_json() for v in verdicts])
    rep.timing = {"seconds": round(time.monotonic() - start, 3), "cache_hits": 0, "cache_misses": 0}
    return rep


# --------------------------------------------------------------- group

def group_facts(G: FiniteGroup) -> dict:
    Z = center(G)
    facts = {"descriptor": G.descriptor, "order": G.order, "abelian": G.is_abelian,
             "center_order": Z.order,
             "generators": [{"name": n, "id": g, "order": G.element_orders[g]} for n, g in G.generators]}
    if G.is_abelian:
        facts["abelian_invariants"] = list(abelian_invariants(G))
    return facts


def _print_group(facts: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(facts, sort_keys=True, indent=2)
    lines = [f"{facts['descriptor']}", f"order: {facts['order']}",
             f"abelian: {'yes' if facts['abelian'] else 'no'}",
             f"center order: {facts['center_order']}"]
    if "abelian_invariants" in facts:
        lines.append(f"abelian invariants: ({', '.join(map(str, facts['abelian_invariants']))})")
    lines.append("generators: " + ", ".join(f"{g['name']}=#{g['id']} (order {g['order']})"
                                            for g in facts["generators"]))
    return "\n".join(lines)


# ----------------------------------------------------------------- snf

def run_snf(path: str, transforms: bool, local: str | None, homology: bool, modulus: int) -> str:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    mats = parse_matrices(text)
    out = []
    if homology:
        for i in range(len(mats) - 1):
            inv = homology_at(mats[i], mats[i + 1], modulus)
            out.append(f"H at object {i + 1}: {inv}")
        return "\n".join(out)
    for i, A in enumerate(mats):
        res = smith_normal_form(A, want_transforms=transforms)
        out.append(f"matrix {i}: {A.rows}x{A.cols} rank {res.rank} factors {list(res.factors)}")
        if transforms:
            ok = res.U @ A @ res.V == res.diagonal_matrix()
            out.append(f"  U*A*V == D: {ok}")
        if local:
            p, k = (int(v) for v in local.split(","))
            try:
                out.append(f"  local p={p} k={k}: {list(snf_local(A, p, k, res.rank))}")
            except PrecisionError as exc:
                out.append(f"  local p={p} k={k}: precision exhausted ({exc})")
    return "\n".join(out)


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cohomex", description="Integral group cohomology and exponent checks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, degrees="0..4"):
        sp.add_argument("--degrees", default=degrees, help="inclusive range A..B")
        sp.add_argument("--format", choices=("json", "md", "csv"), default="json")
        sp.add_argument("--budget-generators", type=int, default=DEFAULT_BUDGET)
        sp.add_argument("--time-limit", type=float, default=1800.0, help="seconds")
        sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH,
                        help="subgroup enumeration depth (index p^depth)")

    g = sub.add_parser("group", help="print facts about a group")
    g.add_argument("descriptor")
    g.add_argument("--format", choices=("json", "text"), default="text")

    c = sub.add_parser("cohomology", help="cohomology groups in a degree range")
    c.add_argument("descriptor")
    c.add_argument("--coeffs", default="int", help="int or mod:m")
    c.add_argument("--cache-dir", default=None)
    c.add_argument("--max-bits", type=int, default=DEFAULT_BIT_BOUND,
                   help="abort if an elimination entry exceeds this many bits")
    common(c)

    v = sub.add_parser("verify", help="run one exponent check")
    v.add_argument("claim", choices=CLAIMS)
    v.add_argument("target", help="group descriptor (wreath:p=..,n=.. for transfer)")
    v.add_argument("--subgroup", default=None,
                   help="comma-separated generator words for C, e.g. c or g^2")
    common(v, "0..6")

    s = sub.add_parser("census", help="exponent table over the family grid")
    s.add_argument("--primes", default="2", help="comma-separated primes")
    s.add_argument("--max-param", type=int, default=2, help="bound for alpha, beta, gamma")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--cache-dir", default=None)
    common(s)

    n = sub.add_parser("snf", help="Smith normal form of matrices in the text format")
    n.add_argument("path", help="matrix file, or - for stdin")
    n.add_argument("--transforms", action="store_true")
    n.add_argument("--local", default=None, help="p,k for the local elimination")
    n.add_argument("--homology", action="store_true",
                   help="treat the file as a complex and print homology between maps")
    n.add_argument("--modulus", type=int, default=0)
    return ap


def _dispatch(args) -> tuple[str, int]:
    if args.command == "group":
        return _print_group(group_facts(parse_descriptor(args.descriptor)), args.format), EXIT_OK
    if args.command == "snf":
        return run_snf(args.path, args.transforms, args.local, args.homology, args.modulus), EXIT_OK
    degrees = parse_degrees(args.degrees)
    if args.command == "cohomology":
        job = JobSpec(args.descriptor, CoefficientSpec.parse(args.coeffs), degrees,
                      budget_generators=args.budget_generators, max_bits=args.max_bits,
                      time_limit=args.time_limit,
                      output_format=args.format)
        rep = run_cohomology(job, _open_cache(args.cache_dir))
        return render(rep, args.format), EXIT_OK
    if args.command == "verify":
        rep = run_verify(args.claim, args.target, degrees, args.subgroup, args.depth)
        return render(rep, args.format), EXIT_FAIL if rep.failed else EXIT_OK
    if args.command == "census":
        try:
            primes = [int(p) for p in args.primes.split(",")]
        except ValueError:
            raise ParseError(f"bad prime list {args.primes!r}") from None
        cache_dir = args.cache_dir or default_cache_dir()
        rep = run_census(primes, args.max_param, degrees, args.budget_generators, cache_dir,
                         args.workers, args.depth)
        return render(rep, args.format), EXIT_OK
    raise ParseError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        text, code = _dispatch(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
