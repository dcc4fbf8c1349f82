#!/usr/bin/env python3
"""
Command-line kit: construct MUBH families, build their schemes, verify user
files and extract MUBH back out of a scheme.

Exit codes: 0 pass, 1 verification failure on user input, 2 usage or
parameter error, 3 internal certification failure.
"""

import argparse
import logging
import sys
import time
from math import isqrt
from pathlib import Path

import yaml

# Make the project root importable when run as a script
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from mubh.certify import CertificationContext, evaluate, failed_findings, verdict
from mubh.config import setting, setup_logging, use_config
from mubh.cover_fusion import double_cover, fusion_four
from mubh.errors import ExtractionError, FormatError, MubhError, SchemeAxiomError
from mubh.formats import load_matrix, load_scheme, save_matrix, save_scheme, write_report
from mubh.hadamard import build_mubh, check_mubh_parameters
from mubh.mubh_scheme import build_five_class, build_three_class, extract_mubh, gramian

logger = logging.getLogger("mubhkit")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

FAMILY_NAMES = {"3": "class3", "5": "class5", "8": "class8", "fusion4": "fusion4"}
FAMILY_BY_CLASSES = {3: "class3", 4: "fusion4", 5: "class5", 8: "class8"}


def matrix_paths(directory):
    """H_1.mat, H_2.mat, ... in numeric order."""
    paths = list(Path(directory).glob("H_*.mat"))
    try:
        return sorted(paths, key=lambda p: int(p.stem.split("_", 1)[1]))
    except ValueError as e:
        raise FormatError(f"Unexpected matrix file name in {directory}: {e}") from e


def write_family(hadamards, directory):
    paths = []
    for t, h in enumerate(hadamards, start=1):
        paths.append(save_matrix(h.body, Path(directory) / f"H_{t}.mat"))
    return paths


def parameters_from_order(order, count):
    """(n, m) for `count` matrices of order 4n², or (None, None)."""
    root = isqrt(order)
    if root * root != order or root % 2:
        return None, None
    return root // 2, count


def finish(report, path, started, fail_code):
    report['elapsed_ms'] = int((time.perf_counter() - started) * 1000)
    write_report(report, path)
    print(f"Wrote report to {path}")
    if report['verdict'] == "certified":
        print(f"✓ {report['command']} certified ({report['elapsed_ms']} ms)")
        return EXIT_PASS
    for finding in failed_findings(report['findings']):
        print(f"✗ {finding['type']}: {finding['description']}")
    return fail_code


def certify(context):
    findings = evaluate(context)
    return findings, verdict(findings)


def cmd_construct(args):
    started = time.perf_counter()
    try:
        check_mubh_parameters(args.n, args.m)
    except MubhError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    try:
        hadamards = build_mubh(args.n, args.m)
    except MubhError as e:
        print(f"Error: construction failed verification: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    paths = write_family(hadamards, out)
    print(f"Wrote {len(paths)} matrices to {out}")

    reloaded = [load_matrix(p) for p in paths]
    findings, result = certify(CertificationContext("mubh", args.n, args.m, matrices=reloaded))
    report = {
        'command': 'construct',
        'n': args.n,
        'm': args.m,
        'order': 4 * args.n * args.n,
        'files': [p.name for p in paths],
        'verdict': result,
        'findings': findings,
    }
    return finish(report, out / "report.json", started, EXIT_INTERNAL)


def _load_family(directory):
    paths = matrix_paths(directory)
    if not paths:
        raise FormatError(f"No H_*.mat files in {directory}")
    return [load_matrix(p) for p in paths]


def _scheme_context(family, n, m, hadamards, method):
    """Build the requested scheme and return (context, rels to write)."""
    bundle = gramian(hadamards, n, relaxed=family != "class3")
    if family == "class3":
        scheme = build_three_class(bundle, method)
        return CertificationContext(family, n, m, rels=scheme.rels, tensor=scheme.tensor), scheme.rels
    scheme5 = build_five_class(bundle, method)
    if family == "class5":
        context = CertificationContext(family, n, m, matrices=bundle.hadamards, rels=scheme5.rels, tensor=scheme5.tensor)
        return context, scheme5.rels
    cover = double_cover(scheme5, method)
    if family == "class8":
        return CertificationContext(family, n, m, rels=cover.rels, tensor=cover.tensor, cover=cover), cover.rels
    fused = fusion_four(cover, method)
    return CertificationContext(family, n, m, rels=fused), fused


def cmd_build_scheme(args):
    started = time.perf_counter()
    family = FAMILY_NAMES[args.family]
    try:
        if args.input:
            matrices = _load_family(args.input)
            n, m = parameters_from_order(matrices[0].rows, len(matrices))
            if n is None:
                raise FormatError(f"Matrix order {matrices[0].rows} is not 4n²")
        else:
            if args.n is None or args.m is None:
                raise FormatError("--n and --m are required without --in")
            check_mubh_parameters(args.n, args.m)
            if family == "class3" and args.m < 2:
                raise FormatError("The 3-class scheme needs m >= 2")
            n, m = args.n, args.m
            matrices = [h.body for h in build_mubh(n, m)]
    except MubhError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        context, rels = _scheme_context(family, n, m, matrices, args.method)
    except MubhError as e:
        print(f"Error: {family} scheme failed certification: {e}", file=sys.stderr)
        return EXIT_FAIL if args.input else EXIT_INTERNAL

    out = Path(args.out)
    save_scheme(rels, out)
    print(f"Wrote {family} scheme on {rels.size} vertices to {out}")
    findings, result = certify(context)
    report = {
        'command': 'build-scheme',
        'family': family,
        'n': n,
        'm': m,
        'size': rels.size,
        'classes': rels.d,
        'verdict': result,
        'findings': findings,
    }
    if context.eigen is not None:
        report['P'] = context.eigen.P
        report['Q'] = context.eigen.Q
        report['multiplicities'] = list(context.eigen.multiplicities)
    if context.krein is not None:
        report['krein'] = context.krein.matrices()
    report_path = out.with_name(out.stem + ".report.json")
    return finish(report, report_path, started, EXIT_FAIL if args.input else EXIT_INTERNAL)


def _verify_mubh(args):
    matrices = [load_matrix(p) for p in args.files]
    n, m = parameters_from_order(matrices[0].rows, len(matrices)) if matrices[0].rows == matrices[0].cols else (None, None)
    return CertificationContext("mubh", n, m, matrices=matrices)


def _verify_scheme(args):
    if len(args.files) != 1:
        raise FormatError("verify --what scheme takes exactly one scheme file")
    if args.n is not None and args.m is not None:
        check_mubh_parameters(args.n, args.m)
    rels = load_scheme(args.files[0])
    family = args.family and FAMILY_NAMES[args.family] or FAMILY_BY_CLASSES.get(rels.d, "scheme")
    return CertificationContext(family, args.n, args.m, rels=rels)


def cmd_verify(args):
    started = time.perf_counter()
    report = {'command': 'verify', 'what': args.what, 'files': [str(f) for f in args.files]}
    try:
        context = _verify_mubh(args) if args.what == "mubh" else _verify_scheme(args)
    except SchemeAxiomError as e:
        # The file parsed but its relation map is not a partition of the right shape.
        report.update(verdict="failed", findings=[{
            'finding_id': 'load',
            'type': 'scheme_axioms',
            'passed': False,
            'counterexample': e.counterexample,
            'description': f'Scheme axiom failed: {e}',
        }])
        return finish(report, Path(args.report), started, EXIT_FAIL)
    except (MubhError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    findings, result = certify(context)
    if args.what == "scheme" and not context.is_scheme:
        tensor = context.tensor
        findings.append({
            'finding_id': 'axioms',
            'type': 'scheme_axioms',
            'passed': tensor is not None,
            'counterexample': None if tensor is not None else context.scheme_error.counterexample,
            'description': f'{context.rels.d}-class scheme verified' if tensor is not None
            else f'Scheme axiom failed: {context.scheme_error}',
        })
        result = verdict(findings)
    report.update(family=context.family, verdict=result, findings=findings)
    return finish(report, Path(args.report), started, EXIT_FAIL)


def cmd_extract(args):
    started = time.perf_counter()
    try:
        rels = load_scheme(args.scheme)
    except (MubhError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        extracted = extract_mubh(rels, args.n, args.m)
    except ExtractionError as e:
        print(f"Error: extraction failed: {e}", file=sys.stderr)
        return EXIT_INTERNAL

    out = Path(args.out)
    paths = write_family(extracted.hadamards, out)
    print(f"Wrote {len(paths)} extracted matrices to {out}")
    reloaded = [load_matrix(p) for p in paths]
    findings, _ = certify(CertificationContext("mubh", args.n, args.m, matrices=reloaded))

    regenerated = build_five_class(gramian(reloaded, args.n, relaxed=True)).rels
    round_trip = regenerated == rels.permuted(extracted.permutation)
    findings.append({
        'finding_id': 'round_trip',
        'type': 'round_trip',
        'passed': round_trip,
        'description': 'Regenerated scheme equals the input under the recorded permutation' if round_trip
        else 'Regenerated scheme differs from the permuted input',
    })
    report = {
        'command': 'extract',
        'n': args.n,
        'm': args.m,
        'files': [p.name for p in paths],
        'permutation': extracted.permutation,
        'verdict': verdict(findings),
        'findings': findings,
    }
    return finish(report, out / "report.json", started, EXIT_INTERNAL)


def build_parser():
    parser = argparse.ArgumentParser(description="Mutually unbiased Bush-type Hadamard matrices and their schemes")
    parser.add_argument("--config", help="YAML config file (default: config.ci.yaml)")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", help="Construct m MUBH of order 4n²")
    construct.add_argument("--n", type=int, required=True)
    construct.add_argument("--m", type=int, required=True)
    construct.add_argument("--out", help="Output directory")
    construct.set_defaults(handler=cmd_construct)

    scheme = sub.add_parser("build-scheme", help="Build and certify a scheme")
    scheme.add_argument("--family", choices=sorted(FAMILY_NAMES), required=True)
    scheme.add_argument("--n", type=int)
    scheme.add_argument("--m", type=int)
    scheme.add_argument("--in", dest="input", help="Directory of H_*.mat files")
    scheme.add_argument("--out", required=True, help="Scheme file to write")
    scheme.add_argument("--method", choices=("auto", "products", "counting"), default="auto")
    scheme.set_defaults(handler=cmd_build_scheme)

    verify = sub.add_parser("verify", help="Verify user-supplied matrices or a scheme")
    verify.add_argument("--what", choices=("mubh", "scheme"), required=True)
    verify.add_argument("--family", choices=sorted(FAMILY_NAMES), help="Scheme family for the printed tables")
    verify.add_argument("--n", type=int)
    verify.add_argument("--m", type=int)
    verify.add_argument("--report", default="verify_report.json")
    verify.add_argument("files", nargs="+")
    verify.set_defaults(handler=cmd_verify)

    extract = sub.add_parser("extract", help="Extract MUBH from a 5-class scheme")
    extract.add_argument("--scheme", required=True)
    extract.add_argument("--n", type=int, required=True)
    extract.add_argument("--m", type=int, required=True)
    extract.add_argument("--out", required=True)
    extract.set_defaults(handler=cmd_extract)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        use_config(args.config)
    except (OSError, ValueError, yaml.YAMLError) as e:
        print(f"Error: cannot load config: {e}", file=sys.stderr)
        return EXIT_USAGE
    setup_logging("DEBUG" if args.verbose else None)
    logger.debug("Running %s with %s", args.command, vars(args))
    if args.command == "construct" and not args.out:
        args.out = str(Path(setting("paths", "output_dir")) / f"mubh_n{args.n}_m{args.m}")
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
