#!/usr/bin/env python3
"""
Grid certification run.
Builds the MUBH family and its schemes for every (n, m) in the configured grid,
certifies them and writes one report per build plus run metadata.
"""

import subprocess
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from mubh.certify import CertificationContext, evaluate, get_checks_fingerprint, verdict
from mubh.config import setting, setup_logging, use_config
from mubh.cover_fusion import double_cover, fusion_four
from mubh.formats import write_report
from mubh.hadamard import build_mubh
from mubh.mubh_scheme import build_five_class, build_three_class, gramian


def get_git_sha():
    """Get current git SHA, or None if not available."""
    try:
        result = subprocess.run(['git', 'rev-parse', 'HEAD'],
                                capture_output=True, text=True, timeout=5)
        if result.returncode == 0:
            return result.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return None


def contexts_for(n, m, with_cover):
    """Yield (name, context) for every build at (n, m)."""
    hadamards = build_mubh(n, m)
    yield "mubh", CertificationContext("mubh", n, m, matrices=hadamards)
    bundle = gramian(hadamards, n, relaxed=True)
    scheme5 = build_five_class(bundle)
    yield "class5", CertificationContext("class5", n, m, matrices=hadamards, rels=scheme5.rels, tensor=scheme5.tensor)
    if m >= 2:
        scheme3 = build_three_class(bundle)
        yield "class3", CertificationContext("class3", n, m, rels=scheme3.rels, tensor=scheme3.tensor)
    if with_cover:
        cover = double_cover(scheme5)
        yield "class8", CertificationContext("class8", n, m, rels=cover.rels, tensor=cover.tensor, cover=cover)
        yield "fusion4", CertificationContext("fusion4", n, m, rels=fusion_four(cover))


def main(argv=None):
    """Main certification execution."""
    argv = sys.argv[1:] if argv is None else argv
    config_path = None
    if '--config' in argv:
        position = argv.index('--config') + 1
        if position >= len(argv):
            print("Usage: run_certification.py [--config PATH] [--verbose]", file=sys.stderr)
            return 2
        config_path = argv[position]
    use_config(config_path)
    setup_logging("DEBUG" if '--verbose' in argv else None)

    output_dir = Path(setting("paths", "output_dir"))
    grid = [tuple(p) for p in setting("grid", "five_class")]
    covers = {tuple(p) for p in setting("grid", "cover")}
    print(f"Certifying {len(grid)} parameter pairs: {grid}")

    failures = []
    reports = 0
    for n, m in grid:
        for name, context in contexts_for(n, m, (n, m) in covers):
            started = time.perf_counter()
            findings = evaluate(context)
            result = verdict(findings)
            report = {
                'family': name,
                'n': n,
                'm': m,
                'verdict': result,
                'findings': findings,
                'elapsed_ms': int((time.perf_counter() - started) * 1000),
            }
            path = write_report(report, output_dir / f"n{n}_m{m}" / f"{name}.report.json")
            reports += 1
            print(f"Wrote {name} report to {path}")
            if result != "certified":
                failures.append(f"{name} (n={n}, m={m})")

    run_meta = {
        "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "git_sha": get_git_sha(),
        "grid": [list(p) for p in grid],
        "num_reports": reports,
        "num_failed": len(failures),
        "checks_fingerprint": get_checks_fingerprint()
    }
    meta_file = write_report(run_meta, output_dir / "run_meta.json")
    print(f"Wrote run metadata to {meta_file}")

    if failures:
        print(f"⚠️  Certification failed for: {', '.join(failures)}")
        return 3
    print("✅ Certification completed successfully")
    return 0


if __name__ == "__main__":
    sys.exit(main())
