"""
Certification engine: runs every registered check against a context.
"""

import hashlib
import logging

from .all_checks import get_all_check_functions
from .context import CertificationContext

logger = logging.getLogger(__name__)

ENGINE_ERROR = "__engine_error__"


def evaluate(context):
    """
    Run all check functions against the context.
    Returns the list of findings; a check that crashes becomes an engine-error finding.
    """
    findings = []

    for check in get_all_check_functions():
        try:
            results = check(context)
            if results:
                findings.extend(results)
        except Exception as e:
            logger.warning("Check %s failed: %s", check.__name__, e)
            findings.append({
                'finding_id': f'error_{check.__name__}',
                'type': ENGINE_ERROR,
                'passed': False,
                'error': str(e),
                'check': check.__name__,
                'description': f'Check engine error in {check.__name__}: {e}'
            })

    return findings


def get_checks_fingerprint():
    """
    Fingerprint of the registered checks for run metadata.
    """
    names = sorted(func.__name__ for func in get_all_check_functions())
    return hashlib.sha1("|".join(names).encode()).hexdigest()[:12]


def verdict(findings):
    """'certified' iff every finding passed and no check crashed."""
    if any(f.get('type') == ENGINE_ERROR for f in findings):
        return "failed"
    return "certified" if all(f.get('passed') for f in findings) else "failed"


def failed_findings(findings):
    return [f for f in findings if not f.get('passed')]


__all__ = ["CertificationContext", "ENGINE_ERROR", "evaluate", "failed_findings", "get_checks_fingerprint", "verdict"]
