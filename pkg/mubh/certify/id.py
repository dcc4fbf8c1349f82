"""
ID generation for findings with deterministic symmetry.
"""
import hashlib


def _key(subject):
    if isinstance(subject, (tuple, list)):
        return ",".join(str(s) for s in subject)
    return str(subject)


def finding_id(subject_a, subject_b):
    """
    Deterministic finding ID that is symmetric:
    finding_id(a, b) == finding_id(b, a)
    """
    combined = "|".join(sorted([_key(subject_a), _key(subject_b)]))
    return hashlib.sha1(combined.encode()).hexdigest()[:12]
