"""
Small helpers shared across ClusterLink packages.
"""

from .checksum import canonical_json, compute_checksum, fingerprint, verify_checksum

__all__ = ['canonical_json', 'compute_checksum', 'fingerprint', 'verify_checksum']
