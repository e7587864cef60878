"""
Lazy version lookup for invlip.

The version string is resolved the first time it is used: from git via
setuptools_scm in a checkout, then from the _version.py written at build
time, then a placeholder.
"""
from collections import UserString
from pathlib import Path
from typing import Optional

UNKNOWN_VERSION = '0.0.unknown'


def _resolve_version() -> str:
    if (Path(__file__).parent.parent / '.git').exists():
        try:
            from setuptools_scm import get_version
            return get_version(root='..', relative_to=__file__)
        except (ImportError, LookupError):
            pass
    try:
        from ._version import version
    except ImportError:
        return UNKNOWN_VERSION
    return version


class VersionProxy(UserString):
    def __init__(self):
        self._version: Optional[str] = None

    @property
    def data(self) -> str:
        if self._version is None:
            self._version = _resolve_version()
        return self._version


__version__ = version = VersionProxy()
