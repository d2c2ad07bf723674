from __future__ import annotations

import sys
from functools import lru_cache

from packaging.version import Version

if sys.version_info >= (3, 10):
    from importlib.metadata import PackageNotFoundError, version
else:
    from importlib_metadata import PackageNotFoundError, version

DISTRIBUTION_NAME = "monotone-pss"
UNKNOWN_VERSION = "0+unknown"


@lru_cache()
def get_distribution_version(distribution_name: str = DISTRIBUTION_NAME) -> Version:
    try:
        return Version(version(distribution_name))
    except PackageNotFoundError:
        return Version(UNKNOWN_VERSION)
