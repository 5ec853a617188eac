"""Package metadata for grbf-spectrum."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("grbf-spectrum")
except PackageNotFoundError:
    __version__ = "0+unknown"
