from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("homokinetics")
except PackageNotFoundError:
    # source checkout without an install
    __version__ = "0.0.0"
