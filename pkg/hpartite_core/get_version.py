import logging

shared_logger = logging.getLogger("hpartite_core")


def get_version() -> str:
    """Returns the version of the package or an empty string (if available methods do not obtain the string)."""
    try:
        from importlib.metadata import PackageNotFoundError, version

        return version("hpartite-core")
    except (ImportError, PackageNotFoundError) as e:
        shared_logger.warning(f"Cannot get __version__ string: {e}")

    try:
        import tomllib
        from pathlib import Path

        pyproject_path = Path(__file__).parent.parent / "pyproject.toml"

        with pyproject_path.open("rb") as f:
            data = tomllib.load(f)
        return str(data["project"]["version"])

    except (ImportError, OSError, KeyError) as e:
        shared_logger.warning(f"Cannot get __version__ string: {e}")

    return ""


def get_task_logger(name: str) -> logging.Logger:
    """Logger shared by every module of the package. Handlers are left to the caller."""
    return logging.getLogger(name)
