"""Bundled example programs."""

from pathlib import Path
from typing import List

_DIR = Path(__file__).resolve().parent


def names() -> List[str]:
    return sorted(p.stem for p in _DIR.glob("*.dl"))


def listing_path(name: str) -> str:
    path = _DIR / f"{name}.dl"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled program named {name!r}")
    return str(path)
