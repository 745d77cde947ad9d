"""Regenerate the bundled category files under src/laxfact/data."""

from pathlib import Path

from laxfact.corpus import write_corpus

if __name__ == "__main__":
    target = Path(__file__).resolve().parents[1] / "src" / "laxfact" / "data"
    for p in write_corpus(target):
        print(p.relative_to(target.parents[2]))
