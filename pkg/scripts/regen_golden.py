"""Regenerate the committed golden pipeline run under tests/golden/run30.

Run from the repository root:

    python3 scripts/regen_golden.py

The byte-for-byte regression test replays the same config from the same
relative paths into a fresh directory and compares every artifact, so this
script must stay in lockstep with that test's config. The matrix cache goes
to a throwaway directory to keep cache files out of the golden tree.
"""

import shutil
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from penprof.pipeline import PipelineConfig, run_pipeline

GOLDEN = Path("tests/golden/run30")


def main():
    if not Path("tests/data/net30.tsv").exists():
        raise SystemExit("run this from the repository root")
    if GOLDEN.exists():
        shutil.rmtree(GOLDEN)
    with tempfile.TemporaryDirectory() as cache:
        config = PipelineConfig(
            network_file="tests/data/net30.tsv",
            oncogene_file="tests/data/oncogenes30.txt",
            drug_target_file="tests/data/drugs30.tsv",
            out_dir=str(GOLDEN),
            cache_dir=cache,
        )
        run_pipeline(config)
    names = sorted(p.name for p in GOLDEN.iterdir())
    print(f"wrote {len(names)} artifacts to {GOLDEN}:")
    for name in names:
        print(f"  {name}")


if __name__ == "__main__":
    main()
