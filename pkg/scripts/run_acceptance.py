"""
Run every acceptance config and the determinism comparison.

This script:
1. Runs each configs/*.json in name order into out/acceptance/<config>/
2. Runs the determinism config a second time into a separate directory
3. Compares both output directories byte for byte

Usage:
    python scripts/run_acceptance.py [--configs configs] [--out out/acceptance]
"""

import argparse
import filecmp
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from toeplab.core.logging import configure_logging  # noqa: E402
from toeplab.presentation.cli import main as toeplab_main  # noqa: E402

DETERMINISM_CONFIG = "12_determinism"


def run_config(config: Path, out_dir: Path) -> int:
    return toeplab_main(["run", "--config", str(config), "--out", str(out_dir)])


def identical_trees(left: Path, right: Path) -> list[str]:
    """Names of files that differ or exist on one side only."""
    left_names = sorted(path.name for path in left.iterdir())
    right_names = sorted(path.name for path in right.iterdir())
    if left_names != right_names:
        return sorted(set(left_names) ^ set(right_names))
    _, mismatch, errors = filecmp.cmpfiles(left, right, left_names, shallow=False)
    return mismatch + errors


def main() -> int:
    parser = argparse.ArgumentParser(description="Run the acceptance configs")
    parser.add_argument("--configs", type=Path, default=Path("configs"))
    parser.add_argument("--out", type=Path, default=Path("out/acceptance"))
    args = parser.parse_args()
    configure_logging()

    failures: list[str] = []
    for config in sorted(args.configs.glob("*.json")):
        status = run_config(config, args.out / config.stem)
        print(f"{'✅' if status == 0 else '❌'} {config.stem} (exit {status})")
        if status != 0:
            failures.append(config.stem)

    first = args.out / DETERMINISM_CONFIG
    second = args.out / f"{DETERMINISM_CONFIG}_repeat"
    status = run_config(args.configs / f"{DETERMINISM_CONFIG}.json", second)
    differing = identical_trees(first, second) if first.is_dir() else ["<missing first run>"]
    if status != 0 or differing:
        print(f"❌ determinism: differing files {differing}")
        failures.append("determinism")
    else:
        print("✅ determinism: byte-identical reports")

    summary = "All acceptance configs passed" if not failures else "Failed: " + ", ".join(failures)
    print(f"\n{summary}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
