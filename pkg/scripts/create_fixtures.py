#!/usr/bin/env python3
"""
Create Fixture Files for chaincalc
Writes the bundled adversaries, their trace, the corrupted traces and a few
arc nests as JSON under data/.
"""

import argparse
import logging
from pathlib import Path

from chaincalc import io
from chaincalc.arcs import koch2_nest, koch2_polyline, ml_test, osgood_nest, segment_nest
from chaincalc.config import load_config, setup_logging
from chaincalc.evaluation import label_sequence
from chaincalc.fixtures import BUNDLED_STAGES, bundled_adversaries, bundled_trace, trace_mutations
from chaincalc.geometry import Point

logger = logging.getLogger("create_fixtures")


def create_data_directories(base_dir: Path) -> Path:
    """Create data/ and data/mutations/"""
    (base_dir / "mutations").mkdir(parents=True, exist_ok=True)
    return base_dir


def create_trace_fixtures(base_dir: Path, stages: int, progress: bool) -> None:
    """Adversaries, the verified trace and one file per mutation"""
    io.save_adversaries(base_dir / "adversaries.json", bundled_adversaries())
    trace = bundled_trace(stages, progress=progress)
    io.save_trace(base_dir / "trace.json", trace)
    print(f"Created: {base_dir / 'trace.json'} ({trace.T} stages, {len(trace.actions)} actions)")

    for name, (mutated, check_id) in trace_mutations(trace).items():
        path = base_dir / "mutations" / f"{name}.json"
        io.save_trace(path, mutated)
        print(f"Created: {path} (expect {check_id})")


def create_nest_fixtures(base_dir: Path) -> None:
    """Arc nests for the evaluation and refinement commands"""
    half = Point.make("1/2", 0)
    io.save_labelled(base_dir / "segment.json", label_sequence(segment_nest(Point.make(0, 0), half, 6)),
                     meta={"kind": "segment"})
    io.save_chains(base_dir / "koch.json", koch2_nest(3), polyline=koch2_polyline(4).polyline,
                   meta={"kind": "koch2", "depth": 3})
    io.save_chains(base_dir / "osgood.json", osgood_nest(1, 3), meta={"kind": "osgood", "k": 1})
    io.save_ml_test(base_dir / "mltest.json", ml_test(3, 3), 3)
    print(f"Created: segment, koch, osgood and mltest files in {base_dir}")


def main():
    parser = argparse.ArgumentParser(description="Write chaincalc fixture files")
    parser.add_argument("--out", default="data", help="output directory")
    parser.add_argument("--stages", type=int, default=BUNDLED_STAGES)
    parser.add_argument("--progress", action="store_true")
    args = parser.parse_args()

    setup_logging(load_config())
    base_dir = create_data_directories(Path(args.out))
    create_trace_fixtures(base_dir, args.stages, args.progress)
    create_nest_fixtures(base_dir)
    logger.info(f"fixtures written to {base_dir}")


if __name__ == "__main__":
    main()
