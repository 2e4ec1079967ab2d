#!/usr/bin/env python3
"""
chaincalc Trace Validation Overview
Verifies every trace file in a directory tree and prints one row per file.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from chaincalc import io
from chaincalc.config import load_config, setting, setup_logging
from chaincalc.construction import verify_trace
from chaincalc.errors import ChainCalcError

logger = logging.getLogger("validate_traces")


def validate_trace_file(path: Path, net_offset: int) -> Dict[str, Any]:
    """
    Load and verify one trace file

    Returns:
        Row with file, stages, actions, valid and the failed check ids
    """
    row = {'file': str(path), 'stages': None, 'actions': None, 'valid': False, 'failed': ''}
    try:
        trace = io.load_trace(path)
    except ChainCalcError as e:
        row['failed'] = f"unreadable: {e}"
        return row
    report = verify_trace(trace, net_offset=net_offset)
    row.update({
        'stages': trace.T,
        'actions': len(trace.actions),
        'valid': report['valid'],
        'failed': ",".join(report['stats']['failed_checks']),
    })
    return row


def find_trace_files(root: Path) -> List[Path]:
    return sorted(p for p in root.rglob("*.json") if p.name == "trace.json" or p.parent.name == "mutations")


def main():
    parser = argparse.ArgumentParser(description="Verify every stored trace under a directory")
    parser.add_argument("--dir", default="data")
    parser.add_argument("--log-file", help="also log to this file")
    args = parser.parse_args()

    cfg = load_config()
    setup_logging(cfg)
    if args.log_file:
        logging.getLogger().addHandler(logging.FileHandler(args.log_file))

    files = find_trace_files(Path(args.dir))
    if not files:
        print(f"❌ No trace files under {args.dir}")
        return 1
    net_offset = int(setting(cfg, "construction", "net_offset"))
    frame = pd.DataFrame([validate_trace_file(p, net_offset) for p in files])
    print(frame.to_string(index=False))

    # traces under mutations/ are expected to fail
    expected = frame['file'].str.contains("mutations") != frame['valid']
    print(f"\n📋 {int(expected.sum())}/{len(frame)} files behaved as expected")
    return 0 if expected.all() else 1


if __name__ == "__main__":
    sys.exit(main())
