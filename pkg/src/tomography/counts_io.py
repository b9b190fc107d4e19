"""
Counts IO - JSON-lines persistence of raw measurement histograms

One record per line: {basis_setting, shots, seed, counts, repetition, point_index}.
"""
import json
from typing import Dict, Iterable, List

from .estimator import CountRecord


def write_counts(path: str, records: Iterable[CountRecord]) -> int:
    written = 0
    with open(path, "w") as f:
        for record in records:
            line = {
                "basis_setting": record.basis_setting,
                "shots": record.shots,
                "seed": record.seed,
                "counts": dict(sorted(record.counts.items())),
                "repetition": record.repetition,
                "point_index": record.point_index,
            }
            f.write(json.dumps(line, sort_keys=True) + "\n")
            written += 1
    return written


def read_counts(path: str) -> List[CountRecord]:
    records = []
    with open(path, "r") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
                records.append(CountRecord(
                    basis_setting=data["basis_setting"],
                    shots=int(data["shots"]),
                    seed=int(data["seed"]),
                    counts={str(k): int(v) for k, v in data["counts"].items()},
                    repetition=int(data.get("repetition", 0)),
                    point_index=int(data.get("point_index", 0)),
                ))
            except (ValueError, KeyError, TypeError) as e:
                raise ValueError(f"{path}:{line_no}: malformed count record ({e})")
    return records


def group_by_point(records: Iterable[CountRecord]) -> Dict[int, List[CountRecord]]:
    grouped: Dict[int, List[CountRecord]] = {}
    for record in records:
        grouped.setdefault(record.point_index, []).append(record)
    return grouped
