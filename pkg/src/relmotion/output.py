"""CSV and JSON serialization of simulation results and experiment reports.

Floats are written with 17 significant digits so double-precision values
round-trip losslessly and repeated runs diff byte-identically.
"""

from __future__ import annotations

import dataclasses
import json
import os
from typing import Any

import numpy as np

from .analysis import PerturbativeResult
from .dynamics import SimResult
from .harness import ExperimentReport

CSV_HEADER = "t_ns,p_e,sigma_z,n_ph,purity,trace_dev"


def fmt(x: float) -> str:
    return f"{x:.17g}"


def sim_result_rows(res: SimResult):
    for i in range(len(res.times)):
        yield ",".join(fmt(v) for v in (res.times[i], res.p_e[i], res.sigma_z[i],
                                        res.n_ph[i], res.purity[i],
                                        res.trace_dev[i]))


def write_csv(path: str, res: SimResult) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in sim_result_rows(res):
            fh.write(row + "\n")


def suffixed_path(path: str, suffix: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}_{suffix}{ext or '.csv'}"


def _to_jsonable(obj: Any) -> Any:
    if isinstance(obj, ExperimentReport):
        return {
            "scenario": obj.scenario,
            "config": obj.config,
            "checks": [dataclasses.asdict(c) for c in obj.checks],
            "perturbative": {k: dataclasses.asdict(v)
                             for k, v in obj.perturbative.items()},
            "extras": _to_jsonable(obj.extras),
            "result_keys": sorted(obj.results),
            "all_passed": obj.all_passed,
            "wall_seconds": obj.wall_seconds,
            "error": obj.error,
        }
    if isinstance(obj, PerturbativeResult):
        return dataclasses.asdict(obj)
    if isinstance(obj, SimResult):
        return {f: list(getattr(obj, f))
                for f in ("times", "p_e", "sigma_z", "n_ph", "purity", "trace_dev")}
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def write_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_to_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def emit(report_or_result, csv_path: str | None, json_path: str | None) -> list[str]:
    """Write the CSV/JSON artifacts of a run; returns the paths written.

    An ExperimentReport with several time series gets one CSV per series,
    suffixed with the series key (fig4 rows carry df<value> keys).
    """
    written: list[str] = []
    if csv_path:
        if isinstance(report_or_result, SimResult):
            write_csv(csv_path, report_or_result)
            written.append(csv_path)
        elif isinstance(report_or_result, ExperimentReport):
            results = report_or_result.results
            if len(results) == 1:
                write_csv(csv_path, next(iter(results.values())))
                written.append(csv_path)
            else:
                for key in sorted(results):
                    path = suffixed_path(csv_path, key)
                    write_csv(path, results[key])
                    written.append(path)
    if json_path:
        write_json(json_path, report_or_result)
        written.append(json_path)
    return written
