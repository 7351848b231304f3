"""Command-line client of the simulation service.

The CLI validates the configuration, posts it to the FastAPI app (in-process
by default, or to a remote server via --server), and writes CSV/JSON output
locally.  Exit codes: 0 success, 1 some acceptance verdict failed, 2 config
parse error, 3 config validation error, 4 output I/O failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx
import numpy as np
from pydantic import ValidationError

from . import output
from .config import Config
from .dynamics import SimResult

EXIT_OK = 0
EXIT_VERDICT_FAIL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relmotion",
        description="Simulated relativistic qubit motion in circuit QED")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a config field, e.g. system.n_max=10")
        p.add_argument("--csv", default=None, help="CSV output path")
        p.add_argument("--json", dest="json_path", default=None,
                       help="JSON report output path")

    common(sub.add_parser("simulate", help="run one time evolution"))
    common(sub.add_parser("perturbative",
                          help="second-order emission/absorption coefficients"))

    rep = sub.add_parser("reproduce", help="canned experiments")
    rep_sub = rep.add_subparsers(dest="experiment", required=True)
    p3 = rep_sub.add_parser("fig3", help="anti-JC correspondence")
    common(p3)
    p3.add_argument("--no-unitary", action="store_true")
    p3.add_argument("--no-dissipative", action="store_true")
    p4 = rep_sub.add_parser("fig4", help="parametric photon generation")
    common(p4)
    p4.add_argument("--delta-f", action="append", type=float, default=None,
                    help="drive amplitude in rad (repeatable); default pi, 0.9pi, 0.8pi")
    p4.add_argument("--n-max", type=int, default=40)
    p4.add_argument("--gamma-khz", type=float, default=400.0)
    p4.add_argument("--no-truncation-check", action="store_true")
    pa = rep_sub.add_parser("accel", help="uniform-acceleration radiation")
    common(pa)
    pa.add_argument("--accel", type=float, default=1e15, help="m/s^2")
    pa.add_argument("--duration", type=float, default=1.0, help="window, ns")

    ps = sub.add_parser("sweep", help="run a parameter sweep")
    common(ps)
    ps.add_argument("--axis", required=True,
                    help="dotted config path, e.g. drive.delta_f_rad")
    ps.add_argument("--values", required=True,
                    help="comma-separated values")
    ps.add_argument("--kind", choices=["simulate", "perturbative"],
                    default="simulate")

    pc = sub.add_parser("converge", help="truncation-convergence audit")
    common(pc)
    pc.add_argument("--n-max-list", required=True,
                    help="comma-separated increasing n_max values")
    return parser


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _load_config(args) -> Config:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_PARSE)
        except json.JSONDecodeError as exc:
            print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_PARSE)
    for item in args.overrides:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            raise SystemExit(EXIT_VALIDATION)
        key, value = item.split("=", 1)
        node = data
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = _parse_value(value)
    try:
        return Config.model_validate(data)
    except ValidationError as exc:
        print(f"error: invalid config:\n{exc}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


class _InProcessClient:
    """Minimal sync facade posting straight to the ASGI app."""

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    def post(self, path: str, json=None) -> httpx.Response:
        from .service.app import app

        async def _go():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://relmotion.local",
                                         timeout=None) as client:
                return await client.post(path, json=json)

        return asyncio.run(_go())


def _client(args):
    if args.server:
        return httpx.Client(base_url=args.server, timeout=None)
    return _InProcessClient()


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code == 422:
        print(f"error: request rejected:\n{resp.text}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)
    resp.raise_for_status()
    return resp.json()


def _series_to_result(series: dict) -> SimResult:
    return SimResult(times=np.array(series["times_ns"]),
                     p_e=np.array(series["p_e"]),
                     sigma_z=np.array(series["sigma_z"]),
                     n_ph=np.array(series["n_ph"]),
                     purity=np.array(series["purity"]),
                     trace_dev=np.array(series["trace_dev"]))


def _write_outputs(payload: dict, results: dict[str, dict],
                   csv_path: str | None, json_path: str | None) -> None:
    try:
        if csv_path:
            if len(results) == 1:
                output.write_csv(csv_path, _series_to_result(next(iter(results.values()))))
            else:
                for key in sorted(results):
                    output.write_csv(output.suffixed_path(csv_path, key),
                                     _series_to_result(results[key]))
        if json_path:
            output.write_json(json_path, payload)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _report_exit(report: dict) -> int:
    failed = [c["name"] for c in report.get("checks", []) if not c["passed"]]
    if report.get("error"):
        print(f"error: {report['error']}", file=sys.stderr)
        return EXIT_VERDICT_FAIL
    for check in report.get("checks", []):
        verdict = "PASS" if check["passed"] else "FAIL"
        print(f"[{verdict}] {check['name']}: {check['detail']}")
    return EXIT_VERDICT_FAIL if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        return _dispatch(_build_parser().parse_args(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE


def _dispatch(args) -> int:
    with _client(args) as client:
        if args.command == "simulate":
            cfg = _load_config(args)
            payload = _post(client, "/simulate", {"config": cfg.model_dump()})
            _write_outputs(payload, {"simulate": payload["series"]},
                           args.csv or cfg.output.csv_path,
                           args.json_path or cfg.output.json_path)
            return EXIT_OK

        if args.command == "perturbative":
            cfg = _load_config(args)
            payload = _post(client, "/perturbative", {"config": cfg.model_dump()})
            _write_outputs(payload, {},
                           None, args.json_path or cfg.output.json_path)
            r = payload["result"]
            print(f"r_em={r['r_em']:.6g} r_abs={r['r_abs']:.6g} "
                  f"sigma_z_pert={r['sigma_z_pert']:.6g} n_pert={r['n_pert']:.6g}")
            return EXIT_OK

        if args.command == "reproduce":
            cfg = _load_config(args)
            if args.experiment == "fig3":
                payload = _post(client, "/reproduce/fig3",
                                {"unitary": not args.no_unitary,
                                 "dissipative": not args.no_dissipative})
            elif args.experiment == "fig4":
                deltas = args.delta_f or [np.pi, 0.9 * np.pi, 0.8 * np.pi]
                payload = _post(client, "/reproduce/fig4",
                                {"delta_f_rad": deltas, "n_max": args.n_max,
                                 "gamma_khz": args.gamma_khz,
                                 "check_truncation": not args.no_truncation_check})
            else:
                payload = _post(client, "/reproduce/accel",
                                {"accel_m_s2": args.accel,
                                 "duration_ns": args.duration})
            _write_outputs(payload, payload.get("results", {}),
                           args.csv or cfg.output.csv_path,
                           args.json_path or cfg.output.json_path)
            return _report_exit(payload)

        if args.command == "sweep":
            cfg = _load_config(args)
            values = [_parse_value(v) for v in args.values.split(",") if v]
            payload = _post(client, "/sweep",
                            {"config": cfg.model_dump(), "axis": args.axis,
                             "values": values, "kind": args.kind})
            results = {}
            code = EXIT_OK
            for i, row in enumerate(payload["rows"]):
                for key, series in row.get("results", {}).items():
                    results[f"row{i}_{key}"] = series
                if row.get("error"):
                    print(f"row {i} failed: {row['error']}", file=sys.stderr)
                    code = EXIT_VERDICT_FAIL
            _write_outputs(payload, results,
                           args.csv or cfg.output.csv_path,
                           args.json_path or cfg.output.json_path)
            return code

        if args.command == "converge":
            cfg = _load_config(args)
            n_list = [int(v) for v in args.n_max_list.split(",") if v]
            payload = _post(client, "/converge",
                            {"config": cfg.model_dump(), "n_max_list": n_list})
            _write_outputs(payload, payload.get("results", {}),
                           args.csv or cfg.output.csv_path,
                           args.json_path or cfg.output.json_path)
            return _report_exit(payload)

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
