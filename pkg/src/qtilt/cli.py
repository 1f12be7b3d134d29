"""Command-line front end.

The CLI is a thin client of the verification service: every subcommand
builds a request, posts it to the service (an in-process ASGI transport by
default, or a remote instance via --server), and renders the JSON response.

Exit codes: 0 all checks pass; 1 mathematical disagreement or falsified
postcondition; 2 usage or parse error; 3 a search bound was exceeded.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_MATH = 1
EXIT_USAGE = 2
EXIT_BOUNDS = 3


def _quiver_payload(spec: str) -> dict:
    p = Path(spec)
    if p.suffix or p.exists():
        if not p.exists():
            raise FileNotFoundError(f"quiver file not found: {spec}")
        return {"text": p.read_text()}
    return {"preset": spec}


def _options_payload(args) -> dict:
    return {
        "field": args.field,
        "max_ind": args.max_ind,
        "max_subdim": args.max_subdim,
        "heart_bound": args.heart_bound,
        "jobs": args.jobs,
        "cache_dir": args.cache,
    }


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            return client.post(path, json=payload)

    from .service.app import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://qtilt.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _error_exit(resp: httpx.Response) -> int:
    try:
        body = resp.json()
    except json.JSONDecodeError:
        print(f"error: HTTP {resp.status_code}", file=sys.stderr)
        return EXIT_MATH
    err = body.get("error")
    if err:
        print(f"error [{err.get('code')}]: {err.get('message')}", file=sys.stderr)
        if err.get("code") == "bounds":
            return EXIT_BOUNDS
        if err.get("code") == "parse":
            return EXIT_USAGE
        return EXIT_MATH
    # FastAPI validation errors carry a 'detail' list
    print(f"error: {json.dumps(body)}", file=sys.stderr)
    return EXIT_USAGE if resp.status_code == 422 else EXIT_MATH


# ---------------------------------------------------------------------------
# Rendering


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_line(cells) -> str:
    out = []
    for c in cells:
        s = "" if c is None else str(c)
        if "," in s or '"' in s:
            s = '"' + s.replace('"', '""') + '"'
        out.append(s)
    return ",".join(out)


def _mask_str(ids) -> str:
    return ";".join(str(i) for i in ids) if ids else "-"


def render_classify(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(payload)
    rows = payload["torsion_classes"]
    if fmt == "csv":
        header = ["id", "size", "mask", "ext_projectives", "finitely_generated",
                  "serre_closed", "effaceable_yoneda", "effaceable_fiveterm",
                  "cond4", "reduction_chain_length", "agreement"]
        lines = [_csv_line(header)]
        for r in rows:
            lines.append(_csv_line([
                r["id"], r["size"], _mask_str(r["mask"]), _mask_str(r["ext_projectives"]),
                r["finitely_generated"], r["serre_closed"], r["effaceable_yoneda"],
                r["effaceable_fiveterm"], r["cond4"], r["reduction_chain_length"],
                payload["agreement"],
            ]))
        return "\n".join(lines) + "\n"
    q = payload["quiver"]
    lines = [
        f"quiver {q['name'] or '(file)'} on {q['vertices']} vertices over F_{payload['field']}: "
        f"{payload['catalog_size']} indecomposables, "
        f"{payload['counts']['total']} torsion classes",
        f"{'id':>3} {'size':>4} {'serre':>5} {'yoneda':>6} {'5term':>5} "
        f"{'fingen':>6} {'chain':>5}  mask",
    ]
    for r in rows:
        chain = r["reduction_chain_length"]
        lines.append(
            f"{r['id']:>3} {r['size']:>4} {str(r['serre_closed']):>5} "
            f"{str(r['effaceable_yoneda']):>6} {str(r['effaceable_fiveterm']):>5} "
            f"{str(r['finitely_generated']):>6} {str(chain if chain is not None else '-'):>5}  "
            f"{_mask_str(r['mask'])}"
        )
        if not (r["serre_closed"] == r["effaceable_yoneda"] == r["effaceable_fiveterm"]):
            lines.append(f"      DISAGREEMENT witnesses: uncovered Ext classes "
                         f"{r['yoneda_gaps']}, modules without five-term witness "
                         f"{r['fiveterm_failures']}")
    lines.append(f"agreement: {'yes' if payload['agreement'] else 'NO'}")
    return "\n".join(lines) + "\n"


def render_catalog(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(payload)
    rows = payload["indecomposables"]
    if fmt == "csv":
        lines = [_csv_line(["index", "dim_vector", "total_dim", "tags"])]
        for r in rows:
            lines.append(_csv_line([
                r["index"], ";".join(map(str, r["dim_vector"])), r["total_dim"],
                ";".join(r["tags"]),
            ]))
        return "\n".join(lines) + "\n"
    q = payload["quiver"]
    lines = [
        f"quiver {q['name'] or '(file)'} over F_{payload['field']}: "
        f"{payload['catalog_size']} indecomposables"
    ]
    for r in rows:
        tags = f"  [{', '.join(r['tags'])}]" if r["tags"] else ""
        lines.append(f"{r['index']:>3}  dim {tuple(r['dim_vector'])}{tags}")
    return "\n".join(lines) + "\n"


def render_reduce(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(payload)
    if fmt == "csv":
        header = ["step", "ext_projective", "top_index", "top_shift", "w_indices",
                  "t_prime", "glue_ok", "tred_ok", "perp_serre_ok",
                  "induced_pair_ok", "ambient_effaceable", "induced_effaceable"]
        lines = [_csv_line(header)]
        for s in payload["steps"]:
            lines.append(_csv_line([
                s["step"], s["ext_projective"], s["simple_top"]["index"],
                s["simple_top"]["shift"], _mask_str(s["w_indices"]),
                _mask_str(s["t_prime"]), s["glue_ok"], s["tred_ok"],
                s["perp_serre_ok"], s["induced_pair_ok"],
                s["ambient_effaceable"], s["induced_effaceable"],
            ]))
        return "\n".join(lines) + "\n"
    lines = [f"torsion class {payload['torsion_id']} (mask {_mask_str(payload['mask'])}): "
             f"{len(payload['steps'])} reduction steps"]
    for s in payload["steps"]:
        lines.append(
            f"  step {s['step']}: E={s['ext_projective']} "
            f"top=({s['simple_top']['index']},[{s['simple_top']['shift']}]) "
            f"W={_mask_str(s['w_indices'])} T'={_mask_str(s['t_prime'])} "
            f"glue={s['glue_ok']} tred={s['tred_ok']} serre={s['perp_serre_ok']}"
        )
    lines.append(f"all checks pass: {'yes' if payload['all_checks_pass'] else 'NO'}")
    return "\n".join(lines) + "\n"


def render_heart(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(payload)
    if fmt == "csv":
        lines = [_csv_line(["index", "shift", "simple_top_index", "simple_top_shift"])]
        for r in payload["heart_projectives"]:
            top = r["simple_top"] or {}
            lines.append(_csv_line([
                r["index"], r["shift"], top.get("index"), top.get("shift"),
            ]))
        return "\n".join(lines) + "\n"
    lines = [f"torsion class {payload['torsion_id']} (mask {_mask_str(payload['mask'])}), "
             f"serre_closed={payload['serre_closed']}"]
    inds = ", ".join(
        f"{r['index']}[{r['shift']}]" for r in payload["heart_indecomposables"]
    )
    lines.append(f"heart indecomposables: {inds or '-'}")
    for r in payload["heart_projectives"]:
        top = r["simple_top"]
        top_s = f"{top['index']}[{top['shift']}]" if top else "-"
        lines.append(f"projective {r['index']}[{r['shift']}]  top: {top_s}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Entry point


def _add_common(sp: argparse.ArgumentParser, with_quiver: bool = True):
    if with_quiver:
        sp.add_argument("--quiver", required=True,
                        help="preset name (A1..A5, D4, D5, E6) or path to a quiver file")
    sp.add_argument("--field", type=int, default=2, help="prime field characteristic")
    sp.add_argument("--max-ind", type=int, default=16,
                    help="bound on catalog size for sweeps")
    sp.add_argument("--max-subdim", type=int, default=8,
                    help="bound on total dimension for submodule enumeration")
    sp.add_argument("--heart-bound", type=int, default=6,
                    help="total-dimension bound for the optional epi search")
    sp.add_argument("--format", choices=["json", "csv", "text"], default="text")
    sp.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    sp.add_argument("--cache", default=None, help="catalog cache directory")
    sp.add_argument("--server", default=None,
                    help="base URL of a running qtilt service (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qtilt",
        description="Verify torsion-pair effaceability against Serre-closed aisles "
                    "over representation-finite quivers.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("catalog", help="list the indecomposables of a quiver")
    _add_common(sp)

    sp = sub.add_parser("classify", help="sweep all torsion classes and run every checker")
    _add_common(sp)
    sp.add_argument("--cond4", action="store_true",
                    help="also run the bounded epimorphism search (tri-state)")
    sp.add_argument("--no-chains", action="store_true",
                    help="skip reduction chains in the report")

    sp = sub.add_parser("reduce", help="run the perpendicular reduction chain")
    _add_common(sp)
    sp.add_argument("--torsion-id", type=int, required=True)

    sp = sub.add_parser("heart", help="report the tilted heart of one torsion class")
    _add_common(sp)
    sp.add_argument("--torsion-id", type=int, required=True)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8642)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        uvicorn.run("qtilt.service.app:app", host=args.host, port=args.port)
        return EXIT_OK

    try:
        quiver = _quiver_payload(args.quiver)
    except FileNotFoundError as exc:
        print(f"error [parse]: {exc}", file=sys.stderr)
        return EXIT_USAGE

    payload: dict = {"quiver": quiver, "options": _options_payload(args)}
    if args.command == "catalog":
        path = "/v1/catalog"
    elif args.command == "classify":
        path = "/v1/classify"
        payload["with_cond4"] = args.cond4
        payload["with_chains"] = not args.no_chains
    elif args.command == "reduce":
        path = "/v1/reduce"
        payload["torsion_id"] = args.torsion_id
    else:
        path = "/v1/heart"
        payload["torsion_id"] = args.torsion_id

    resp = _post(args.server, path, payload)
    if resp.status_code != 200:
        return _error_exit(resp)
    body = resp.json()

    if args.command == "catalog":
        sys.stdout.write(render_catalog(body, args.format))
        return EXIT_OK
    if args.command == "classify":
        sys.stdout.write(render_classify(body, args.format))
        return EXIT_OK if body["agreement"] else EXIT_MATH
    if args.command == "reduce":
        sys.stdout.write(render_reduce(body, args.format))
        return EXIT_OK if body["all_checks_pass"] else EXIT_MATH
    sys.stdout.write(render_heart(body, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
