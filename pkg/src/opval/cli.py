"""Thin-client CLI: every subcommand talks to the service API.

Without ``--server`` the client runs the FastAPI app in-process through an
ASGI test transport, so the CLI works offline with identical semantics; with
``--server URL`` the same requests go over HTTP to a running instance.

Exit codes: 0 success, 1 an asserted check failed, 2 input/usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import RunConfig
from .errors import OpvalError, ParseError
from .serialize import canonical_dumps

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


class ServiceClient:
    """Minimal JSON-over-HTTP client; in-process ASGI unless a server is given."""

    def __init__(self, server: str | None = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict):
        resp = self._client.post(path, json=payload)
        try:
            body = resp.json()
        except ValueError:
            body = {"detail": resp.text}
        return resp.status_code, body

    def get(self, path: str):
        resp = self._client.get(path)
        return resp.status_code, resp.json()


def _emit(obj, out_path: str | None):
    text = canonical_dumps(obj) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}", field=f"{path}:{exc.lineno}")


def _config_from_args(args) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        config = RunConfig.from_text(Path(args.config).read_text())
    overrides = {}
    for key in ("seed", "dim", "depth", "basis"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if getattr(args, "p", None):
        overrides["p_list"] = tuple(args.p)
    if getattr(args, "inject_defect", None):
        overrides["inject_defect"] = args.inject_defect
    return config.updated(**{k: _coerce_override(config, k, v) for k, v in overrides.items()})


def _coerce_override(config, key, val):
    if key == "p_list":
        return tuple(float(v) for v in val)
    return type(getattr(config, key))(val) if getattr(config, key) is not None else val


def _basis_payload(config: RunConfig) -> dict:
    return {
        "kind": config.basis,
        "delta_log2": config.meyer_delta_log2,
        "radius": config.meyer_radius,
        "decay_m": config.meyer_decay_m,
    }


def _fail_from_response(status, body) -> int:
    detail = body.get("detail", body) if isinstance(body, dict) else body
    field = body.get("field") if isinstance(body, dict) else None
    if isinstance(detail, list):
        # pydantic validation errors: render as "path: message" lines
        parts = []
        for item in detail:
            loc = ".".join(str(p) for p in item.get("loc", []) if p != "body")
            parts.append(f"{loc}: {item.get('msg', 'invalid')}")
        detail = "; ".join(parts)
    msg = f"error: {detail}" + (f" (field {field})" if field else "")
    print(msg, file=sys.stderr)
    return EXIT_INPUT_ERROR


def cmd_gen(args) -> int:
    config = _config_from_args(args)
    client = ServiceClient(args.server)
    status, body = client.post("/corpus", {"config": _config_mapping(config)})
    if status != 200:
        return _fail_from_response(status, body)
    out_dir = Path(args.out or "corpus")
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for item in body["functions"]:
        path = out_dir / f"{item['name']}.json"
        path.write_text(canonical_dumps(item["function"]) + "\n")
        names.append(str(path))
    _emit({"written": names, "count": len(names)}, None)
    return EXIT_OK


def _config_mapping(config: RunConfig) -> dict:
    mapping = {}
    for line in config.to_text().splitlines():
        key, val = line.split("=", 1)
        mapping[key] = val
    return mapping


def cmd_analyze(args) -> int:
    config = _config_from_args(args)
    function = _load_json(args.input)
    client = ServiceClient(args.server)
    payload = {
        "function": function,
        "basis": _basis_payload(config),
        "level_min": args.level_min,
        "with_scaling": not args.no_scaling,
    }
    if args.level_max is not None:
        payload["level_max"] = args.level_max
    status, body = client.post("/analyze", payload)
    if status != 200:
        return _fail_from_response(status, body)
    _emit(body, args.out)
    return EXIT_OK


def cmd_norms(args) -> int:
    config = _config_from_args(args)
    function = _load_json(args.input)
    client = ServiceClient(args.server)
    payload = {
        "function": function,
        "basis": _basis_payload(config),
        "p_list": list(config.p_list),
        "seed": config.seed,
        "descent_starts": config.descent_starts,
        "descent_iters": config.descent_iters,
        "ascent_iters": config.ascent_iters,
    }
    status, body = client.post("/norms", payload)
    if status != 200:
        return _fail_from_response(status, body)
    _emit(body["report"], args.out)
    return EXIT_OK


def cmd_pair(args) -> int:
    config = _config_from_args(args)
    phi = _load_json(args.phi)
    f = _load_json(args.f)
    client = ServiceClient(args.server)
    p = args.p[0] if args.p else 1.5
    payload = {"phi": phi, "f": f, "p": p, "basis": _basis_payload(config)}
    status, body = client.post("/pair", payload)
    if status != 200:
        return _fail_from_response(status, body)
    _emit(body, args.out)
    return EXIT_OK if body["all_passed"] else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    config = _config_from_args(args)
    client = ServiceClient(args.server)
    status, body = client.post("/verify", {"config": _config_mapping(config)})
    if status != 200:
        return _fail_from_response(status, body)
    # one CheckReport per line, then a summary line
    lines = [canonical_dumps(r) for r in body["reports"]]
    lines.append(
        canonical_dumps({"all_passed": body["all_passed"], "failed_checks": body["failed_checks"]})
    )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if not body["all_passed"]:
        failed = ", ".join(body["failed_checks"])
        print(f"failed checks: {failed}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opval",
        description="Wavelet norms and inequality verification for matrix-valued functions",
    )
    parser.add_argument("--server", help="base URL of a running opval service")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_dims=False):
        p.add_argument("--seed", type=int)
        p.add_argument("--basis", choices=["haar", "meyer"])
        p.add_argument("--p", type=float, action="append", help="repeatable exponent list")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--config", help="key=value config file")
        if with_dims:
            p.add_argument("--dim", type=int)
            p.add_argument("--depth", type=int)

    g = sub.add_parser("gen", help="write a deterministic corpus of StepFunction JSON files")
    common(g, with_dims=True)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="wavelet coefficients of a StepFunction JSON file")
    a.add_argument("input")
    a.add_argument("--level-min", type=int, default=0)
    a.add_argument("--level-max", type=int, default=None)
    a.add_argument("--no-scaling", action="store_true")
    common(a)
    a.set_defaults(func=cmd_analyze)

    n = sub.add_parser("norms", help="every norm/bracket of a StepFunction JSON file")
    n.add_argument("input")
    common(n)
    n.set_defaults(func=cmd_norms)

    pr = sub.add_parser("pair", help="duality checks for a (phi, f) pair of JSON files")
    pr.add_argument("phi")
    pr.add_argument("f")
    common(pr)
    pr.set_defaults(func=cmd_pair)

    v = sub.add_parser("verify", help="run the full asserted verification suite")
    v.add_argument("--inject-defect", help="test hook: corrupt the named check")
    common(v, with_dims=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    s.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OpvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
