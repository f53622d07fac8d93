"""Local HTTP service over a workspace directory.

The workspace is plain files; the service holds no model state of its own,
so a restart reproduces every GET (pending mine jobs are the exception:
only finished jobs persist).

    workspace/
      symbols.manifest
      traces/<id>.trc
      configs/<name>.cfg.json
      models/<id>.model.json
      jobs/<id>.json
      versions.json

Model, DOT, diff, and exam payloads are produced by the same serializers the
CLI uses, byte for byte.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, unquote, urlparse

from . import abstractor, demo, metrics, miners, model_io, symbols, traces
from .cli import diff_to_obj
from .core import SymbolTable
from .errors import MineOutOfMemory, MineTimeout, ServeBindError, TraceLensError

_PLACEHOLDER_PAGE = b"""<!doctype html>
<html><head><title>tracelens</title></head>
<body><h1>tracelens workspace service</h1>
<p>No web console bundle is installed. The JSON API lives under <code>/api/</code>.</p>
</body></html>
"""

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".svg": "image/svg+xml",
    ".json": "application/json",
    ".png": "image/png",
}


class Workspace:
    def __init__(self, root: str):
        self.root = root
        self.lock = threading.Lock()
        for sub in ("traces", "configs", "models", "jobs"):
            os.makedirs(os.path.join(root, sub), exist_ok=True)

    # --- paths ---
    def manifest_path(self) -> str:
        return os.path.join(self.root, "symbols.manifest")

    def trace_path(self, tid: str) -> str:
        return os.path.join(self.root, "traces", f"{tid}.trc")

    def config_path(self, name: str) -> str:
        return os.path.join(self.root, "configs", f"{name}.cfg.json")

    def model_path(self, mid: str) -> str:
        return os.path.join(self.root, "models", f"{mid}.model.json")

    def job_path(self, jid: str) -> str:
        return os.path.join(self.root, "jobs", f"{jid}.json")

    # --- io ---
    def write_atomic(self, path: str, text: str):
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)

    def read(self, path: str) -> str:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()

    def symbol_table(self) -> SymbolTable:
        path = self.manifest_path()
        if not os.path.exists(path):
            return SymbolTable(fields=(), functions=())
        return symbols.load_manifest(path)

    def load_trace(self, tid: str):
        path = self.trace_path(tid)
        if not os.path.exists(path):
            raise FileNotFoundError(tid)
        return traces.parse_trace(self.read(path).splitlines(), tid)

    def list_traces(self) -> list[str]:
        names = [n[:-4] for n in os.listdir(os.path.join(self.root, "traces"))
                 if n.endswith(".trc")]
        return sorted(names)

    def list_configs(self) -> list[str]:
        names = [n[:-len(".cfg.json")] for n in
                 os.listdir(os.path.join(self.root, "configs")) if n.endswith(".cfg.json")]
        return sorted(names)

    def list_models(self) -> list[str]:
        names = [n[:-len(".model.json")] for n in
                 os.listdir(os.path.join(self.root, "models")) if n.endswith(".model.json")]
        return sorted(names)

    def store_model(self, text: str) -> str:
        mid = "m" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
        self.write_atomic(self.model_path(mid), text)
        return mid

    def bump_version(self, key: str) -> int:
        path = os.path.join(self.root, "versions.json")
        versions = {}
        if os.path.exists(path):
            versions = json.loads(self.read(path))
        versions[key] = versions.get(key, 0) + 1
        self.write_atomic(path, json.dumps(versions, indent=2, sort_keys=True) + "\n")
        return versions[key]

    def version(self, key: str) -> int:
        path = os.path.join(self.root, "versions.json")
        if not os.path.exists(path):
            return 0
        return json.loads(self.read(path)).get(key, 0)


class _Jobs:
    def __init__(self, workspace: Workspace, workers: int = 2):
        self.workspace = workspace
        self.pool = ThreadPoolExecutor(max_workers=workers)
        self.lock = threading.Lock()
        self.active: dict[str, dict] = {}
        self.counter = 0

    def submit(self, fn) -> str:
        with self.lock:
            self.counter += 1
            jid = f"j{self.counter}"
            while os.path.exists(self.workspace.job_path(jid)):
                self.counter += 1
                jid = f"j{self.counter}"
            self.active[jid] = {"job": jid, "status": "pending"}

        def run():
            with self.lock:
                self.active[jid]["status"] = "running"
            try:
                result = fn()
                record = {"job": jid, "status": "done", **result}
            except (MineTimeout, MineOutOfMemory) as exc:
                record = {"job": jid, "status": "done",
                          "outcome": "timeout" if isinstance(exc, MineTimeout) else "oom"}
            except TraceLensError as exc:
                record = {"job": jid, "status": "failed",
                          "code": exc.code, "message": str(exc)}
            except Exception as exc:  # job errors must not kill the worker
                record = {"job": jid, "status": "failed",
                          "code": "INTERNAL", "message": str(exc)}
            self.workspace.write_atomic(self.workspace.job_path(jid),
                                        json.dumps(record, indent=2) + "\n")
            with self.lock:
                self.active.pop(jid, None)

        self.pool.submit(run)
        return jid

    def get(self, jid: str):
        with self.lock:
            if jid in self.active:
                return dict(self.active[jid])
        path = self.workspace.job_path(jid)
        if os.path.exists(path):
            return json.loads(self.workspace.read(path))
        return None


class _Handler(BaseHTTPRequestHandler):
    server_version = "tracelens"
    protocol_version = "HTTP/1.1"

    # --- plumbing ---
    def log_message(self, fmt, *args):  # tests stay quiet
        pass

    @property
    def workspace(self) -> Workspace:
        return self.server.workspace  # type: ignore[attr-defined]

    @property
    def jobs(self) -> _Jobs:
        return self.server.jobs  # type: ignore[attr-defined]

    def send_bytes(self, status: int, payload: bytes, content_type: str):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def send_json(self, obj, status: int = 200, indent=None):
        text = json.dumps(obj, indent=indent) + "\n"
        self.send_bytes(status, text.encode("utf-8"), "application/json")

    def send_error_json(self, status: int, code: str, message: str, extra=None):
        obj = {"code": code, "message": message}
        if extra:
            obj.update(extra)
        self.send_json(obj, status=status)

    def read_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            return json.loads(raw.decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError):
            raise ValueError("request body is not valid JSON")

    # --- dispatch ---
    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_PUT(self):
        self._dispatch("PUT")

    def _dispatch(self, method: str):
        parsed = urlparse(self.path)
        parts = [unquote(p) for p in parsed.path.split("/") if p]
        query = {k: v[0] for k, v in parse_qs(parsed.query).items()}
        try:
            handled = self.route(method, parts, query)
        except TraceLensError as exc:
            self.send_error_json(400, exc.code, str(exc))
            return
        except ValueError as exc:
            self.send_error_json(400, "BAD_REQUEST", str(exc))
            return
        except FileNotFoundError as exc:
            self.send_error_json(404, "NOT_FOUND", f"no such artifact: {exc}")
            return
        if not handled:
            self.send_error_json(404, "NOT_FOUND", f"no route for {method} {parsed.path}")

    # --- routes ---
    def route(self, method: str, parts: list[str], query: dict) -> bool:
        if not parts or parts[0] != "api":
            if method == "GET":
                self.serve_console(parts)
                return True
            return False
        rest = parts[1:]
        if method == "GET":
            return self.route_get(rest, query)
        if method == "PUT":
            return self.route_put(rest)
        if method == "POST":
            return self.route_post(rest)
        return False

    def route_get(self, rest: list[str], query: dict) -> bool:
        ws = self.workspace
        if rest == ["symbols"]:
            table = ws.symbol_table()
            self.send_json({
                "fields": [{"path": f.path, "kind": f.kind} for f in table.fields],
                "functions": [{"name": f.name, "file": f.file, "line": f.line}
                              for f in table.functions],
            }, indent=2)
            return True
        if rest == ["traces"]:
            self.send_json({"traces": ws.list_traces()}, indent=2)
            return True
        if rest == ["configs"]:
            self.send_json({"configs": ws.list_configs()}, indent=2)
            return True
        if len(rest) == 2 and rest[0] == "configs":
            path = ws.config_path(rest[1])
            if not os.path.exists(path):
                raise FileNotFoundError(rest[1])
            config_obj = json.loads(ws.read(path))
            self.send_json({"version": ws.version(f"configs/{rest[1]}"),
                            "config": config_obj}, indent=2)
            return True
        if rest == ["models"]:
            self.send_json({"models": ws.list_models()}, indent=2)
            return True
        if len(rest) == 2 and rest[0] == "models":
            path = ws.model_path(rest[1])
            if not os.path.exists(path):
                raise FileNotFoundError(rest[1])
            self.send_bytes(200, ws.read(path).encode("utf-8"), "application/json")
            return True
        if len(rest) == 3 and rest[0] == "models" and rest[2] == "dot":
            model = self.load_model(rest[1])
            text = model_io.export_dot(model, show_valuations=True)
            self.send_bytes(200, text.encode("utf-8"), "text/vnd.graphviz")
            return True
        if len(rest) == 3 and rest[0] == "models" and rest[2] == "exam":
            model = self.load_model(rest[1])
            state = query.get("state")
            if not state:
                raise ValueError("missing query parameter: state")
            score = metrics.exam_score(model, state)
            text = json.dumps({"state": state, "score": score}) + "\n"
            self.send_bytes(200, text.encode("utf-8"), "application/json")
            return True
        if len(rest) == 5 and rest[0] == "models" and rest[2] == "state" and rest[4] == "zoom":
            self.send_zoom(rest[1], rest[3])
            return True
        if rest == ["diff"]:
            a = self.load_model(query.get("a", ""))
            b = self.load_model(query.get("b", ""))
            if not (hasattr(a, "meta") and hasattr(b, "meta")):
                raise ValueError("diff requires two efsm documents")
            diff = metrics.diff_models(a, b)
            text = json.dumps(diff_to_obj(diff), indent=2) + "\n"
            self.send_bytes(200, text.encode("utf-8"), "application/json")
            return True
        if len(rest) == 2 and rest[0] == "jobs":
            record = self.jobs.get(rest[1])
            if record is None:
                raise FileNotFoundError(rest[1])
            self.send_json(record, indent=2)
            return True
        return False

    def route_put(self, rest: list[str]) -> bool:
        if len(rest) == 2 and rest[0] == "configs":
            name = rest[1]
            body = self.read_body()
            config_obj = body.get("config", body)
            config = model_io.parse_config(json.dumps(config_obj))
            table = self.workspace.symbol_table()
            from .core import validate_config
            findings = validate_config(config, table)
            if findings:
                self.send_error_json(400, "CONFIG_INVALID", "config failed validation", {
                    "findings": [{"code": f.code, "message": f.message, "subject": f.subject}
                                 for f in findings]})
                return True
            with self.workspace.lock:
                self.workspace.write_atomic(self.workspace.config_path(name),
                                            model_io.serialize_config(config))
                version = self.workspace.bump_version(f"configs/{name}")
            self.send_json({"name": name, "version": version})
            return True
        return False

    def route_post(self, rest: list[str]) -> bool:
        ws = self.workspace
        if rest == ["traces:demo"]:
            body = self.read_body()
            scenario_name = body.get("scenario", "takeoff")
            params = body.get("params", {})
            sc = demo.scenario_from_params(scenario_name, params)
            digest = hashlib.sha256(
                json.dumps([scenario_name, params], sort_keys=True).encode()).hexdigest()[:8]
            tid = body.get("id") or f"{scenario_name}-{digest}"
            trace = demo.run_scenario(sc, tid)
            with ws.lock:
                ws.write_atomic(ws.trace_path(tid), traces.serialize_trace(trace))
            self.send_json({"trace": tid, "events": len(trace.events)})
            return True
        if rest == ["abstract"]:
            body = self.read_body()
            config = self.load_config(body.get("config", ""))
            trace_ids = body.get("traces") or ws.list_traces()
            ftraces = [traces.filter_trace(ws.load_trace(tid), config)
                       for tid in trace_ids]
            model = abstractor.build_model(ftraces, config)
            text = model_io.serialize_model(model)
            with ws.lock:
                mid = ws.store_model(text)
            stats = metrics.model_stats(model)
            self.send_json({"model": mid, "stats": {
                "states": stats.states, "transitions": stats.transitions,
                "initials": stats.initials, "warnings": stats.warnings}})
            return True
        if rest == ["mine"]:
            body = self.read_body()
            config = self.load_config(body.get("config", ""))
            trace_ids = body.get("traces") or ws.list_traces()
            params = miners.MinerParams(
                strategy=body.get("strategy", "ktails"),
                k=int(body.get("k", 1)),
                careful_det=bool(body.get("careful_det", False)),
                timeout=body.get("timeout"),
                memory_budget=body.get("memory_budget"))
            ftraces = [traces.filter_trace(ws.load_trace(tid), config)
                       for tid in trace_ids]

            def job():
                fsm = miners.mine(ftraces, params)
                text = model_io.serialize_fsm_with_params(fsm, {
                    "strategy": params.strategy, "k": str(params.k),
                    "careful_det": "on" if params.careful_det else "off"})
                with ws.lock:
                    mid = ws.store_model(text)
                return {"outcome": "ok", "model": mid,
                        "states": len(fsm.states), "transitions": len(fsm.transitions)}

            jid = self.jobs.submit(job)
            self.send_json({"job": jid}, status=202)
            return True
        return False

    # --- helpers ---
    def load_model(self, mid: str):
        path = self.workspace.model_path(mid)
        if not mid or not os.path.exists(path):
            raise FileNotFoundError(mid or "<missing model id>")
        return model_io.parse_model(self.workspace.read(path))

    def load_config(self, name: str):
        path = self.workspace.config_path(name)
        if not name or not os.path.exists(path):
            raise FileNotFoundError(name or "<missing config name>")
        return model_io.parse_config(self.workspace.read(path))

    def send_zoom(self, mid: str, sid: str):
        model = self.load_model(mid)
        if not hasattr(model, "meta"):
            raise ValueError("zoom requires an efsm model")
        try:
            state = model.state_by_id(sid)
        except KeyError:
            raise FileNotFoundError(sid) from None
        needed = sorted({tid for (tid, _a, _b) in state.segments})
        raws = [self.workspace.load_trace(tid) for tid in needed]
        machine = abstractor.zoom(model, sid, raws)
        obj = {
            "state": sid,
            "nodes": [{"id": n.id, "trace": n.trace_id, "seq": n.seq, "kind": n.kind,
                       "fn": n.fn, "vars": n.vars} for n in machine.nodes],
            "edges": [[src, dst, label] for (src, dst, label) in machine.edges],
            "entries": machine.entries,
        }
        self.send_json(obj, indent=2)
        return True

    def serve_console(self, parts: list[str]):
        console_dir = getattr(self.server, "console_dir", None)
        if console_dir:
            rel = "/".join(parts) or "index.html"
            target = os.path.normpath(os.path.join(console_dir, rel))
            if not target.startswith(os.path.abspath(console_dir)):
                self.send_error_json(404, "NOT_FOUND", "bad path")
                return
            if os.path.isfile(target):
                ext = os.path.splitext(target)[1]
                with open(target, "rb") as handle:
                    payload = handle.read()
                self.send_bytes(200, payload,
                                _CONTENT_TYPES.get(ext, "application/octet-stream"))
                return
            if not parts:
                self.send_error_json(404, "NOT_FOUND", "console bundle has no index.html")
                return
            self.send_error_json(404, "NOT_FOUND", f"no console file {rel!r}")
            return
        if parts:
            self.send_error_json(404, "NOT_FOUND", "no console bundle installed")
            return
        self.send_bytes(200, _PLACEHOLDER_PAGE, "text/html; charset=utf-8")


def make_server(workspace_dir: str, host: str = "127.0.0.1", port: int = 8080,
                console_dir: str | None = None) -> ThreadingHTTPServer:
    workspace = Workspace(workspace_dir)
    try:
        server = ThreadingHTTPServer((host, port), _Handler)
    except OSError as exc:
        raise ServeBindError(f"cannot bind {host}:{port}: {exc}") from None
    server.workspace = workspace  # type: ignore[attr-defined]
    server.jobs = _Jobs(workspace)  # type: ignore[attr-defined]
    server.console_dir = os.path.abspath(console_dir) if console_dir else None  # type: ignore[attr-defined]
    server.daemon_threads = True
    return server
