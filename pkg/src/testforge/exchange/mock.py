"""In-process mock of the remote judge contract (see API.md), for tests and demos."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .archive import manifest_of_zip


class MockJudgeServer:
    """Usage::

        with MockJudgeServer(token="s3cret") as server:
            server.add_problem("17", {...}, submissions=[...])
            client = RemoteClient(RemoteEndpoint(server.url))
    """

    def __init__(self, token: str, host: str = "127.0.0.1", port: int = 0):
        self.token = token
        self.problems = {}
        self.submissions = {}
        self.tests = {}
        self.jobs = {}
        self.requests = []  # (method, path) pairs, for assertions
        self._lock = threading.Lock()
        self._httpd = ThreadingHTTPServer((host, port), self._handler())
        self._thread = None

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def add_problem(self, remote_id: str, problem: dict, submissions=()) -> None:
        with self._lock:
            self.problems[str(remote_id)] = dict(problem, id=str(remote_id))
            self.submissions[str(remote_id)] = [dict(s) for s in submissions]

    def start(self) -> "MockJudgeServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def _handler(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, fmt, *args):  # keep test output quiet
                pass

            def _send(self, status: int, doc: dict):
                body = json.dumps(doc).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def _authorized(self) -> bool:
                if self.headers.get("Authorization") == f"Bearer {server.token}":
                    return True
                self._send(401, {"error": "unauthorized"})
                return False

            def _body(self) -> bytes:
                n = int(self.headers.get("Content-Length") or 0)
                return self.rfile.read(n) if n else b""

            def do_GET(self):
                url = urlparse(self.path)
                parts = [p for p in url.path.split("/") if p]
                with server._lock:
                    server.requests.append(("GET", url.path))
                if not self._authorized():
                    return
                with server._lock:
                    if len(parts) == 2 and parts[0] == "problems" and parts[1] in server.problems:
                        return self._send(200, server.problems[parts[1]])
                    if len(parts) == 3 and parts[0] == "problems" and parts[1] in server.problems:
                        pid = parts[1]
                        if parts[2] == "submissions":
                            flt = parse_qs(url.query).get("filter", ["all"])[0]
                            subs = server.submissions[pid]
                            if flt == "accepted":
                                subs = [s for s in subs if s.get("full_pass")]
                            return self._send(200, {"submissions": subs})
                        if parts[2] == "tests":
                            data = server.tests.get(pid)
                            manifest = [e.to_dict() for e in manifest_of_zip(data)] if data else []
                            return self._send(200, {"manifest": manifest})
                    if len(parts) == 2 and parts[0] == "rejudge" and parts[1] in server.jobs:
                        return self._send(200, server.jobs[parts[1]])
                self._send(404, {"error": "not found"})

            def do_POST(self):
                url = urlparse(self.path)
                parts = [p for p in url.path.split("/") if p]
                body = self._body()
                with server._lock:
                    server.requests.append(("POST", url.path))
                if not self._authorized():
                    return
                with server._lock:
                    if len(parts) == 3 and parts[0] == "problems" and parts[2] == "tests" \
                            and parts[1] in server.problems:
                        try:
                            manifest = manifest_of_zip(body)
                        except Exception:
                            return self._send(400, {"error": "body is not a zip archive"})
                        server.tests[parts[1]] = body
                        return self._send(200, {"problem": parts[1],
                                                "test_count": sum(e.name.endswith(".in") for e in manifest),
                                                "manifest": [e.to_dict() for e in manifest]})
                    if parts == ["rejudge"]:
                        req = json.loads(body or b"{}")
                        pid = str(req.get("problem"))
                        if pid not in server.problems:
                            return self._send(404, {"error": "unknown problem"})
                        job = f"job-{len(server.jobs) + 1}"
                        server.jobs[job] = {"job": job, "problem": pid,
                                            "submission_ids": list(req.get("submission_ids", [])),
                                            "status": "queued"}
                        return self._send(200, {"job": job, "status": "queued"})
                self._send(404, {"error": "not found"})

        return Handler
