"""Client for the remote judge contract described in API.md."""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional
from urllib.parse import urlparse

import httpx

from ..errors import NetworkForbidden, RemoteFailure
from ..model import CheckerKind, Limits, Origin, Problem, Submission
from .archive import ManifestEntry

log = logging.getLogger(__name__)

ATTEMPTS = 3
BACKOFF_S = 0.2


class AuthFailure(RemoteFailure):
    pass


class RemoteError(RemoteFailure):
    def __init__(self, status: int, message: str = ""):
        super().__init__(f"remote returned HTTP {status}{': ' + message if message else ''}")
        self.status = status


class RemoteTimeout(RemoteFailure):
    pass


@dataclass(frozen=True)
class RemoteEndpoint:
    base_url: str
    token_env: str = "TESTFORGE_REMOTE_TOKEN"
    problem_ids: dict = field(default_factory=dict)  # local slug -> remote id

    def __post_init__(self):
        parsed = urlparse(self.base_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"invalid remote base_url {self.base_url!r}")

    def remote_id(self, slug: str) -> str:
        return str(self.problem_ids.get(slug, slug))

    def token(self) -> str:
        tok = os.environ.get(self.token_env)
        if not tok:
            raise AuthFailure(f"environment variable {self.token_env} is not set")
        return tok


@dataclass(frozen=True)
class UploadAck:
    problem: str
    test_count: int
    manifest: tuple


class RemoteClient:
    def __init__(self, endpoint: RemoteEndpoint, *, allow_network: bool = True, timeout: float = 30.0,
                 transport: Optional[httpx.BaseTransport] = None, max_connections: int = 4):
        self.endpoint = endpoint
        self.allow_network = allow_network
        self.timeout = timeout
        self.transport = transport
        self.limits = httpx.Limits(max_connections=max_connections)

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        if not self.allow_network:
            raise NetworkForbidden(f"refusing {method} {path}: network access is disabled")
        headers = {"Authorization": f"Bearer {self.endpoint.token()}", **kwargs.pop("headers", {})}
        url = self.endpoint.base_url.rstrip("/") + path
        last = None
        for attempt in range(1, ATTEMPTS + 1):
            try:
                with httpx.Client(transport=self.transport, timeout=self.timeout, limits=self.limits) as client:
                    resp = client.request(method, url, headers=headers, **kwargs)
            except httpx.TimeoutException as exc:
                last = RemoteTimeout(f"{method} {path} timed out")
                last.__cause__ = exc
            except httpx.TransportError as exc:
                last = RemoteError(0, f"{method} {path}: {type(exc).__name__}")
                last.__cause__ = exc
            else:
                log.debug("%s %s -> %d (attempt %d)", method, path, resp.status_code, attempt)
                if resp.status_code in (401, 403):
                    raise AuthFailure(f"{method} {path} rejected the credentials")
                if resp.status_code < 500:
                    if resp.status_code >= 400:
                        raise RemoteError(resp.status_code, resp.text[:200])
                    return resp
                last = RemoteError(resp.status_code, resp.text[:200])
            if attempt < ATTEMPTS:
                time.sleep(BACKOFF_S * 2 ** (attempt - 1))
        raise last

    def fetch_problem(self, remote_id: str) -> Problem:
        d = self._request("GET", f"/problems/{remote_id}").json()
        return Problem(d.get("slug") or str(d["id"]), d["statement_markdown"],
                       Limits.from_dict(d.get("limits", {})), CheckerKind.from_dict(d.get("checker")),
                       tuple(d.get("tags", ())))

    def fetch_submissions(self, remote_id: str, filter: str = "all") -> list:
        d = self._request("GET", f"/problems/{remote_id}/submissions", params={"filter": filter}).json()
        return [Submission(str(s["id"]), s["source_text"], s["toolchain_id"], Origin(s.get("origin", "contest")))
                for s in d["submissions"]]

    def upload_tests(self, remote_id: str, archive: Path) -> UploadAck:
        data = Path(archive).read_bytes()
        d = self._request("POST", f"/problems/{remote_id}/tests", content=data,
                          headers={"Content-Type": "application/zip"}).json()
        manifest = tuple(ManifestEntry(**e) for e in d["manifest"])
        return UploadAck(str(d["problem"]), int(d["test_count"]), manifest)

    def list_tests(self, remote_id: str) -> list:
        d = self._request("GET", f"/problems/{remote_id}/tests").json()
        return [ManifestEntry(**e) for e in d["manifest"]]

    def request_rejudge(self, remote_id: str, submission_ids) -> str:
        d = self._request("POST", "/rejudge", json={"problem": remote_id,
                                                      "submission_ids": [str(s) for s in submission_ids]}).json()
        return d["job"]

    def rejudge_status(self, job: str) -> dict:
        return self._request("GET", f"/rejudge/{job}").json()
