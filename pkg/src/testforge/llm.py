"""Chat-completion client with a content-addressed record/replay cache and a
USD cost ledger.

Modes:
    live    call the provider, nothing cached
    record  call the provider and store the exchange in the cache
    replay  answer from the cache only; never touches the network
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import threading
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Iterable, Optional

import httpx

from .errors import LLMError, NetworkForbidden

log = logging.getLogger(__name__)

MODES = ("live", "record", "replay")
MICRO = Decimal("0.000001")
PER_TOKENS = Decimal(1_000_000)


class CacheMiss(LLMError):
    pass


class ProviderError(LLMError):
    def __init__(self, status: int, body: str):
        super().__init__(f"provider returned HTTP {status}: {body[:500]}")
        self.status = status
        self.body = body


class LLMTimeout(LLMError):
    pass


class UnknownModel(LLMError):
    pass


@dataclass(frozen=True)
class ChatExchange:
    model_id: str
    prompt: str
    response: str
    input_tokens: int
    output_tokens: int
    timestamp: str  # ISO-8601, UTC
    tokens_estimated: bool = False

    def __post_init__(self):
        if self.input_tokens < 0 or self.output_tokens < 0:
            raise ValueError("token counts cannot be negative")

    @property
    def key(self) -> str:
        return cache_key(self.model_id, self.prompt)


def cache_key(model_id: str, prompt: str) -> str:
    h = hashlib.sha256()
    h.update(model_id.encode("utf-8"))
    h.update(b"\x00")
    h.update(prompt.encode("utf-8"))
    return h.hexdigest()


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text.encode("utf-8")) / 4)


class TranscriptCache:
    """Directory of ``{key}.json`` transcripts. Reads are lock-free; writes
    are serialized and land via atomic rename."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._lock = threading.Lock()

    def path_for(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, model_id: str, prompt: str) -> Optional[ChatExchange]:
        p = self.path_for(cache_key(model_id, prompt))
        if not p.is_file():
            return None
        return ChatExchange(**json.loads(p.read_text(encoding="utf-8")))

    def put(self, exchange: ChatExchange) -> Path:
        p = self.path_for(exchange.key)
        data = json.dumps(asdict(exchange), indent=2, ensure_ascii=False, sort_keys=True) + "\n"
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            tmp = p.with_suffix(f".{os.getpid()}.{threading.get_ident()}.tmp")
            tmp.write_text(data, encoding="utf-8")
            os.replace(tmp, p)
        return p

    def exchanges(self) -> list:
        if not self.root.is_dir():
            return []
        return [ChatExchange(**json.loads(p.read_text(encoding="utf-8"))) for p in sorted(self.root.glob("*.json"))]


# ------------------------------------------------------------------- pricing


@dataclass(frozen=True)
class Price:
    input_price: Decimal  # USD per 1M tokens
    output_price: Decimal

    def __post_init__(self):
        object.__setattr__(self, "input_price", Decimal(str(self.input_price)))
        object.__setattr__(self, "output_price", Decimal(str(self.output_price)))
        if self.input_price < 0 or self.output_price < 0:
            raise ValueError("prices cannot be negative")


class PriceTable(dict):
    """model id -> Price"""

    @classmethod
    def from_json(cls, data: dict) -> "PriceTable":
        models = data.get("models", data)
        return cls({m: Price(Decimal(str(p["input"])), Decimal(str(p["output"]))) for m, p in models.items()})

    @classmethod
    def load(cls, path: Path) -> "PriceTable":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def cost_of(exchange: ChatExchange, prices: PriceTable) -> Decimal:
    try:
        price = prices[exchange.model_id]
    except KeyError:
        raise UnknownModel(f"no price configured for model {exchange.model_id!r}") from None
    raw = (exchange.input_tokens * price.input_price + exchange.output_tokens * price.output_price) / PER_TOKENS
    return raw.quantize(MICRO, rounding=ROUND_HALF_EVEN)


@dataclass(frozen=True)
class LedgerEntry:
    exchange_ref: str
    model_id: str
    cost_usd: Decimal
    estimated: bool = False


class CostLedger:
    def __init__(self, entries: Iterable[LedgerEntry] = ()):
        self._entries = list(entries)
        self._lock = threading.Lock()

    @property
    def entries(self) -> list:
        return list(self._entries)

    def append(self, entry: LedgerEntry) -> None:
        with self._lock:
            self._entries.append(entry)

    def charge(self, exchange: ChatExchange, prices: PriceTable) -> LedgerEntry:
        entry = LedgerEntry(exchange.key, exchange.model_id, cost_of(exchange, prices), exchange.tokens_estimated)
        self.append(entry)
        return entry

    @classmethod
    def load(cls, path: Path) -> "CostLedger":
        """Read a JSON-lines ledger written by ``save``; a missing file is empty."""
        path = Path(path)
        if not path.is_file():
            return cls()
        entries = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                d = json.loads(line)
                entries.append(LedgerEntry(d["exchange_ref"], d["model_id"], Decimal(d["cost_usd"]),
                                           bool(d.get("estimated", False))))
        return cls(entries)

    def save(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [json.dumps({"exchange_ref": e.exchange_ref, "model_id": e.model_id, "cost_usd": str(e.cost_usd),
                             "estimated": e.estimated}, sort_keys=True) for e in self.entries]
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")

    @property
    def total(self) -> Decimal:
        return sum((e.cost_usd for e in self._entries), Decimal("0")).quantize(MICRO)

    def __len__(self) -> int:
        return len(self._entries)


# -------------------------------------------------------------------- client


def _now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


class LLMClient:
    def __init__(self, cache: TranscriptCache, *, base_url: str = "https://api.openai.com/v1",
                 api_key_env: str = "OPENAI_API_KEY", extra_body: Optional[dict] = None,
                 timeout: float = 600.0, transport: Optional[httpx.BaseTransport] = None,
                 ledger: Optional[CostLedger] = None, prices: Optional[PriceTable] = None):
        self.cache = cache
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.extra_body = dict(extra_body or {})
        self.timeout = timeout
        self.transport = transport
        self.ledger = ledger if ledger is not None else CostLedger()
        self.prices = prices

    def complete(self, model_id: str, prompt: str, mode: str = "replay") -> ChatExchange:
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if mode == "replay":
            hit = self.cache.get(model_id, prompt)
            if hit is None:
                raise CacheMiss(f"no recorded exchange for model {model_id!r} and this prompt "
                                f"(key {cache_key(model_id, prompt)[:16]}…)")
            return hit
        exchange = self._call(model_id, prompt)
        if mode == "record":
            self.cache.put(exchange)
        if self.prices is not None:
            self.ledger.charge(exchange, self.prices)
        return exchange

    def _call(self, model_id: str, prompt: str) -> ChatExchange:
        key = os.environ.get(self.api_key_env, "")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        body = {"model": model_id, "messages": [{"role": "user", "content": prompt}], **self.extra_body}
        try:
            with httpx.Client(transport=self.transport, timeout=self.timeout) as client:
                resp = client.post(f"{self.base_url}/chat/completions", json=body, headers=headers)
        except httpx.TimeoutException as exc:
            raise LLMTimeout(f"provider did not answer within {self.timeout}s") from exc
        except httpx.TransportError as exc:
            raise ProviderError(0, str(exc)) from exc
        if resp.status_code >= 400:
            raise ProviderError(resp.status_code, resp.text)
        data = resp.json()
        text = data["choices"][0]["message"].get("content") or ""
        usage = data.get("usage") or {}
        if "prompt_tokens" in usage and "completion_tokens" in usage:
            tin, tout, est = int(usage["prompt_tokens"]), int(usage["completion_tokens"]), False
        else:
            tin, tout, est = estimate_tokens(prompt), estimate_tokens(text), True
        log.info("LLM %s: %d in / %d out tokens%s", model_id, tin, tout, " (estimated)" if est else "")
        return ChatExchange(model_id, prompt, text, tin, tout, _now(), est)


class ForbiddenTransport(httpx.BaseTransport):
    """Transport that refuses every request; installed under --replay."""

    def handle_request(self, request):
        raise NetworkForbidden(f"network access forbidden in replay mode ({request.method} {request.url.host})")
