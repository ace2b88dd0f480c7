"""Deterministic broadcast medium.

Single-threaded, tick-based: a frame sent during tick N is processed at
tick N+1, in submission order.  Processing a frame emits, in order, an
``injected`` event when the sender was attached as an injector, one
``sniffed`` event per promiscuous tap (taps observe every send, lost or
not), and then exactly one ``delivered`` or ``dropped`` event.  That
conservation rule and the fixed ordering make the event log a total
order, identical byte-for-byte across runs with the same seed.

Loss is a per-frame Bernoulli draw from ``random.Random(seed)``: one
``random()`` call per processed frame, dropped when the draw falls
below ``loss_probability``.  The generator is touched for nothing else,
so the delivered/dropped pattern can be replayed independently.

Routing uses only the destination MAC at bytes 7-13 of the raw frame;
the medium never inspects the source, which is what makes spoofing
possible by construction.  The broadcast MAC ff:ff:ff:ff:ff:ff reaches
every MAC-owning endpoint except the sender.

Event ``src`` is the sending endpoint's identifier, not the frame's
source field: the log is the omniscient observer and always knows who
really transmitted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Callable, IO

from .frames import BROADCAST, MacAddress

DEFAULT_MAX_TICKS = 10_000

_DST_OFFSET = 7
_DST_END = 13


class MediumError(Exception):
    """Base for medium bookkeeping errors."""


class DuplicateEndpoint(MediumError):
    """Endpoint identifier or MAC already attached."""


class Detached(MediumError):
    """Send attempted through a handle the medium does not know."""


class TickLimitExceeded(MediumError):
    """The tick budget ran out with frames still queued."""


class EventKind(Enum):
    DELIVERED = "delivered"
    DROPPED = "dropped"
    INJECTED = "injected"
    SNIFFED = "sniffed"


@dataclass(frozen=True)
class MediumConfig:
    loss_probability: float = 0.0
    seed: int = 0
    promiscuous_taps: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "promiscuous_taps", tuple(self.promiscuous_taps))
        if not 0.0 <= self.loss_probability <= 1.0:
            raise ValueError(
                f"loss probability {self.loss_probability} outside [0, 1]"
            )


@dataclass(frozen=True)
class MediumEvent:
    """One log line: who sent what, and what the medium did with it."""

    tick: int
    kind: EventKind
    src: str
    dst: str
    frame: bytes

    def to_json(self) -> str:
        return json.dumps(
            {
                "tick": self.tick,
                "kind": self.kind.value,
                "from": self.src,
                "to": self.dst,
                "frame": self.frame.hex(),
            },
            separators=(",", ":"),
        )


def write_event_log(events: list[MediumEvent], stream: IO[str]) -> None:
    """Serialize events as JSON Lines, one event per line."""
    for event in events:
        stream.write(event.to_json())
        stream.write("\n")


@dataclass
class _Endpoint:
    endpoint_id: str
    mac: MacAddress | None
    receive: Callable[[MediumEvent], None] | None
    injector: bool


@dataclass(frozen=True)
class Handle:
    """Send capability returned by ``Medium.attach``."""

    medium: "Medium"
    endpoint_id: str

    def send(self, data: bytes) -> None:
        self.medium.send(self, data)


class Medium:
    def __init__(self, config: MediumConfig | None = None):
        self.config = config if config is not None else MediumConfig()
        self.events: list[MediumEvent] = []
        self._endpoints: dict[str, _Endpoint] = {}
        self._mac_owner: dict[MacAddress, str] = {}
        self._taps: list[_Endpoint] = []
        self._pending: list[tuple[str, bytes]] = []
        self._tick = 0
        self._loss_rng = Random(self.config.seed)

    @property
    def tick(self) -> int:
        return self._tick

    def attach(
        self,
        endpoint_id: str,
        mac: MacAddress | None = None,
        receive: Callable[[MediumEvent], None] | None = None,
        *,
        injector: bool = False,
    ) -> Handle:
        """Register an endpoint; identifiers and MACs must be unused."""
        if endpoint_id in self._endpoints:
            raise DuplicateEndpoint(f"endpoint id {endpoint_id!r} already attached")
        if mac is not None and mac in self._mac_owner:
            raise DuplicateEndpoint(f"MAC {mac} already owned by {self._mac_owner[mac]!r}")
        endpoint = _Endpoint(endpoint_id, mac, receive, injector)
        self._endpoints[endpoint_id] = endpoint
        if mac is not None:
            self._mac_owner[mac] = endpoint_id
        if endpoint_id in self.config.promiscuous_taps:
            self._taps.append(endpoint)
        return Handle(self, endpoint_id)

    def send(self, handle: Handle, data: bytes) -> None:
        """Queue raw bytes for processing at the next tick."""
        if handle.medium is not self or handle.endpoint_id not in self._endpoints:
            raise Detached(f"handle {handle.endpoint_id!r} is not attached here")
        self._pending.append((handle.endpoint_id, bytes(data)))

    def run_until_idle(self, max_ticks: int = DEFAULT_MAX_TICKS) -> list[MediumEvent]:
        """Advance ticks until no frames remain queued.

        ``max_ticks`` bounds this call; an endpoint loop that keeps the
        queue busy past the budget raises ``TickLimitExceeded``.
        Returns the complete event log accumulated so far.
        """
        budget = max_ticks
        while self._pending:
            if budget <= 0:
                raise TickLimitExceeded(
                    f"{len(self._pending)} frames still queued after {max_ticks} ticks"
                )
            budget -= 1
            self._tick += 1
            batch = self._pending
            self._pending = []
            for sender_id, data in batch:
                self._process(sender_id, data)
        return list(self.events)

    # -- internals -----------------------------------------------------

    def _resolve_dst(self, data: bytes) -> tuple[MacAddress | None, str]:
        if len(data) < _DST_END:
            return None, "?"
        mac = MacAddress(data[_DST_OFFSET:_DST_END])
        owner = self._mac_owner.get(mac)
        return mac, owner if owner is not None else str(mac)

    def _log(self, kind: EventKind, src: str, dst: str, data: bytes) -> MediumEvent:
        event = MediumEvent(self._tick, kind, src, dst, data)
        self.events.append(event)
        return event

    def _process(self, sender_id: str, data: bytes) -> None:
        sender = self._endpoints[sender_id]
        dst_mac, dst_label = self._resolve_dst(data)

        if sender.injector:
            self._log(EventKind.INJECTED, sender_id, dst_label, data)

        for tap in self._taps:
            event = self._log(EventKind.SNIFFED, sender_id, tap.endpoint_id, data)
            if tap.receive is not None:
                tap.receive(event)

        if self._loss_rng.random() < self.config.loss_probability:
            self._log(EventKind.DROPPED, sender_id, dst_label, data)
            return

        event = self._log(EventKind.DELIVERED, sender_id, dst_label, data)
        if dst_mac is None:
            return
        if dst_mac == BROADCAST:
            for endpoint in self._endpoints.values():
                if endpoint.endpoint_id == sender_id or endpoint.mac is None:
                    continue
                if endpoint.receive is not None:
                    endpoint.receive(event)
            return
        owner = self._mac_owner.get(dst_mac)
        if owner is not None:
            endpoint = self._endpoints[owner]
            if endpoint.receive is not None:
                endpoint.receive(event)
