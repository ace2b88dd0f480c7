"""Client and access point protocol logic.

Stations track the classic four-state lifecycle per peer:

    UNAUTH_UNASSOC -> AUTH_UNASSOC -> AUTH_ASSOC -> DOT1X_AUTHED

A verified deauthentication drops the peer back to UNAUTH_UNASSOC from
any state; a verified disassociation drops an associated peer back to
AUTH_UNASSOC.  The fourth state exists as a label only; no 802.1x
exchange is simulated.

Protected mode implements the token handshake: the client commits to a
secret token by sending its SHA-512 digest inside the association
request, the AP answers with a digest of its own token, and from then
on a teardown frame counts only if it reveals a token hashing to the
stored peer commitment.  Legacy mode models stock behavior, where any
teardown frame from a peer with a session is honored unchecked; that is
the spoofing hole the tokens close.

Reason code dispatch for protected-mode teardown frames:

    code        action
    ----------  ------------------------------------------------
    0           ignore (reserved)
    1           reject, unconditionally, token or not
    2, 6, 7, 9  ignore: sender claims no standing to tear down
    3, 4, 5, 8  verify token; accept and delete or else ignore
    10-65535    ignore (reserved)

Accepting a teardown deletes the session record outright, so an exact
replay of the same frame finds no session and is ignored: revealed
tokens are single-use.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from random import Random
from typing import Callable

from .frames import (
    BROADCAST,
    PAYLOAD_HASH,
    PAYLOAD_TOKEN,
    DecodeError,
    FrameSubtype,
    MacAddress,
    ManagementFrame,
    decode_frame,
    encode_frame,
    hash_element,
    token_element,
)
from .tokens import Token, generate_token, hash_token

# Reason codes on which a verified teardown is legitimate.
TEARDOWN_REASONS = frozenset({3, 4, 5, 8})
# Reason codes asserting the sender was never authenticated/associated.
UNAUTH_SENDER_REASONS = frozenset({2, 6, 7, 9})
REJECT_REASONS = frozenset({1})

STATUS_SUCCESS = 0
STATUS_REFUSED = 1


class ProtocolError(Exception):
    """Base for station-level protocol misuse."""


class WrongState(ProtocolError):
    """Operation not valid in the peer's current lifecycle state."""


class NoPendingSession(ProtocolError):
    """Association response arrived with no request in flight."""


class MalformedFrame(ProtocolError):
    """Handler was fed a frame of the wrong subtype."""


class LifecycleState(IntEnum):
    UNAUTH_UNASSOC = 1
    AUTH_UNASSOC = 2
    AUTH_ASSOC = 3
    DOT1X_AUTHED = 4


class LifecycleEvent(Enum):
    AUTH_OK = "auth_ok"
    ASSOC_OK = "assoc_ok"
    DOT1X_OK = "dot1x_ok"
    VERIFIED_DISASSOC = "verified_disassoc"
    VERIFIED_DEAUTH = "verified_deauth"


def transition(state: LifecycleState, event: LifecycleEvent) -> LifecycleState:
    """Total lifecycle step function; undefined pairs keep the state."""
    if event is LifecycleEvent.VERIFIED_DEAUTH:
        return LifecycleState.UNAUTH_UNASSOC
    if event is LifecycleEvent.VERIFIED_DISASSOC:
        if state >= LifecycleState.AUTH_ASSOC:
            return LifecycleState.AUTH_UNASSOC
        return state
    if event is LifecycleEvent.AUTH_OK and state == LifecycleState.UNAUTH_UNASSOC:
        return LifecycleState.AUTH_UNASSOC
    if event is LifecycleEvent.ASSOC_OK and state == LifecycleState.AUTH_UNASSOC:
        return LifecycleState.AUTH_ASSOC
    if event is LifecycleEvent.DOT1X_OK and state == LifecycleState.AUTH_ASSOC:
        return LifecycleState.DOT1X_AUTHED
    return state


class Action(Enum):
    ACCEPT = "accept"
    IGNORE = "ignore"
    REJECT = "reject"


@dataclass(frozen=True)
class Verdict:
    """Outcome of handling one inbound frame, with a stable cause tag."""

    action: Action
    cause: str


@dataclass
class SessionRecord:
    """One side's view of an established (or in-flight) association."""

    peer: MacAddress
    own_token: Token
    own_hash: bytes
    peer_hash: bytes | None
    state: LifecycleState


@dataclass
class ApStore:
    """Access point bookkeeping: live sessions plus every hash ever seen."""

    sessions: dict[MacAddress, SessionRecord] = field(default_factory=dict)
    seen_hashes: set[bytes] = field(default_factory=set)


class Station:
    """Shared machinery: lifecycle tracking and teardown verification."""

    def __init__(
        self,
        mac: MacAddress,
        *,
        protected: bool = True,
        rng: Random | None = None,
        name: str | None = None,
    ):
        self.mac = mac
        self.protected = protected
        self.rng = rng if rng is not None else Random()
        self.name = name if name is not None else str(mac)
        self.sessions: dict[MacAddress, SessionRecord] = {}
        self.peer_state: dict[MacAddress, LifecycleState] = {}
        self._transmit: Callable[[bytes], None] | None = None

    # -- wiring ------------------------------------------------------

    def bind_transmit(self, transmit: Callable[[bytes], None]) -> None:
        """Attach the callable used to put encoded frames on the air."""
        self._transmit = transmit

    def _send(self, frame: ManagementFrame) -> None:
        if self._transmit is not None:
            self._transmit(encode_frame(frame))

    # -- lifecycle ---------------------------------------------------

    def state_toward(self, peer: MacAddress) -> LifecycleState:
        return self.peer_state.get(peer, LifecycleState.UNAUTH_UNASSOC)

    def _apply_event(self, peer: MacAddress, event: LifecycleEvent) -> None:
        new_state = transition(self.state_toward(peer), event)
        self.peer_state[peer] = new_state
        record = self.sessions.get(peer)
        if record is not None:
            record.state = new_state

    def _delete_session(self, peer: MacAddress, subtype: FrameSubtype) -> None:
        del self.sessions[peer]
        if subtype is FrameSubtype.DISASSOCIATION:
            self._apply_event(peer, LifecycleEvent.VERIFIED_DISASSOC)
        else:
            self._apply_event(peer, LifecycleEvent.VERIFIED_DEAUTH)

    # -- teardown ----------------------------------------------------

    def make_verified_deauth(self, peer: MacAddress, reason: int) -> ManagementFrame:
        """Build a teardown frame revealing this side's token.

        Reason 8 is a disassociation; 3, 4 and 5 are deauthentications.
        Requires an established session, else ``WrongState``.
        """
        if reason not in TEARDOWN_REASONS:
            raise ValueError(f"reason {reason} is not a normal-disconnect code")
        record = self.sessions.get(peer)
        if record is None or record.state < LifecycleState.AUTH_ASSOC:
            raise WrongState(f"no established session with {peer}")
        subtype = (
            FrameSubtype.DISASSOCIATION if reason == 8 else FrameSubtype.DEAUTHENTICATION
        )
        return ManagementFrame(
            subtype, self.mac, peer, reason, token_element(record.own_token.data)
        )

    def begin_teardown(self, peer: MacAddress, reason: int) -> ManagementFrame:
        """Send a teardown to ``peer`` and drop the local session."""
        if self.protected:
            frame = self.make_verified_deauth(peer, reason)
        else:
            if peer not in self.sessions:
                raise WrongState(f"no session with {peer}")
            subtype = (
                FrameSubtype.DISASSOCIATION
                if reason == 8
                else FrameSubtype.DEAUTHENTICATION
            )
            frame = ManagementFrame(subtype, self.mac, peer, reason)
        self._send(frame)
        self._delete_session(peer, frame.subtype)
        return frame

    # -- verification ------------------------------------------------

    def verify_deauth(self, frame: ManagementFrame) -> Verdict:
        """Judge an inbound teardown frame under token protection.

        Accepting requires a normal-disconnect reason code, a live
        session with the claimed sender, and a revealed token hashing
        to the stored peer commitment; the session is then deleted.
        Everything else is ignored, except reason 1 which is rejected
        outright, token or no token.
        """
        if frame.subtype not in (
            FrameSubtype.DEAUTHENTICATION,
            FrameSubtype.DISASSOCIATION,
        ):
            raise MalformedFrame(f"not a teardown frame: {frame.subtype.name}")
        reason = frame.status_or_reason
        if reason in REJECT_REASONS:
            return Verdict(Action.REJECT, "unspecified_reason")
        if reason in UNAUTH_SENDER_REASONS:
            return Verdict(Action.IGNORE, "unauthenticated_sender")
        if reason not in TEARDOWN_REASONS:
            return Verdict(Action.IGNORE, "reserved_code")

        record = self.sessions.get(frame.src)
        if record is None:
            return Verdict(Action.IGNORE, "no_session")
        if frame.ie is None or frame.ie.payload_kind != PAYLOAD_TOKEN:
            return Verdict(Action.IGNORE, "no_token")
        if record.peer_hash is None or hash_token(frame.ie.payload) != record.peer_hash:
            return Verdict(Action.IGNORE, "token_mismatch")

        self._delete_session(frame.src, frame.subtype)
        return Verdict(Action.ACCEPT, "token_verified")

    def legacy_verify_deauth(self, frame: ManagementFrame) -> Verdict:
        """Stock behavior: any teardown from a known peer is honored."""
        if frame.subtype not in (
            FrameSubtype.DEAUTHENTICATION,
            FrameSubtype.DISASSOCIATION,
        ):
            raise MalformedFrame(f"not a teardown frame: {frame.subtype.name}")
        if frame.src not in self.sessions:
            return Verdict(Action.IGNORE, "no_session")
        self._delete_session(frame.src, frame.subtype)
        return Verdict(Action.ACCEPT, "legacy_no_check")

    def _verify(self, frame: ManagementFrame) -> Verdict:
        if self.protected:
            return self.verify_deauth(frame)
        return self.legacy_verify_deauth(frame)

    # -- medium interface --------------------------------------------

    def receive_frame(self, data: bytes) -> tuple[ManagementFrame, Verdict] | None:
        """Decode and handle one frame off the air.

        Returns the frame and the verdict it produced, or ``None`` for
        frames that decode badly, are not addressed here, or carry a
        subtype this station has no business answering.
        """
        try:
            frame = decode_frame(data)
        except DecodeError:
            return None
        if frame.dst != self.mac and frame.dst != BROADCAST:
            return None
        return self._dispatch(frame)

    def _dispatch(self, frame: ManagementFrame) -> tuple[ManagementFrame, Verdict] | None:
        if frame.subtype in (FrameSubtype.DEAUTHENTICATION, FrameSubtype.DISASSOCIATION):
            return frame, self._verify(frame)
        return None


class ClientStation(Station):
    """Joins an AP, then defends the session against forged teardowns."""

    def __init__(
        self,
        mac: MacAddress,
        *,
        protected: bool = True,
        rng: Random | None = None,
        name: str | None = None,
    ):
        super().__init__(mac, protected=protected, rng=rng, name=name)
        self.pending: dict[MacAddress, SessionRecord] = {}
        self._join_targets: set[MacAddress] = set()

    def start_join(self, ap: MacAddress) -> None:
        """Kick off the full join handshake toward ``ap``.

        Sends the authentication request; the association request
        follows automatically once the AP's answer arrives.
        """
        if self.state_toward(ap) >= LifecycleState.AUTH_UNASSOC:
            frame, _ = self.begin_association(ap)
            self._send(frame)
            return
        self._join_targets.add(ap)
        self._send(
            ManagementFrame(FrameSubtype.AUTH_REQUEST, self.mac, ap, STATUS_SUCCESS)
        )

    def begin_association(
        self, ap: MacAddress
    ) -> tuple[ManagementFrame, SessionRecord]:
        """Generate this side's token and build the association request.

        In protected mode the request carries the token's SHA-512
        digest; legacy requests are bare.  Requires the peer to be in
        AUTH_UNASSOC, else ``WrongState``.
        """
        if self.state_toward(ap) != LifecycleState.AUTH_UNASSOC:
            raise WrongState(
                f"cannot associate from {self.state_toward(ap).name}, need AUTH_UNASSOC"
            )
        token = generate_token(self.rng)
        record = SessionRecord(
            peer=ap,
            own_token=token,
            own_hash=hash_token(token),
            peer_hash=None,
            state=LifecycleState.AUTH_UNASSOC,
        )
        self.pending[ap] = record
        ie = hash_element(record.own_hash) if self.protected else None
        frame = ManagementFrame(
            FrameSubtype.ASSOC_REQUEST, self.mac, ap, STATUS_SUCCESS, ie
        )
        return frame, record

    def handle_assoc_response(self, frame: ManagementFrame) -> Verdict:
        """Complete (or abandon) the association in flight with the sender."""
        if frame.subtype is not FrameSubtype.ASSOC_RESPONSE:
            raise MalformedFrame(f"not an association response: {frame.subtype.name}")
        record = self.pending.pop(frame.src, None)
        if record is None:
            raise NoPendingSession(f"no association in flight with {frame.src}")
        if frame.status_or_reason != STATUS_SUCCESS:
            return Verdict(Action.REJECT, "assoc_refused")
        if self.protected:
            if frame.ie is None or frame.ie.payload_kind != PAYLOAD_HASH:
                return Verdict(Action.REJECT, "missing_hash")
            record.peer_hash = frame.ie.payload
        self.sessions[frame.src] = record
        self._apply_event(frame.src, LifecycleEvent.ASSOC_OK)
        return Verdict(Action.ACCEPT, "assoc_confirmed")

    def _dispatch(self, frame: ManagementFrame) -> tuple[ManagementFrame, Verdict] | None:
        if frame.subtype is FrameSubtype.AUTH_RESPONSE:
            if frame.status_or_reason == STATUS_SUCCESS:
                self._apply_event(frame.src, LifecycleEvent.AUTH_OK)
                if frame.src in self._join_targets:
                    self._join_targets.discard(frame.src)
                    assoc, _ = self.begin_association(frame.src)
                    self._send(assoc)
            return None
        if frame.subtype is FrameSubtype.ASSOC_RESPONSE:
            try:
                return frame, self.handle_assoc_response(frame)
            except NoPendingSession:
                return None
        return super()._dispatch(frame)


class AccessPoint(Station):
    """Answers joins and keeps the replay ledger of seen hash commitments."""

    def __init__(
        self,
        mac: MacAddress,
        *,
        protected: bool = True,
        rng: Random | None = None,
        name: str | None = None,
    ):
        super().__init__(mac, protected=protected, rng=rng, name=name)
        self.store = ApStore(sessions=self.sessions)

    @property
    def seen_hashes(self) -> set[bytes]:
        return self.store.seen_hashes

    def handle_assoc_request(
        self, frame: ManagementFrame
    ) -> tuple[ManagementFrame, Verdict]:
        """Judge an association request and build the response.

        Protected mode refuses requests with no hash commitment and
        requests replaying a commitment seen before, whether or not the
        original session still exists.  A fresh commitment is recorded
        for the life of the store, the AP's own token is drawn, and the
        response carries its digest.
        """
        if frame.subtype is not FrameSubtype.ASSOC_REQUEST:
            raise MalformedFrame(f"not an association request: {frame.subtype.name}")
        src = frame.src

        if not self.protected:
            token = generate_token(self.rng)
            self.sessions[src] = SessionRecord(
                peer=src,
                own_token=token,
                own_hash=hash_token(token),
                peer_hash=None,
                state=self.state_toward(src),
            )
            self._apply_event(src, LifecycleEvent.AUTH_OK)
            self._apply_event(src, LifecycleEvent.ASSOC_OK)
            response = ManagementFrame(
                FrameSubtype.ASSOC_RESPONSE, self.mac, src, STATUS_SUCCESS
            )
            return response, Verdict(Action.ACCEPT, "legacy_assoc")

        if frame.ie is None or frame.ie.payload_kind != PAYLOAD_HASH:
            response = ManagementFrame(
                FrameSubtype.ASSOC_RESPONSE, self.mac, src, STATUS_REFUSED
            )
            return response, Verdict(Action.REJECT, "missing_hash")
        peer_hash = frame.ie.payload
        if peer_hash in self.store.seen_hashes:
            response = ManagementFrame(
                FrameSubtype.ASSOC_RESPONSE, self.mac, src, STATUS_REFUSED
            )
            return response, Verdict(Action.REJECT, "replayed_hash")

        self.store.seen_hashes.add(peer_hash)
        token = generate_token(self.rng)
        self.sessions[src] = SessionRecord(
            peer=src,
            own_token=token,
            own_hash=hash_token(token),
            peer_hash=peer_hash,
            state=self.state_toward(src),
        )
        self._apply_event(src, LifecycleEvent.AUTH_OK)
        self._apply_event(src, LifecycleEvent.ASSOC_OK)
        response = ManagementFrame(
            FrameSubtype.ASSOC_RESPONSE,
            self.mac,
            src,
            STATUS_SUCCESS,
            hash_element(self.sessions[src].own_hash),
        )
        return response, Verdict(Action.ACCEPT, "hash_recorded")

    def teardown_all(self, reason: int) -> list[ManagementFrame]:
        """Tear down every live session, one verified frame per peer."""
        frames = []
        for peer in list(self.sessions):
            frames.append(self.begin_teardown(peer, reason))
        return frames

    def _dispatch(self, frame: ManagementFrame) -> tuple[ManagementFrame, Verdict] | None:
        if frame.subtype is FrameSubtype.AUTH_REQUEST:
            self._apply_event(frame.src, LifecycleEvent.AUTH_OK)
            self._send(
                ManagementFrame(
                    FrameSubtype.AUTH_RESPONSE, self.mac, frame.src, STATUS_SUCCESS
                )
            )
            return None
        if frame.subtype is FrameSubtype.ASSOC_REQUEST:
            response, verdict = self.handle_assoc_request(frame)
            self._send(response)
            return frame, verdict
        return super()._dispatch(frame)


def snapshot_sessions(station: Station) -> dict[MacAddress, SessionRecord]:
    """Deep copy of a station's live sessions, for instrumented checks."""
    return copy.deepcopy(station.sessions)
