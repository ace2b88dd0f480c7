"""Management frame model and byte codec.

Every frame on the simulated medium uses one fixed layout:

    offset  size  field
    ------  ----  -----------------------------------------------
    0       1     subtype code
    1       6     source MAC
    7       6     destination MAC
    13      2     status or reason code, little-endian u16
    15      1     information element id, always 0xDD   (optional)
    16      1     declared length = payload length + 1  (optional)
    17      1     payload kind: 0x01 hash, 0x02 token   (optional)
    18      n     payload: 64 bytes (hash) or 16 (token)

The information element block is present only on frames that carry a
hash commitment or a revealed token, so the only legal encoded sizes
are 15 (bare), 82 (hash) and 34 (token) bytes.

Authentication is modeled as a single opaque request/response pair, so
the subtype byte uses two synthetic codes (0x10/0x11) that do not clash
with the association and teardown codes.

``decode_frame`` never raises anything but ``DecodeError`` subclasses,
no matter how hostile the input: adversaries inject arbitrary bytes and
receivers must shrug them off.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum

HEADER_SIZE = 15
HEADER_FORMAT = "<B6s6sH"

IE_ELEMENT_ID = 0xDD
PAYLOAD_HASH = 0x01
PAYLOAD_TOKEN = 0x02

HASH_PAYLOAD_SIZE = 64
TOKEN_PAYLOAD_SIZE = 16

# The only sizes encode_frame can emit: bare, with hash, with token.
CANONICAL_FRAME_SIZES = frozenset({15, 82, 34})

# Reason codes 0-9 carry fixed meanings; 10-65535 are reserved.
REASON_DESCRIPTIONS = {
    0: "Reserved",
    1: "Unspecific reason",
    2: "Previous authentication invalid",
    3: "Station is leaving (deauthentication)",
    4: "Inactivity timeout",
    5: "AP cannot handle all associated stations",
    6: "Class 2 frame from nonauthenticated station",
    7: "Class 3 frame from nonassociated station",
    8: "Station is leaving (disassociation)",
    9: "Association requested before authentication",
}


class DecodeError(ValueError):
    """Raised when a byte string is not a well-formed frame."""


class TooShort(DecodeError):
    """Fewer bytes than the fixed 15-byte header."""


class UnknownSubtype(DecodeError):
    """Byte 0 is not one of the defined subtype codes."""


class BadIeLength(DecodeError):
    """Information element truncated, mis-declared, or wrong for its kind."""


class TrailingBytes(DecodeError):
    """Extra bytes beyond the frame that do not form an information element."""


class FrameSubtype(Enum):
    """Wire codes for the management frame subtypes the simulator models."""

    ASSOC_REQUEST = 0x00
    ASSOC_RESPONSE = 0x01
    DISASSOCIATION = 0x0A
    DEAUTHENTICATION = 0x0C
    AUTH_REQUEST = 0x10
    AUTH_RESPONSE = 0x11


TEARDOWN_SUBTYPES = frozenset({FrameSubtype.DEAUTHENTICATION, FrameSubtype.DISASSOCIATION})


@dataclass(frozen=True)
class MacAddress:
    """A 6-octet hardware address; renders as lowercase colon-separated hex."""

    octets: bytes

    def __post_init__(self) -> None:
        object.__setattr__(self, "octets", bytes(self.octets))
        if len(self.octets) != 6:
            raise ValueError(f"MAC address needs exactly 6 octets, got {len(self.octets)}")

    @classmethod
    def parse(cls, text: str) -> "MacAddress":
        parts = text.strip().split(":")
        if len(parts) != 6 or not all(len(p) == 2 for p in parts):
            raise ValueError(f"malformed MAC address {text!r}")
        try:
            return cls(bytes(int(p, 16) for p in parts))
        except ValueError as exc:
            raise ValueError(f"malformed MAC address {text!r}") from exc

    def __str__(self) -> str:
        return ":".join(f"{b:02x}" for b in self.octets)


BROADCAST = MacAddress(b"\xff" * 6)


@dataclass(frozen=True)
class InformationElement:
    """Vendor-specific element carrying either a hash commitment or a token."""

    payload_kind: int
    payload: bytes

    def __post_init__(self) -> None:
        object.__setattr__(self, "payload", bytes(self.payload))
        if self.payload_kind == PAYLOAD_HASH:
            expected = HASH_PAYLOAD_SIZE
        elif self.payload_kind == PAYLOAD_TOKEN:
            expected = TOKEN_PAYLOAD_SIZE
        else:
            raise ValueError(f"unknown payload kind 0x{self.payload_kind:02x}")
        if len(self.payload) != expected:
            raise ValueError(
                f"payload kind 0x{self.payload_kind:02x} needs {expected} bytes,"
                f" got {len(self.payload)}"
            )


def hash_element(digest: bytes) -> InformationElement:
    return InformationElement(PAYLOAD_HASH, digest)


def token_element(raw: bytes) -> InformationElement:
    return InformationElement(PAYLOAD_TOKEN, raw)


@dataclass(frozen=True)
class ManagementFrame:
    """One simulated management frame.

    ``status_or_reason`` is a status code on association responses
    (0 = success) and a reason code on teardown frames.
    """

    subtype: FrameSubtype
    src: MacAddress
    dst: MacAddress
    status_or_reason: int = 0
    ie: InformationElement | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.status_or_reason <= 0xFFFF:
            raise ValueError(f"status/reason {self.status_or_reason} outside u16 range")


def encode_frame(frame: ManagementFrame) -> bytes:
    """Serialize a frame to its canonical byte string."""
    buf = bytearray(
        struct.pack(
            HEADER_FORMAT,
            frame.subtype.value,
            frame.src.octets,
            frame.dst.octets,
            frame.status_or_reason,
        )
    )
    if frame.ie is not None:
        buf.append(IE_ELEMENT_ID)
        buf.append(len(frame.ie.payload) + 1)
        buf.append(frame.ie.payload_kind)
        buf += frame.ie.payload
    return bytes(buf)


def decode_frame(data: bytes) -> ManagementFrame:
    """Parse bytes into a frame, rejecting anything malformed.

    Raises the ``DecodeError`` subclass naming the first violated
    layout rule: ``TooShort``, ``UnknownSubtype``, ``BadIeLength`` or
    ``TrailingBytes``.
    """
    data = bytes(data)
    if len(data) < HEADER_SIZE:
        raise TooShort(f"{len(data)} bytes is shorter than the {HEADER_SIZE}-byte header")

    code, src_raw, dst_raw, status = struct.unpack_from(HEADER_FORMAT, data)
    try:
        subtype = FrameSubtype(code)
    except ValueError:
        raise UnknownSubtype(f"unknown subtype code 0x{code:02x}") from None

    if len(data) == HEADER_SIZE:
        ie = None
    else:
        if data[HEADER_SIZE] != IE_ELEMENT_ID:
            raise TrailingBytes(
                f"byte {HEADER_SIZE} is 0x{data[HEADER_SIZE]:02x},"
                f" not an information element"
            )
        if len(data) < HEADER_SIZE + 3:
            raise BadIeLength("information element header truncated")
        declared = data[HEADER_SIZE + 1]
        kind = data[HEADER_SIZE + 2]
        payload = data[HEADER_SIZE + 3 :]
        if declared < 1:
            raise BadIeLength("declared element length must cover the kind byte")
        if len(payload) < declared - 1:
            raise BadIeLength(
                f"element declares {declared - 1} payload bytes, only {len(payload)} present"
            )
        if len(payload) > declared - 1:
            raise TrailingBytes(f"{len(payload) - (declared - 1)} bytes after the element")
        try:
            ie = InformationElement(kind, payload)
        except ValueError as exc:
            raise BadIeLength(str(exc)) from None

    return ManagementFrame(subtype, MacAddress(src_raw), MacAddress(dst_raw), status, ie)
