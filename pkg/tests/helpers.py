"""Shared builders for protocol-level tests (no medium involved)."""

from random import Random

from deauthsim.frames import FrameSubtype, MacAddress, ManagementFrame, encode_frame
from deauthsim.stations import AccessPoint, ClientStation

AP_MAC = MacAddress.parse("02:00:00:00:00:01")
CLIENT_MAC = MacAddress.parse("02:00:00:00:00:02")
OTHER_MAC = MacAddress.parse("02:00:00:00:00:99")


def make_pair(protected: bool = True, seed: int = 7):
    """A client and AP with independent seeded randomness."""
    client = ClientStation(CLIENT_MAC, protected=protected, rng=Random(seed))
    ap = AccessPoint(AP_MAC, protected=protected, rng=Random(seed + 1))
    return client, ap


def auth_success(client: ClientStation, ap: AccessPoint) -> None:
    """Deliver the opaque authentication-succeeded event to both sides."""
    ap.receive_frame(
        encode_frame(
            ManagementFrame(FrameSubtype.AUTH_REQUEST, client.mac, ap.mac, 0)
        )
    )
    client.receive_frame(
        encode_frame(
            ManagementFrame(FrameSubtype.AUTH_RESPONSE, ap.mac, client.mac, 0)
        )
    )


def complete_handshake(client: ClientStation, ap: AccessPoint):
    """Run the full join; returns (request, response) frames."""
    auth_success(client, ap)
    request, _pending = client.begin_association(ap.mac)
    response, _verdict = ap.handle_assoc_request(request)
    client.handle_assoc_response(response)
    return request, response
