"""Scenario configuration, execution, and outcome accounting.

A scenario file is YAML with a versioned schema:

    schema: 1
    name: protected_forged_deauth
    mode: protected            # or legacy
    seed: 42
    loss_probability: 0.0
    max_ticks: 10000
    stations:
      - {role: ap, mac: "02:00:00:00:00:01"}
      - {role: client, mac: "02:00:00:00:00:02"}
    attackers:
      - kind: forged_deauth    # token_guess | assoc_replay | deauth_replay
        spoof_src: "02:00:00:00:00:01"
        target: "02:00:00:00:00:02"
        frame_count: 1
        reason: 3
        seed: 1337
    script:
      - associate: {client: "02:00:00:00:00:02", ap: "02:00:00:00:00:01"}
      - deauth: {initiator: "02:00:00:00:00:02", reason: 3}
      - attack: {index: 0}

Script actions run in order; the medium drains to idle after each one.
Every attacker is attached as a promiscuous tap and an injector, so
replay attacks see all earlier traffic.

Randomness derivation is fixed: one master ``random.Random(seed)``
yields a 64-bit sub-seed for the medium's loss stream and then one per
station in listing order; attackers use their own explicit seeds.  Two
runs of the same config therefore produce byte-identical event logs.

Reported ``final_states`` map each station's MAC to the highest
lifecycle state it currently holds toward any peer.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from random import Random

import yaml

from .adversary import Adversary, AttackerConfig, AttackKind
from .frames import FrameSubtype, MacAddress, ManagementFrame
from .medium import EventKind, Medium, MediumConfig, MediumEvent
from .stations import (
    AccessPoint,
    ClientStation,
    LifecycleState,
    Station,
    Verdict,
    Action,
    TEARDOWN_REASONS,
)

SCHEMA_VERSION = 1

# Subtypes whose verdicts the outcome tallies.
COUNTED_SUBTYPES = frozenset(
    {
        FrameSubtype.DEAUTHENTICATION,
        FrameSubtype.DISASSOCIATION,
        FrameSubtype.ASSOC_REQUEST,
    }
)


class ConfigError(Exception):
    """Scenario file or config rejected before any simulation ran."""


class Mode(Enum):
    PROTECTED = "protected"
    LEGACY = "legacy"


class Role(Enum):
    CLIENT = "client"
    AP = "ap"


@dataclass(frozen=True)
class StationSpec:
    role: Role
    mac: MacAddress


@dataclass(frozen=True)
class AssociateAction:
    client: MacAddress
    ap: MacAddress


@dataclass(frozen=True)
class DeauthAction:
    initiator: MacAddress
    reason: int


@dataclass(frozen=True)
class AttackAction:
    index: int


ScriptAction = AssociateAction | DeauthAction | AttackAction


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    mode: Mode
    seed: int
    stations: tuple[StationSpec, ...]
    attackers: tuple[AttackerConfig, ...] = ()
    script: tuple[ScriptAction, ...] = ()
    loss_probability: float = 0.0
    max_ticks: int = 10_000

    def __post_init__(self) -> None:
        if not self.stations:
            raise ConfigError("scenario needs at least one station")
        macs = [spec.mac for spec in self.stations]
        if len(set(macs)) != len(macs):
            raise ConfigError("station MACs must be unique")
        if not 0.0 <= self.loss_probability <= 1.0:
            raise ConfigError(
                f"loss probability {self.loss_probability} outside [0, 1]"
            )
        if self.max_ticks < 1:
            raise ConfigError(f"max_ticks must be positive, got {self.max_ticks}")
        roles = {spec.mac: spec.role for spec in self.stations}
        for action in self.script:
            if isinstance(action, AssociateAction):
                if roles.get(action.client) is not Role.CLIENT:
                    raise ConfigError(f"associate: {action.client} is not a client")
                if roles.get(action.ap) is not Role.AP:
                    raise ConfigError(f"associate: {action.ap} is not an AP")
            elif isinstance(action, DeauthAction):
                if action.initiator not in roles:
                    raise ConfigError(f"deauth: unknown initiator {action.initiator}")
                if action.reason not in TEARDOWN_REASONS:
                    raise ConfigError(
                        f"deauth: reason {action.reason} is not a normal-disconnect code"
                    )
            elif isinstance(action, AttackAction):
                if not 0 <= action.index < len(self.attackers):
                    raise ConfigError(f"attack: no attacker at index {action.index}")
            else:
                raise ConfigError(f"unknown script action {action!r}")


@dataclass
class ScenarioOutcome:
    """Counters summarizing one run."""

    name: str
    mode: Mode
    seed: int
    frames_sent: int = 0
    frames_delivered: int = 0
    frames_dropped: int = 0
    verdicts: dict[str, int] = field(default_factory=dict)
    attack_success_count: int = 0
    legit_disconnect_success: bool = True
    final_states: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode.value,
            "seed": self.seed,
            "frames_sent": self.frames_sent,
            "frames_delivered": self.frames_delivered,
            "frames_dropped": self.frames_dropped,
            "verdicts": dict(self.verdicts),
            "attack_success_count": self.attack_success_count,
            "legit_disconnect_success": self.legit_disconnect_success,
            "final_states": dict(self.final_states),
        }


# -- config loading ----------------------------------------------------


def _parse_mac(value, where: str) -> MacAddress:
    try:
        return MacAddress.parse(str(value))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"{where}: missing required field {key!r}")
    return mapping[key]


def _parse_action(entry, index: int) -> ScriptAction:
    where = f"script[{index}]"
    if not isinstance(entry, dict) or len(entry) != 1:
        raise ConfigError(f"{where}: each action is a one-key mapping")
    (verb, body), = entry.items()
    if not isinstance(body, dict):
        raise ConfigError(f"{where}: {verb} body must be a mapping")
    if verb == "associate":
        return AssociateAction(
            client=_parse_mac(_require(body, "client", where), where),
            ap=_parse_mac(_require(body, "ap", where), where),
        )
    if verb == "deauth":
        reason = _require(body, "reason", where)
        if not isinstance(reason, int):
            raise ConfigError(f"{where}: reason must be an integer")
        return DeauthAction(
            initiator=_parse_mac(_require(body, "initiator", where), where),
            reason=reason,
        )
    if verb == "attack":
        idx = _require(body, "index", where)
        if not isinstance(idx, int):
            raise ConfigError(f"{where}: index must be an integer")
        return AttackAction(index=idx)
    raise ConfigError(f"{where}: unknown action {verb!r}")


def _parse_attacker(entry, index: int) -> AttackerConfig:
    where = f"attackers[{index}]"
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: must be a mapping")
    kind_name = str(_require(entry, "kind", where))
    try:
        kind = AttackKind(kind_name)
    except ValueError:
        raise ConfigError(f"{where}: unknown attack kind {kind_name!r}") from None
    try:
        return AttackerConfig(
            kind=kind,
            spoof_src=_parse_mac(_require(entry, "spoof_src", where), where),
            target=_parse_mac(_require(entry, "target", where), where),
            frame_count=int(entry.get("frame_count", 1)),
            reason=int(entry.get("reason", 3)),
            seed=int(entry.get("seed", 0)),
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def config_from_dict(doc: dict) -> ScenarioConfig:
    """Validate a parsed scenario document into a ScenarioConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("scenario document must be a mapping")
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version {schema!r}")

    mode_name = str(_require(doc, "mode", "scenario"))
    try:
        mode = Mode(mode_name)
    except ValueError:
        raise ConfigError(f"unknown mode {mode_name!r}") from None

    stations_doc = _require(doc, "stations", "scenario")
    if not isinstance(stations_doc, list):
        raise ConfigError("stations must be a list")
    stations = []
    for i, entry in enumerate(stations_doc):
        where = f"stations[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where}: must be a mapping")
        role_name = str(_require(entry, "role", where))
        try:
            role = Role(role_name)
        except ValueError:
            raise ConfigError(f"{where}: unknown role {role_name!r}") from None
        stations.append(
            StationSpec(role=role, mac=_parse_mac(_require(entry, "mac", where), where))
        )

    attackers = [
        _parse_attacker(entry, i) for i, entry in enumerate(doc.get("attackers", []))
    ]
    script = [_parse_action(entry, i) for i, entry in enumerate(doc.get("script", []))]

    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    loss = doc.get("loss_probability", 0.0)
    if not isinstance(loss, (int, float)) or isinstance(loss, bool):
        raise ConfigError("loss_probability must be a number")
    max_ticks = doc.get("max_ticks", 10_000)
    if not isinstance(max_ticks, int):
        raise ConfigError("max_ticks must be an integer")

    return ScenarioConfig(
        name=str(doc.get("name", "unnamed")),
        mode=mode,
        seed=seed,
        stations=tuple(stations),
        attackers=tuple(attackers),
        script=tuple(script),
        loss_probability=float(loss),
        max_ticks=max_ticks,
    )


def load_scenario_text(text: str) -> ScenarioConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"scenario file is not valid YAML: {exc}") from None
    return config_from_dict(doc)


def load_scenario_file(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"scenario file {path} does not exist")
    return load_scenario_text(path.read_text())


def bundled_scenario_names() -> list[str]:
    """Names of the scenarios shipped inside the package."""
    root = resources.files(__package__) / "scenarios"
    return sorted(p.name[: -len(".yaml")] for p in root.iterdir() if p.name.endswith(".yaml"))


def load_bundled_scenario(name: str) -> ScenarioConfig:
    root = resources.files(__package__) / "scenarios"
    candidate = root / f"{name}.yaml"
    if not candidate.is_file():
        raise ConfigError(
            f"unknown bundled scenario {name!r}; available: {', '.join(bundled_scenario_names())}"
        )
    return load_scenario_text(candidate.read_text())


def load_scenario(ref: str | Path) -> ScenarioConfig:
    """Load a scenario from a file path or a bundled scenario name."""
    path = Path(ref)
    if path.exists():
        return load_scenario_file(path)
    if isinstance(ref, str) and "/" not in ref and "\\" not in ref:
        return load_bundled_scenario(ref)
    raise ConfigError(f"scenario file {ref} does not exist")


# -- execution ---------------------------------------------------------


@dataclass(frozen=True)
class VerdictRecord:
    """One verdict joined with the true sender from the medium log."""

    sender_id: str
    receiver_id: str
    frame: ManagementFrame
    verdict: Verdict


class ScenarioRun:
    """Wires stations, adversaries and medium for one config."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.records: list[VerdictRecord] = []
        self.expected_teardowns = 0

        master = Random(cfg.seed)
        medium_seed = master.getrandbits(64)
        station_seeds = [master.getrandbits(64) for _ in cfg.stations]

        self.adversaries = [
            Adversary(acfg, f"attacker:{i}") for i, acfg in enumerate(cfg.attackers)
        ]
        self.adversary_ids = {adv.endpoint_id for adv in self.adversaries}

        self.medium = Medium(
            MediumConfig(
                loss_probability=cfg.loss_probability,
                seed=medium_seed,
                promiscuous_taps=tuple(adv.endpoint_id for adv in self.adversaries),
            )
        )

        protected = cfg.mode is Mode.PROTECTED
        self.stations: dict[MacAddress, Station] = {}
        for spec, seed in zip(cfg.stations, station_seeds):
            cls = AccessPoint if spec.role is Role.AP else ClientStation
            station = cls(spec.mac, protected=protected, rng=Random(seed))
            self.stations[spec.mac] = station
            handle = self.medium.attach(
                station.name, spec.mac, functools.partial(self._deliver, station)
            )
            station.bind_transmit(handle.send)

        self.attack_handles = {
            adv.endpoint_id: self.medium.attach(
                adv.endpoint_id, None, adv.on_sniffed, injector=True
            )
            for adv in self.adversaries
        }

    def _deliver(self, station: Station, event: MediumEvent) -> None:
        result = station.receive_frame(event.frame)
        if result is not None:
            frame, verdict = result
            self.records.append(
                VerdictRecord(event.src, station.name, frame, verdict)
            )

    def _perform(self, action: ScriptAction) -> None:
        if isinstance(action, AssociateAction):
            client = self.stations[action.client]
            assert isinstance(client, ClientStation)
            client.start_join(action.ap)
        elif isinstance(action, DeauthAction):
            initiator = self.stations[action.initiator]
            if isinstance(initiator, AccessPoint):
                self.expected_teardowns += len(initiator.teardown_all(action.reason))
            else:
                peers = list(initiator.sessions)
                for peer in peers:
                    initiator.begin_teardown(peer, action.reason)
                self.expected_teardowns += len(peers)
        else:
            adversary = self.adversaries[action.index]
            handle = self.attack_handles[adversary.endpoint_id]
            for raw in adversary.frames():
                handle.send(raw)

    def execute(self) -> tuple[ScenarioOutcome, list[MediumEvent]]:
        for action in self.cfg.script:
            self._perform(action)
            self.medium.run_until_idle(self.cfg.max_ticks)
        return self._outcome(), list(self.medium.events)

    def _outcome(self) -> ScenarioOutcome:
        outcome = ScenarioOutcome(self.cfg.name, self.cfg.mode, self.cfg.seed)
        for event in self.medium.events:
            if event.kind is EventKind.DELIVERED:
                outcome.frames_delivered += 1
            elif event.kind is EventKind.DROPPED:
                outcome.frames_dropped += 1
        outcome.frames_sent = outcome.frames_delivered + outcome.frames_dropped

        counted = Counter()
        teardown_accepts = 0
        for record in self.records:
            if record.frame.subtype in COUNTED_SUBTYPES:
                counted[record.verdict.cause] += 1
            if record.verdict.action is Action.ACCEPT:
                if record.sender_id in self.adversary_ids:
                    outcome.attack_success_count += 1
                elif record.frame.subtype in (
                    FrameSubtype.DEAUTHENTICATION,
                    FrameSubtype.DISASSOCIATION,
                ):
                    teardown_accepts += 1
        outcome.verdicts = dict(counted)
        outcome.legit_disconnect_success = teardown_accepts == self.expected_teardowns

        for mac, station in self.stations.items():
            state = max(
                station.peer_state.values(), default=LifecycleState.UNAUTH_UNASSOC
            )
            outcome.final_states[str(mac)] = state.name.lower()
        return outcome


def run_scenario(
    cfg: ScenarioConfig, seed: int | None = None
) -> tuple[ScenarioOutcome, list[MediumEvent]]:
    """Run one scenario to completion; ``seed`` overrides the config's."""
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    return ScenarioRun(cfg).execute()
