"""Fault, error, and failure classification, common-term mapping, and causal chains.

Every anomalous occurrence is an :class:`Event` carrying a class descriptor and
an optional causal parent, so a whole run forms a DAG: faults activate into
errors, errors propagate into errors or escalate into failures, and a failure
may cascade into fresh faults on dependent components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Optional, Sequence


class EventKind(str, Enum):
    FAULT = "fault"
    ERROR = "error"
    FAILURE = "failure"


class Activity(str, Enum):
    BENIGN = "benign"
    DORMANT = "dormant"
    ACTIVE = "active"


class Persistence(str, Enum):
    PERMANENT = "permanent"
    TRANSIENT = "transient"
    INTERMITTENT = "intermittent"


class Reproducibility(str, Enum):
    HARD = "hard"
    SOFT = "soft"


class DetectionState(str, Enum):
    UNDETECTED = "undetected"
    DETECTED = "detected"


class MaskingState(str, Enum):
    UNMASKED = "unmasked"
    MASKED = "masked"


class Origin(str, Enum):
    HARD = "hard"
    SOFT = "soft"


class Correction(str, Enum):
    UNCORRECTED = "uncorrected"
    CORRECTED = "corrected"


class Severity(str, Enum):
    COMPLETE = "complete"
    PARTIAL = "partial"
    BYZANTINE = "byzantine"


class ConsumerSemantics(str, Enum):
    """How a consumer uses an erroneous value: annihilating use masks it."""

    ANNIHILATING = "annihilating"
    PROPAGATING = "propagating"


class TaxonomyError(Exception):
    """Base class for classification errors."""


class BenignFault(TaxonomyError):
    """Raised when a benign fault is asked to activate."""


class MaskedError(TaxonomyError):
    """Raised when a masked or corrected error is asked to escalate."""


@dataclass(frozen=True)
class FaultDescriptor:
    activity: Activity
    persistence: Persistence
    reproducibility: Reproducibility

    def token(self) -> str:
        return "-".join(
            (self.activity.value, self.persistence.value, self.reproducibility.value)
        )

    @classmethod
    def from_token(cls, token: str) -> "FaultDescriptor":
        a, p, r = _split_token(token, 3)
        return cls(Activity(a), Persistence(p), Reproducibility(r))


@dataclass(frozen=True)
class ErrorDescriptor:
    detection: DetectionState
    masking: MaskingState
    origin: Origin
    correction: Correction = Correction.UNCORRECTED

    def __post_init__(self) -> None:
        # A corrected error is by definition one that was detected and masked.
        if self.correction is Correction.CORRECTED and (
            self.detection is not DetectionState.DETECTED
            or self.masking is not MaskingState.MASKED
        ):
            raise TaxonomyError(
                "corrected errors must be detected and masked, got "
                f"{self.detection.value}-{self.masking.value}"
            )

    def token(self) -> str:
        return "-".join(
            (
                self.detection.value,
                self.masking.value,
                self.origin.value,
                self.correction.value,
            )
        )

    @classmethod
    def from_token(cls, token: str) -> "ErrorDescriptor":
        parts = token.split("-")
        if len(parts) == 3:  # short form: correction defaults to uncorrected
            d, m, o = parts
            return cls(DetectionState(d), MaskingState(m), Origin(o))
        d, m, o, c = _split_token(token, 4)
        return cls(DetectionState(d), MaskingState(m), Origin(o), Correction(c))


@dataclass(frozen=True)
class FailureDescriptor:
    detection: DetectionState
    persistence: Persistence
    severity: Severity

    def token(self) -> str:
        return "-".join(
            (self.detection.value, self.persistence.value, self.severity.value)
        )

    @classmethod
    def from_token(cls, token: str) -> "FailureDescriptor":
        d, p, s = _split_token(token, 3)
        return cls(DetectionState(d), Persistence(p), Severity(s))


Descriptor = FaultDescriptor | ErrorDescriptor | FailureDescriptor


def _split_token(token: str, n: int) -> list[str]:
    parts = token.split("-")
    if len(parts) != n:
        raise TaxonomyError(f"expected {n} hyphen-joined class values, got {token!r}")
    return parts


def descriptor_from_token(kind: EventKind, token: str) -> Descriptor:
    if kind is EventKind.FAULT:
        return FaultDescriptor.from_token(token)
    if kind is EventKind.ERROR:
        return ErrorDescriptor.from_token(token)
    return FailureDescriptor.from_token(token)


_event_ids = itertools.count(1)


@dataclass(frozen=True)
class Event:
    """One fault/error/failure occurrence; ``cause`` links the causal parent."""

    id: int
    kind: EventKind
    time: float
    component: str
    descriptor: Descriptor
    cause: Optional[int] = None

    def __post_init__(self) -> None:
        if self.time < 0:
            raise TaxonomyError(f"event time must be non-negative, got {self.time}")


def new_event(
    kind: EventKind,
    time: float,
    component: str,
    descriptor: Descriptor,
    cause: Optional[int] = None,
    event_id: Optional[int] = None,
) -> Event:
    """Build an event, drawing a fresh id unless the caller supplies one."""
    return Event(
        id=next(_event_ids) if event_id is None else event_id,
        kind=kind,
        time=time,
        component=component,
        descriptor=descriptor,
        cause=cause,
    )


def activate_fault(
    fault: Event, trigger_time: float, event_id: Optional[int] = None
) -> Event:
    """Turn an activated fault into an error on the same component.

    The raw error is undetected and unmasked; its origin derives from the
    fault's persistence (permanent faults produce hard errors, transient and
    intermittent faults produce soft errors).
    """
    if fault.kind is not EventKind.FAULT:
        raise TaxonomyError(f"cannot activate a {fault.kind.value} event")
    desc = fault.descriptor
    assert isinstance(desc, FaultDescriptor)
    if desc.activity is Activity.BENIGN:
        raise BenignFault(f"benign fault {fault.id} never activates")
    if trigger_time < fault.time:
        raise TaxonomyError(
            f"trigger at {trigger_time} precedes fault occurrence at {fault.time}"
        )
    origin = Origin.HARD if desc.persistence is Persistence.PERMANENT else Origin.SOFT
    return new_event(
        EventKind.ERROR,
        trigger_time,
        fault.component,
        ErrorDescriptor(DetectionState.UNDETECTED, MaskingState.UNMASKED, origin),
        cause=fault.id,
        event_id=event_id,
    )


def mask_check(error: Event, consumer_semantics: ConsumerSemantics) -> ErrorDescriptor:
    """Resolve an error's masking from how its first consumer uses the value."""
    if error.kind is not EventKind.ERROR:
        raise TaxonomyError(f"mask_check applies to errors, not {error.kind.value}")
    desc = error.descriptor
    assert isinstance(desc, ErrorDescriptor)
    masked = consumer_semantics is ConsumerSemantics.ANNIHILATING
    return replace(desc, masking=MaskingState.MASKED if masked else MaskingState.UNMASKED)


def escalate_to_failure(
    error: Event,
    severity: Severity,
    detection: DetectionState,
    persistence: Persistence,
    event_id: Optional[int] = None,
) -> Event:
    """Escalate an unmasked, uncorrected error into a failure event."""
    if error.kind is not EventKind.ERROR:
        raise TaxonomyError(f"cannot escalate a {error.kind.value} event")
    desc = error.descriptor
    assert isinstance(desc, ErrorDescriptor)
    if desc.masking is MaskingState.MASKED or desc.correction is Correction.CORRECTED:
        raise MaskedError(f"error {error.id} is masked or corrected and cannot escalate")
    return new_event(
        EventKind.FAILURE,
        error.time,
        error.component,
        FailureDescriptor(detection, persistence, severity),
        cause=error.id,
        event_id=event_id,
    )


def cascade(
    failure: Event,
    dependents: Sequence[str],
    event_ids: Optional[Sequence[int]] = None,
) -> list[Event]:
    """Convert a component failure into dormant external faults on dependents.

    Persistence copies through from the failure; a permanent failure presents a
    systematically reproducible (hard) external fault, anything else soft.
    """
    if failure.kind is not EventKind.FAILURE:
        raise TaxonomyError(f"cannot cascade a {failure.kind.value} event")
    desc = failure.descriptor
    assert isinstance(desc, FailureDescriptor)
    repro = (
        Reproducibility.HARD
        if desc.persistence is Persistence.PERMANENT
        else Reproducibility.SOFT
    )
    template = FaultDescriptor(Activity.DORMANT, desc.persistence, repro)
    if event_ids is not None and len(event_ids) != len(dependents):
        raise TaxonomyError("one event id required per dependent")
    faults = []
    for i, comp in enumerate(dependents):
        faults.append(
            new_event(
                EventKind.FAULT,
                failure.time,
                comp,
                template,
                cause=failure.id,
                event_id=None if event_ids is None else event_ids[i],
            )
        )
    return faults


# Common-term labels.  Each predicate is checked against the descriptor; all
# matching labels are returned.
LATENT_FAULT = "latent fault"
SOLID_FAULT = "solid fault"
ELUSIVE_FAULT = "elusive fault"
UE = "UE"
LATENT_ERROR = "latent error"
SILENT_ERROR = "silent error"
SDC = "SDC"
DE = "DE"
DUE = "DUE"
DCE = "DCE"
FAIL_STOP = "fail-stop"

ALL_TERMS = frozenset(
    {
        LATENT_FAULT,
        SOLID_FAULT,
        ELUSIVE_FAULT,
        UE,
        LATENT_ERROR,
        SILENT_ERROR,
        SDC,
        DE,
        DUE,
        DCE,
        FAIL_STOP,
    }
)


def common_term(descriptor: Descriptor) -> frozenset[str]:
    """Map a class descriptor onto every common term that applies to it."""
    terms: set[str] = set()
    if isinstance(descriptor, FaultDescriptor):
        if descriptor.activity is Activity.DORMANT:
            terms.add(LATENT_FAULT)
        if descriptor.reproducibility is Reproducibility.HARD:
            terms.add(SOLID_FAULT)
        else:
            terms.add(ELUSIVE_FAULT)
    elif isinstance(descriptor, ErrorDescriptor):
        if descriptor.detection is DetectionState.UNDETECTED:
            terms.update({UE, LATENT_ERROR, SILENT_ERROR})
            if descriptor.masking is MaskingState.UNMASKED:
                terms.add(SDC)
        else:
            terms.add(DE)
            if descriptor.masking is MaskingState.UNMASKED:
                terms.add(DUE)
            else:
                terms.add(DCE)
    elif isinstance(descriptor, FailureDescriptor):
        # Fail-stop is a permanent complete failure, detected or not.
        if (
            descriptor.persistence is Persistence.PERMANENT
            and descriptor.severity is Severity.COMPLETE
        ):
            terms.add(FAIL_STOP)
    else:
        raise TaxonomyError(f"unknown descriptor type {type(descriptor).__name__}")
    return frozenset(terms)


# Causality-chain validation ------------------------------------------------

# Allowed (parent kind -> child kind) pairs along a cause edge.
_ALLOWED_EDGES = {
    (EventKind.FAULT, EventKind.ERROR),
    (EventKind.ERROR, EventKind.ERROR),
    (EventKind.ERROR, EventKind.FAILURE),
    (EventKind.FAILURE, EventKind.FAULT),  # cascade edge
}


@dataclass(frozen=True)
class ChainViolation:
    kind: str
    event_id: Optional[int]
    message: str


@dataclass(frozen=True)
class ChainVerdict:
    ok: bool
    violations: tuple[ChainViolation, ...]


@dataclass(frozen=True)
class CausalityChain:
    events: tuple[Event, ...]

    @classmethod
    def from_events(cls, events: Iterable[Event]) -> "CausalityChain":
        return cls(tuple(events))


def validate_chain(chain: CausalityChain | Iterable[Event]) -> ChainVerdict:
    """Check a realized event DAG for structural violations.

    Violations are returned as data rather than raised: cycles, illegal
    kind-order on a cause edge, time regression along an edge, benign faults
    parenting errors, and errors/failures without the required ancestry.
    """
    events = chain.events if isinstance(chain, CausalityChain) else tuple(chain)
    by_id = {e.id: e for e in events}
    violations: list[ChainViolation] = []

    if len(by_id) != len(events):
        violations.append(ChainViolation("duplicate-id", None, "duplicate event ids"))

    for e in events:
        if e.cause is None:
            continue
        parent = by_id.get(e.cause)
        if parent is None:
            violations.append(
                ChainViolation("dangling-cause", e.id, f"cause {e.cause} not in chain")
            )
            continue
        if (parent.kind, e.kind) not in _ALLOWED_EDGES:
            violations.append(
                ChainViolation(
                    "kind-order",
                    e.id,
                    f"{parent.kind.value} may not cause {e.kind.value}",
                )
            )
        if parent.time > e.time:
            violations.append(
                ChainViolation(
                    "time-regression",
                    e.id,
                    f"cause at t={parent.time} is later than t={e.time}",
                )
            )
        if (
            e.kind is EventKind.ERROR
            and isinstance(parent.descriptor, FaultDescriptor)
            and parent.descriptor.activity is Activity.BENIGN
        ):
            violations.append(
                ChainViolation("benign-parent", e.id, "benign fault parenting an error")
            )

    # Cycle detection over cause edges.
    state: dict[int, int] = {}  # 0 visiting, 1 done

    def walk(eid: int) -> bool:
        if state.get(eid) == 1:
            return False
        if state.get(eid) == 0:
            return True
        state[eid] = 0
        parent = by_id[eid].cause
        cyclic = parent in by_id and walk(parent)
        state[eid] = 1
        return cyclic

    for e in events:
        if e.id not in state and walk(e.id):
            violations.append(ChainViolation("cycle", e.id, "cause edges form a cycle"))

    # Ancestry requirements (only meaningful on acyclic chains).
    if not any(v.kind == "cycle" for v in violations):
        kinds_cache: dict[int, set[EventKind]] = {}

        def ancestor_kinds(eid: int) -> set[EventKind]:
            if eid in kinds_cache:
                return kinds_cache[eid]
            e = by_id[eid]
            kinds: set[EventKind] = set()
            if e.cause is not None and e.cause in by_id:
                parent = by_id[e.cause]
                kinds.add(parent.kind)
                kinds.update(ancestor_kinds(parent.id))
            kinds_cache[eid] = kinds
            return kinds

        for e in events:
            up = ancestor_kinds(e.id)
            if e.kind is EventKind.ERROR and EventKind.FAULT not in up:
                violations.append(
                    ChainViolation("orphan-error", e.id, "error with no fault ancestor")
                )
            if e.kind is EventKind.FAILURE and EventKind.ERROR not in up:
                violations.append(
                    ChainViolation(
                        "orphan-failure", e.id, "failure with no error ancestor"
                    )
                )

    return ChainVerdict(ok=not violations, violations=tuple(violations))
