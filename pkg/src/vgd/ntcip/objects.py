"""Controller object registry and agent-side request handling.

Objects live under the NEMA enterprise subtree 1.3.6.1.4.1.1206 on a
project-assigned branch (.99); the layout is a documented local
assignment, not a standard MIB:

    1.3.6.1.4.1.1206.99.1.<phase>  pedCall.<phase>        read-write Integer
    1.3.6.1.4.1.1206.99.2.<phase>  pedIndication.<phase>  read-only  Integer
    1.3.6.1.4.1.1206.99.3.0        activePhase            read-only  Integer
    1.3.6.1.4.1.1206.99.4.0        remainingWalk          read-only  Integer

Writing Integer(1) to pedCall.<phase> latches a pedestrian call.
pedIndication values: 0 = DONT_WALK, 1 = FLASHING_DONT_WALK, 2 = WALK.
remainingWalk is reported in tenths of a second.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import controller as ctl
from .codec import (
    BAD_VALUE,
    GEN_ERR,
    GET_REQUEST,
    GET_RESPONSE,
    NO_ERROR,
    NO_SUCH_NAME,
    SET_REQUEST,
    Integer,
    NtcipMessage,
    Oid,
    VarBind,
)

ENTERPRISE_BASE = (1, 3, 6, 1, 4, 1, 1206, 99)

PED_CALL_BRANCH = 1
PED_INDICATION_BRANCH = 2
ACTIVE_PHASE_BRANCH = 3
REMAINING_WALK_BRANCH = 4

INDICATION_CODES = {
    ctl.DONT_WALK: 0,
    ctl.FLASHING_DONT_WALK: 1,
    ctl.WALK: 2,
}

DEFAULT_COMMUNITY = b"public"


def ped_call_oid(phase_id: int) -> Oid:
    return Oid(ENTERPRISE_BASE + (PED_CALL_BRANCH, phase_id))


def ped_indication_oid(phase_id: int) -> Oid:
    return Oid(ENTERPRISE_BASE + (PED_INDICATION_BRANCH, phase_id))


ACTIVE_PHASE_OID = Oid(ENTERPRISE_BASE + (ACTIVE_PHASE_BRANCH, 0))
REMAINING_WALK_OID = Oid(ENTERPRISE_BASE + (REMAINING_WALK_BRANCH, 0))


@dataclass(frozen=True)
class ObjectDescriptor:
    name: str
    writable: bool
    phase_id: int | None = None


class ObjectRegistry:
    """Maps assigned OIDs to object descriptors for one timing plan."""

    def __init__(self, plan: ctl.TimingPlan):
        self._objects: dict[Oid, ObjectDescriptor] = {
            ACTIVE_PHASE_OID: ObjectDescriptor("activePhase", writable=False),
            REMAINING_WALK_OID: ObjectDescriptor("remainingWalk", writable=False),
        }
        for pid in plan.phase_ids():
            self._objects[ped_call_oid(pid)] = ObjectDescriptor(
                "pedCall", writable=True, phase_id=pid
            )
            self._objects[ped_indication_oid(pid)] = ObjectDescriptor(
                "pedIndication", writable=False, phase_id=pid
            )

    def resolve(self, oid: Oid) -> ObjectDescriptor | None:
        return self._objects.get(oid)

    def oids(self) -> tuple[Oid, ...]:
        return tuple(self._objects)


def _read_value(desc: ObjectDescriptor, host: ctl.ControllerHost) -> Integer:
    snap = host.snapshot()
    if desc.name == "pedCall":
        # Reads back 1 while a call is latched and unserved.
        state = host.state
        idx = host.plan.phase_ids().index(desc.phase_id)
        return Integer(1 if state.latched[idx] else 0)
    if desc.name == "pedIndication":
        return Integer(INDICATION_CODES[snap.ped_indication[desc.phase_id]])
    if desc.name == "activePhase":
        return Integer(snap.active_phase)
    if desc.name == "remainingWalk":
        return Integer(round(snap.remaining_walk_s * 10))
    raise LookupError(desc.name)


def agent_handle(
    req: NtcipMessage,
    registry: ObjectRegistry,
    host: ctl.ControllerHost,
    community: bytes = DEFAULT_COMMUNITY,
) -> NtcipMessage | None:
    """Serve one request; returns the response, or None to drop silently.

    Community mismatches drop. Unknown OIDs answer noSuchName and writes to
    read-only objects answer badValue, both with the 1-based index of the
    offending varbind and the request varbinds echoed unchanged. Sets are
    atomic: nothing is applied unless every varbind passes.
    """
    if req.pdu_type not in (GET_REQUEST, SET_REQUEST):
        return None
    if req.community != community:
        return None

    def error(status: int, index: int) -> NtcipMessage:
        return NtcipMessage(
            community=req.community,
            pdu_type=GET_RESPONSE,
            request_id=req.request_id,
            error_status=status,
            error_index=index,
            varbinds=req.varbinds,
        )

    if req.pdu_type == GET_REQUEST:
        values = []
        for i, vb in enumerate(req.varbinds, start=1):
            desc = registry.resolve(vb.oid)
            if desc is None:
                return error(NO_SUCH_NAME, i)
            try:
                values.append(VarBind(vb.oid, _read_value(desc, host)))
            except Exception:
                return error(GEN_ERR, i)
        return NtcipMessage(
            community=req.community,
            pdu_type=GET_RESPONSE,
            request_id=req.request_id,
            varbinds=tuple(values),
        )

    # SetRequest: validate every varbind, then apply.
    calls: list[int] = []
    for i, vb in enumerate(req.varbinds, start=1):
        desc = registry.resolve(vb.oid)
        if desc is None:
            return error(NO_SUCH_NAME, i)
        if not desc.writable:
            return error(BAD_VALUE, i)
        if not isinstance(vb.value, Integer) or vb.value.value not in (0, 1):
            return error(BAD_VALUE, i)
        if vb.value.value == 1:
            calls.append(desc.phase_id)
    try:
        for phase_id in calls:
            host.place_ped_call(phase_id)
    except Exception:
        return error(GEN_ERR, 1)
    return NtcipMessage(
        community=req.community,
        pdu_type=GET_RESPONSE,
        request_id=req.request_id,
        varbinds=req.varbinds,
    )
