"""SNMP-subset wire protocol: BER codec, object registry, UDP agent/manager."""

from .codec import (  # noqa: F401
    BAD_VALUE,
    GEN_ERR,
    GET_REQUEST,
    GET_RESPONSE,
    NO_ERROR,
    NO_SUCH_NAME,
    SET_REQUEST,
    CodecError,
    DecodeError,
    EncodeError,
    Integer,
    LengthError,
    NtcipMessage,
    Null,
    OctetString,
    Oid,
    StructureError,
    TagError,
    TruncatedError,
    VarBind,
    VersionError,
    decode,
    encode,
)
from .objects import (  # noqa: F401
    ACTIVE_PHASE_OID,
    DEFAULT_COMMUNITY,
    INDICATION_CODES,
    REMAINING_WALK_OID,
    ObjectRegistry,
    agent_handle,
    ped_call_oid,
    ped_indication_oid,
)
from .transport import (  # noqa: F401
    DEFAULT_AGENT_PORT,
    CallRejected,
    ControllerUnreachable,
    ManagerError,
    UdpAgent,
    UdpManager,
)
