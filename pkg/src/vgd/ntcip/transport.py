"""UDP transport: controller-side agent and client-side manager.

The agent answers one datagram at a time from a receive thread, touching
the controller only through its host lock. The manager is blocking: one
outstanding request per instance, resent up to ``retries`` times with a
fresh receive deadline each attempt.
"""

from __future__ import annotations

import itertools
import socket
import threading
import time

from .. import controller as ctl
from . import objects
from .codec import (
    GET_RESPONSE,
    NO_ERROR,
    SET_REQUEST,
    DecodeError,
    Integer,
    NtcipMessage,
    VarBind,
    decode,
    encode,
)

DEFAULT_AGENT_PORT = 50161
DEFAULT_TIMEOUT_S = 0.5
DEFAULT_RETRIES = 3

_MAX_DATAGRAM = 65535


class ManagerError(Exception):
    """Base for manager-side call failures."""


class ControllerUnreachable(ManagerError):
    """No matching response within the retry budget."""


class CallRejected(ManagerError):
    """Agent answered with a non-zero error status."""

    def __init__(self, error_status: int, error_index: int):
        super().__init__(f"agent rejected request: status {error_status} index {error_index}")
        self.error_status = error_status
        self.error_index = error_index


class UdpAgent:
    """Serves the object registry over UDP for one controller host."""

    def __init__(
        self,
        host: ctl.ControllerHost,
        registry: objects.ObjectRegistry | None = None,
        community: bytes = objects.DEFAULT_COMMUNITY,
        bind_addr: str = "127.0.0.1",
        port: int = DEFAULT_AGENT_PORT,
    ):
        self.host = host
        self.registry = registry or objects.ObjectRegistry(host.plan)
        self.community = community
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.bind((bind_addr, port))
        self._sock.settimeout(0.1)
        self._thread: threading.Thread | None = None
        self._stop = threading.Event()

    @property
    def endpoint(self) -> tuple[str, int]:
        return self._sock.getsockname()

    def start(self) -> "UdpAgent":
        self._thread = threading.Thread(target=self._serve, name="ntcip-agent", daemon=True)
        self._thread.start()
        return self

    def _serve(self) -> None:
        while not self._stop.is_set():
            try:
                data, peer = self._sock.recvfrom(_MAX_DATAGRAM)
            except socket.timeout:
                continue
            except OSError:
                return
            try:
                req = decode(data)
            except DecodeError:
                continue  # malformed datagrams are dropped, never answered
            resp = objects.agent_handle(req, self.registry, self.host, self.community)
            if resp is not None:
                try:
                    self._sock.sendto(encode(resp), peer)
                except OSError:
                    return

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
            self._thread = None
        self._sock.close()

    def __enter__(self) -> "UdpAgent":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


class UdpManager:
    """Places pedestrian calls and reads objects from a remote agent."""

    def __init__(
        self,
        endpoint: tuple[str, int],
        community: bytes = objects.DEFAULT_COMMUNITY,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        retries: int = DEFAULT_RETRIES,
    ):
        self.endpoint = endpoint
        self.community = community
        self.timeout_s = timeout_s
        self.retries = retries
        self._request_ids = itertools.count(1)
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)

    def close(self) -> None:
        self._sock.close()

    def __enter__(self) -> "UdpManager":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def request(self, msg: NtcipMessage) -> NtcipMessage:
        """Send and await the response matching this request id.

        Raises:
            ControllerUnreachable: after all attempts time out.
        """
        raw = encode(msg)
        for _ in range(max(1, self.retries)):
            self._sock.sendto(raw, self.endpoint)
            deadline = time.monotonic() + self.timeout_s
            while True:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    break
                self._sock.settimeout(remaining)
                try:
                    data, _peer = self._sock.recvfrom(_MAX_DATAGRAM)
                except socket.timeout:
                    break
                try:
                    resp = decode(data)
                except DecodeError:
                    continue
                if resp.pdu_type == GET_RESPONSE and resp.request_id == msg.request_id:
                    return resp
                # Mismatched request id: stale response, keep waiting.
        raise ControllerUnreachable(
            f"no response from {self.endpoint[0]}:{self.endpoint[1]} "
            f"after {max(1, self.retries)} attempts of {self.timeout_s}s"
        )

    def build_place_call(self, phase_id: int) -> NtcipMessage:
        """The SetRequest place_call() would send, with a fresh request id."""
        return NtcipMessage(
            community=self.community,
            pdu_type=SET_REQUEST,
            request_id=next(self._request_ids),
            varbinds=(VarBind(objects.ped_call_oid(phase_id), Integer(1)),),
        )

    def place_call(self, phase_id: int) -> NtcipMessage:
        """Latch a pedestrian call on ``phase_id``; returns the agent's ack.

        Raises:
            ControllerUnreachable: on timeout after retries.
            CallRejected: when the agent answers with an error status.
        """
        req = self.build_place_call(phase_id)
        resp = self.request(req)
        if resp.error_status != NO_ERROR:
            raise CallRejected(resp.error_status, resp.error_index)
        return resp
