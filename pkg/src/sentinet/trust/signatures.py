"""Simulated unforgeable signatures for the agreement protocol.

Each host holds a secret key derived from the scenario seed; a signature
is an HMAC over the order value, the chain prefix being countersigned,
and the signing host's id.  The simulator owns every key, which is what
lets tests assert unforgeability: a chain entry verifies only if it was
produced through sign() with that host's key.
"""

import hashlib
import hmac
from dataclasses import dataclass


@dataclass(frozen=True)
class SignedOrder:
    value: int
    chain: tuple[tuple[int, str], ...]

    def hosts(self) -> tuple[int, ...]:
        return tuple(h for h, _ in self.chain)


class KeyRing:
    def __init__(self, hosts: int, seed: int = 0):
        self._keys = [
            hashlib.sha256(f"host-key:{seed}:{h}".encode()).digest()
            for h in range(hosts)
        ]

    def _digest(self, host: int, value: int, prefix) -> str:
        body = f"v={value}|" + "|".join(f"{h}:{s}" for h, s in prefix) + f"|by={host}"
        return hmac.new(self._keys[host], body.encode(), hashlib.sha256).hexdigest()

    def sign(self, host: int, value: int, prefix=()) -> str:
        """Signature token for `value` given the chain built so far."""
        return self._digest(host, value, tuple(prefix))

    def extend(self, order: SignedOrder, host: int) -> SignedOrder:
        """Countersign an order, appending this host to the chain."""
        token = self.sign(host, order.value, order.chain)
        return SignedOrder(order.value, order.chain + ((host, token),))

    def initial(self, leader: int, value: int) -> SignedOrder:
        return SignedOrder(value, ((leader, self.sign(leader, value)),))

    def verify(self, order: SignedOrder) -> bool:
        """True iff every link in the chain recomputes over its prefix."""
        if not order.chain or order.value not in (0, 1):
            return False
        hosts = order.hosts()
        if len(set(hosts)) != len(hosts):
            return False
        for i, (host, token) in enumerate(order.chain):
            if not 0 <= host < len(self._keys):
                return False
            if not hmac.compare_digest(token, self._digest(host, order.value, order.chain[:i])):
                return False
        return True
