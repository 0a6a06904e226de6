"""Distributed intrusion detection toolkit.

Subpackages:

- ``bayes``: discrete networks, junction trees, exact inference
- ``msbn``: network sectioning and the linked junction forest
- ``trust``: signed-message agreement and host isolation
- ``simnet``: deterministic discrete-event message simulator
- ``agents``: detection agent runtime and wire protocol
- ``detect``: connection-record pipeline, structure learning, metrics
"""

__version__ = "0.1.0"
