from sentinet.msbn.forest import (
    LinkageTree,
    LinkedJunctionForest,
    absorb_linkage,
    communicate_belief,
    compile_ljf,
    enter_evidence,
    full_communication,
    linkage_message,
    local_inference,
)
from sentinet.msbn.partition import auto_section, sound_sectioning
from sentinet.msbn.sectioning import (
    Msbn,
    SubnetSpec,
    parse_sectioning,
    section_network,
    serialize_sectioning,
)

__all__ = [
    "LinkageTree",
    "LinkedJunctionForest",
    "Msbn",
    "SubnetSpec",
    "absorb_linkage",
    "auto_section",
    "communicate_belief",
    "compile_ljf",
    "enter_evidence",
    "full_communication",
    "linkage_message",
    "local_inference",
    "parse_sectioning",
    "section_network",
    "serialize_sectioning",
]
