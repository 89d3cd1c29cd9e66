"""Virtual guide dog: a simulated accessible-pedestrian-signal stack.

A virtual visually-impaired pedestrian client detects intersection
proximity, announces crossing options, places pedestrian calls to a
virtual actuated signal controller over an SNMP-subset wire protocol,
and guides the crossing during the WALK interval. A deterministic
scenario engine replays walks with configurable GPS error models.
"""

__version__ = "0.1.0"
