"""System configurations, channel generation and channel serialization."""

from rcrm_ia.model.channels import (
    ChannelSet,
    gen_iid_channels,
    gen_symbol_extension_channels,
    gen_cellular_channels,
    generate_channels,
    is_proper,
    proper_slack,
)
from rcrm_ia.model.serialization import (
    channels_to_json,
    channels_from_json,
    dump_channels,
    load_channels,
)

__all__ = [
    "ChannelSet",
    "gen_iid_channels",
    "gen_symbol_extension_channels",
    "gen_cellular_channels",
    "generate_channels",
    "is_proper",
    "proper_slack",
    "channels_to_json",
    "channels_from_json",
    "dump_channels",
    "load_channels",
]
