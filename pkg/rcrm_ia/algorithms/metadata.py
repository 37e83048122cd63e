from inspect import signature
import functools
from typing import Callable, List, Optional

from pydantic import BaseModel, Field

from rcrm_ia.schemas.system import ChannelKind

# Every harness entry point takes these, in this order.
ENTRY_PARAMS = ["ch", "cfg", "budget", "rng"]


class AlgorithmSpec(BaseModel):
    """What the harness needs to know about an algorithm entry point."""

    tag: str
    description: str
    power_dependent: bool = Field(False, description="Run once per power point instead of once per trial")
    channel_kinds: List[ChannelKind] = Field(
        default_factory=lambda: [ChannelKind.GENERIC, ChannelKind.DIAGONAL_EXTENSION, ChannelKind.CELLULAR])

    def supports(self, kind: ChannelKind) -> bool:
        return kind in self.channel_kinds


def algorithm_spec(tag: str, description: str, power_dependent: bool = False,
                   channel_kinds: Optional[List[ChannelKind]] = None):
    """Attach an :class:`AlgorithmSpec` to a harness entry point as ``.spec``.

    The entry point must accept ``ch, cfg, budget, rng`` and, when
    ``power_dependent``, a ``P_db`` keyword.
    """
    def decorator_function(func: Callable) -> Callable:
        params = signature(func).parameters
        missing = [p for p in ENTRY_PARAMS if p not in params]
        if power_dependent and "P_db" not in params:
            missing.append("P_db")
        if missing:
            raise ValueError(f"Missing required parameters {missing} in {func.__name__}")

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            return func(*args, **kwargs)

        kwargs = {"tag": tag, "description": description, "power_dependent": power_dependent}
        if channel_kinds is not None:
            kwargs["channel_kinds"] = channel_kinds
        wrapper.spec = AlgorithmSpec(**kwargs)
        return wrapper
    return decorator_function
