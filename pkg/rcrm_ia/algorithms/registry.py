import importlib
import logging
import pkgutil
from pathlib import Path
from typing import Callable, Dict, List

from rcrm_ia.algorithms.metadata import AlgorithmSpec
from rcrm_ia.errors import InvalidConfig

logger = logging.getLogger(__name__)

PACKAGE = "rcrm_ia.algorithms"


class AlgorithmRegistry:
    """Harness entry points of every algorithm module, keyed by tag."""

    def __init__(self) -> None:
        self.modules_dir = Path(__file__).parent
        self.registry: Dict[str, Callable] = {}
        self.spec_registry: Dict[str, AlgorithmSpec] = {}
        self.load_algorithms()

    def load_algorithms(self) -> None:
        for info in pkgutil.iter_modules([str(self.modules_dir)]):
            if info.name.startswith('__') or info.name in ("registry", "metadata"):
                continue
            module = importlib.import_module(f"{PACKAGE}.{info.name}")
            for attr_name in dir(module):
                attr = getattr(module, attr_name)
                spec = getattr(attr, 'spec', None)
                if not callable(attr) or not isinstance(spec, AlgorithmSpec):
                    continue
                if spec.tag in self.registry and self.registry[spec.tag] is not attr:
                    logger.warning(f"Duplicate algorithm tag {spec.tag} in {info.name}; keeping the first")
                    continue
                self.registry[spec.tag] = attr
                self.spec_registry[spec.tag] = spec
        logger.debug(f"Registered algorithms: {sorted(self.registry)}")

    def resolve(self, tag: str) -> Callable:
        func = self.registry.get(tag)
        if func is None:
            raise InvalidConfig(f"Algorithm {tag} is not registered (known: {', '.join(self.tags())})")
        return func

    def spec(self, tag: str) -> AlgorithmSpec:
        self.resolve(tag)
        return self.spec_registry[tag]

    def tags(self) -> List[str]:
        return sorted(self.registry)

    def describe(self) -> List[Dict]:
        return [spec.model_dump(mode="json") for _, spec in sorted(self.spec_registry.items())]


_registry = None


def get_registry() -> AlgorithmRegistry:
    global _registry
    if _registry is None:
        _registry = AlgorithmRegistry()
    return _registry
