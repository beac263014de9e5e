"""
Synthesis strategies selectable from the command line and the web API
"""

import time
import uuid
from abc import ABC, abstractmethod
from typing import Any, Dict, List

from .algebra import MonoidHom
from .config import SynthesisOptions
from .errors import CrsError, InvalidInputError, ResourceCapError, VerificationError
from .rewriting import SemiThueSystem, verify_crs
from .synthesis import group_system, monoid_system, simple_group_system


class BaseStrategy(ABC):
    """Base class for all synthesis strategies"""

    def __init__(self, options: SynthesisOptions):
        """
        Initialize the strategy

        Args:
            options: Caps, retry budget and worker count shared by every stage
        """
        self.options = options
        self.session_id = str(uuid.uuid4())
        self.history: List[Dict[str, Any]] = []

    def synthesize(self, hom: MonoidHom) -> Dict[str, Any]:
        """
        Build and verify a system for a homomorphism

        Args:
            hom: Homomorphism from the free monoid to a finite monoid

        Returns:
            Dictionary with the system, its verification report and metadata
        """
        started = time.time()
        path: List[str] = []
        try:
            system = self._construct(hom, path).canonical()
            report = verify_crs(system, hom, self.options.max_irr, self.options.workers)
            if not report.passed:
                raise VerificationError(report.first_failure() or "verification failed", report)
            result = {
                'success': True,
                'system': system,
                'report': report,
                'strategy': self.get_strategy_type(),
                'path': path,
                'session_id': self.session_id,
                'duration': time.time() - started,
            }
        except ResourceCapError as e:
            result = {
                'success': False,
                'error': str(e),
                'stage': e.stage,
                'exit_code': e.exit_code,
                'strategy': self.get_strategy_type(),
                'path': path,
                'session_id': self.session_id,
                'duration': time.time() - started,
            }
        except CrsError as e:
            result = {
                'success': False,
                'error': str(e),
                'stage': None,
                'exit_code': e.exit_code,
                'strategy': self.get_strategy_type(),
                'path': path,
                'session_id': self.session_id,
                'duration': time.time() - started,
            }
        self.history.append({
            'letters': len(hom.source),
            'success': result['success'],
            'duration': result['duration'],
        })
        return result

    @abstractmethod
    def _construct(self, hom: MonoidHom, path: List[str]) -> SemiThueSystem:
        """
        Run the construction this strategy stands for

        Args:
            hom: Homomorphism to factorize
            path: Receives the name of every construction used, outermost first

        Returns:
            The constructed system
        """
        pass

    @abstractmethod
    def get_strategy_type(self) -> str:
        """Return the name of this strategy"""
        pass

    def get_status(self) -> Dict[str, Any]:
        """Get current status of the strategy"""
        return {
            'strategy': self.get_strategy_type(),
            'session_id': self.session_id,
            'runs': len(self.history),
            'successes': sum(1 for run in self.history if run['success']),
            'max_rules': self.options.max_rules,
            'max_irr': self.options.max_irr,
        }


class AutoStrategy(BaseStrategy):
    """Local-divisor recursion with the equal-weight shortcut for groups when it applies"""

    def _construct(self, hom: MonoidHom, path: List[str]) -> SemiThueSystem:
        return monoid_system(hom, self.options.model_copy(update={'strategy': 'auto'}), path)

    def get_strategy_type(self) -> str:
        return "auto"


class SimpleStrategy(BaseStrategy):
    """Equal-weight representatives only; the image must be a group"""

    def _construct(self, hom: MonoidHom, path: List[str]) -> SemiThueSystem:
        path.append("simple")
        return simple_group_system(hom, self.options)

    def get_strategy_type(self) -> str:
        return "simple"


class GroupStrategy(BaseStrategy):
    """Marker construction over extended alphabets; the image must be a group"""

    def _construct(self, hom: MonoidHom, path: List[str]) -> SemiThueSystem:
        return group_system(hom, self.options, path)

    def get_strategy_type(self) -> str:
        return "group"


class MonoidStrategy(BaseStrategy):
    """Local-divisor recursion using the marker construction for every group case"""

    def _construct(self, hom: MonoidHom, path: List[str]) -> SemiThueSystem:
        return monoid_system(hom, self.options.model_copy(update={'strategy': 'monoid'}), path)

    def get_strategy_type(self) -> str:
        return "monoid"


STRATEGIES = {
    'auto': AutoStrategy,
    'simple': SimpleStrategy,
    'group': GroupStrategy,
    'monoid': MonoidStrategy,
}


def get_strategy(name: str, options: SynthesisOptions) -> BaseStrategy:
    """Instantiate a strategy by name"""
    try:
        return STRATEGIES[name](options)
    except KeyError:
        raise InvalidInputError(f"unknown strategy: {name}. Choose from {', '.join(STRATEGIES)}") from None
