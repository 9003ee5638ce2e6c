"""Tracking the best expert with pruned transition-path priors."""
from .errors import ConfigError, DomainError, ProtocolError, ResourceError
from .learners import EWAConfig, EWALearner, KTLearner, RegretBound
from .losses import LossFn
from .paths import SwitchLaw, TransitionPath
from .pruning import UNBOUNDED, PruneSchedule
from .randomized import RandomizedTracker
from .tracker import RunReport, Tracker, TrackerConfig, run_sequence

__version__ = "0.1.0"
