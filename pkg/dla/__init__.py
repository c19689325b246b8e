from .steinitz import SteinitzNumber, INF, parse_steinitz
from .exhaustions import (
    AlgType, AlgebraProfile, ExhaustionDescriptor, Periodic, PrimeSeq, Proportional,
    SignatureTriple, profile_of,
)
from .classify import Answer, Verdict, embeds, equivalent, is_universal, isomorphic
from .constructor import (
    EmbeddingDiagram, Triangle, build_diagram, build_triangle, triangle_to_diagram,
    verify_diagram, verify_triangle,
)
from .branching import HighestWeight, gt_branch, restrict_diagonal, weyl_dim
from .config_manager import ConfigManager
from .decision_manager import DecisionManager
from .logger import get_logger, setup_logger

__all__ = [
    'SteinitzNumber',
    'INF',
    'parse_steinitz',
    'AlgType',
    'AlgebraProfile',
    'ExhaustionDescriptor',
    'Periodic',
    'PrimeSeq',
    'Proportional',
    'SignatureTriple',
    'profile_of',
    'Answer',
    'Verdict',
    'embeds',
    'equivalent',
    'is_universal',
    'isomorphic',
    'EmbeddingDiagram',
    'Triangle',
    'build_diagram',
    'build_triangle',
    'triangle_to_diagram',
    'verify_diagram',
    'verify_triangle',
    'HighestWeight',
    'gt_branch',
    'restrict_diagonal',
    'weyl_dim',
    'ConfigManager',
    'DecisionManager',
    'get_logger',
    'setup_logger'
]
