"""Flow matching on Lie groups with surjective exponential maps."""

from .core import (
    Group,
    conditional_field,
    distance,
    exp_curve,
    integrate_field,
    left_pushforward,
    metric_sq_norm,
    recip_sinc,
    sinc,
)
from .groups import GROUP_IDS, SE2, SO3, ProductGroup, Translation, make_group

__version__ = "0.1.0"

__all__ = [
    "Group",
    "GROUP_IDS",
    "ProductGroup",
    "SE2",
    "SO3",
    "Translation",
    "conditional_field",
    "distance",
    "exp_curve",
    "integrate_field",
    "left_pushforward",
    "make_group",
    "metric_sq_norm",
    "recip_sinc",
    "sinc",
    "__version__",
]
