from .core import *  # noqa: F403
from .core import __all__ as _core_all
from .sweep import *  # noqa: F403
from .sweep import __all__ as _sweep_all

__all__ = _core_all + _sweep_all
