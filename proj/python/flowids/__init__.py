"""Neural-network intrusion detection over network-flow CSV records.

Thin Python surface over the C++ core: dataset preparation, from-scratch
sigmoid-network training, autoencoder feature compression, end-to-end
scoring and evaluation.
"""

from flowids._core import *  # noqa: F401,F403
from flowids._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
