"""Bounds and simulators for feedback codes over the binary erasure channel.

Modules:

* :mod:`~becfeedback.bounds` -- closed-form achievability and converse bounds
* :mod:`~becfeedback.huffman` -- optimal prefix codes for equiprobable messages
* :mod:`~becfeedback.gf2` -- binary vectors and incremental rank tracking
* :mod:`~becfeedback.channel` -- the erasure channel, its output law Q, the RNG
* :mod:`~becfeedback.schemes` -- Monte Carlo simulators of the coding schemes
* :mod:`~becfeedback.sprt` -- the extended sequential probability ratio test
* :mod:`~becfeedback.oracle` -- independent verifiers for the closed forms
* :mod:`~becfeedback.cli` -- the ``becfb`` command
"""

from ._runner import COMPILED, backend_name
from .bounds import (
    BoundQuery,
    BoundValue,
    Kind,
    ach_huffman,
    ach_repeat,
    binary_entropy,
    conv_fano,
    conv_sprt,
    lstar,
    rate_of,
    vlsf_expurgated,
    vlsf_iid,
    vlsf_linear,
    zero_error_blocklength,
)
from .channel import ChannelSpec, RngStream, Symbol
from .schemes import Ensemble, SimConfig, SimEstimate

__all__ = [
    "COMPILED", "backend_name",
    "BoundQuery", "BoundValue", "Kind", "ach_huffman", "ach_repeat", "binary_entropy",
    "conv_fano", "conv_sprt", "lstar", "rate_of", "vlsf_expurgated", "vlsf_iid", "vlsf_linear",
    "zero_error_blocklength",
    "ChannelSpec", "RngStream", "Symbol",
    "Ensemble", "SimConfig", "SimEstimate",
]
