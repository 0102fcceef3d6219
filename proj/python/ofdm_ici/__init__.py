"""OFDM carrier-frequency-offset / ICI mitigation toolbox.

Thin package wrapper around the compiled core: constellation mapping, the
IFFT/FFT modem, the offset channel, leakage-coefficient analysis,
self-cancellation pair coding, the repeated-symbol ML estimator, the
preamble-driven EKF estimator and the Monte-Carlo BER harness.
"""

from ofdm_ici._core import *  # noqa: F401,F403
from ofdm_ici._core import __version__  # noqa: F401
