"""Magneto-quasistatic body-channel modelling: tissue dielectrics, coil
inductances, coupled-inductor link gain and eddy-current attenuation."""

__version__ = "0.1.0"

from .errors import MQSError, NumericalError, ValidationError  # noqa: E402,F401
