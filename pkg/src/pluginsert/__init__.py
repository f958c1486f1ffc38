"""Hybrid insertion policy: potential-field control plus residual RL in a
quasi-static plug-in-socket simulator."""

__version__ = "0.1.0"
