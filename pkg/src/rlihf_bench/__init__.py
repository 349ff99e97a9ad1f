"""rlihf-bench: a synthetic testbed for RL from implicit (ErrP) human feedback."""

__version__ = "0.1.0"
