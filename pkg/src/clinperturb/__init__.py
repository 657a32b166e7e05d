"""clinperturb: deterministic clinical-text perturbation and robustness evaluation."""

__version__ = "0.1.0"
