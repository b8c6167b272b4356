"""Run configuration: per-check tolerances, truncation defaults, corpus
location.  A single static config file; the only runtime override is an
environment variable scaling all tolerances (for CI farms with noisier
arithmetic)."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field


TOL_ENV_VAR = "KMTHETA_TOL_SCALE"

DEFAULT_TOLERANCES = {
    "weil_relations": 1e-12,
    "theta_oracle": 1e-11,
    "theta_t_defect": 1e-8,
    "theta_s_defect": 1e-6,
    "splitting": 1e-4,
    "strip_residual": 1e-6,
    "bessel_vs_quadrature": 1e-9,
    "bessel_scalar": 1e-10,
    "roundtrip": 1e-8,
    "roundtrip_linearity": 1e-10,
    "geometry": 1e-10,
    "eichler_coefficients": 1e-8,
    "vanishing": 1e-10,
}

DEFAULT_TRUNCATION = {
    "radius_target": 1e-10,
    "coset_cutoff": 5,
    "coset_d_bound": 12,
    "norm_cutoff": 3,
    "y_max": 12.0,
    "n_max": 4,
}


@dataclass
class RunConfig:
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    truncation: dict = field(default_factory=lambda: dict(DEFAULT_TRUNCATION))
    corpus: list = field(default_factory=list)
    output: str | None = None
    fmt: str = "json"
    seed: int = 11

    def tol(self, name: str) -> float:
        """Tolerance for a named check, scaled by the environment
        override if set (read at call time so the file-loaded values are
        the base)."""
        scale = 1.0
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is not None:
            scale = float(raw)
            if scale <= 0:
                raise ValueError(f"{TOL_ENV_VAR} must be positive")
        return self.tolerances[name] * scale


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    cfg = RunConfig()
    for k, v in d.get("tolerances", {}).items():
        cfg.tolerances[k] = float(v)
    for k, v in d.get("truncation", {}).items():
        cfg.truncation[k] = v
    cfg.corpus = d.get("corpus", cfg.corpus)
    cfg.output = d.get("output", cfg.output)
    cfg.fmt = d.get("format", cfg.fmt)
    cfg.seed = d.get("seed", cfg.seed)
    return cfg
