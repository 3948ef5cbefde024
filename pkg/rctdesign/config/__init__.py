# config package
from rctdesign.config.settings import DefaultRule, DesignConfig, SolverConfig, SyntheticSpec, SyntheticStratum
from rctdesign.config.loader import apply_overrides, load_design_config, load_synthetic_spec

__all__ = [
    "DefaultRule",
    "DesignConfig",
    "SolverConfig",
    "SyntheticSpec",
    "SyntheticStratum",
    "apply_overrides",
    "load_design_config",
    "load_synthetic_spec",
]
